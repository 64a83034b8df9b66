#include "rankdist/output.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace rankdist;
using io::ColumnType;

namespace {

io::OutputRecord sample_record()
{
    io::OutputRecord rec;
    rec.command = "demo";
    rec.seed = "18446744073709551615";
    rec.parameters = {{"n", "5"}, {"z_first", "x"}, {"a_second", "text, with comma"}};
    rec.notes = {"plain note", "note with \"quotes\", commas"};
    rec.columns = {{"label", ColumnType::text},
                   {"count", ColumnType::integer},
                   {"ratio", ColumnType::exact},
                   {"value", ColumnType::real}};
    rec.rows = {
        {"a", "0", "0", io::cell(0.0)},
        {"multi\nline \"text\"", "-12", "-3/7", io::cell(0.1)},
        {"#hash", "123456789012345678901234567890", io::cell(make_rational(10, 4)), io::cell(1e-300)},
        {"", "", "", ""},
        {"special", "9223372036854775807", "1", io::cell(std::numeric_limits<double>::quiet_NaN())},
        {"inf", "1", "1", io::cell(-std::numeric_limits<double>::infinity())},
        {"max", "2", "2", io::cell(std::numeric_limits<double>::max())},
        {"third", "3", "3", io::cell(1.0 / 3.0)},
    };
    return rec;
}

} // namespace

TEST(Cells, Canonical)
{
    EXPECT_EQ(io::cell(make_rational(10, 4)), "5/2");
    EXPECT_EQ(io::cell(ExactRational(3)), "3");
    EXPECT_EQ(io::cell(0.1), "0.1");
    EXPECT_EQ(io::cell(2.0), "2");
    EXPECT_EQ(io::cell(true), "1");
    EXPECT_EQ(io::cell(42u), "42");
    EXPECT_EQ(io::cell(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(io::parse_real(io::cell(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, RoundTrip)
{
    const auto rec = sample_record();
    EXPECT_EQ(io::parse(io::emit(rec, io::Format::csv), io::Format::csv), rec);
}

TEST(Json, RoundTrip)
{
    const auto rec = sample_record();
    EXPECT_EQ(io::parse(io::emit(rec, io::Format::json), io::Format::json), rec);
}

TEST(Json, Layout)
{
    const auto j = io::to_json(sample_record());
    ASSERT_TRUE(j.contains("meta"));
    ASSERT_TRUE(j.contains("columns"));
    ASSERT_TRUE(j.contains("rows"));
    EXPECT_EQ(j["meta"]["parameters"].begin().key(), "n"); // insertion order kept
    EXPECT_TRUE(j["rows"][0][2].is_string());               // exact as "p/q"
    EXPECT_TRUE(j["rows"][1][3].is_number_float());
    EXPECT_TRUE(j["rows"][2][1].is_string()); // too large for int64
    EXPECT_TRUE(j["rows"][3][0].is_null());
    EXPECT_EQ(j["rows"][2][2], "5/2");
}

TEST(Formats, SameNumbers)
{
    const auto rec = sample_record();
    EXPECT_EQ(io::parse(io::emit(rec, io::Format::csv), io::Format::csv),
              io::parse(io::emit(rec, io::Format::json), io::Format::json));
}

TEST(Formats, EmissionIsDeterministic)
{
    EXPECT_EQ(io::emit(sample_record(), io::Format::csv), io::emit(sample_record(), io::Format::csv));
    EXPECT_EQ(io::emit(sample_record(), io::Format::json), io::emit(sample_record(), io::Format::json));
}

TEST(Csv, HeaderAndTypesLines)
{
    const std::string text = io::emit(sample_record(), io::Format::csv);
    EXPECT_NE(text.find("#types,text,integer,exact,real\nlabel,count,ratio,value\n"), std::string::npos);
    EXPECT_EQ(text.rfind("#meta,command,demo\n", 0), 0u);
}

TEST(Validation, RejectsBadRecords)
{
    auto rec = sample_record();
    rec.rows[0].pop_back();
    EXPECT_THROW(io::emit(rec, io::Format::csv), std::invalid_argument);

    rec = sample_record();
    rec.rows[0][2] = "2/4";
    EXPECT_THROW(io::emit(rec, io::Format::json), std::invalid_argument);

    rec = sample_record();
    rec.rows[0][3] = "1.0";
    EXPECT_THROW(io::emit(rec, io::Format::csv), std::invalid_argument);

    rec = sample_record();
    rec.rows[0][1] = "1.5";
    EXPECT_THROW(io::emit(rec, io::Format::csv), std::invalid_argument);

    rec = sample_record();
    rec.notes.push_back("two\nlines");
    EXPECT_THROW(io::emit(rec, io::Format::csv), std::invalid_argument);
}

TEST(Validation, RejectsMalformedInput)
{
    EXPECT_THROW(io::parse("", io::Format::csv), std::invalid_argument);
    EXPECT_THROW(io::parse("#types,real\nx\n\"open", io::Format::csv), std::invalid_argument);
    EXPECT_THROW(io::parse("#types,real\nx\nabc\n", io::Format::csv), std::invalid_argument);
    EXPECT_THROW(io::parse("#types,real,real\nx\n", io::Format::csv), std::invalid_argument);
    EXPECT_ANY_THROW(io::parse("{\"meta\": {}}", io::Format::json));
    EXPECT_ANY_THROW(io::parse("not json", io::Format::json));
    EXPECT_THROW(io::parse_format("xml"), std::invalid_argument);
}
