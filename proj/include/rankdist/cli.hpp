#pragma once

// The `rankdist` command-line tool. run_command() is the whole program; main()
// only forwards argv so tests can drive it in-process.
//
// Exit codes: 0 success, 1 usage or input error, 2 failed verification.

#include "rankdist/acceptance.hpp"
#include "rankdist/exact_rank.hpp"
#include "rankdist/limits.hpp"
#include "rankdist/oracle.hpp"
#include "rankdist/output.hpp"
#include "rankdist/simulator.hpp"

#include <CLI11.hpp>
#include <gmp.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace rankdist::cli {

/// Worker threads: THREADS if set to a positive integer, else the hardware count.
inline unsigned thread_count()
{
    if (const char* env = std::getenv("THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline io::OutputRecord base_record(const std::string& command)
{
    io::OutputRecord rec;
    rec.command = command;
    rec.notes.push_back(std::string("gmp ") + gmp_version);
    return rec;
}

// ---------------------------------------------------------------------------
// exact

inline io::OutputRecord exact_record(unsigned nmin, unsigned nmax, unsigned kmax)
{
    using io::cell;
    io::OutputRecord rec = base_record("exact");
    rec.parameters = {{"nmin", cell(nmin)}, {"nmax", cell(nmax)}, {"kmax", cell(kmax)}};
    rec.notes.push_back("a: rank-k vertices summed over all t(n) trees; a_geq: rank >= k; b: trees with root rank k");
    rec.notes.push_back("E = a/t; pi = P(randomized root-to-leaf walk has > k edges); p_gt = P(root rank > k)");
    rec.notes.push_back("ptype: p-type vertices of rank k; ptype_pair: ordered pairs of distinct such vertices");
    rec.columns = {{"n", io::ColumnType::integer},     {"k", io::ColumnType::integer},
                   {"t", io::ColumnType::integer},     {"a", io::ColumnType::integer},
                   {"a_geq", io::ColumnType::integer}, {"b", io::ColumnType::integer},
                   {"b_geq", io::ColumnType::integer}, {"E", io::ColumnType::exact},
                   {"pi", io::ColumnType::exact},      {"p_gt", io::ColumnType::exact},
                   {"ptype", io::ColumnType::integer}, {"ptype_pair", io::ColumnType::integer}};

    const auto roots = exact::root_rank_series(kmax, nmax);
    const auto ranks = exact::rank_series(kmax, nmax, roots);
    const auto paths = exact::path_alg_series(kmax, nmax);
    const auto ptypes = exact::ptype_series(kmax, nmax);
    for (unsigned n = nmin; n <= nmax; ++n) {
        const BigInt t = exact::tree_count(n);
        for (unsigned k = 0; k <= kmax; ++k) {
            rec.rows.push_back({cell(n), cell(k), cell(t), cell(ranks.a_count(k, n)), cell(ranks.a_geq_count(k, n)),
                                cell(roots.b_count(k, n)), cell(roots.b_geq_count(k, n)),
                                cell(exact::expected_rank_count(k, n, ranks)),
                                cell(paths.pi(static_cast<int>(k), n)),
                                cell(ExactRational(roots.b_geq_count(k + 1, n)) / ExactRational(t)),
                                cell(ptypes.ptype_count(k, n)), cell(ptypes.pair_count(k, n))});
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// limits

inline io::OutputRecord limits_record(unsigned kmax, double step, limits::Method method, std::ostream& err)
{
    using io::cell;
    const limits::LimitConstants lc = limits::compute_limits(kmax, step, method);
    const limits::TailReport tail = limits::verify_tail(lc);
    const limits::MethodAgreement agree = limits::cross_check_methods(kmax, step);

    io::OutputRecord rec = base_record("limits");
    rec.parameters = {{"kmax", cell(kmax)}, {"step", cell(step)}, {"method", limits::to_string(method)}};
    rec.notes.push_back("c: limit of E[X_k(n)]/n; gamma = c/2; tail = 1 - sum_{j<=k} c_j; bound = 3^{k+1}/(2k+1)!");
    rec.notes.push_back("error_estimate: |c_k(step) - c_k(step/2)|");
    rec.notes.push_back("c_1 closed form: " + cell(limits::c1_closed_form()));
    if (kmax >= 3) {
        rec.notes.push_back("1 - (c_0+..+c_3) = " + cell(tail.tail_after_3) + " (reference "
                            + cell(limits::published_tail_after_3) + ")");
    }
    rec.notes.push_back(std::string("methods ") + (agree.agree ? "agree" : "DISAGREE") + ": max difference "
                        + cell(agree.max_difference) + ", tolerance " + cell(agree.tolerance));
    if (!agree.agree) {
        err << "rankdist: warning: plain and substituted integration disagree by " << agree.max_difference
            << " (tolerance " << agree.tolerance << ")\n";
    }
    rec.columns = {{"k", io::ColumnType::integer},       {"c", io::ColumnType::real},
                   {"gamma", io::ColumnType::real},      {"cumulative", io::ColumnType::real},
                   {"tail", io::ColumnType::real},       {"bound", io::ColumnType::real},
                   {"bound_holds", io::ColumnType::integer}, {"error_estimate", io::ColumnType::real}};
    double cumulative = 0.0;
    for (unsigned k = 0; k <= kmax; ++k) {
        cumulative += lc.c[k];
        rec.rows.push_back({cell(k), cell(lc.c[k]), cell(lc.gamma[k]), cell(cumulative), cell(tail.rows[k].tail),
                            cell(tail.rows[k].bound), cell(tail.rows[k].holds), cell(lc.error_estimate[k])});
    }
    return rec;
}

// ---------------------------------------------------------------------------
// simulate

inline constexpr unsigned reference_kmax = 6;
inline constexpr double reference_step = 1e-6;

inline io::OutputRecord simulate_record(const sim::ExperimentConfig& cfg)
{
    using io::cell;
    const sim::ExperimentReport rep = sim::run_experiment(cfg);
    const unsigned kref = std::max(reference_kmax, cfg.kmax_report);
    const limits::LimitConstants lc = limits::compute_limits(kref, reference_step);
    const double n = cfg.n;

    io::OutputRecord rec = base_record("simulate");
    rec.seed = std::to_string(cfg.master_seed);
    rec.parameters = {{"n", cell(cfg.n)},
                      {"reps", cell(cfg.replicates)},
                      {"pairs", cell(cfg.pair_samples_per_tree)},
                      {"epsilon", cell(cfg.epsilon)},
                      {"kmax", cell(cfg.kmax_report)}};
    rec.notes.push_back("replicate r is seeded with child_seed(seed, r) (splitmix64 mixing)");
    rec.notes.push_back("rank_fraction: X_k/n, reference c_k; rank_fraction_exact: reference (2n-1)/(3n)");
    rec.notes.push_back("ptype_count: p-type vertices of rank k, reference (2n-1)/(2k+3)!!");
    rec.notes.push_back("pair_frequency: ranks of a uniform ordered pair of distinct vertices, reference c_k1 c_k2");
    rec.notes.push_back("largest_rank_hist, largest_ptype_rank_hist: replicates by R_n and by R_n^p");
    rec.columns = {{"quantity", io::ColumnType::text}, {"k1", io::ColumnType::integer},
                   {"k2", io::ColumnType::integer},    {"mean", io::ColumnType::real},
                   {"se", io::ColumnType::real},       {"reference", io::ColumnType::real}};
    auto row = [&](const char* q, std::optional<unsigned> k1, std::optional<unsigned> k2, double mean, double se,
                   std::optional<double> ref) {
        rec.rows.push_back({q, k1 ? cell(*k1) : "", k2 ? cell(*k2) : "", cell(mean), std::isnan(se) ? "" : cell(se),
                            ref ? cell(*ref) : ""});
    };
    auto ptype_ref = [&](unsigned k) -> std::optional<double> {
        if (cfg.n < k + 2) {
            return std::nullopt;
        }
        return (2.0 * n - 1.0) / double_factorial(2L * k + 3).get_d();
    };
    constexpr double none = std::numeric_limits<double>::quiet_NaN();

    for (unsigned k = 0; k <= rep.max_rank_seen; ++k) {
        const auto& m = rep.rank_fraction[k];
        row("rank_fraction", k, {}, m.mean, m.se, k <= kref ? std::optional<double>(lc.c[k]) : std::nullopt);
    }
    row("rank_fraction_exact", 0, {}, rep.rank_fraction[0].mean, rep.rank_fraction[0].se,
        cfg.n >= 2 ? std::optional<double>((2.0 * n - 1.0) / (3.0 * n)) : std::nullopt);
    for (unsigned k = 0; k <= rep.max_rank_seen; ++k) {
        row("ptype_count", k, {}, rep.ptype_count[k].mean, rep.ptype_count[k].se, ptype_ref(k));
    }
    if (cfg.n >= 2 && cfg.pair_samples_per_tree > 0) {
        for (unsigned k1 = 0; k1 <= cfg.kmax_report; ++k1) {
            for (unsigned k2 = 0; k2 <= cfg.kmax_report; ++k2) {
                const auto& m = rep.pair_frequency[k1][k2];
                const bool has_ref = k1 <= kref && k2 <= kref;
                row("pair_frequency", k1, k2, m.mean, m.se,
                    has_ref ? std::optional<double>(lc.c[k1] * lc.c[k2]) : std::nullopt);
            }
        }
    }
    for (unsigned k = 0; k <= rep.max_rank_seen; ++k) {
        row("largest_rank_hist", k, {}, static_cast<double>(rep.largest_rank_hist[k]), none, {});
    }
    for (unsigned k = 0; k <= rep.max_rank_seen; ++k) {
        row("largest_ptype_rank_hist", k, {}, static_cast<double>(rep.largest_ptype_rank_hist[k]), none, {});
    }
    row("fraction_sum_max_error", {}, {}, rep.fraction_sum_max_error, none, {});
    row("largest_rank_dominates", {}, {}, rep.largest_rank_dominates ? 1.0 : 0.0, none, {});
    if (std::isfinite(rep.log_scale)) {
        row("log_n_over_loglog_n", {}, {}, rep.log_scale, none, {});
        row("ptype_probe", rep.ptype_probe_rank, {}, rep.ptype_at_probe.mean, rep.ptype_at_probe.se,
            ptype_ref(rep.ptype_probe_rank));
        row("largest_rank_window_fraction", {}, {}, rep.largest_rank_window_fraction, none, {});
    }
    return rec;
}

// ---------------------------------------------------------------------------
// oracle

inline io::OutputRecord oracle_record(unsigned n, bool force, unsigned threads)
{
    using io::cell;
    oracle::EnumerationOptions opt;
    opt.force = force;
    opt.threads = threads;
    const oracle::OracleCensus c = oracle::census_all(n, opt);

    io::OutputRecord rec = base_record("oracle");
    rec.parameters = {{"n", cell(n)}, {"force", cell(force)}};
    rec.notes.push_back("exhaustive over all plane increasing trees on n vertices");
    rec.notes.push_back("pair: ordered pairs of distinct vertices with ranks (k1, k2), summed over trees");
    rec.columns = {{"quantity", io::ColumnType::text},
                   {"k1", io::ColumnType::integer},
                   {"k2", io::ColumnType::integer},
                   {"value", io::ColumnType::exact}};
    auto z = [](std::uint64_t v) { return cell(BigInt(static_cast<unsigned long>(v))); };
    rec.rows.push_back({"tree_total", "", "", z(c.tree_total)});
    const struct {
        const char* name;
        const std::vector<std::uint64_t>& v;
    } per_k[] = {{"a", c.a}, {"b", c.b}, {"ptype", c.ptype}, {"ptype_pair", c.ptype_pair}};
    for (const auto& q : per_k) {
        for (unsigned k = 0; k < n; ++k) {
            rec.rows.push_back({q.name, cell(k), "", z(q.v[k])});
        }
    }
    for (unsigned k = 0; k < n; ++k) {
        rec.rows.push_back({"b_geq", cell(k), "", z(c.b_geq(k))});
    }
    for (unsigned k1 = 0; k1 < n; ++k1) {
        for (unsigned k2 = 0; k2 < n; ++k2) {
            rec.rows.push_back({"pair", cell(k1), cell(k2), z(c.pair[k1][k2])});
        }
    }
    for (unsigned k = 0; k < n; ++k) {
        rec.rows.push_back({"pi", cell(k), "", cell(c.pi_exact[k])});
    }
    return rec;
}

// ---------------------------------------------------------------------------
// verify

inline io::OutputRecord verify_record(const std::vector<acceptance::CriterionResult>& results,
                                      const acceptance::Settings& s)
{
    using io::cell;
    io::OutputRecord rec = base_record("verify");
    rec.seed = std::to_string(s.seed);
    rec.parameters = {{"level", s.level == acceptance::Level::quick ? "quick" : "full"}, {"smoke", cell(s.smoke)}};
    rec.columns = {{"criterion", io::ColumnType::text},
                   {"passed", io::ColumnType::integer},
                   {"title", io::ColumnType::text},
                   {"measured", io::ColumnType::text},
                   {"tolerance", io::ColumnType::text}};
    for (const auto& r : results) {
        rec.rows.push_back({r.id, cell(r.passed), r.title, r.measured, r.tolerance});
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Dispatch

struct OutputOptions {
    std::string format = "csv";
    std::string path;
};

inline void add_output_options(CLI::App* sub, OutputOptions& o)
{
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", o.path, "Write to PATH instead of stdout");
}

inline void emit(const io::OutputRecord& rec, const OutputOptions& o, std::ostream& out)
{
    const io::Format f = io::parse_format(o.format);
    if (o.path.empty()) {
        io::write(out, rec, f);
        return;
    }
    std::ofstream file(o.path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open '" + o.path + "' for writing");
    }
    io::write(file, rec, f);
    if (!file.flush()) {
        throw std::runtime_error("write to '" + o.path + "' failed");
    }
}

/// args excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Rank statistics of random plane increasing trees: exact series, limit constants, "
                 "Monte Carlo simulation and brute-force enumeration.\n"
                 "Set THREADS to override the worker count (default: hardware concurrency).",
                 "rankdist"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(RANKDIST_VERSION));

    OutputOptions o_exact, o_limits, o_sim, o_oracle, o_verify;

    unsigned ex_n = 0, ex_nmax = 0;
    std::optional<unsigned> ex_kmax;
    auto* exact_cmd = app.add_subcommand("exact", "Exact rank, root-rank, walk and p-type tables");
    auto* opt_n = exact_cmd->add_option("--n", ex_n, "Single tree size")->check(CLI::Range(1u, 100000u));
    auto* opt_nmax = exact_cmd->add_option("--nmax", ex_nmax, "All sizes 1..NMAX")->check(CLI::Range(1u, 100000u));
    opt_n->excludes(opt_nmax);
    exact_cmd->add_option("--kmax", ex_kmax, "Largest rank tabulated (default: n-1)");
    add_output_options(exact_cmd, o_exact);

    unsigned lim_kmax = 6;
    double lim_step = 1e-6;
    std::string lim_method = "substituted";
    auto* limits_cmd = app.add_subcommand("limits", "Limit constants c_k and the tail bound");
    limits_cmd->add_option("--kmax", lim_kmax, "Largest k")->capture_default_str()->check(CLI::Range(0u, 200u));
    limits_cmd->add_option("--step", lim_step, "Grid spacing, in (0, 1e-3]")->capture_default_str();
    limits_cmd->add_option("--method", lim_method, "Integration scheme")
        ->check(CLI::IsMember({"substituted", "plain_trapezoid"}))
        ->capture_default_str();
    add_output_options(limits_cmd, o_limits);

    sim::ExperimentConfig cfg;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo rank statistics");
    sim_cmd->add_option("--n", cfg.n, "Tree size")->capture_default_str()->check(CLI::Range(1u, 1'000'000'000u));
    sim_cmd->add_option("--reps", cfg.replicates, "Replicates")->capture_default_str()->check(CLI::Range(1u, 100'000'000u));
    sim_cmd->add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
    sim_cmd->add_option("--pairs", cfg.pair_samples_per_tree, "Sampled vertex pairs per tree")->capture_default_str();
    sim_cmd->add_option("--epsilon", cfg.epsilon, "Exponent for the p-type probe rank, in (0, 1)")
        ->capture_default_str();
    sim_cmd->add_option("--kmax", cfg.kmax_report, "Largest rank in the pair table")
        ->capture_default_str()
        ->check(CLI::Range(0u, 64u));
    add_output_options(sim_cmd, o_sim);

    unsigned or_n = 0;
    bool or_force = false;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive census of all trees on n vertices");
    oracle_cmd->add_option("--n", or_n, "Tree size (1..9, or 10 with --force)")->required();
    oracle_cmd->add_flag("--force", or_force, "Allow n = 10");
    add_output_options(oracle_cmd, o_oracle);

    std::string level = "quick";
    bool smoke = false;
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance criteria");
    verify_cmd->add_option("level", level, "quick (A1-A6) or full (A1-A10)")
        ->check(CLI::IsMember({"quick", "full"}))
        ->capture_default_str();
    verify_cmd->add_flag("--smoke", smoke, "Stochastic criteria at n = 1000 with one replicate");
    verify_cmd->add_option("--format", o_verify.format, "Format of the --out report")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    verify_cmd->add_option("--out", o_verify.path, "Also write the report to PATH");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << RANKDIST_VERSION << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "rankdist: " << e.what() << " (see --help)\n";
        return 1;
    }

    try {
        const unsigned threads = thread_count();
        if (*exact_cmd) {
            if (!*opt_n && !*opt_nmax) {
                err << "rankdist: exact needs --n or --nmax\n";
                return 1;
            }
            const unsigned nmax = *opt_n ? ex_n : ex_nmax;
            const unsigned nmin = *opt_n ? ex_n : 1;
            emit(exact_record(nmin, nmax, ex_kmax.value_or(nmax - 1)), o_exact, out);
        } else if (*limits_cmd) {
            emit(limits_record(lim_kmax, lim_step, limits::parse_method(lim_method), err), o_limits, out);
        } else if (*sim_cmd) {
            cfg.threads = threads;
            emit(simulate_record(cfg), o_sim, out);
        } else if (*oracle_cmd) {
            emit(oracle_record(or_n, or_force, threads), o_oracle, out);
        } else if (*verify_cmd) {
            acceptance::Settings s;
            s.level = level == "full" ? acceptance::Level::full : acceptance::Level::quick;
            s.smoke = smoke;
            s.threads = threads;
            const auto results =
                acceptance::run_suite(s, [&out](const acceptance::CriterionResult& r) {
                    acceptance::print_result(out, r);
                    out.flush();
                });
            const bool ok = acceptance::all_passed(results);
            out << (ok ? "all criteria passed" : "VERIFICATION FAILED") << "\n";
            if (!o_verify.path.empty()) {
                emit(verify_record(results, s), o_verify, out);
            }
            return ok ? 0 : 2;
        }
    } catch (const std::exception& e) {
        err << "rankdist: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

inline int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    return run_command(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

} // namespace rankdist::cli
