#pragma once

// Acceptance criteria A1-A10. Each check_* function takes already-computed
// tables so tests can feed it tampered input; run_suite builds everything.

#include "rankdist/exact_rank.hpp"
#include "rankdist/limits.hpp"
#include "rankdist/oracle.hpp"
#include "rankdist/rational.hpp"
#include "rankdist/simulator.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace rankdist::acceptance {

enum class Level { quick, full };

/// Master seed of every stochastic criterion. Fixed before the first run and
/// never tuned.
inline constexpr std::uint64_t default_seed = 0x2026'1015'5EEDULL;

struct Settings {
    Level level = Level::quick;
    bool smoke = false; // A7-A10 at n = 10^3 with one replicate
    unsigned threads = 1;
    std::uint64_t seed = default_seed;
};

struct CriterionResult {
    std::string id;
    std::string title;
    bool passed = false;
    std::string measured;
    std::string tolerance;
    double seconds = 0.0;
};

inline std::string fmt(double x, int digits = 10)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

// ---------------------------------------------------------------------------
// A1: a_0(n) = (2n-1)!!/3 for 2 <= n <= 30

inline constexpr unsigned a1_nmax = 30;

inline CriterionResult check_a1(const exact::RankTable& table)
{
    CriterionResult r{"A1", "leaf counts a_0(n) = (2n-1)!!/3, 2 <= n <= 30", true, "", "exact equality", 0};
    unsigned bad = 0, first_bad = 0;
    for (unsigned n = 2; n <= a1_nmax; ++n) {
        const BigInt want = double_factorial(2L * n - 1) / 3;
        if (table.a_count(0, n) != want) {
            if (bad++ == 0) {
                first_bad = n;
            }
        }
    }
    r.passed = bad == 0;
    r.measured = std::to_string(a1_nmax - 1 - bad) + "/" + std::to_string(a1_nmax - 1) + " equal";
    if (bad) {
        r.measured += ", first mismatch at n = " + std::to_string(first_bad) + ": a_0 = "
                      + table.a_count(0, first_bad).get_str();
    }
    return r;
}

inline exact::RankTable a1_table()
{
    return exact::rank_series(0, a1_nmax, exact::root_rank_series(0, a1_nmax));
}

// ---------------------------------------------------------------------------
// A2: oracle and series agree exactly for n <= 8

inline constexpr unsigned a2_nmax = 8;

struct SeriesTables {
    exact::RootRankTable roots;
    exact::RankTable ranks;
    exact::PathAlgTable paths;
    exact::PTypeTable ptypes;
};

inline SeriesTables series_tables(unsigned kmax, std::size_t order)
{
    SeriesTables s;
    s.roots = exact::root_rank_series(kmax, order);
    s.ranks = exact::rank_series(kmax, order, s.roots);
    s.paths = exact::path_alg_series(kmax, order);
    s.ptypes = exact::ptype_series(kmax, order);
    return s;
}

struct Comparison {
    std::size_t compared = 0;
    std::vector<std::string> mismatches;
};

/// Compares every quantity of one census with the series tables, for all
/// k <= tables' kmax (the census value is 0 for k >= n). Also checks the pair
/// census against tree_total, its symmetry, and its marginals.
inline Comparison compare_census(const oracle::OracleCensus& c, const SeriesTables& s)
{
    Comparison out;
    const unsigned n = c.n;
    auto expect = [&](const std::string& what, unsigned k, const auto& series_value, const auto& oracle_value) {
        ++out.compared;
        if (series_value != oracle_value) {
            out.mismatches.push_back(what + "(k=" + std::to_string(k) + ", n=" + std::to_string(n) + "): series "
                                     + series_value.get_str() + ", oracle " + oracle_value.get_str());
        }
    };
    auto z = [](std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); };
    auto at = [&](const std::vector<std::uint64_t>& v, unsigned k) { return k < n ? z(v[k]) : BigInt(0); };

    const BigInt total = exact::tree_count(n);
    expect("tree_total", 0, total, z(c.tree_total));
    for (unsigned k = 0; k <= s.ranks.kmax; ++k) {
        expect("a", k, s.ranks.a_count(k, n), at(c.a, k));
        expect("b", k, s.roots.b_count(k, n), at(c.b, k));
        expect("b_geq", k, s.roots.b_geq_count(k, n), k < n ? z(c.b_geq(k)) : BigInt(0));
        expect("ptype", k, s.ptypes.ptype_count(k, n), at(c.ptype, k));
        expect("ptype_pair", k, s.ptypes.pair_count(k, n), at(c.ptype_pair, k));
        expect("pi", k, s.paths.pi(static_cast<int>(k), n), k < n ? c.pi_exact[k] : ExactRational(0));
    }
    BigInt pair_sum = 0;
    for (unsigned k1 = 0; k1 < n; ++k1) {
        BigInt row = 0;
        for (unsigned k2 = 0; k2 < n; ++k2) {
            row += z(c.pair[k1][k2]);
            expect("pair symmetry", k1, z(c.pair[k1][k2]), z(c.pair[k2][k1]));
        }
        expect("pair marginal", k1, row, BigInt(z(c.a[k1]) * (n - 1)));
        pair_sum += row;
    }
    expect("pair total", 0, pair_sum, BigInt(total * n * (n - 1)));
    return out;
}

inline CriterionResult check_a2(const std::vector<oracle::OracleCensus>& censuses, const SeriesTables& s)
{
    CriterionResult r{"A2", "oracle = series for n <= 8 (a, b, b_geq, p-type, p-type pairs, pi)", true, "",
                      "exact equality", 0};
    Comparison all;
    for (const auto& c : censuses) {
        Comparison one = compare_census(c, s);
        all.compared += one.compared;
        all.mismatches.insert(all.mismatches.end(), one.mismatches.begin(), one.mismatches.end());
    }
    r.passed = all.mismatches.empty() && !censuses.empty();
    r.measured = std::to_string(all.compared) + " values compared, " + std::to_string(all.mismatches.size())
                 + " mismatches";
    if (!all.mismatches.empty()) {
        r.measured += "; first: " + all.mismatches.front();
    }
    return r;
}

// ---------------------------------------------------------------------------
// A3, A4: limit constants and tail bound

inline constexpr double a3_step = 1e-6;
inline constexpr unsigned a3_kmax = 6;

inline CriterionResult check_a3(const limits::LimitConstants& lc)
{
    CriterionResult r{"A3", "limit constants c_0..c_3 and 1 - (c_0+..+c_3)", true, "", "", 0};
    if (lc.kmax < 3) {
        r.passed = false;
        r.measured = "kmax < 3";
        return r;
    }
    struct Target {
        const char* name;
        double value, want, tol;
    };
    const Target targets[] = {
        {"c_0", lc.c[0], 2.0 / 3.0, 1e-10},
        {"c_1 vs closed form", lc.c[1], limits::c1_closed_form(), 1e-9},
        {"c_1 vs 0.2938858406", lc.c[1], 0.2938858406, 5e-11},
        {"c_2", lc.c[2], 0.03589474655, 1e-8},
        {"c_3", lc.c[3], 0.0032684102, 1e-8},
        {"tail", lc.tail(3), limits::published_tail_after_3, 1e-8},
    };
    for (const auto& t : targets) {
        const double err = std::abs(t.value - t.want);
        r.passed = r.passed && err < t.tol;
        r.measured += std::string(r.measured.empty() ? "" : "; ") + t.name + " = " + fmt(t.value, 13) + " (err "
                      + fmt(err, 2) + ")";
        r.tolerance += std::string(r.tolerance.empty() ? "" : "; ") + t.name + " < " + fmt(t.tol, 2);
    }
    return r;
}

inline CriterionResult check_a4(const limits::LimitConstants& lc)
{
    CriterionResult r{"A4", "1 - sum_{j<=k} c_j < 3^{k+1}/(2k+1)! for k <= 6", true, "", "strict inequality", 0};
    const limits::TailReport rep = limits::verify_tail(lc);
    double worst = 0.0;
    for (const auto& row : rep.rows) {
        worst = std::max(worst, row.tail / row.bound);
    }
    r.passed = rep.all_hold && lc.kmax >= 6;
    r.measured = "k = 0.." + std::to_string(lc.kmax) + ", max tail/bound = " + fmt(worst, 6);
    return r;
}

// ---------------------------------------------------------------------------
// A5: E[X_{>=k}(n)] <= 8 n^{3/2} / (k-2)! and pi_{>k}(n) >= p_{>k}(n)

inline constexpr unsigned a5_nmax = 200;
inline constexpr unsigned a5_path_kmax = 12;

/// Exact test of E <= 8 n^{3/2} / (k-2)!, i.e. (E (k-2)! / (8n))^2 <= n.
inline bool within_power_bound(const ExactRational& expectation, unsigned k, unsigned n)
{
    const ExactRational scaled = expectation * ExactRational(factorial(k - 2)) / ExactRational(8 * n);
    return scaled * scaled <= ExactRational(n);
}

inline CriterionResult check_a5(const exact::RootRankTable& roots, const exact::RankTable& ranks,
                                const exact::PathAlgTable& paths)
{
    CriterionResult r{"A5", "E[X_{>=k}(n)] <= 8n^{3/2}/(k-2)! (3<=k<=n<=200); pi_{>k} >= p_{>k} (k<=12)", true, "",
                      "exact rational inequalities", 0};
    const unsigned nmax = std::min<std::size_t>({a5_nmax, ranks.order, roots.order});
    std::size_t bound_checks = 0, bound_fail = 0, dom_checks = 0, dom_fail = 0;
    double worst = 0.0;
    for (unsigned n = 3; n <= nmax; ++n) {
        for (unsigned k = 3; k <= n && k <= ranks.kmax; ++k) {
            const ExactRational e = exact::expected_rank_at_least(k, n, ranks);
            ++bound_checks;
            bound_fail += !within_power_bound(e, k, n);
            const double ratio = e.get_d() * std::tgamma(k - 1.0) / (8.0 * std::pow(n, 1.5));
            worst = std::max(worst, ratio);
        }
    }
    for (unsigned n = 1; n <= nmax && n <= paths.order; ++n) {
        const ExactRational t(exact::tree_count(n));
        for (unsigned k = 0; k <= a5_path_kmax && k <= paths.kmax && k + 1 <= roots.kmax + 1; ++k) {
            const ExactRational p = ExactRational(roots.b_geq_count(k + 1, n)) / t;
            ++dom_checks;
            dom_fail += paths.pi(static_cast<int>(k), n) < p;
        }
    }
    r.passed = bound_fail == 0 && dom_fail == 0 && bound_checks > 0 && dom_checks > 0;
    r.measured = std::to_string(bound_checks) + " bound checks (" + std::to_string(bound_fail)
                 + " fail, max E/bound = " + fmt(worst, 4) + "); " + std::to_string(dom_checks)
                 + " domination checks (" + std::to_string(dom_fail) + " fail)";
    return r;
}

// ---------------------------------------------------------------------------
// A6: |E[X_k(n)]/n - c_k| <= 10/n, k <= 3, n in {50, 100, 200, 400}

inline constexpr unsigned a6_sizes[] = {50, 100, 200, 400};
inline constexpr unsigned a6_kmax = 3;

inline CriterionResult check_a6(const exact::RankTable& ranks, const limits::LimitConstants& lc)
{
    CriterionResult r{"A6", "|E[X_k(n)]/n - c_k| <= 10/n, k <= 3, n = 50..400", true, "", "n |E/n - c_k| <= 10", 0};
    double worst = 0.0;
    for (unsigned n : a6_sizes) {
        for (unsigned k = 0; k <= a6_kmax; ++k) {
            const double frac = exact::expected_rank_count(k, n, ranks).get_d() / n;
            const double scaled = n * std::abs(frac - lc.c.at(k));
            worst = std::max(worst, scaled);
            r.passed = r.passed && scaled <= 10.0;
        }
    }
    r.measured = "max n |E/n - c_k| = " + fmt(worst, 6);
    return r;
}

// ---------------------------------------------------------------------------
// A7: simulator uniformity over the 15 trees on 4 vertices

struct UniformityTest {
    unsigned n = 0;
    std::uint64_t samples = 0;
    std::vector<std::uint64_t> observed; // by oracle enumeration order
    double chi_square = 0.0;
    double p_value = 0.0;
};

/// Grows `samples` trees on n vertices from one engine and tests the counts
/// against the uniform law over the oracle's tree list.
inline UniformityTest uniformity_test(unsigned n, std::uint64_t samples, std::uint64_t seed)
{
    std::map<std::vector<std::vector<PlaneTree::Vertex>>, std::size_t> index;
    oracle::enumerate_trees(n, [&](const PlaneTree& t) { index.emplace(t.children, index.size()); });
    UniformityTest u;
    u.n = n;
    u.samples = samples;
    u.observed.assign(index.size(), 0);
    sim::Engine eng(seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
        const PlaneTree t = sim::grow_tree(n, eng);
        ++u.observed.at(index.at(t.children));
    }
    const double expected = static_cast<double>(samples) / static_cast<double>(index.size());
    for (auto o : u.observed) {
        const double d = static_cast<double>(o) - expected;
        u.chi_square += d * d / expected;
    }
    const double df = static_cast<double>(index.size() - 1);
    u.p_value = df > 0 ? boost::math::gamma_q(df / 2.0, u.chi_square / 2.0) : 1.0;
    return u;
}

inline CriterionResult check_a7(const UniformityTest& u)
{
    CriterionResult r{"A7", "simulator uniform over the 15 trees on 4 vertices", true, "", "chi-square p > 0.001", 0};
    r.passed = u.observed.size() == 15 && u.p_value > 1e-3;
    r.measured = "chi2 = " + fmt(u.chi_square, 5) + " on " + std::to_string(u.observed.size() - 1) + " df, p = "
                 + fmt(u.p_value, 4) + " (" + std::to_string(u.samples) + " samples)";
    return r;
}

// ---------------------------------------------------------------------------
// A8-A10: Monte Carlo

struct StochasticPlan {
    sim::ExperimentConfig fractions; // A8, A9
    sim::ExperimentConfig largest;   // A10
    std::uint64_t uniformity_samples = 1'000'000;
};

inline StochasticPlan stochastic_plan(const Settings& s)
{
    StochasticPlan p;
    p.fractions.n = s.smoke ? 1000 : 100'000;
    p.fractions.replicates = s.smoke ? 1 : 100;
    p.fractions.master_seed = sim::child_seed(s.seed, 8);
    p.fractions.kmax_report = 3;
    p.fractions.pair_samples_per_tree = 10'000;
    p.fractions.threads = s.threads;
    p.largest.n = s.smoke ? 1000 : 1'000'000;
    p.largest.replicates = s.smoke ? 1 : 50;
    p.largest.master_seed = sim::child_seed(s.seed, 10);
    p.largest.kmax_report = 0;
    p.largest.pair_samples_per_tree = 0;
    p.largest.epsilon = 0.5;
    p.largest.threads = s.threads;
    p.uniformity_samples = s.smoke ? 100'000 : 1'000'000;
    return p;
}

// With a single replicate there is no sample standard error; the smoke run
// substitutes 1/sqrt(n) for a rank fraction (its per-tree standard deviation is
// well below that) and 1/sqrt(pairs) + 1/sqrt(n) for a pair frequency.
inline double effective_se(const sim::MeanSe& m, double fallback) { return std::isfinite(m.se) ? m.se : fallback; }

inline CriterionResult check_a8(const sim::ExperimentReport& rep, const limits::LimitConstants& lc)
{
    CriterionResult r{"A8", "mean rank fractions within 3 SE of c_k (k <= 3) and of (2n-1)/(3n) (k = 0)", true, "",
                      "|z| <= 3", 0};
    const double n = rep.config.n;
    const double fallback = 1.0 / std::sqrt(n);
    double worst = 0.0;
    for (unsigned k = 0; k <= 3; ++k) {
        const sim::MeanSe m = k < rep.rank_fraction.size() ? rep.rank_fraction[k] : sim::MeanSe{0.0, 0.0};
        const double se = effective_se(m, fallback);
        const double zk = std::abs(m.mean - lc.c.at(k)) / se;
        worst = std::max(worst, zk);
        r.measured += "c" + std::to_string(k) + ": " + fmt(m.mean, 7) + " (z " + fmt(zk, 3) + "); ";
    }
    const sim::MeanSe m0 = rep.rank_fraction.at(0);
    const double z0 = std::abs(m0.mean - (2.0 * n - 1.0) / (3.0 * n)) / effective_se(m0, fallback);
    worst = std::max(worst, z0);
    r.measured += "exact rank-0: z " + fmt(z0, 3) + "; n = " + std::to_string(rep.config.n) + ", "
                  + std::to_string(rep.config.replicates) + " replicates";
    if (!std::isfinite(m0.se)) {
        r.tolerance += " (smoke: SE replaced by 1/sqrt(n))";
    }
    r.passed = worst <= 3.0;
    return r;
}

inline CriterionResult check_a9(const sim::ExperimentReport& rep, const limits::LimitConstants& lc)
{
    CriterionResult r{"A9", "joint rank frequency of sampled pairs within 3 SE of c_k1 c_k2 (k <= 2)", true, "",
                      "|z| <= 3", 0};
    if (rep.pair_frequency.size() < 3 || rep.config.pair_samples_per_tree == 0) {
        r.passed = false;
        r.measured = "no pair samples";
        return r;
    }
    const double fallback = 1.0 / std::sqrt(static_cast<double>(rep.config.pair_samples_per_tree))
                            + 1.0 / std::sqrt(static_cast<double>(rep.config.n));
    double worst = 0.0;
    std::string where;
    for (unsigned k1 = 0; k1 <= 2; ++k1) {
        for (unsigned k2 = 0; k2 <= 2; ++k2) {
            const sim::MeanSe& m = rep.pair_frequency[k1][k2];
            const double zk = std::abs(m.mean - lc.c.at(k1) * lc.c.at(k2)) / effective_se(m, fallback);
            if (zk >= worst) {
                worst = zk;
                where = "(" + std::to_string(k1) + "," + std::to_string(k2) + ")";
            }
        }
    }
    r.passed = worst <= 3.0;
    r.measured = "max |z| = " + fmt(worst, 3) + " at " + where + "; (0,0): " + fmt(rep.pair_frequency[0][0].mean, 6)
                 + " vs " + fmt(lc.c[0] * lc.c[0], 6);
    if (!std::isfinite(rep.pair_frequency[0][0].se)) {
        r.tolerance += " (smoke: SE replaced by 1/sqrt(pairs) + 1/sqrt(n))";
    }
    return r;
}

inline CriterionResult check_a10(const sim::ExperimentReport& rep)
{
    CriterionResult r{"A10", "p-type count at k(n), largest-rank window, R_n >= R_n^p", true, "", "", 0};
    const double e = rep.ptype_expected_at_probe;
    const double tol = 5.0 * std::sqrt(e);
    const double dev = std::abs(rep.ptype_at_probe.mean - e);
    const bool ptype_ok = std::isfinite(e) && dev <= tol;
    const bool window_ok = rep.largest_rank_window_fraction >= 0.95;
    r.passed = ptype_ok && window_ok && rep.largest_rank_dominates;
    r.measured = "k(n) = " + std::to_string(rep.ptype_probe_rank) + ", mean p-type count " + fmt(rep.ptype_at_probe.mean, 7)
                 + " vs E = " + fmt(e, 7) + " (|dev| " + fmt(dev, 4) + "); window fraction "
                 + fmt(rep.largest_rank_window_fraction, 4) + "; R_n >= R_n^p in all replicates: "
                 + (rep.largest_rank_dominates ? "yes" : "no") + "; n = " + std::to_string(rep.config.n) + ", "
                 + std::to_string(rep.config.replicates) + " replicates";
    r.tolerance = "|dev| <= 5 sqrt(E) = " + fmt(tol, 4) + "; window fraction >= 0.95; domination everywhere";
    return r;
}

// ---------------------------------------------------------------------------
// Runner

inline std::vector<CriterionResult> run_suite(const Settings& s,
                                              const std::function<void(const CriterionResult&)>& on_result = {})
{
    std::vector<CriterionResult> out;
    auto timed = [&](auto&& body) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = body();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) {
            on_result(r);
        }
        out.push_back(std::move(r));
    };

    timed([] { return check_a1(a1_table()); });
    timed([&] {
        std::vector<oracle::OracleCensus> censuses;
        oracle::EnumerationOptions opt;
        opt.threads = s.threads;
        for (unsigned n = 1; n <= a2_nmax; ++n) {
            censuses.push_back(oracle::census_all(n, opt));
        }
        return check_a2(censuses, series_tables(a2_nmax, a2_nmax));
    });
    limits::LimitConstants lc;
    timed([&] {
        lc = limits::compute_limits(a3_kmax, a3_step);
        return check_a3(lc);
    });
    timed([&] { return check_a4(lc); });
    timed([] {
        const auto roots = exact::root_rank_series(a5_nmax - 1, a5_nmax);
        const auto ranks = exact::rank_series(a5_nmax - 1, a5_nmax, roots);
        return check_a5(roots, ranks, exact::path_alg_series(a5_path_kmax, a5_nmax));
    });
    timed([&] {
        const auto roots = exact::root_rank_series(a6_kmax, a6_sizes[3]);
        return check_a6(exact::rank_series(a6_kmax, a6_sizes[3], roots), lc);
    });
    if (s.level == Level::quick) {
        return out;
    }

    const StochasticPlan plan = stochastic_plan(s);
    timed([&] { return check_a7(uniformity_test(4, plan.uniformity_samples, sim::child_seed(s.seed, 7))); });
    sim::ExperimentReport fractions;
    timed([&] {
        fractions = sim::run_experiment(plan.fractions);
        return check_a8(fractions, lc);
    });
    timed([&] { return check_a9(fractions, lc); });
    timed([&] { return check_a10(sim::run_experiment(plan.largest)); });
    return out;
}

inline bool all_passed(const std::vector<CriterionResult>& results)
{
    for (const auto& r : results) {
        if (!r.passed) {
            return false;
        }
    }
    return !results.empty();
}

inline void print_result(std::ostream& os, const CriterionResult& r)
{
    os << r.id << (r.id.size() < 3 ? "  " : " ") << (r.passed ? "PASS" : "FAIL") << "  " << r.title
       << " | measured: " << r.measured << " | tolerance: " << r.tolerance << " | " << fmt(r.seconds, 3) << " s\n";
}

} // namespace rankdist::acceptance
