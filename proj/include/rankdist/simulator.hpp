#pragma once

// Monte Carlo growth of random plane increasing trees and the rank
// statistics measured on them.
//
// Growth: each vertex v offers children(v)+1 plane positions (the gaps around
// its children), so a tree on m vertices has 2m-1 positions in total. The
// slot array lists every vertex once per position it offers; a uniform draw
// from it picks the host with probability proportional to its degree (the
// root counted +1), and a second uniform draw picks the gap within the host.
// Every plane tree on n vertices is then equally likely.

#include "rankdist/plane_tree.hpp"
#include "rankdist/rational.hpp"
#include "rankdist/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rankdist::sim {

using Vertex = PlaneTree::Vertex;

class SlotArray {
public:
    /// Slot array of the single edge 1-2 (or of the lone root if n = 1).
    explicit SlotArray(std::size_t n_final)
    {
        slots_.reserve(n_final > 0 ? 2 * n_final - 1 : 1);
        slots_.push_back(0);
        if (n_final >= 2) {
            slots_.push_back(0);
            slots_.push_back(1);
            vertices_ = 2;
        }
    }

    std::size_t vertices() const noexcept { return vertices_; }
    std::size_t size() const noexcept { return slots_.size(); }
    std::span<const Vertex> slots() const noexcept { return slots_; }

    Vertex draw_host(Engine& eng) const { return slots_[uniform_below(eng, slots_.size())]; }

    /// Records that the next vertex was attached to `host`.
    Vertex add_vertex(Vertex host)
    {
        const auto v = static_cast<Vertex>(vertices_++);
        slots_.push_back(host);
        slots_.push_back(v);
        return v;
    }

private:
    std::vector<Vertex> slots_;
    std::size_t vertices_ = 1;
};

namespace detail {

// Runs the growth process, calling place(host, gap) for vertices 3..n.
// grow_tree and grow_parents consume the engine identically.
template <typename Place>
void grow(unsigned n, Engine& eng, std::vector<std::uint32_t>& child_count, Place&& place)
{
    SlotArray slots(n);
    child_count.assign(n, 0);
    if (n >= 2) {
        child_count[0] = 1;
    }
    for (unsigned m = 3; m <= n; ++m) {
        const Vertex host = slots.draw_host(eng);
        const auto gap = static_cast<std::size_t>(uniform_below(eng, child_count[host] + 1ULL));
        place(host, gap);
        ++child_count[host];
        slots.add_vertex(host);
    }
}

} // namespace detail

/// Random plane increasing tree on n vertices.
inline PlaneTree grow_tree(unsigned n, Engine& eng)
{
    if (n == 0) {
        throw std::invalid_argument("grow_tree: n must be >= 1");
    }
    PlaneTree t = PlaneTree::single_vertex();
    if (n >= 2) {
        t.attach(0, 0);
    }
    std::vector<std::uint32_t> child_count;
    detail::grow(n, eng, child_count, [&t](Vertex host, std::size_t gap) { t.attach(host, gap); });
    return t;
}

inline PlaneTree grow_tree(unsigned n, std::uint64_t seed)
{
    Engine eng(seed);
    return grow_tree(n, eng);
}

/// Parent array of the tree grow_tree(n, eng) would build (plane order is not
/// materialized). parent[0] = PlaneTree::no_parent.
inline std::vector<Vertex> grow_parents(unsigned n, Engine& eng)
{
    if (n == 0) {
        throw std::invalid_argument("grow_parents: n must be >= 1");
    }
    std::vector<Vertex> parent;
    parent.reserve(n);
    parent.push_back(PlaneTree::no_parent);
    if (n >= 2) {
        parent.push_back(0);
    }
    std::vector<std::uint32_t> child_count;
    detail::grow(n, eng, child_count, [&parent](Vertex host, std::size_t) { parent.push_back(host); });
    return parent;
}

/// rank(v) = 0 for leaves, else 1 + min over children. Children have larger
/// ids than their parent, so one pass in decreasing id order suffices.
inline std::vector<unsigned> compute_ranks(std::span<const Vertex> parent)
{
    constexpr unsigned unset = std::numeric_limits<unsigned>::max();
    std::vector<unsigned> rank(parent.size(), unset);
    for (std::size_t v = parent.size(); v-- > 1;) {
        if (rank[v] == unset) {
            rank[v] = 0;
        }
        unsigned& up = rank[parent[v]];
        up = std::min(up, rank[v] + 1);
    }
    if (!rank.empty() && rank[0] == unset) {
        rank[0] = 0;
    }
    return rank;
}

inline std::vector<unsigned> compute_ranks(const PlaneTree& t) { return compute_ranks(t.parent); }

/// v is p-type iff it is a leaf, or has exactly one child and that child is p-type.
inline std::vector<bool> ptype_flags(std::span<const Vertex> parent)
{
    const std::size_t n = parent.size();
    std::vector<std::uint32_t> kids(n, 0);
    std::vector<Vertex> some_child(n, 0);
    for (std::size_t v = 1; v < n; ++v) {
        ++kids[parent[v]];
        some_child[parent[v]] = static_cast<Vertex>(v);
    }
    std::vector<bool> flag(n, false);
    for (std::size_t v = n; v-- > 0;) {
        flag[v] = kids[v] == 0 || (kids[v] == 1 && flag[some_child[v]]);
    }
    return flag;
}

inline std::vector<bool> ptype_flags(const PlaneTree& t) { return ptype_flags(t.parent); }

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
    unsigned n = 1000;
    unsigned replicates = 10;
    std::uint64_t master_seed = 1;
    unsigned kmax_report = 3;
    unsigned pair_samples_per_tree = 10000;
    double epsilon = 0.5;
    unsigned threads = 1;
};

struct MeanSe {
    double mean = 0.0;
    double se = std::numeric_limits<double>::quiet_NaN(); // NaN with one replicate
};

struct ExperimentReport {
    ExperimentConfig config;
    unsigned max_rank_seen = 0;
    std::vector<MeanSe> rank_fraction;  // X_k(n)/n, k = 0..max_rank_seen
    std::vector<MeanSe> ptype_count;    // PX_k(n),  k = 0..max_rank_seen
    double fraction_sum_max_error = 0.0; // max over replicates of |sum_k X_k/n - 1|
    std::vector<std::uint64_t> largest_rank_hist;       // replicates by R_n
    std::vector<std::uint64_t> largest_ptype_rank_hist; // replicates by R_n^p
    std::vector<unsigned> largest_rank;                 // per replicate
    std::vector<unsigned> largest_ptype_rank;           // per replicate
    bool largest_rank_dominates = true;                 // R_n >= R_n^p everywhere
    std::vector<std::vector<MeanSe>> pair_frequency;    // [k1][k2], k <= kmax_report
    double log_scale = std::numeric_limits<double>::quiet_NaN(); // log n / log log n
    unsigned ptype_probe_rank = 0;                      // ceil((1-eps) log n / log log n)
    MeanSe ptype_at_probe;
    double ptype_expected_at_probe = std::numeric_limits<double>::quiet_NaN();
    double largest_rank_window_fraction = std::numeric_limits<double>::quiet_NaN();
};

inline void validate(const ExperimentConfig& cfg)
{
    if (cfg.n == 0) {
        throw std::invalid_argument("experiment: n must be >= 1");
    }
    if (cfg.replicates == 0) {
        throw std::invalid_argument("experiment: replicates must be >= 1");
    }
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
        throw std::invalid_argument("experiment: epsilon must lie in (0, 1)");
    }
}

/// log n / log log n, or NaN when log log n <= 0.
inline double log_over_loglog(double n)
{
    const double ll = std::log(std::log(n));
    return n > 1.0 && ll > 0.0 ? std::log(n) / ll : std::numeric_limits<double>::quiet_NaN();
}

namespace detail {

struct Replicate {
    std::vector<std::uint64_t> hist;
    std::vector<std::uint64_t> phist;
    unsigned largest = 0;
    unsigned largest_p = 0;
    std::vector<std::uint64_t> pairs; // (kmax+1)^2, row-major
};

inline Replicate run_replicate(const ExperimentConfig& cfg, std::uint64_t replicate)
{
    Engine eng(child_seed(cfg.master_seed, replicate));
    const std::vector<Vertex> parent = grow_parents(cfg.n, eng);
    const std::vector<unsigned> rank = compute_ranks(parent);
    const std::vector<bool> flag = ptype_flags(parent);

    Replicate r;
    r.largest = *std::max_element(rank.begin(), rank.end());
    r.hist.assign(r.largest + 1, 0);
    r.phist.assign(r.largest + 1, 0);
    for (std::size_t v = 0; v < rank.size(); ++v) {
        ++r.hist[rank[v]];
        if (flag[v]) {
            ++r.phist[rank[v]];
            r.largest_p = std::max(r.largest_p, rank[v]);
        }
    }
    const unsigned side = cfg.kmax_report + 1;
    r.pairs.assign(static_cast<std::size_t>(side) * side, 0);
    if (cfg.n >= 2) {
        for (unsigned s = 0; s < cfg.pair_samples_per_tree; ++s) {
            const auto v1 = uniform_below(eng, cfg.n);
            auto v2 = uniform_below(eng, cfg.n - 1);
            if (v2 >= v1) {
                ++v2;
            }
            const unsigned k1 = rank[v1], k2 = rank[v2];
            if (k1 < side && k2 < side) {
                ++r.pairs[static_cast<std::size_t>(k1) * side + k2];
            }
        }
    }
    return r;
}

inline MeanSe mean_se(const std::vector<double>& x)
{
    MeanSe m;
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    m.mean = s / static_cast<double>(x.size());
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x) {
            ss += (v - m.mean) * (v - m.mean);
        }
        m.se = std::sqrt(ss / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
    }
    return m;
}

} // namespace detail

/// Runs cfg.replicates independent trees. Replicate r is seeded with
/// child_seed(master_seed, r) and results are combined in replicate order, so
/// the report does not depend on cfg.threads.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    const unsigned reps = cfg.replicates;
    std::vector<detail::Replicate> results(reps);
    std::atomic<unsigned> next{0};
    auto worker = [&]() {
        for (unsigned r = next++; r < reps; r = next++) {
            results[r] = detail::run_replicate(cfg, r);
        }
    };
    const unsigned threads = std::max(1u, std::min(cfg.threads, reps));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    ExperimentReport rep;
    rep.config = cfg;
    const double n = cfg.n;
    for (const auto& r : results) {
        rep.max_rank_seen = std::max(rep.max_rank_seen, r.largest);
    }
    const unsigned top = rep.max_rank_seen;
    rep.largest_rank_hist.assign(top + 1, 0);
    rep.largest_ptype_rank_hist.assign(top + 1, 0);
    std::vector<double> column(reps);
    for (unsigned k = 0; k <= top; ++k) {
        for (unsigned r = 0; r < reps; ++r) {
            column[r] = k < results[r].hist.size() ? static_cast<double>(results[r].hist[k]) / n : 0.0;
        }
        rep.rank_fraction.push_back(detail::mean_se(column));
        for (unsigned r = 0; r < reps; ++r) {
            column[r] = k < results[r].phist.size() ? static_cast<double>(results[r].phist[k]) : 0.0;
        }
        rep.ptype_count.push_back(detail::mean_se(column));
    }
    for (const auto& r : results) {
        double s = 0.0;
        for (auto h : r.hist) {
            s += static_cast<double>(h) / n;
        }
        rep.fraction_sum_max_error = std::max(rep.fraction_sum_max_error, std::abs(s - 1.0));
        ++rep.largest_rank_hist[r.largest];
        ++rep.largest_ptype_rank_hist[r.largest_p];
        rep.largest_rank.push_back(r.largest);
        rep.largest_ptype_rank.push_back(r.largest_p);
        rep.largest_rank_dominates = rep.largest_rank_dominates && r.largest >= r.largest_p;
    }

    const unsigned side = cfg.kmax_report + 1;
    rep.pair_frequency.assign(side, std::vector<MeanSe>(side));
    if (cfg.n >= 2 && cfg.pair_samples_per_tree > 0) {
        for (unsigned k1 = 0; k1 < side; ++k1) {
            for (unsigned k2 = 0; k2 < side; ++k2) {
                for (unsigned r = 0; r < reps; ++r) {
                    column[r] = static_cast<double>(results[r].pairs[static_cast<std::size_t>(k1) * side + k2])
                                / cfg.pair_samples_per_tree;
                }
                rep.pair_frequency[k1][k2] = detail::mean_se(column);
            }
        }
    }

    rep.log_scale = log_over_loglog(n);
    if (std::isfinite(rep.log_scale)) {
        rep.ptype_probe_rank = static_cast<unsigned>(std::ceil((1.0 - cfg.epsilon) * rep.log_scale));
        const unsigned k = rep.ptype_probe_rank;
        for (unsigned r = 0; r < reps; ++r) {
            column[r] = k < results[r].phist.size() ? static_cast<double>(results[r].phist[k]) : 0.0;
        }
        rep.ptype_at_probe = detail::mean_se(column);
        if (cfg.n >= k + 2) {
            rep.ptype_expected_at_probe = (2.0 * n - 1.0) / double_factorial(2L * k + 3).get_d();
        }
        unsigned inside = 0;
        for (unsigned r : rep.largest_rank) {
            const double ratio = r / rep.log_scale;
            inside += ratio >= 0.5 && ratio <= 2.0;
        }
        rep.largest_rank_window_fraction = static_cast<double>(inside) / reps;
    }
    return rep;
}

} // namespace rankdist::sim
