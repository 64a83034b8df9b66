#pragma once

// Brute-force ground truth: visits every plane increasing tree on n vertices
// and tallies ranks, root ranks, p-type vertices, ordered rank pairs and the
// exact distribution of the randomized root-to-leaf walk.
//
// A tree is encoded by its slot sequence (s_2, ..., s_n): when vertex m
// arrives there are 2m-3 plane positions, listed vertex by vertex (ids in
// increasing order) and, within a vertex, left to right over the gaps between
// its children. Every sequence decodes to exactly one tree.
//
// Nothing here shares code with the series engine or the simulator.

#include "rankdist/plane_tree.hpp"
#include "rankdist/rational.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace rankdist::oracle {

inline constexpr unsigned default_cap = 9;
inline constexpr unsigned forced_cap = 10;

struct EnumerationOptions {
    bool force = false;   // allow n = forced_cap
    unsigned threads = 1; // census_all only
};

inline void check_cap(unsigned n, const EnumerationOptions& opt)
{
    const unsigned cap = opt.force ? forced_cap : default_cap;
    if (n == 0 || n > cap) {
        throw std::invalid_argument("oracle: n = " + std::to_string(n) + " outside 1.." + std::to_string(cap)
                                    + (opt.force ? "" : " (use force for n = 10)"));
    }
}

/// Builds the tree for slot sequence (s_2, ..., s_n), each s_m in 1..2m-3.
inline PlaneTree decode_slots(const std::vector<unsigned>& slots)
{
    PlaneTree t = PlaneTree::single_vertex();
    for (unsigned s : slots) {
        if (s == 0 || s > 2 * t.size() - 1) {
            throw std::out_of_range("decode_slots: slot index out of range");
        }
        std::size_t rest = s - 1;
        PlaneTree::Vertex host = 0;
        while (rest >= t.slots(host)) {
            rest -= t.slots(host);
            ++host;
        }
        t.attach(host, rest);
    }
    return t;
}

namespace detail {

template <typename Visitor>
std::uint64_t extend(PlaneTree& t, unsigned n, Visitor& visit)
{
    if (t.size() == n) {
        visit(static_cast<const PlaneTree&>(t));
        return 1;
    }
    std::uint64_t count = 0;
    const auto m = static_cast<PlaneTree::Vertex>(t.size());
    for (PlaneTree::Vertex host = 0; host < m; ++host) {
        const std::size_t positions = t.slots(host);
        for (std::size_t pos = 0; pos < positions; ++pos) {
            t.attach(host, pos);
            count += extend(t, n, visit);
            t.detach_last();
        }
    }
    return count;
}

} // namespace detail

/// Calls visit(const PlaneTree&) once per tree on n vertices, in slot-sequence
/// lexicographic order. Returns the number of trees visited.
template <typename Visitor>
std::uint64_t enumerate_trees(unsigned n, Visitor&& visit, const EnumerationOptions& opt = {})
{
    check_cap(n, opt);
    PlaneTree t = PlaneTree::single_vertex();
    return detail::extend(t, n, visit);
}

/// All trees on min(n, depth) vertices; used as independent work units.
inline std::vector<PlaneTree> prefixes(unsigned depth)
{
    std::vector<PlaneTree> out;
    PlaneTree t = PlaneTree::single_vertex();
    auto keep = [&out](const PlaneTree& p) { out.push_back(p); };
    detail::extend(t, std::max(1u, depth), keep);
    return out;
}

// ---------------------------------------------------------------------------
// Census

struct OracleCensus {
    unsigned n = 0;
    std::uint64_t tree_total = 0;
    std::vector<std::uint64_t> a;                 // rank-k vertices, all trees
    std::vector<std::uint64_t> b;                 // trees with root rank k
    std::vector<std::uint64_t> ptype;             // p-type vertices of rank k
    std::vector<std::uint64_t> ptype_pair;        // ordered pairs, both p-type rank k
    std::vector<std::vector<std::uint64_t>> pair; // ordered distinct pairs, ranks (k1, k2)
    std::vector<ExactRational> pi_exact;          // pi_{>k}(n), k = 0..n-1

    explicit OracleCensus(unsigned n_ = 0)
        : n(n_), a(n_), b(n_), ptype(n_), ptype_pair(n_), pair(n_, std::vector<std::uint64_t>(n_)), pi_exact(n_)
    {
    }

    std::uint64_t b_geq(unsigned k) const
    {
        std::uint64_t s = 0;
        for (unsigned j = k; j < n; ++j) {
            s += b[j];
        }
        return s;
    }

    void merge(const OracleCensus& o)
    {
        tree_total += o.tree_total;
        for (unsigned k = 0; k < n; ++k) {
            a[k] += o.a[k];
            b[k] += o.b[k];
            ptype[k] += o.ptype[k];
            ptype_pair[k] += o.ptype_pair[k];
            pi_exact[k] += o.pi_exact[k];
            for (unsigned j = 0; j < n; ++j) {
                pair[k][j] += o.pair[k][j];
            }
        }
    }
};

namespace detail {

struct TreeScan {
    const PlaneTree& t;
    std::vector<unsigned> rank;
    std::vector<unsigned> size;
    std::vector<char> ptype;
    // walk_length[v][l] = probability that the walk started at v stops after l edges
    std::vector<std::vector<ExactRational>> walk_length;

    explicit TreeScan(const PlaneTree& tree)
        : t(tree), rank(tree.size()), size(tree.size()), ptype(tree.size()), walk_length(tree.size())
    {
        visit(0);
    }

    void visit(PlaneTree::Vertex v)
    {
        const auto& kids = t.children[v];
        size[v] = 1;
        if (kids.empty()) {
            rank[v] = 0;
            ptype[v] = 1;
            walk_length[v] = {ExactRational(1)};
            return;
        }
        unsigned best = ~0u;
        for (auto c : kids) {
            visit(c);
            size[v] += size[c];
            best = std::min(best, rank[c]);
        }
        rank[v] = best + 1;
        ptype[v] = kids.size() == 1 && ptype[kids[0]];

        auto& dist = walk_length[v];
        if (kids.size() == 1) {
            const auto& sub = walk_length[kids[0]];
            dist.assign(sub.size() + 1, ExactRational(0));
            std::copy(sub.begin(), sub.end(), dist.begin() + 1);
            return;
        }
        // keep child r with probability (S - size_r) / (S (s - 1))
        const unsigned total = size[v] - 1;
        const auto s = static_cast<unsigned>(kids.size());
        for (auto c : kids) {
            const ExactRational w = make_rational(total - size[c], BigInt(total) * (s - 1));
            const auto& sub = walk_length[c];
            if (dist.size() < sub.size() + 1) {
                dist.resize(sub.size() + 1);
            }
            for (std::size_t l = 0; l < sub.size(); ++l) {
                dist[l + 1] += w * sub[l];
            }
        }
    }
};

inline void tally(const PlaneTree& t, OracleCensus& c)
{
    const TreeScan scan(t);
    const unsigned n = c.n;
    ++c.tree_total;
    std::vector<std::uint64_t> hist(n, 0), phist(n, 0);
    for (PlaneTree::Vertex v = 0; v < n; ++v) {
        ++hist[scan.rank[v]];
        if (scan.ptype[v]) {
            ++phist[scan.rank[v]];
        }
    }
    ++c.b[scan.rank[0]];
    for (unsigned k = 0; k < n; ++k) {
        c.a[k] += hist[k];
        c.ptype[k] += phist[k];
        if (phist[k] > 1) {
            c.ptype_pair[k] += phist[k] * (phist[k] - 1);
        }
        for (unsigned j = 0; j < n; ++j) {
            c.pair[k][j] += k == j ? (hist[k] > 0 ? hist[k] * (hist[k] - 1) : 0) : hist[k] * hist[j];
        }
    }
    // P(length > k) = sum_{l > k} dist[l]
    const auto& dist = scan.walk_length[0];
    ExactRational tail;
    for (std::size_t l = dist.size(); l-- > 1;) {
        tail += dist[l];
        c.pi_exact[l - 1] += tail;
    }
}

} // namespace detail

/// Exhaustive census over all (2n-3)!! trees. With opt.threads > 1 the slot
/// space is split by the placement of the first few vertices and the partial
/// censuses are added up, so the result does not depend on the thread count.
inline OracleCensus census_all(unsigned n, const EnumerationOptions& opt = {})
{
    check_cap(n, opt);
    const unsigned depth = std::min(n, 5u);
    const std::vector<PlaneTree> work = prefixes(depth);
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(work.size())));

    std::vector<OracleCensus> partial(threads, OracleCensus(n));
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned id) {
        auto visit = [&](const PlaneTree& t) { detail::tally(t, partial[id]); };
        for (std::size_t i = next++; i < work.size(); i = next++) {
            PlaneTree t = work[i];
            detail::extend(t, n, visit);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id) {
            pool.emplace_back(worker, id);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    OracleCensus total(n);
    for (const auto& p : partial) {
        total.merge(p);
    }
    for (auto& p : total.pi_exact) {
        p /= ExactRational(BigInt(static_cast<unsigned long>(total.tree_total)));
    }
    return total;
}

} // namespace rankdist::oracle
