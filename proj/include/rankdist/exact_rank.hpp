#pragma once

// Exact counts of vertices by rank in plane increasing trees, obtained by
// running the generating-function recurrences coefficient by coefficient.
//
// Notation (all series are EGFs, see series.hpp):
//   T        trees,                        t(n) = (2n-3)!!
//   B_{>=k}  trees whose root has rank >= k
//   B_k      trees whose root has rank k   = B_{>=k} - B_{>=k+1}
//   A_k      rank-k vertices over all trees
//   A_{>=k}  vertices of rank >= k over all trees
//   P_{>k}   t(n) * probability that the randomized root-to-leaf walk has
//            more than k edges
//   PA_k     p-type vertices of rank k (subtree is a single path of k edges)
//   PA_(k,k) ordered pairs of distinct p-type vertices, both of rank k
//
// Rank always means edge length: a leaf has rank 0.

#include "rankdist/rational.hpp"
#include "rankdist/series.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankdist::exact {

using series::SeriesEGF;

/// (2n-3)!! for n >= 2, and 1 for n = 1.
inline BigInt tree_count(unsigned n)
{
    if (n == 0) {
        throw std::invalid_argument("tree_count: n must be >= 1");
    }
    return n == 1 ? BigInt(1) : double_factorial(2L * n - 3);
}

/// T(z) = 1 - sqrt(1 - 2z), from its closed-form coefficients (2n-3)!!/n!.
inline SeriesEGF t_series(std::size_t order)
{
    std::vector<ExactRational> v(order + 1);
    for (std::size_t n = 1; n <= order; ++n) {
        v[n] = make_rational(tree_count(static_cast<unsigned>(n)), factorial(n));
    }
    return SeriesEGF(std::move(v));
}

/// Solves A' = A / (1 - 2z) + D with A(0) = 0, i.e. A' = A (1 - T)^{-2} + D.
/// (nu+1) A(nu+1) = sum_{j<=nu} 2^{nu-j} A(j) + D(nu); the inner sum is kept
/// as a running value S(nu) = 2 S(nu-1) + A(nu), so this is O(N).
inline SeriesEGF solve_rank_ode(const SeriesEGF& source_derivative, std::size_t order)
{
    if (source_derivative.order() + 1 < order) {
        throw std::invalid_argument("solve_rank_ode: source series too short");
    }
    std::vector<ExactRational> a(order + 1);
    ExactRational running;
    for (std::size_t nu = 0; nu < order; ++nu) {
        running = 2 * running + a[nu];
        a[nu + 1] = (running + source_derivative[nu]) / static_cast<unsigned long>(nu + 1);
    }
    return SeriesEGF(std::move(a));
}

// ---------------------------------------------------------------------------
// Root ranks

struct RootRankTable {
    unsigned kmax = 0;
    std::size_t order = 0;
    std::vector<SeriesEGF> b_geq; // k = 0..kmax+1
    std::vector<SeriesEGF> b;     // k = 0..kmax

    BigInt b_count(unsigned k, std::size_t n) const { return b.at(k).integer_count(n); }
    BigInt b_geq_count(unsigned k, std::size_t n) const { return b_geq.at(k).integer_count(n); }
};

/// B_{>=0} = T and B'_{>=k} = B_{>=k-1} / (1 - B_{>=k-1}) = 1/(1 - B_{>=k-1}) - 1.
inline RootRankTable root_rank_series(unsigned kmax, std::size_t order)
{
    RootRankTable table;
    table.kmax = kmax;
    table.order = order;
    table.b_geq.reserve(kmax + 2);
    table.b_geq.push_back(t_series(order));
    const SeriesEGF one = SeriesEGF::constant(1, order);
    for (unsigned k = 1; k <= kmax + 1; ++k) {
        const SeriesEGF slope = geom_inverse(table.b_geq.back()) - one;
        table.b_geq.push_back(antiderivative(slope).truncated(order));
    }
    table.b.reserve(kmax + 1);
    for (unsigned k = 0; k <= kmax; ++k) {
        table.b.push_back(table.b_geq[k] - table.b_geq[k + 1]);
    }
    return table;
}

// ---------------------------------------------------------------------------
// All-vertex ranks

struct RankTable {
    unsigned kmax = 0;
    std::size_t order = 0;
    std::vector<SeriesEGF> a;     // A_k,     k = 0..kmax
    std::vector<SeriesEGF> a_geq; // A_{>=k}, k = 0..kmax

    BigInt a_count(unsigned k, std::size_t n) const { return a.at(k).integer_count(n); }
    BigInt a_geq_count(unsigned k, std::size_t n) const { return a_geq.at(k).integer_count(n); }
};

/// A'_k = A_k (1-T)^{-2} + B'_k, and the same with B_{>=k} for A_{>=k}.
inline RankTable rank_series(unsigned kmax, std::size_t order, const RootRankTable& roots)
{
    if (roots.kmax < kmax || roots.order < order) {
        throw std::invalid_argument("rank_series: root-rank table does not cover (kmax, order)");
    }
    RankTable table;
    table.kmax = kmax;
    table.order = order;
    for (unsigned k = 0; k <= kmax; ++k) {
        table.a.push_back(solve_rank_ode(derivative(roots.b[k]), order));
        table.a_geq.push_back(solve_rank_ode(derivative(roots.b_geq[k]), order));
    }
    return table;
}

inline void check_range(unsigned k, std::size_t n, unsigned kmax, std::size_t order)
{
    if (n == 0 || n > order) {
        throw std::out_of_range("n = " + std::to_string(n) + " outside 1.." + std::to_string(order));
    }
    if (k > kmax) {
        throw std::out_of_range("k = " + std::to_string(k) + " above kmax " + std::to_string(kmax));
    }
}

/// E[X_k(n)] = a_k(n) / t(n).
inline ExactRational expected_rank_count(unsigned k, std::size_t n, const RankTable& table)
{
    check_range(k, n, table.kmax, table.order);
    return table.a[k].count(n) / ExactRational(tree_count(static_cast<unsigned>(n)));
}

/// E[X_{>=k}(n)] = a_{>=k}(n) / t(n).
inline ExactRational expected_rank_at_least(unsigned k, std::size_t n, const RankTable& table)
{
    check_range(k, n, table.kmax, table.order);
    return table.a_geq[k].count(n) / ExactRational(tree_count(static_cast<unsigned>(n)));
}

// ---------------------------------------------------------------------------
// Randomized root-to-leaf walk

// (1 - T)^{-1} = T', (1 - T)^{-2} = 1/(1 - 2z), (1 - T)^{-3} = T''.
struct TreeKernels {
    SeriesEGF inv1;
    SeriesEGF inv2;
    SeriesEGF inv3;
};

inline TreeKernels tree_kernels(std::size_t order)
{
    TreeKernels k;
    k.inv1 = geom_inverse(t_series(order));
    k.inv2 = mul(k.inv1, k.inv1);
    k.inv3 = mul(k.inv2, k.inv1);
    return k;
}

struct PathAlgTable {
    unsigned kmax = 0;
    std::size_t order = 0;
    std::vector<SeriesEGF> p_series; // P_{>k} stored at index k+1, k = -1..kmax

    const SeriesEGF& series(int k) const
    {
        if (k < -1 || k > static_cast<int>(kmax)) {
            throw std::out_of_range("path table: k out of range");
        }
        return p_series[static_cast<std::size_t>(k + 1)];
    }

    /// pi_{>k}(n) = n! [z^n] P_{>k} / t(n).
    ExactRational pi(int k, std::size_t n) const
    {
        if (n == 0 || n > order) {
            throw std::out_of_range("path table: n out of range");
        }
        return series(k).count(n) / ExactRational(tree_count(static_cast<unsigned>(n)));
    }
};

/// The walk starts at the root; at a vertex with s >= 2 children it keeps
/// the child subtree r with probability (sum of the other subtree sizes) /
/// ((subtree-size total) (s - 1)), and with s = 1 it keeps the only child.
///
/// In EGF form, each root with s children contributes
/// s(s-1) ordered (kept, dropped) pairs weighted by 1/(s-1), so the kernel is
/// sum_{s>=2} s T^{s-2} T' = (1-T)^{-3} + (1-T)^{-2}:
///
///   P''_{>k} = P'_{>k-1} + ((1-T)^{-3} + (1-T)^{-2}) P_{>k-1},
///
/// with P_{>-1} = T, P_{>0} = T - z, and [z^0] = [z^1] = 0 for k >= 1.
/// (Written with (1-T)^{-2} alone the kernel misses the factor s and does not
/// even reproduce P_{>0} from P_{>-1}.)
inline PathAlgTable path_alg_series(unsigned kmax, std::size_t order)
{
    PathAlgTable table;
    table.kmax = kmax;
    table.order = order;
    const SeriesEGF t = t_series(order);
    table.p_series.push_back(t);
    table.p_series.push_back(t - SeriesEGF::monomial(1, 1, order));
    if (kmax == 0) {
        return table;
    }
    const TreeKernels kern = tree_kernels(order);
    const SeriesEGF kernel = kern.inv3 + kern.inv2;
    for (unsigned k = 1; k <= kmax; ++k) {
        const SeriesEGF& prev = table.p_series.back();
        const SeriesEGF rhs = derivative(prev) + mul(kernel, prev);
        table.p_series.push_back(antiderivative(antiderivative(rhs)).truncated(order));
    }
    return table;
}

// ---------------------------------------------------------------------------
// p-type vertices

struct PTypeTable {
    unsigned kmax = 0;
    std::size_t order = 0;
    std::vector<SeriesEGF> pa;      // PA_k,     k = 0..kmax
    std::vector<SeriesEGF> pa_pair; // PA_(k,k), k = 0..kmax

    BigInt ptype_count(unsigned k, std::size_t n) const { return pa.at(k).integer_count(n); }
    BigInt pair_count(unsigned k, std::size_t n) const { return pa_pair.at(k).integer_count(n); }
};

namespace detail {

// PA'_(k,k) = PA_(k,k) (1-T)^{-2} + 2 PA_k^2 (1-T)^{-3}. No tree has the root
// and a second vertex both p-type of the same rank, so there is no root term.
inline SeriesEGF pair_from_single(const SeriesEGF& pa, const SeriesEGF& inv3, std::size_t order)
{
    const SeriesEGF source = ExactRational(2) * mul(mul(pa, pa), inv3);
    return solve_rank_ode(source, order);
}

} // namespace detail

inline SeriesEGF ptype_pair_series(unsigned k, std::size_t order, const PTypeTable& table)
{
    if (k > table.kmax || table.order < order) {
        throw std::invalid_argument("ptype_pair_series: table does not cover (k, order)");
    }
    return detail::pair_from_single(table.pa[k].truncated(order), tree_kernels(order).inv3, order);
}

/// PA'_k = PA_k (1-T)^{-2} + z^k / k!.
///
/// The root of a tree is p-type of rank k only for the path on k+1 vertices,
/// so the root series is z^{k+1}/(k+1)! and its derivative z^k/k!. With this
/// source n! [z^n] PA_k = (2n-1)!!/(2k+3)!! for n >= k+2.
inline PTypeTable ptype_series(unsigned kmax, std::size_t order)
{
    PTypeTable table;
    table.kmax = kmax;
    table.order = order;
    for (unsigned k = 0; k <= kmax; ++k) {
        const SeriesEGF source = SeriesEGF::monomial(k, make_rational(1, factorial(k)), order);
        table.pa.push_back(solve_rank_ode(source, order));
    }
    const SeriesEGF inv3 = tree_kernels(order).inv3;
    for (unsigned k = 0; k <= kmax; ++k) {
        table.pa_pair.push_back(detail::pair_from_single(table.pa[k], inv3, order));
    }
    return table;
}

/// Closed form (2n-1)!!/(2k+3)!! for the p-type count; valid for n >= k+2.
inline BigInt ptype_count_closed_form(unsigned k, std::size_t n)
{
    if (n < k + 2) {
        throw std::domain_error("closed-form p-type count needs n >= k+2");
    }
    return double_factorial(2L * static_cast<long>(n) - 1) / double_factorial(2L * k + 3);
}

/// E[PX_k(n)] = (2n-1)/(2k+3)!!, valid for n >= k+2.
inline ExactRational expected_ptype_closed_form(unsigned k, std::size_t n)
{
    if (n < k + 2) {
        throw std::domain_error("closed-form p-type expectation needs n >= k+2");
    }
    return make_rational(BigInt(2 * static_cast<long>(n) - 1), double_factorial(2L * k + 3));
}

} // namespace rankdist::exact
