#pragma once

// Limit constants c_k = lim E[X_k(n)]/n, by integrating on [0, 1/2]
//
//   dB_{>=k}/dz = B_{>=k-1} / (1 - B_{>=k-1}),       B_{>=k}(0) = 0,
//   dC_k/dz     = 2 sqrt(1-2z) (B'_{>=k} - B'_{>=k+1}), C_k(0) = 0,
//
// with B_{>=0} = 1 - sqrt(1-2z) and B_{>=1} = 1 - z - sqrt(1-2z) in closed
// form; c_k = C_k(1/2). The right-hand side for B_{>=k} only involves
// B_{>=k-1}, so one trapezoid step is explicit: the levels are advanced in
// order k = 2, 3, ... and each uses the already-updated level below.
//
// Two schemes:
//   plain_trapezoid  uniform grid in z. B'_{>=1} blows up like (1-2z)^{-1/2}
//                    at z = 1/2, so the error is O(h^{3/2}).
//   substituted      z = (1 - u^2)/2, u from 1 down to 0. With u = sqrt(1-2z),
//                    T = 1 - u and B_{>=1} = (1-u)^2/2, and every integrand is
//                    smooth in u, giving O(h^2).

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankdist::limits {

enum class Method { plain_trapezoid, substituted };

inline const char* to_string(Method m)
{
    return m == Method::plain_trapezoid ? "plain_trapezoid" : "substituted";
}

inline Method parse_method(const std::string& s)
{
    if (s == "plain_trapezoid" || s == "plain") {
        return Method::plain_trapezoid;
    }
    if (s == "substituted") {
        return Method::substituted;
    }
    throw std::invalid_argument("unknown integration method '" + s + "'");
}

struct LimitConstants {
    unsigned kmax = 0;
    std::vector<double> c;              // c_0..c_kmax
    std::vector<double> gamma;          // c_k / 2
    std::vector<double> error_estimate; // |c_k(step) - c_k(step/2)|
    Method method = Method::substituted;
    double step = 0.0;

    /// 1 - sum_{j<=k} c_j
    double tail(unsigned k) const
    {
        double s = 0.0;
        for (unsigned j = 0; j <= k && j < c.size(); ++j) {
            s += c[j];
        }
        return 1.0 - s;
    }
};

inline constexpr double max_step = 1e-3;

namespace detail {

inline double slope(double b) { return b / (1.0 - b); }

// Integrates once with the given grid spacing; returns c_0..c_kmax.
//
// Both schemes are written in terms of u = sqrt(1-2z) at the current grid
// point and the quantities u * dB_{>=j}/dz, which are bounded everywhere:
//   j = 1:  u * T/(1-T) = T = 1 - u
//   j >= 2: u * slope(B_{>=j-1})
// Per unit of the grid variable, B_{>=k} grows by rate(k) and C_k by
// w * (u dB_{>=k}/dz - u dB_{>=k+1}/dz), with w = 2 (plain) or 2u (substituted,
// where dz = -u du and the grid runs downward in u).
inline std::vector<double> integrate(unsigned kmax, double step, Method method)
{
    const bool plain = method == Method::plain_trapezoid;
    const double length = plain ? 0.5 : 1.0;
    const auto steps = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
    const double h = length / static_cast<double>(steps);
    const unsigned levels = kmax + 2; // B_{>=0} .. B_{>=kmax+1}

    auto u_at = [&](std::size_t i) {
        const double x = h * static_cast<double>(i);
        return plain ? std::sqrt(std::max(0.0, 1.0 - 2.0 * x)) : 1.0 - x;
    };
    auto rate = [&](double u, double below) { return plain ? slope(below) : u * slope(below); };
    auto integrands = [&](double u, const std::vector<double>& bb, std::vector<double>& out) {
        const double w = plain ? 2.0 : 2.0 * u;
        auto scaled_slope = [&](unsigned j) { return j == 1 ? bb[0] : u * slope(bb[j - 1]); };
        out[0] = w * u; // B'_0 = 1
        for (unsigned k = 1; k <= kmax; ++k) {
            out[k] = w * (scaled_slope(k) - scaled_slope(k + 1));
        }
    };
    auto closed_form = [](double u, std::vector<double>& bb) {
        bb[0] = 1.0 - u;
        bb[1] = 0.5 * (1.0 - u) * (1.0 - u); // 1 - z - sqrt(1-2z)
    };

    std::vector<double> b(levels, 0.0), b_next(levels, 0.0);
    std::vector<double> f(kmax + 1, 0.0), f_next(kmax + 1, 0.0);
    std::vector<double> c(kmax + 1, 0.0);

    double u = u_at(0);
    closed_form(u, b);
    integrands(u, b, f);
    for (std::size_t i = 1; i <= steps; ++i) {
        const double u_next = u_at(i);
        closed_form(u_next, b_next);
        for (unsigned k = 2; k < levels; ++k) {
            b_next[k] = b[k] + 0.5 * h * (rate(u, b[k - 1]) + rate(u_next, b_next[k - 1]));
        }
        integrands(u_next, b_next, f_next);
        for (unsigned k = 0; k <= kmax; ++k) {
            c[k] += 0.5 * h * (f[k] + f_next[k]);
        }
        std::swap(b, b_next);
        std::swap(f, f_next);
        u = u_next;
    }
    return c;
}

} // namespace detail

/// Integrates at `step` and at step/2; reports the step-h values with the
/// difference as the error estimate.
inline LimitConstants compute_limits(unsigned kmax, double step, Method method = Method::substituted)
{
    if (!(step > 0.0) || step > max_step) {
        throw std::invalid_argument("compute_limits: step must lie in (0, 1e-3]");
    }
    LimitConstants lc;
    lc.kmax = kmax;
    lc.method = method;
    lc.step = step;
    lc.c = detail::integrate(kmax, step, method);
    const std::vector<double> fine = detail::integrate(kmax, step / 2.0, method);
    for (unsigned k = 0; k <= kmax; ++k) {
        lc.gamma.push_back(lc.c[k] / 2.0);
        lc.error_estimate.push_back(std::abs(lc.c[k] - fine[k]));
    }
    return lc;
}

/// c_1 = 5 + 4 log 2 - 6 sqrt(2) artanh(2^{-1/2}).
inline double c1_closed_form()
{
    return 5.0 + 4.0 * std::log(2.0) - 6.0 * std::sqrt(2.0) * std::atanh(1.0 / std::sqrt(2.0));
}

struct MethodAgreement {
    double max_difference = 0.0;
    double tolerance = 0.0;
    bool agree = false;
};

/// Compares the two schemes at the same step. They must agree to within ten
/// times the sum of their step-halving error estimates (plus rounding slack).
inline MethodAgreement cross_check_methods(unsigned kmax, double step)
{
    const LimitConstants sub = compute_limits(kmax, step, Method::substituted);
    const LimitConstants plain = compute_limits(kmax, step, Method::plain_trapezoid);
    MethodAgreement r;
    double tol = 0.0;
    for (unsigned k = 0; k <= kmax; ++k) {
        r.max_difference = std::max(r.max_difference, std::abs(sub.c[k] - plain.c[k]));
        tol = std::max(tol, 10.0 * (sub.error_estimate[k] + plain.error_estimate[k]));
    }
    r.tolerance = tol + 1e-12;
    r.agree = r.max_difference <= r.tolerance;
    return r;
}

/// 3^{k+1} / (2k+1)!
inline double tail_bound(unsigned k)
{
    return std::exp(static_cast<double>(k + 1) * std::log(3.0) - std::lgamma(2.0 * k + 2.0));
}

inline constexpr double published_tail_after_3 = 0.0002843360;

struct TailRow {
    unsigned k = 0;
    double tail = 0.0;
    double bound = 0.0;
    bool holds = false;
};

struct TailReport {
    std::vector<TailRow> rows;
    bool all_hold = false;
    double tail_after_3 = 0.0; // 1 - (c_0 + ... + c_3), NaN if kmax < 3
    double published = published_tail_after_3;
};

/// Checks 1 - sum_{j<=k} c_j <= 3^{k+1}/(2k+1)! (strictly) for every k.
inline TailReport verify_tail(const LimitConstants& lc)
{
    TailReport rep;
    rep.all_hold = true;
    for (unsigned k = 0; k <= lc.kmax; ++k) {
        TailRow row{k, lc.tail(k), tail_bound(k), false};
        row.holds = row.tail < row.bound;
        rep.all_hold = rep.all_hold && row.holds;
        rep.rows.push_back(row);
    }
    rep.tail_after_3 = lc.kmax >= 3 ? lc.tail(3) : std::nan("");
    return rep;
}

} // namespace rankdist::limits
