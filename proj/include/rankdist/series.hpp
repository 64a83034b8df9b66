#pragma once

// Truncated power series with exact rational coefficients.
//
// A SeriesEGF of truncation order N stores c(0..N) with c(nu) = [z^nu] F(z).
// Every generating function in this library is exponential in the counting
// sense, so the number of labelled objects of size n is n! * c(n); see count().
// Binary operations on series of different orders return the smaller order.

#include "rankdist/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rankdist::series {

class SeriesEGF {
public:
    /// Zero series of truncation order 0.
    SeriesEGF() : coeffs_(1) {}

    static SeriesEGF zero(std::size_t order) { return SeriesEGF(std::vector<ExactRational>(order + 1)); }

    static SeriesEGF constant(const ExactRational& c, std::size_t order)
    {
        std::vector<ExactRational> v(order + 1);
        v[0] = c;
        return SeriesEGF(std::move(v));
    }

    /// c * z^degree, truncated at `order` (zero if degree > order).
    static SeriesEGF monomial(std::size_t degree, const ExactRational& c, std::size_t order)
    {
        std::vector<ExactRational> v(order + 1);
        if (degree <= order) {
            v[degree] = c;
        }
        return SeriesEGF(std::move(v));
    }

    explicit SeriesEGF(std::vector<ExactRational> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw std::invalid_argument("SeriesEGF needs at least one coefficient");
        }
    }

    std::size_t order() const noexcept { return coeffs_.size() - 1; }

    const ExactRational& operator[](std::size_t nu) const
    {
        if (nu > order()) {
            throw std::out_of_range("coefficient index beyond truncation order");
        }
        return coeffs_[nu];
    }

    std::span<const ExactRational> coeffs() const noexcept { return coeffs_; }

    /// n! [z^n] F, the labelled count (an integer for counting series).
    ExactRational count(std::size_t n) const
    {
        return ExactRational((*this)[n] * ExactRational(factorial(n)));
    }

    /// count(n) as an integer; throws std::domain_error if it is not one.
    BigInt integer_count(std::size_t n) const
    {
        const ExactRational c = count(n);
        if (c.get_den() != 1) {
            throw std::domain_error("coefficient " + std::to_string(n) + " is not an integer count");
        }
        return c.get_num();
    }

    SeriesEGF truncated(std::size_t new_order) const
    {
        if (new_order >= order()) {
            return *this;
        }
        return SeriesEGF(std::vector<ExactRational>(coeffs_.begin(), coeffs_.begin() + new_order + 1));
    }

    /// Index of the first nonzero coefficient, or order()+1 for the zero series.
    std::size_t valuation() const noexcept
    {
        std::size_t i = 0;
        while (i < coeffs_.size() && sgn(coeffs_[i]) == 0) {
            ++i;
        }
        return i;
    }

    friend bool operator==(const SeriesEGF& a, const SeriesEGF& b) { return a.coeffs_ == b.coeffs_; }

    friend SeriesEGF operator+(const SeriesEGF& a, const SeriesEGF& b)
    {
        const std::size_t n = std::min(a.order(), b.order());
        std::vector<ExactRational> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = a.coeffs_[i] + b.coeffs_[i];
        }
        return SeriesEGF(std::move(v));
    }

    friend SeriesEGF operator-(const SeriesEGF& a, const SeriesEGF& b)
    {
        const std::size_t n = std::min(a.order(), b.order());
        std::vector<ExactRational> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v[i] = a.coeffs_[i] - b.coeffs_[i];
        }
        return SeriesEGF(std::move(v));
    }

    friend SeriesEGF operator*(const ExactRational& s, const SeriesEGF& a)
    {
        std::vector<ExactRational> v(a.coeffs_.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = s * a.coeffs_[i];
        }
        return SeriesEGF(std::move(v));
    }

private:
    std::vector<ExactRational> coeffs_;
};

/// Cauchy product, truncated at the smaller order. Schoolbook O(N^2); leading
/// zero coefficients of either factor are skipped.
inline SeriesEGF mul(const SeriesEGF& f, const SeriesEGF& g)
{
    const std::size_t n = std::min(f.order(), g.order());
    const std::size_t vf = f.valuation();
    const std::size_t vg = g.valuation();
    std::vector<ExactRational> out(n + 1);
    ExactRational term;
    for (std::size_t nu = vf + vg; nu <= n; ++nu) {
        ExactRational& acc = out[nu];
        for (std::size_t j = vf; j + vg <= nu; ++j) {
            const ExactRational& a = f[j];
            if (sgn(a) == 0) {
                continue;
            }
            mpq_mul(term.get_mpq_t(), a.get_mpq_t(), g[nu - j].get_mpq_t());
            mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), term.get_mpq_t());
        }
    }
    return SeriesEGF(std::move(out));
}

/// 1 / (1 - F). Requires F(0) = 0.
inline SeriesEGF geom_inverse(const SeriesEGF& f)
{
    if (sgn(f[0]) != 0) {
        throw std::domain_error("geom_inverse requires a series with zero constant term");
    }
    const std::size_t n = f.order();
    const std::size_t vf = f.valuation();
    std::vector<ExactRational> g(n + 1);
    g[0] = 1;
    ExactRational term;
    // G = 1 + F G, so G(nu) = sum_{j>=1} F(j) G(nu - j).
    for (std::size_t nu = 1; nu <= n; ++nu) {
        ExactRational& acc = g[nu];
        for (std::size_t j = std::max<std::size_t>(vf, 1); j <= nu; ++j) {
            const ExactRational& a = f[j];
            if (sgn(a) == 0) {
                continue;
            }
            mpq_mul(term.get_mpq_t(), a.get_mpq_t(), g[nu - j].get_mpq_t());
            mpq_add(acc.get_mpq_t(), acc.get_mpq_t(), term.get_mpq_t());
        }
    }
    return SeriesEGF(std::move(g));
}

/// d/dz; the truncation order drops by one. An order-0 series has no
/// derivative information at all, so it is rejected.
inline SeriesEGF derivative(const SeriesEGF& f)
{
    if (f.order() == 0) {
        throw std::domain_error("derivative of an order-0 series is undefined");
    }
    std::vector<ExactRational> v(f.order());
    for (std::size_t nu = 0; nu < v.size(); ++nu) {
        v[nu] = f[nu + 1] * static_cast<unsigned long>(nu + 1);
    }
    return SeriesEGF(std::move(v));
}

/// Integral from 0; the truncation order grows by one and [z^0] = 0.
inline SeriesEGF antiderivative(const SeriesEGF& f)
{
    std::vector<ExactRational> v(f.order() + 2);
    for (std::size_t nu = 1; nu < v.size(); ++nu) {
        v[nu] = f[nu - 1] / static_cast<unsigned long>(nu);
    }
    return SeriesEGF(std::move(v));
}

} // namespace rankdist::series
