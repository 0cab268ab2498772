#pragma once

#include "nilcyc/errors.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace nilcyc {

// Power series in one variable truncated at a fixed order N (N+1 coefficients).
// C is Rational, MPoly (parametric coefficients) or BigFloat.
template <class C>
class Series {
public:
    Series() : c_(1, C(0)) {}
    explicit Series(std::size_t order) : c_(order + 1, C(0)) {}
    Series(std::size_t order, std::vector<C> coeffs) : c_(std::move(coeffs)) { c_.resize(order + 1, C(0)); }

    static Series identity(std::size_t order) {
        Series s(order);
        if (order >= 1) s.c_[1] = C(1);
        return s;
    }

    std::size_t order() const { return c_.size() - 1; }
    const C& operator[](std::size_t k) const { return c_[k]; }
    C& operator[](std::size_t k) { return c_[k]; }
    const std::vector<C>& coeffs() const { return c_; }

    Series& operator+=(const Series& o) {
        check(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Series& operator-=(const Series& o) {
        check(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Series& operator*=(const C& s) {
        for (auto& v : c_) v *= s;
        return *this;
    }
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(Series a, const C& s) { return a *= s; }

    friend Series operator*(const Series& a, const Series& b) {
        a.check(b);
        Series out(a.order());
        const std::size_t n = a.c_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; i + j < n; ++j) out.c_[i + j] += a.c_[i] * b.c_[j];
        return out;
    }

    // a(t(y)) for t with zero constant term, by Horner in t.
    Series compose(const Series& t) const {
        check(t);
        if (!is_zero_value(t.c_[0])) throw PreconditionError("Series::compose: inner series has a constant term");
        Series out(order());
        for (std::size_t k = c_.size(); k-- > 0;) {
            out = out * t;
            out.c_[0] += c_[k];
        }
        return out;
    }

private:
    std::vector<C> c_;

    void check(const Series& o) const {
        if (o.c_.size() != c_.size()) throw std::invalid_argument("Series: truncation orders differ");
    }
    template <class T>
    static bool is_zero_value(const T& v) {
        return v == T(0);
    }
};

// Compositional inverse t of s (s(0)=0, s'(0)!=0) with s(t(y)) = y + O(y^{N+1}).
// Each pass fixes the lowest wrong coefficient, so N-1 passes suffice.
template <class C>
Series<C> series_compose_invert(const Series<C>& s) {
    const std::size_t n = s.order();
    if (n >= 1 && s[1] == C(0)) throw PreconditionError("series_compose_invert: zero linear coefficient");
    if (!(s[0] == C(0))) throw PreconditionError("series_compose_invert: nonzero constant term");
    Series<C> t(n);
    if (n == 0) return t;
    t[1] = C(1) / s[1];
    for (std::size_t k = 2; k <= n; ++k) {
        Series<C> r = s.compose(t);
        t[k] -= r[k] / s[1];
    }
    return t;
}

}  // namespace nilcyc
