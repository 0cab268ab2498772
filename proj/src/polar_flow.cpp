#include "nilcyc/polar_flow.hpp"

#include "nilcyc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nilcyc {

namespace {

mpfr_ptr raw(BigFloat& x) { return x.backend().data(); }
mpfr_srcptr raw(const BigFloat& x) { return x.backend().data(); }

inline void fma_acc(BigFloat& acc, const BigFloat& a, const BigFloat& b) {
    mpfr_fma(raw(acc), raw(a), raw(b), raw(acc), MPFR_RNDN);
}

// log2 |x|, -inf for zero.
double log2_abs(const BigFloat& x) {
    if (mpfr_zero_p(raw(x))) return -INFINITY;
    long e = 0;
    double m = mpfr_get_d_2exp(&e, raw(x), MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

// Dense (K+1) x (p+1) array, rho-order major.
struct Grid {
    unsigned K = 0, p = 0;
    std::vector<BigFloat> a;
    Grid() = default;
    Grid(unsigned K_, unsigned p_) : K(K_), p(p_), a((K_ + 1) * (p_ + 1), BigFloat(0)) {}
    BigFloat& operator()(unsigned k, unsigned n) { return a[k * (p + 1) + n]; }
    const BigFloat& operator()(unsigned k, unsigned n) const { return a[k * (p + 1) + n]; }
    void zero() {
        for (auto& x : a) mpfr_set_zero(raw(x), 1);
    }
};

using Jet = std::vector<BigFloat>;

Jet jet_mul(const Jet& a, const Jet& b) {
    const std::size_t p = a.size() - 1;
    Jet out(p + 1, BigFloat(0));
    for (std::size_t i = 0; i <= p; ++i) {
        if (mpfr_zero_p(raw(a[i]))) continue;
        for (std::size_t j = 0; i + j <= p; ++j) fma_acc(out[i + j], a[i], b[j]);
    }
    return out;
}

unsigned taylor_order(unsigned bits) { return std::clamp(bits / 4 + 8, 24u, 600u); }

}  // namespace

bool NumericField::has_constant() const {
    return !P.empty() && (!mpfr_zero_p(P[0][0].backend().data()) || !mpfr_zero_p(Q[0][0].backend().data()));
}

NumericField to_numeric(const PlanarField& f) {
    if (!f.is_concrete()) throw PreconditionError("numeric field needs concrete coefficients (only x and y)");
    unsigned deg = std::max({1u, f.P.degree_in({"x", "y"}), f.Q.degree_in({"x", "y"})});
    NumericField out;
    out.P.assign(deg + 1, {});
    out.Q.assign(deg + 1, {});
    for (unsigned d = 0; d <= deg; ++d) {
        out.P[d].assign(d + 1, BigFloat(0));
        out.Q[d].assign(d + 1, BigFloat(0));
    }
    auto fill = [](const MPoly& src, std::vector<std::vector<BigFloat>>& dst) {
        MPoly s = src.with_vars(merge_vars(src.vars(), {"x", "y"}));
        for (const auto& [e, c] : s.collect({"x", "y"})) {
            unsigned i = e[0], j = e[1];
            dst[i + j][j] = to_big(c.constant_term());
        }
    };
    fill(f.P, out.P);
    fill(f.Q, out.Q);
    return out;
}

PolarFlowResult polar_flow(const NumericField& f, const BigFloat& theta0, const BigFloat& theta1,
                           const std::vector<BigFloat>& u0) {
    if (u0.empty()) throw PreconditionError("polar_flow: empty initial state");
    const bool series = u0.size() > 1;
    if (series && !mpfr_zero_p(raw(u0[0]))) throw PreconditionError("polar_flow: series state must start at order 1");
    if (series && f.has_constant()) throw PreconditionError("polar_flow: series mode needs a field without constant terms");

    const unsigned bits = current_precision_bits();
    const unsigned K = static_cast<unsigned>(u0.size()) - 1;
    const unsigned p = taylor_order(bits);
    const unsigned Dg = f.degree();
    const unsigned d0 = series ? 1 : 0;
    const unsigned E = Dg - d0;  // highest power of r in numerator and denominator
    const double log2_tol = -static_cast<double>(bits);

    // Trigonometric coefficients of A_d and B_d: index j is the coefficient of c^(d+1-j) s^j.
    std::vector<std::vector<BigFloat>> acoef(Dg + 1), bcoef(Dg + 1);
    for (unsigned d = d0; d <= Dg; ++d) {
        acoef[d].assign(d + 2, BigFloat(0));
        bcoef[d].assign(d + 2, BigFloat(0));
        for (unsigned j = 0; j <= d + 1; ++j) {
            if (j <= d) {
                acoef[d][j] += f.P[d][j];
                bcoef[d][j] += f.Q[d][j];
            }
            if (j >= 1) {
                acoef[d][j] += f.Q[d][j - 1];
                bcoef[d][j] -= f.P[d][j - 1];
            }
        }
    }

    Grid u(K, p), N(K, p), D(K, p), Qd(K, p), R(K, p);
    std::vector<Grid> pw(E + 1, Grid(K, p));
    std::vector<Jet> Aj(Dg + 1), Bj(Dg + 1);

    PolarFlowResult res;
    res.u = u0;
    res.err.assign(K + 1, BigFloat(0));
    std::vector<double> log2_scale(K + 1, 0.0);
    for (unsigned k = 0; k <= K; ++k) log2_scale[k] = std::max(0.0, log2_abs(u0[k]));

    BigFloat theta = theta0;
    BigFloat tmp;
    const BigFloat halfpi = big_pi() / 2;
    const unsigned max_steps = 200000;

    while (theta < theta1) {
        if (res.steps >= max_steps) throw NumericError("polar_flow: step budget exhausted before reaching the end angle");

        // cos/sin jets at theta.
        Jet cj(p + 1), sj(p + 1);
        {
            BigFloat c0 = cos(theta), s0 = sin(theta);
            BigFloat inv(1);
            for (unsigned n = 0; n <= p; ++n) {
                if (n > 0) inv /= n;
                const BigFloat* cv[4] = {&c0, &s0, &c0, &s0};
                int csign[4] = {1, -1, -1, 1}, ssign[4] = {1, 1, -1, -1};
                // cos(t + n pi/2): c, -s, -c, s ; sin(t + n pi/2): s, c, -s, -c
                cj[n] = *cv[n % 4] * inv;
                if (csign[n % 4] < 0) cj[n] = -cj[n];
                sj[n] = (n % 2 == 0 ? s0 : c0) * inv;
                if (ssign[n % 4] < 0) sj[n] = -sj[n];
            }
        }
        std::vector<Jet> cpow(Dg + 2), spow(Dg + 2);
        cpow[0].assign(p + 1, BigFloat(0));
        cpow[0][0] = 1;
        spow[0] = cpow[0];
        for (unsigned a = 1; a <= Dg + 1; ++a) {
            cpow[a] = jet_mul(cpow[a - 1], cj);
            spow[a] = jet_mul(spow[a - 1], sj);
        }
        for (unsigned d = d0; d <= Dg; ++d) {
            Aj[d].assign(p + 1, BigFloat(0));
            Bj[d].assign(p + 1, BigFloat(0));
            for (unsigned j = 0; j <= d + 1; ++j) {
                const bool za = mpfr_zero_p(raw(acoef[d][j])), zb = mpfr_zero_p(raw(bcoef[d][j]));
                if (za && zb) continue;
                Jet m = jet_mul(cpow[d + 1 - j], spow[j]);
                for (unsigned n = 0; n <= p; ++n) {
                    if (!za) fma_acc(Aj[d][n], acoef[d][j], m[n]);
                    if (!zb) fma_acc(Bj[d][n], bcoef[d][j], m[n]);
                }
            }
        }

        u.zero();
        N.zero();
        D.zero();
        Qd.zero();
        R.zero();
        for (auto& g : pw) g.zero();
        for (unsigned k = 0; k <= K; ++k) u(k, 0) = res.u[k];
        pw[0](0, 0) = 1;
        const unsigned kmin = series ? 1 : 0;

        for (unsigned n = 0; n < p; ++n) {
            // powers of u at theta-order n
            for (unsigned e = 1; e <= E; ++e) {
                for (unsigned k = series ? e : 0; k <= K; ++k) {
                    BigFloat& acc = pw[e](k, n);
                    for (unsigned m = 0; m <= n; ++m)
                        for (unsigned k1 = series ? e - 1 : 0; k1 + kmin <= k; ++k1)
                            fma_acc(acc, pw[e - 1](k1, m), u(k - k1, n - m));
                }
            }
            for (unsigned k = 0; k <= K; ++k) {
                BigFloat& na = N(k, n);
                BigFloat& da = D(k, n);
                for (unsigned e = 0; e <= E; ++e) {
                    if (series && e > k) break;
                    for (unsigned m = 0; m <= n; ++m) {
                        const BigFloat& w = pw[e](k, n - m);
                        if (mpfr_zero_p(raw(w))) continue;
                        fma_acc(na, Aj[d0 + e][m], w);
                        fma_acc(da, Bj[d0 + e][m], w);
                    }
                }
            }
            if (n == 0 && !(mpfr_sgn(raw(D(0, 0))) > 0))
                throw NumericError("polar_flow: angular velocity is not positive along the path");
            for (unsigned k = 0; k <= K; ++k) {
                BigFloat& q = Qd(k, n);
                q = N(k, n);
                for (unsigned k1 = 0; k1 <= k; ++k1)
                    for (unsigned m = 0; m <= n; ++m) {
                        if (k1 == 0 && m == 0) continue;
                        mpfr_neg(raw(tmp), raw(D(k1, m)), MPFR_RNDN);
                        fma_acc(q, tmp, Qd(k - k1, n - m));
                    }
                mpfr_div(raw(q), raw(q), raw(D(0, 0)), MPFR_RNDN);
            }
            for (unsigned k = kmin; k <= K; ++k) {
                BigFloat& r = R(k, n);
                for (unsigned k1 = kmin; k1 <= k; ++k1)
                    for (unsigned m = 0; m <= n; ++m) fma_acc(r, u(k1, m), Qd(k - k1, n - m));
                mpfr_div_ui(raw(u(k, n + 1)), raw(r), n + 1, MPFR_RNDN);
            }
        }

        // Step size from the last two Taylor terms.
        double log2_h = 0.0;  // h <= 1
        for (unsigned k = 0; k <= K; ++k) {
            for (unsigned n : {p - 1, p}) {
                double lc = log2_abs(u(k, n));
                if (!std::isfinite(lc)) continue;
                log2_h = std::min(log2_h, (log2_tol + log2_scale[k] - lc) / n);
            }
        }
        BigFloat h = BigFloat(std::exp2(log2_h)) * BigFloat(0.9);
        BigFloat remaining = theta1 - theta;
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        }
        if (h < BigFloat(1e-12) * halfpi && remaining > h)
            throw NumericError("polar_flow: step size collapsed near theta = " + to_decimal(theta, 12));

        for (unsigned k = 0; k <= K; ++k) {
            BigFloat acc = u(k, p);
            for (unsigned n = p; n-- > 0;) {
                mpfr_mul(raw(acc), raw(acc), raw(h), MPFR_RNDN);
                mpfr_add(raw(acc), raw(acc), raw(u(k, n)), MPFR_RNDN);
            }
            // local truncation plus rounding over the Horner chain
            BigFloat trunc = abs(u(k, p)) * pow(h, p) + abs(u(k, p - 1)) * pow(h, p - 1);
            BigFloat round = ldexp(BigFloat(p + 1), -static_cast<int>(bits)) * std::max(abs(acc), abs(res.u[k]));
            res.err[k] += trunc + round;
            res.u[k] = acc;
            log2_scale[k] = std::max(log2_scale[k], log2_abs(acc));
        }
        theta += h;
        ++res.steps;
        if (last) break;
    }
    return res;
}

}  // namespace nilcyc
