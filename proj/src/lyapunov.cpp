#include "nilcyc/lyapunov.hpp"

#include "nilcyc/errors.hpp"
#include "nilcyc/series.hpp"

#include <algorithm>

namespace nilcyc {

namespace {

Rational coeff(const MPoly& p, unsigned i, unsigned j) {
    MPoly q = p.with_vars(merge_vars(p.vars(), {"x", "y"}));
    auto terms = q.collect({"x", "y"});
    auto it = terms.find({i, j});
    if (it == terms.end()) return Rational(0);
    MPoly c = it->second.compact();
    if (!c.is_constant()) throw PreconditionError("field coefficients must be concrete");
    return c.constant_term();
}

}  // namespace

std::pair<Rational, Rational> linear_focus_part(const PlanarField& f) {
    if (!f.is_concrete()) throw PreconditionError("field coefficients must be concrete");
    Rational p10 = coeff(f.P, 1, 0), p01 = coeff(f.P, 0, 1), q10 = coeff(f.Q, 1, 0), q01 = coeff(f.Q, 0, 1);
    if (p10 != q01 || p01 != -q10)
        throw PreconditionError("linear part is not of the form (delta x - lambda y, lambda x + delta y)");
    if (q10.sign() <= 0) throw PreconditionError("linear part needs lambda > 0");
    return {p10, q10};
}

HalfMap half_return_map(const PlanarField& field, Half half, unsigned K) {
    if (K < 1) throw PreconditionError("half_return_map: order must be at least 1");
    linear_focus_part(field);
    NumericField nf = to_numeric(field);
    if (nf.has_constant()) throw PreconditionError("half_return_map: the origin must be a singular point");
    std::vector<BigFloat> u0(K + 1, BigFloat(0));
    u0[1] = 1;
    BigFloat pi = big_pi();
    BigFloat a = half == Half::Upper ? BigFloat(0) : pi;
    BigFloat b = half == Half::Upper ? pi : BigFloat(2 * pi);
    PolarFlowResult r = polar_flow(nf, a, b, u0);
    return {r.u, r.err, r.steps};
}

HalfMap half_return_map(const PlanarField& field, Half half, unsigned K, unsigned bits) {
    PrecisionScope scope(bits);
    return half_return_map(field, half, K);
}

LyapunovReport displacement_coeffs(const SwitchingSystem& sys, unsigned K, unsigned bits) {
    PrecisionScope scope(bits);
    LyapunovReport rep;
    rep.order = K;
    rep.precision_bits = bits;
    rep.upper = half_return_map(sys.upper, Half::Upper, K);
    rep.lower = half_return_map(sys.lower, Half::Lower, K);

    Series<BigFloat> lo(K, rep.lower.v);
    Series<BigFloat> w = series_compose_invert(lo);
    const BigFloat ulp = ldexp(BigFloat(1), -static_cast<int>(bits));
    BigFloat acc_err = 0, wmax = 1;
    for (unsigned k = 1; k <= K; ++k) {
        rep.V.push_back(rep.upper.v[k] - w[k]);
        acc_err += rep.upper.err[k] + rep.lower.err[k];
        wmax = std::max(wmax, abs(w[k]));
        wmax = std::max(wmax, abs(rep.lower.v[k]));
        BigFloat mag = std::max({BigFloat(1), abs(rep.upper.v[k]), abs(w[k])});
        // Inversion mixes all lower coefficients up to order k; scale the propagated error accordingly.
        rep.tol.push_back(16 * acc_err * wmax * wmax + 16 * k * ulp * mag);
    }
    return rep;
}

BigFloat eval_displacement(const std::vector<BigFloat>& V, const BigFloat& rho) {
    BigFloat acc = 0;
    for (std::size_t k = V.size(); k-- > 0;) acc = (acc + V[k]) * rho;
    return acc;
}

BigFloat return_map_displacement(const SwitchingSystem& sys, const BigFloat& rho) {
    if (rho <= 0) throw PreconditionError("return map needs rho > 0");
    NumericField up = to_numeric(sys.upper), lo = to_numeric(sys.lower);
    BigFloat pi = big_pi();
    PolarFlowResult a = polar_flow(up, BigFloat(0), pi, {rho});
    PolarFlowResult b = polar_flow(lo, pi, BigFloat(2 * pi), {a.u[0]});
    return b.u[0] - rho;
}

EpsilonExpansion epsilon_expansion(const SystemBuilder& build, const std::vector<Rational>& eps, unsigned K, unsigned J,
                                   unsigned bits) {
    if (eps.size() < J + 1) throw PreconditionError("epsilon_expansion: need at least J+1 samples");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (eps[i].is_zero()) throw PreconditionError("epsilon_expansion: samples must be nonzero");
        for (std::size_t j = 0; j < i; ++j)
            if (eps[i] == eps[j]) throw PreconditionError("epsilon_expansion: samples must be distinct");
    }
    std::vector<LyapunovReport> reps;
    for (const auto& e : eps) reps.push_back(displacement_coeffs(build(e), K, bits));

    PrecisionScope scope(bits);
    const std::size_t S = eps.size();
    std::vector<std::vector<BigFloat>> M(S, std::vector<BigFloat>(J + 1));
    for (std::size_t i = 0; i < S; ++i) {
        BigFloat e = to_big(eps[i]), pw = 1;
        for (unsigned j = 0; j <= J; ++j, pw *= e) M[i][j] = pw;
    }
    // Normal equations (identical to the Vandermonde system when S = J+1).
    std::vector<std::vector<BigFloat>> A(J + 1, std::vector<BigFloat>(J + 1, BigFloat(0)));
    for (unsigned r = 0; r <= J; ++r)
        for (unsigned c = 0; c <= J; ++c)
            for (std::size_t i = 0; i < S; ++i) A[r][c] += M[i][r] * M[i][c];

    EpsilonExpansion out;
    out.degree_bound = J;
    out.precision_bits = bits;
    for (unsigned k = 1; k <= K; ++k) {
        std::vector<BigFloat> rhs(J + 1, BigFloat(0));
        BigFloat tol = 0;
        for (unsigned r = 0; r <= J; ++r)
            for (std::size_t i = 0; i < S; ++i) rhs[r] += M[i][r] * reps[i].V[k - 1];
        for (std::size_t i = 0; i < S; ++i) tol = std::max(tol, reps[i].tol[k - 1]);
        std::vector<BigFloat> c = S == J + 1 ? solve_linear(M, [&] {
            std::vector<BigFloat> v;
            for (std::size_t i = 0; i < S; ++i) v.push_back(reps[i].V[k - 1]);
            return v;
        }())
                                             : solve_linear(A, rhs);
        BigFloat res = 0;
        for (std::size_t i = 0; i < S; ++i) {
            BigFloat fit = 0;
            for (unsigned j = 0; j <= J; ++j) fit += c[j] * M[i][j];
            res = std::max(res, abs(fit - reps[i].V[k - 1]));
        }
        if (res > 1000 * tol + ldexp(BigFloat(1), -static_cast<int>(bits) / 2))
            throw NumericError("epsilon_expansion: fit residual " + to_decimal(res, 6) + " for V" + std::to_string(k) +
                               " exceeds tolerance; raise the degree bound, the precision, or the sample count");
        out.coeff.push_back(c);
        out.residual.push_back(res);
    }
    return out;
}

}  // namespace nilcyc
