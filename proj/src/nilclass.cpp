#include "nilcyc/nilclass.hpp"

#include "nilcyc/errors.hpp"

namespace nilcyc {

namespace {

const MPoly X = MPoly::variable("x");

MPoly d(const MPoly& p, const std::string& v) { return p.has_var(v) ? p.derivative(v) : MPoly(0); }

// Coefficients of p as a polynomial in x, y: (i, j) -> coefficient in the parameters.
std::map<std::pair<unsigned, unsigned>, MPoly> xy_terms(const MPoly& p) {
    std::map<std::pair<unsigned, unsigned>, MPoly> out;
    MPoly q = p.with_vars(merge_vars(p.vars(), {"x", "y"}));
    for (const auto& [e, c] : q.collect({"x", "y"})) out[{e[0], e[1]}] = c;
    return out;
}

void require_no_low_terms(const MPoly& p, const char* what) {
    for (const auto& [ij, c] : xy_terms(p))
        if (ij.first + ij.second <= 1 && !c.is_zero())
            throw PreconditionError(std::string(what) + " must have no constant or linear terms in x, y");
}

std::optional<unsigned> leading(const YSeries& s, unsigned from, bool& symbolic, std::optional<Rational>& value) {
    for (unsigned k = from; k <= s.order(); ++k) {
        const MPoly& c = s[k].compact();
        if (c.is_zero()) continue;
        if (!c.is_constant()) {
            symbolic = true;
            return std::nullopt;
        }
        value = c.constant_term();
        return k;
    }
    return std::nullopt;
}

}  // namespace

YSeries compose_along(const MPoly& F, const YSeries& f) {
    const std::size_t N = f.order();
    auto terms = xy_terms(F);
    unsigned maxi = 0;
    for (const auto& [ij, c] : terms) maxi = std::max(maxi, ij.first);
    std::vector<YSeries> fp{YSeries(N)};
    fp[0][0] = MPoly(1);
    for (unsigned i = 1; i <= maxi; ++i) fp.push_back(fp.back() * f);
    YSeries out(N);
    for (const auto& [ij, c] : terms) {
        if (c.is_zero()) continue;
        const auto [i, j] = ij;
        for (std::size_t k = 0; k + j <= N; ++k)
            if (!fp[i][k].is_zero()) out[k + j] += c * fp[i][k];
    }
    for (std::size_t k = 0; k <= N; ++k) out[k] = out[k].compact();
    return out;
}

YSeries implicit_series(const MPoly& Phi, unsigned N) {
    if (N < 2) throw PreconditionError("implicit_series: order must be at least 2");
    require_no_low_terms(Phi, "implicit_series: Phi");
    YSeries f(N);
    // Each pass of x <- -Phi(x, y) fixes one more coefficient.
    for (unsigned pass = 1; pass < N; ++pass) {
        YSeries next = compose_along(Phi, f);
        for (std::size_t k = 0; k <= N; ++k) next[k] = -next[k];
        f = next;
    }
    return f;
}

NilpotentData fg_data(const MPoly& Psi, const MPoly& Phi, unsigned N) {
    require_no_low_terms(Psi, "fg_data: Psi");
    NilpotentData out;
    out.order = N;
    YSeries f = implicit_series(Phi, N);
    out.f_series = compose_along(Psi, f);
    out.g_series = compose_along(d(Psi, "x") + d(Phi, "y"), f);
    out.psi_zero = Psi.compact().is_zero();
    bool sym = false;
    out.m = leading(out.f_series, 2, sym, out.f_m);
    out.n = leading(out.g_series, 1, sym, out.g_n);
    out.symbolic = sym;
    if (out.m && out.n) out.delta = Rational(4 * (*out.n + 1)) * *out.f_m + *out.g_n * *out.g_n;
    return out;
}

std::string to_string(NilpotentKind k) {
    switch (k) {
        case NilpotentKind::CenterOrFocus: return "CenterOrFocus";
        case NilpotentKind::Saddle: return "Saddle";
        case NilpotentKind::Cusp: return "Cusp";
        case NilpotentKind::SaddleNode: return "SaddleNode";
        case NilpotentKind::Node: return "Node";
        case NilpotentKind::HyperbolicElliptic: return "HyperbolicElliptic";
        case NilpotentKind::NotIsolated: return "NotIsolated";
        case NilpotentKind::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

NilpotentClass classify(const NilpotentWitness& w) {
    NilpotentClass c;
    c.witness = w;
    if (!w.m || !w.f_m || w.f_m->is_zero()) return c;
    const unsigned m = *w.m;
    c.multiplicity = m;
    const unsigned k = m / 2;
    const bool has_g = w.n && w.g_n && !w.g_n->is_zero();
    if (!has_g) {
        if (m % 2 == 0) c.kind = NilpotentKind::Cusp;
        else c.kind = w.f_m->sign() < 0 ? NilpotentKind::CenterOrFocus : NilpotentKind::Saddle;
        return c;
    }
    const unsigned n = *w.n;
    if (m % 2 == 0) {
        c.kind = k > n ? NilpotentKind::SaddleNode : NilpotentKind::Cusp;
        return c;
    }
    if (w.f_m->sign() > 0) {
        c.kind = NilpotentKind::Saddle;
        return c;
    }
    Rational delta = w.delta ? *w.delta : Rational(4 * (n + 1)) * *w.f_m + *w.g_n * *w.g_n;
    c.witness.delta = delta;
    if (k > n || (k == n && delta.sign() >= 0))
        c.kind = n % 2 == 1 ? NilpotentKind::HyperbolicElliptic : NilpotentKind::Node;
    else
        c.kind = NilpotentKind::CenterOrFocus;
    return c;
}

NilpotentClass classify(const NilpotentData& data) {
    if (data.psi_zero) {
        NilpotentClass c;
        c.kind = NilpotentKind::NotIsolated;
        return c;
    }
    return classify(NilpotentWitness{data.m, data.n, data.f_m, data.g_n, data.delta});
}

std::pair<MPoly, MPoly> psi_phi(const PlanarField& f) { return {f.P, f.Q - X}; }

NilpotentData family_data(const Z2CubicParams& p, Half which, unsigned N) {
    SwitchingSystem s = shift_to_origin(build_z2_cubic(p), Rational(1));
    auto [Psi, Phi] = psi_phi(which == Half::Upper ? s.upper : s.lower);
    return fg_data(Psi, Phi, N);
}

std::optional<unsigned> multiplicity_of_family(const Z2CubicParams& p, Half which) {
    NilpotentData d6 = family_data(p, which, 6);
    if (d6.psi_zero) return std::nullopt;
    if (d6.m) return d6.m;
    // Nothing through order 6: confirm the common-factor degeneracy at a higher order.
    NilpotentData d12 = family_data(p, which, 12);
    if (d12.m) return d12.m;
    return std::nullopt;
}

MonodromyVerdict monodromic_candidate(const Z2CubicParams& p) {
    MonodromyVerdict v;
    v.upper = classify(family_data(p, Half::Upper, 8));
    v.lower = classify(family_data(p, Half::Lower, 8));
    const Rational f2u = p.a02 + p.a12;
    auto cf = [](const NilpotentClass& c) { return c.kind == NilpotentKind::CenterOrFocus; };
    auto cusp = [](const NilpotentClass& c) { return c.kind == NilpotentKind::Cusp; };
    if (f2u.is_zero()) {
        if (!cf(v.upper)) v.reason = "upper half is " + to_string(v.upper.kind) + ", not a center or focus";
        else if (!(cf(v.lower) || cusp(v.lower))) v.reason = "lower half is " + to_string(v.lower.kind);
        else if (p.a12.sign() < 0) v.reason = "a12 < 0 gives separatrices in the lower half";
        else v.candidate = true;
    } else if (f2u.sign() < 0) {
        if (!cusp(v.upper)) v.reason = "upper half is " + to_string(v.upper.kind) + ", not a cusp";
        else if (!(cf(v.lower) || cusp(v.lower))) v.reason = "lower half is " + to_string(v.lower.kind);
        else if (!((p.a02 == p.a12 && p.a02.sign() < 0) || (p.a02 + abs(p.a12)).sign() < 0))
            v.reason = "needs a02 = a12 < 0 or a02 + |a12| < 0";
        else v.candidate = true;
    } else {
        v.reason = "f2+ = a02 + a12 > 0";
    }
    if (v.candidate) v.reason = "monodromic candidate";
    return v;
}

}  // namespace nilcyc
