#include "nilcyc/system.hpp"

#include "nilcyc/errors.hpp"

namespace nilcyc {

namespace {

const MPoly X = MPoly::variable("x");
const MPoly Y = MPoly::variable("y");

MPoly d(const MPoly& p, const std::string& v) { return p.has_var(v) ? p.derivative(v) : MPoly(0); }

MPoly reflect_y(const MPoly& p) { return p.substitute({{"y", -Y}}); }

}  // namespace

PlanarField PlanarField::substitute(const std::map<std::string, MPoly>& repl) const {
    return {P.substitute(repl), Q.substitute(repl)};
}

MPoly PlanarField::divergence() const { return d(P, "x") + d(Q, "y"); }

bool PlanarField::is_concrete() const {
    for (const MPoly* p : {&P, &Q})
        for (const auto& v : p->used_vars())
            if (v != "x" && v != "y") return false;
    return true;
}

SwitchingSystem SwitchingSystem::substitute(const std::map<std::string, MPoly>& repl) const {
    return {upper.substitute(repl), lower.substitute(repl)};
}

const std::array<std::string, 8>& Z2CubicParams::names() {
    static const std::array<std::string, 8> n{"a02", "a12", "a21", "a03", "b02", "b12", "b21", "b03"};
    return n;
}

Rational& Z2CubicParams::at(const std::string& name) {
    if (name == "a02") return a02;
    if (name == "a12") return a12;
    if (name == "a21") return a21;
    if (name == "a03") return a03;
    if (name == "b02") return b02;
    if (name == "b12") return b12;
    if (name == "b21") return b21;
    if (name == "b03") return b03;
    throw PreconditionError("unknown family parameter '" + name + "'");
}

const Rational& Z2CubicParams::get(const std::string& name) const { return const_cast<Z2CubicParams*>(this)->at(name); }

std::map<std::string, Rational> Z2CubicParams::as_map() const {
    std::map<std::string, Rational> m;
    for (const auto& n : names()) m[n] = get(n);
    return m;
}

std::map<std::string, MPoly> Z2CubicParams::as_symbols() const {
    std::map<std::string, MPoly> m;
    for (const auto& n : names()) m[n] = MPoly(get(n));
    return m;
}

SwitchingSystem build_z2_cubic(const std::map<std::string, MPoly>& p) {
    auto g = [&](const char* n) {
        auto it = p.find(n);
        return it == p.end() ? MPoly(0) : it->second;
    };
    for (const auto& [k, v] : p) {
        bool known = false;
        for (const auto& n : Z2CubicParams::names()) known |= (n == k);
        if (!known) throw PreconditionError("unknown family parameter '" + k + "'");
    }
    const Rational half(1, 2);
    MPoly x2y = X * X * Y, xy2 = X * Y * Y, y2 = Y * Y, y3 = Y * Y * Y;
    MPoly P_odd = -g("a21") * Y + g("a21") * x2y + g("a12") * xy2 + g("a03") * y3;
    MPoly Q_odd = -half * X - g("b21") * Y + half * X * X * X + g("b21") * x2y + g("b12") * xy2 + g("b03") * y3;
    SwitchingSystem s;
    s.upper = {P_odd + g("a02") * y2, Q_odd + g("b02") * y2};
    s.lower = {P_odd - g("a02") * y2, Q_odd - g("b02") * y2};
    return s;
}

SwitchingSystem build_z2_cubic(const Z2CubicParams& p) { return build_z2_cubic(p.as_symbols()); }

SwitchingSystem shift_to_origin(const SwitchingSystem& sys, const Rational& cx, const Rational& cy) {
    if (!cy.is_zero()) throw PreconditionError("shift_to_origin: the point must lie on the switching line y = 0");
    std::map<std::string, MPoly> repl{{"x", X + MPoly(cx)}};
    return sys.substitute(repl);
}

PlanarField scale_epsilon(const PlanarField& f, const Rational& eps) {
    if (eps.is_zero()) throw PreconditionError("scale_epsilon: eps must be nonzero");
    std::map<std::string, MPoly> repl{{"x", X * pow(eps, 3)}, {"y", Y * pow(eps, 2)}};
    // x_new' = eps^-4 P(eps^3 x, eps^2 y), y_new' = eps^-3 Q(eps^3 x, eps^2 y)
    return {f.P.substitute(repl) / pow(eps, 4), f.Q.substitute(repl) / pow(eps, 3)};
}

SwitchingSystem scale_epsilon(const SwitchingSystem& sys, const Rational& eps) {
    return {scale_epsilon(sys.upper, eps), scale_epsilon(sys.lower, eps)};
}

std::optional<MPoly> hamiltonian_of(const PlanarField& f) {
    if (!f.divergence().is_zero()) return std::nullopt;
    MPoly H = f.P.integral("y");
    MPoly rest = -f.Q - d(H, "x");  // depends on x only when the divergence vanishes
    if (d(rest, "y") != MPoly(0)) return std::nullopt;
    H += rest.integral("x");
    H -= MPoly(H.substitute({{"x", MPoly(0)}, {"y", MPoly(0)}}).constant_term());
    return H.compact();
}

bool check_center_symmetry(const SwitchingSystem& sys) {
    return sys.lower.P == -reflect_y(sys.upper.P) && sys.lower.Q == reflect_y(sys.upper.Q);
}

MPoly inverse_integrating_factor_residual(const PlanarField& f, const MPoly& I) {
    return f.P * d(I, "x") + f.Q * d(I, "y") - I * f.divergence();
}

bool verify_inverse_integrating_factor(const PlanarField& f, const MPoly& I) {
    if (I.is_zero()) throw PreconditionError("verify_inverse_integrating_factor: I is identically zero");
    return inverse_integrating_factor_residual(f, I).is_zero();
}

std::array<std::array<Rational, 2>, 2> jacobian_at(const PlanarField& f, const Rational& x, const Rational& y) {
    std::map<std::string, Rational> at{{"x", x}, {"y", y}};
    return {{{d(f.P, "x").eval(at), d(f.P, "y").eval(at)}, {d(f.Q, "x").eval(at), d(f.Q, "y").eval(at)}}};
}

}  // namespace nilcyc
