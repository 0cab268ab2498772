#include "nilcyc/families.hpp"

#include "nilcyc/errors.hpp"

namespace nilcyc {

namespace {

const MPoly X = MPoly::variable("x");
const MPoly Y = MPoly::variable("y");

MPoly get(const std::map<std::string, MPoly>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? MPoly(0) : it->second;
}

// l21 (2xy + x^2 y) + l02 y^2 + l12 x y^2 + l03 y^3
MPoly perturbation(const MPoly& l21, const MPoly& l02, const MPoly& l12, const MPoly& l03) {
    return l21 * (Rational(2) * X * Y + X * X * Y) + l02 * Y * Y + l12 * X * Y * Y + l03 * Y * Y * Y;
}

}  // namespace

const std::vector<std::string>& unfolding_keys() {
    static const std::vector<std::string> k{"p21", "p02", "p12", "p03", "q21", "q02", "q12", "q03", "delta1", "b"};
    return k;
}

SwitchingSystem unfolded_z2(const std::map<std::string, MPoly>& params, const Unfolding& u, const Rational& eps) {
    for (const auto& [k, v] : u) {
        bool known = false;
        for (const auto& n : unfolding_keys()) known |= (n == k);
        if (!known) throw PreconditionError("unknown unfolding parameter '" + k + "'");
    }
    SwitchingSystem s = shift_to_origin(build_z2_cubic(params), Rational(1));
    const Rational e2 = pow(eps, 2), e3 = pow(eps, 3);
    const Rational half(1, 2);

    MPoly pu = perturbation(get(u, "p21"), get(u, "p02"), get(u, "p12"), get(u, "p03"));
    MPoly pl = perturbation(get(u, "p21"), Rational(2) * get(u, "p12") - get(u, "p02"), get(u, "p12"), get(u, "p03"));
    MPoly qu = perturbation(get(u, "q21"), get(u, "q02"), get(u, "q12"), get(u, "q03"));
    MPoly ql = perturbation(get(u, "q21"), Rational(2) * get(u, "q12") - get(u, "q02"), get(u, "q12"), get(u, "q03"));

    MPoly d1 = get(u, "delta1"), b = get(u, "b");
    MPoly focus_x = d1 * eps * (X + Rational(3, 2) * X * X + half * X * X * X);
    MPoly focus_y = d1 * eps * Y;

    s.upper.P += -e2 * Y + e2 * pu + focus_x;
    s.lower.P += -e2 * Y + e2 * pl + focus_x;
    s.upper.Q += e2 * qu + focus_y - b * (half * e3) * (X + X * X);
    s.lower.Q += e2 * ql + focus_y + b * (half * e3) * (MPoly(2) + Rational(3) * X + X * X);
    return s;
}

SwitchingSystem scaled_unfolded_z2(const std::map<std::string, MPoly>& params, const Unfolding& u, const Rational& eps) {
    return scale_epsilon(unfolded_z2(params, u, eps), eps);
}

SwitchingSystem scaled_unfolded_z2(const Z2CubicParams& params, const std::map<std::string, Rational>& u,
                                   const Rational& eps) {
    Unfolding su;
    for (const auto& [k, v] : u) su[k] = MPoly(v);
    return scaled_unfolded_z2(params.as_symbols(), su, eps);
}

const std::vector<std::string>& critical_family_keys() {
    static const std::vector<std::string> k{"A21", "A02", "B03", "A03", "P212", "Q212", "Q022", "Q032", "delta1", "b"};
    return k;
}

SwitchingSystem critical_family(const std::map<std::string, Rational>& c, const Rational& eps) {
    for (const auto& [k, v] : c) {
        bool known = false;
        for (const auto& n : critical_family_keys()) known |= (n == k);
        if (!known) throw PreconditionError("unknown critical-family parameter '" + k + "'");
    }
    if (eps.is_zero()) throw PreconditionError("critical_family: eps must be nonzero");
    auto g = [&](const char* k) {
        auto it = c.find(k);
        return it == c.end() ? Rational(0) : it->second;
    };
    Rational a21 = pow(eps, 2) * g("A21"), a02 = pow(eps, 3) * g("A02"), b03 = pow(eps, 3) * g("B03"),
             a03 = pow(eps, 4) * g("A03");
    Z2CubicParams p;
    p.a21 = a21;
    p.a02 = a02;
    p.b03 = b03;
    p.a03 = a03;
    p.b12 = -a21;
    p.a12 = Rational(-3) * b03;
    std::map<std::string, Rational> u{{"p21", g("P212")},       {"q02", g("Q022")},
                                      {"q03", eps * g("Q032")}, {"q21", g("Q212") / eps},
                                      {"delta1", g("delta1")},  {"b", g("b")}};
    return scaled_unfolded_z2(p, u, eps);
}

}  // namespace nilcyc
