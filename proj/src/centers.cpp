#include "nilcyc/centers.hpp"

#include "nilcyc/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nilcyc {

namespace {

MPoly P(const char* s) { return MPoly::parse(s); }

Constraint c(const char* p, Rel r) { return {P(p), r}; }

std::vector<CenterCondition> build_conditions() {
    std::vector<CenterCondition> v;
    v.push_back({CenterId::I,
                 {P("a02 + a12"), P("a21 + b12"), P("a12 + 3*b03"), P("b02"), P("b21")},
                 {{c("a12", Rel::Positive), c("a03 + 2*a21^2", Rel::Negative)}}});
    v.push_back({CenterId::II,
                 {P("a02"), P("a12"), P("b02"), P("b03"), P("b21")},
                 {{c("2*a03 + (b12 - a21)^2", Rel::Negative)}}});
    v.push_back({CenterId::III,
                 {P("a02"), P("a12"), P("b02"), P("a21 + b12"), P("3*b03 + 2*a21*b21"),
                  P("9*(a03 + 2*a21^2)^2 + 8*a21*b21^2*(3*a03 + 2*a21^2)")},
                 {{c("a03 + 2*a21^2", Rel::Negative)}}});
    // -(9 + 4 sqrt 3)/8 b21^2 < b12 < -(9 - 4 sqrt 3)/8 b21^2, squared out.
    v.push_back({CenterId::IV,
                 {P("a02"), P("a12"), P("b02"), P("8*a21 + 3*b21^2"), P("16*a03 - 3*b21^2*(4*b12 + b21^2)"),
                  P("8*b03 - b21*(8*b12 - b21^2)")},
                 {{c("b21", Rel::NonZero), c("(8*b12 + 9*b21^2)^2 - 48*b21^4", Rel::Negative)}}});
    v.push_back({CenterId::V, {P("a12"), P("b02"), P("b03"), P("b21")}, {{c("a02", Rel::Negative)}}});
    v.push_back({CenterId::VI,
                 {P("a21 + b12"), P("a12 + 3*b03"), P("b02"), P("b21")},
                 {{c("a02 + a12", Rel::Negative), c("a02 - a12", Rel::Negative)},
                  {c("a02 - a12", Rel::Zero), c("a02", Rel::Negative)}}});
    return v;
}

bool rel_holds(int sign, Rel r) {
    switch (r) {
        case Rel::Zero: return sign == 0;
        case Rel::Positive: return sign > 0;
        case Rel::Negative: return sign < 0;
        case Rel::NonZero: return sign != 0;
    }
    return false;
}

const char* rel_text(Rel r) {
    switch (r) {
        case Rel::Zero: return "= 0";
        case Rel::Positive: return "> 0";
        case Rel::Negative: return "< 0";
        case Rel::NonZero: return "!= 0";
    }
    return "";
}

Rational constant_of(const MPoly& p, const char* what) {
    MPoly q = p.compact();
    if (!q.is_constant()) throw PreconditionError(std::string(what) + " is not a number: " + q.str());
    return q.constant_term();
}

// Sign of a parameter polynomial evaluated at the instance.
int instance_sign(const MPoly& poly, const ParamInstance& inst) {
    MPoly v = poly.substitute(inst.values);
    for (const auto& name : Z2CubicParams::names())
        if (v.has_var(name) && v.compact().has_var(name)) throw PreconditionError("parameter " + name + " has no value");
    if (!inst.root) return constant_of(v, "constraint value").sign();
    auto [a, b] = split_root(v, *inst.root);
    return sign_with_root(constant_of(a, "constraint value"), constant_of(b, "constraint value"), inst.root->square);
}

std::string instance_value(const MPoly& poly, const ParamInstance& inst) {
    MPoly v = poly.substitute(inst.values).compact();
    if (!inst.root) return v.str();
    auto [a, b] = split_root(v, *inst.root);
    if (b.is_zero()) return a.str();
    return a.str() + " + (" + b.str() + ")*" + inst.root->symbol;
}

// x^2 + ... with every parameter of the shifted family and the root symbol reduced.
MPoly reduce(const MPoly& p, const std::optional<QuadraticRoot>& root) {
    if (!root) return p.compact();
    auto [a, b] = split_root(p, *root);
    return (a + b * MPoly::variable(root->symbol)).compact();
}

}  // namespace

std::string to_string(CenterId id) {
    static const char* n[] = {"I", "II", "III", "IV", "V", "VI"};
    return n[static_cast<int>(id) - 1];
}

CenterId parse_center_id(const std::string& s) {
    for (int i = 1; i <= 6; ++i)
        if (to_string(static_cast<CenterId>(i)) == s) return static_cast<CenterId>(i);
    throw PreconditionError("unknown center condition '" + s + "' (expected I..VI)");
}

std::string Constraint::str() const { return poly.str() + " " + rel_text(rel); }

const CenterCondition& center_condition(CenterId id) {
    static const std::vector<CenterCondition> all = build_conditions();
    return all[static_cast<int>(id) - 1];
}

std::pair<MPoly, MPoly> split_root(const MPoly& p, const QuadraticRoot& root) {
    if (!p.has_var(root.symbol)) return {p, MPoly(0)};
    std::vector<MPoly> cs = p.coeffs_in(root.symbol);
    MPoly even(0), odd(0);
    Rational pw(1);
    for (std::size_t k = 0; k < cs.size(); ++k) {
        if (k >= 2 && k % 2 == 0) pw *= root.square;
        (k % 2 == 0 ? even : odd) += cs[k] * pw;
    }
    return {even.compact(), odd.compact()};
}

int sign_with_root(const Rational& a, const Rational& b, const Rational& square) {
    if (square.sign() < 0) throw PreconditionError("square root of a negative number");
    if (b.is_zero() || square.is_zero()) return a.sign();
    if (a.is_zero()) return b.sign();
    if (a.sign() == b.sign()) return a.sign();
    // opposite signs: compare a^2 with b^2 square
    Rational d = a * a - b * b * square;
    return d.sign() == 0 ? 0 : (d.sign() > 0 ? a.sign() : b.sign());
}

ParamInstance ParamInstance::exact(const Z2CubicParams& p) { return {p.as_symbols(), std::nullopt}; }

bool ParamInstance::is_rational() const {
    for (const auto& [k, v] : values)
        if (!v.compact().is_constant()) return false;
    return true;
}

Z2CubicParams ParamInstance::rational() const {
    Z2CubicParams p;
    for (const auto& [k, v] : values) p.at(k) = constant_of(v, ("parameter " + k).c_str());
    return p;
}

Z2CubicParams ParamInstance::approximate(unsigned bits) const {
    if (!root) return rational();
    PrecisionScope scope(bits + 64);
    BigFloat r = sqrt(to_big(root->square));
    // Round r to a dyadic rational with bits + 32 fractional bits.
    Rational rq = to_rational(floor(ldexp(r, static_cast<int>(bits) + 32) + BigFloat(0.5))) /
                  pow(Rational(2), bits + 32);
    Z2CubicParams p;
    for (const auto& [k, v] : values)
        p.at(k) = constant_of(v.substitute({{root->symbol, MPoly(rq)}}), ("parameter " + k).c_str());
    return p;
}

Membership condition_membership(const ParamInstance& p, CenterId id) {
    const CenterCondition& cond = center_condition(id);
    Membership m;
    for (const auto& e : cond.equalities)
        if (instance_sign(e, p) != 0) m.violated.push_back(e.str() + " = 0 (value " + instance_value(e, p) + ")");
    bool any = false;
    std::vector<std::string> alt_fail;
    for (const auto& alt : cond.alternatives) {
        bool ok = true;
        for (const auto& c : alt) {
            if (!rel_holds(instance_sign(c.poly, p), c.rel)) {
                ok = false;
                alt_fail.push_back(c.str() + " (value " + instance_value(c.poly, p) + ")");
            }
        }
        any |= ok;
    }
    if (!any) m.violated.insert(m.violated.end(), alt_fail.begin(), alt_fail.end());
    m.holds = m.violated.empty();
    return m;
}

Membership condition_membership(const Z2CubicParams& p, CenterId id) {
    return condition_membership(ParamInstance::exact(p), id);
}

std::string to_string(CenterRoute r) {
    switch (r) {
        case CenterRoute::HamiltonianMatch: return "HamiltonianMatch";
        case CenterRoute::SwitchingSymmetry: return "SwitchingSymmetry";
        case CenterRoute::InverseIntegratingFactor: return "InverseIntegratingFactor";
        case CenterRoute::NumericSpotCheckOnly: return "NumericSpotCheckOnly";
    }
    return "";
}

SpotCheckReport necessity_spotcheck(const Z2CubicParams& p, const SpotCheckOptions& opt, const Unfolding& perturbation) {
    if (opt.eps.empty()) throw PreconditionError("necessity_spotcheck: no eps samples");
    SpotCheckReport rep;
    rep.eps = opt.eps;
    rep.perturbation = perturbation;
    rep.monodromy = monodromic_candidate(p);
    for (const auto& e : opt.eps) {
        if (e.is_zero()) throw PreconditionError("necessity_spotcheck: eps must be nonzero");
        rep.runs.push_back(displacement_coeffs(scaled_unfolded_z2(p.as_symbols(), perturbation, e), opt.order, opt.bits));
    }
    PrecisionScope scope(opt.bits);
    rep.max_abs = 0;
    for (const auto& r : rep.runs)
        for (const auto& v : r.V) rep.max_abs = std::max(rep.max_abs, BigFloat(abs(v)));
    rep.threshold = opt.threshold > 0 ? BigFloat(opt.threshold) : ldexp(BigFloat(1), -static_cast<int>(opt.bits) / 2);
    rep.vanishes = rep.max_abs < rep.threshold;
    return rep;
}

Unfolding branch_perturbation(CenterId id, const Z2CubicParams& p) {
    Unfolding u;
    if (id == CenterId::III) {
        Rational s = p.a03 + Rational(2) * p.a21 * p.a21;
        if (s.is_zero()) throw PreconditionError("branch perturbation for III needs a03 + 2 a21^2 != 0");
        Rational q02 = (Rational(3) * p.a03 + Rational(6) * p.a21 * p.a21 + Rational(4) * p.a21 * p.b21 * p.b21) /
                       (Rational(3) * s);
        Rational den = Rational(12) * q02 - Rational(3);
        if (den.is_zero()) throw PreconditionError("branch perturbation for III is singular at q02 = 1/4");
        u["p21"] = MPoly(-1);
        u["q02"] = MPoly(q02);
        u["q12"] = MPoly(q02);
        u["q03"] = MPoly(Rational(2, 3) * p.b21 * (Rational(1) + q02));
        u["p03"] = MPoly((Rational(8) * p.b21 * p.b21 + Rational(18) * p.a21) * (Rational(1) + q02) / den);
    } else if (id == CenterId::IV) {
        Rational p12 = -p.b21 / Rational(2);
        u["p21"] = MPoly(-1);
        u["p02"] = MPoly(p12);
        u["p12"] = MPoly(p12);
        u["p03"] = MPoly(Rational(3) * p12 * p12);
        u["q03"] = MPoly(-p12);
    }
    return u;
}

MPoly condition_iii_factor() {
    return P("3*(9*a03 + 2*a21^2)*(x^2 + 2*b21*x*y - 2*a21*y^2)"
             " - (3*a03 - 2*a21^2)*(3*x^4 + 6*b21*x^3*y - 12*a21*x^2*y^2 - 4*a21*b21*x*y^3 - 6*a03*y^4)");
}

std::string to_string(IdentityForm f) {
    switch (f) {
        case IdentityForm::Identically: return "identically";
        case IdentityForm::ModuloRelation: return "modulo the b21^2 relation";
        case IdentityForm::Fails: return "fails";
    }
    return "";
}

IdentityForm condition_iii_identity() {
    std::map<std::string, MPoly> s{{"a21", P("a21")}, {"a03", P("a03")}, {"b21", P("b21")},
                                   {"b12", P("-a21")}, {"b03", P("-2/3*a21*b21")}};
    PlanarField f = build_z2_cubic(s).upper;
    MPoly R = inverse_integrating_factor_residual(f, condition_iii_factor()).compact();
    if (R.is_zero()) return IdentityForm::Identically;
    // D b21^2 + N = 0 with D = 8 a21 (3 a03 + 2 a21^2), N = 9 (a03 + 2 a21^2)^2.
    MPoly D = P("8*a21*(3*a03 + 2*a21^2)"), N = P("9*(a03 + 2*a21^2)^2");
    std::vector<MPoly> cs = R.coeffs_in("b21");
    const unsigned M = static_cast<unsigned>(cs.size() - 1) / 2;
    MPoly total(0);
    for (std::size_t k = 0; k < cs.size(); ++k) {
        unsigned m = static_cast<unsigned>(k / 2);
        MPoly term = cs[k] * pow(D, M - m) * pow(-N, m);
        if (k % 2 == 1) term = term * P("b21");
        total += term;
    }
    return total.compact().is_zero() ? IdentityForm::ModuloRelation : IdentityForm::Fails;
}

bool condition_iv_scaling_invariance() {
    // Condition-IV family written polynomially in (b21, b12).
    auto family = [](const MPoly& b21, const MPoly& b12) {
        std::map<std::string, MPoly> s;
        s["b21"] = b21;
        s["b12"] = b12;
        s["a21"] = Rational(-3, 8) * b21 * b21;
        s["a03"] = Rational(3, 16) * b21 * b21 * (Rational(4) * b12 + b21 * b21);
        s["b03"] = Rational(1, 8) * b21 * (Rational(8) * b12 - b21 * b21);
        return build_z2_cubic(s).upper;
    };
    MPoly r = P("r"), b21 = P("b21"), b12 = P("b12");
    PlanarField f = family(b21, b12);
    PlanarField g{r * f.P.substitute({{"y", r * P("y")}}), f.Q.substitute({{"y", r * P("y")}})};
    PlanarField target = family(r * b21, r * r * b12);
    if (g.P != target.P || g.Q != target.Q) return false;
    // The family satisfies every condition-IV equality identically.
    std::map<std::string, MPoly> vals{{"a02", MPoly(0)}, {"a12", MPoly(0)}, {"b02", MPoly(0)},
                                      {"b21", b21},      {"b12", b12},      {"a21", Rational(-3, 8) * b21 * b21},
                                      {"a03", Rational(3, 16) * b21 * b21 * (Rational(4) * b12 + b21 * b21)},
                                      {"b03", Rational(1, 8) * b21 * (Rational(8) * b12 - b21 * b21)}};
    for (const auto& e : center_condition(CenterId::IV).equalities)
        if (!e.substitute(vals).compact().is_zero()) return false;
    return true;
}

CenterCertificate certify_center(const ParamInstance& inst, CenterId id, const SpotCheckOptions& opt) {
    Membership m = condition_membership(inst, id);
    if (!m.holds) {
        std::string msg = "parameters do not satisfy condition " + to_string(id) + ":";
        for (const auto& v : m.violated) msg += " [" + v + "]";
        throw PreconditionError(msg);
    }
    CenterCertificate cert;
    cert.id = id;
    SwitchingSystem sys = build_z2_cubic(inst.values);
    switch (id) {
        case CenterId::I:
        case CenterId::VI: {
            cert.route = CenterRoute::HamiltonianMatch;
            SwitchingSystem s = shift_to_origin(sys, Rational(1));
            s = {{reduce(s.upper.P, inst.root), reduce(s.upper.Q, inst.root)},
                 {reduce(s.lower.P, inst.root), reduce(s.lower.Q, inst.root)}};
            auto hu = hamiltonian_of(s.upper), hl = hamiltonian_of(s.lower);
            if (!hu || !hl) throw std::logic_error("a half system has nonzero divergence; no Hamiltonian");
            MPoly du = hu->substitute({{"y", MPoly(0)}}), dl = hl->substitute({{"y", MPoly(0)}});
            if (reduce(du - dl, inst.root) != MPoly(0))
                throw std::logic_error("H+(x,0) - H-(x,0) = " + (du - dl).str() + " is not identically zero");
            if (reduce(hu->derivative("y") - s.upper.P, inst.root) != MPoly(0) ||
                reduce(-hu->derivative("x") - s.upper.Q, inst.root) != MPoly(0))
                throw std::logic_error("upper Hamiltonian fails re-derivation");
            cert.H_upper = *hu;
            cert.H_lower = *hl;
            cert.detail = "H+(x,0) = H-(x,0) = " + du.str();
            break;
        }
        case CenterId::II:
        case CenterId::V: {
            cert.route = CenterRoute::SwitchingSymmetry;
            cert.symmetry = check_center_symmetry(sys);
            if (!cert.symmetry) throw std::logic_error("(x, y, t) -> (x, -y, -t) does not map the upper field to the lower");
            cert.detail = "(x, y, t) -> (x, -y, -t) maps the upper field onto the lower field";
            break;
        }
        case CenterId::III: {
            cert.route = CenterRoute::InverseIntegratingFactor;
            std::map<std::string, MPoly> s{{"a21", inst.values.at("a21")},
                                           {"a03", inst.values.at("a03")},
                                           {"b21", inst.values.at("b21")}};
            MPoly I = reduce(condition_iii_factor().substitute(s), inst.root);
            if (I.is_zero()) throw std::logic_error("inverse integrating factor vanishes identically");
            MPoly R = reduce(inverse_integrating_factor_residual(sys.upper, I), inst.root);
            if (!R.is_zero()) throw std::logic_error("inverse integrating factor residual " + R.str() + " is not zero");
            if (!sys.is_smooth()) throw std::logic_error("condition III system is not smooth across y = 0");
            cert.inverse_integrating_factor = I;
            cert.detail = "P I_x + Q I_y - I div = 0 exactly" +
                          std::string(inst.root ? " after reducing " + inst.root->symbol + "^2 = " +
                                                      inst.root->square.str()
                                                : "") +
                          "; symbolic identity holds " + to_string(condition_iii_identity());
            break;
        }
        case CenterId::IV: {
            cert.route = CenterRoute::NumericSpotCheckOnly;
            cert.scaling_invariance = condition_iv_scaling_invariance();
            break;
        }
    }
    // Numeric cross-check along the branch on which the center persists in the unfolding.
    Z2CubicParams approx = inst.approximate(opt.bits);
    cert.spotcheck = necessity_spotcheck(approx, opt, branch_perturbation(id, approx));
    if (id == CenterId::IV) {
        if (!cert.spotcheck->vanishes)
            throw NumericError("condition IV spot-check: max |V_k| = " + to_decimal(cert.spotcheck->max_abs, 6) +
                               " is not below " + to_decimal(cert.spotcheck->threshold, 3));
        cert.detail = "max |V_k| = " + to_decimal(cert.spotcheck->max_abs, 6) + " below " +
                      to_decimal(cert.spotcheck->threshold, 3) + "; scaling invariance " +
                      (cert.scaling_invariance ? "verified" : "FAILED");
    }
    return cert;
}

CenterCertificate certify_center(const Z2CubicParams& p, CenterId id, const SpotCheckOptions& opt) {
    return certify_center(ParamInstance::exact(p), id, opt);
}

}  // namespace nilcyc
