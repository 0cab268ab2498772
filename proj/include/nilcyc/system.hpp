#pragma once

#include "nilcyc/mpoly.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>

namespace nilcyc {

// xdot = P, ydot = Q. Coefficients may still carry parameter symbols.
struct PlanarField {
    MPoly P, Q;

    PlanarField substitute(const std::map<std::string, MPoly>& repl) const;
    MPoly divergence() const;
    // True when P and Q only involve x and y.
    bool is_concrete() const;
    friend bool operator==(const PlanarField& a, const PlanarField& b) { return a.P == b.P && a.Q == b.Q; }
    friend bool operator!=(const PlanarField& a, const PlanarField& b) { return !(a == b); }
};

// Upper field valid for y > 0, lower for y < 0; the switching line is y = 0.
struct SwitchingSystem {
    PlanarField upper, lower;

    static SwitchingSystem smooth(const PlanarField& f) { return {f, f}; }
    bool is_smooth() const { return upper == lower; }
    SwitchingSystem substitute(const std::map<std::string, MPoly>& repl) const;
    friend bool operator==(const SwitchingSystem& a, const SwitchingSystem& b) {
        return a.upper == b.upper && a.lower == b.lower;
    }
};

// Coefficients of the Z2-equivariant cubic family with nilpotent points at (+-1, 0).
struct Z2CubicParams {
    Rational a02, a12, a21, a03, b02, b12, b21, b03;

    static const std::array<std::string, 8>& names();
    const Rational& get(const std::string& name) const;
    Rational& at(const std::string& name);  // throws PreconditionError on unknown names
    std::map<std::string, Rational> as_map() const;
    std::map<std::string, MPoly> as_symbols() const;
    friend bool operator==(const Z2CubicParams&, const Z2CubicParams&) = default;
};

SwitchingSystem build_z2_cubic(const Z2CubicParams& p);
// Same family with symbolic parameter values; absent names are zero.
SwitchingSystem build_z2_cubic(const std::map<std::string, MPoly>& p);

// x -> x + cx; the point must lie on the switching line.
SwitchingSystem shift_to_origin(const SwitchingSystem& sys, const Rational& cx, const Rational& cy = Rational(0));

// (x, y, t) -> (eps^3 x, eps^2 y, t/eps).
SwitchingSystem scale_epsilon(const SwitchingSystem& sys, const Rational& eps);
PlanarField scale_epsilon(const PlanarField& f, const Rational& eps);

// H with H_y = P and -H_x = Q and H(0,0) = 0, when the field is divergence free.
std::optional<MPoly> hamiltonian_of(const PlanarField& f);

// Whether (x, y, t) -> (x, -y, -t) maps the upper field onto the lower one.
bool check_center_symmetry(const SwitchingSystem& sys);

// P I_x + Q I_y - I div(P, Q).
MPoly inverse_integrating_factor_residual(const PlanarField& f, const MPoly& I);
bool verify_inverse_integrating_factor(const PlanarField& f, const MPoly& I);

// Jacobian [[P_x, P_y], [Q_x, Q_y]] at a point (needs a concrete field).
std::array<std::array<Rational, 2>, 2> jacobian_at(const PlanarField& f, const Rational& x, const Rational& y);

}  // namespace nilcyc
