#pragma once

#include "nilcyc/system.hpp"

#include <map>
#include <string>

namespace nilcyc {

// Unfolding of the family around (1, 0). Recognised keys:
//   p21 p02 p12 p03 q21 q02 q12 q03   eps^2 perturbation coefficients
//   delta1                            weak-focus unfolding, delta1*eps*(x + 3/2 x^2 + 1/2 x^3) and delta1*eps*y
//   b                                 sliding unfolding, -(b/2) eps^3 (x + x^2) above, (b/2) eps^3 (2 + 3x + x^2) below
// The lower-half perturbation follows the symmetry relations p02- = 2 p12 - p02 (same for q),
// with xy coefficient 2 p21 in both halves. Values may be symbolic.
using Unfolding = std::map<std::string, MPoly>;

const std::vector<std::string>& unfolding_keys();

// Shifted system plus -eps^2 y and the perturbations, before scaling.
SwitchingSystem unfolded_z2(const std::map<std::string, MPoly>& params, const Unfolding& u, const Rational& eps);
// The same followed by (x, y, t) -> (eps^3 x, eps^2 y, t/eps).
SwitchingSystem scaled_unfolded_z2(const std::map<std::string, MPoly>& params, const Unfolding& u, const Rational& eps);
SwitchingSystem scaled_unfolded_z2(const Z2CubicParams& params, const std::map<std::string, Rational>& u,
                                   const Rational& eps);

// Condition-VI unfolding written with the rescaled parameters
// A21 A02 B03 A03 P212 Q212 Q022 Q032 plus delta1 and b:
//   a21 = eps^2 A21, a02 = eps^3 A02, b03 = eps^3 B03, a03 = eps^4 A03,
//   p21 = P212, q02 = Q022, q03 = eps Q032, q21 = Q212 / eps,
// with b12 = -a21, a12 = -3 b03, b02 = b21 = 0.
const std::vector<std::string>& critical_family_keys();
SwitchingSystem critical_family(const std::map<std::string, Rational>& capitals, const Rational& eps);

}  // namespace nilcyc
