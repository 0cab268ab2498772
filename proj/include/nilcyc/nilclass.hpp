#pragma once

#include "nilcyc/series.hpp"
#include "nilcyc/system.hpp"

#include <optional>
#include <string>

namespace nilcyc {

// Power series in y; coefficients may carry parameter symbols.
using YSeries = Series<MPoly>;

// x = f(y) solving x + Phi(x, y) = 0, truncated at y^N.
// Phi must have no constant or linear part in (x, y).
YSeries implicit_series(const MPoly& Phi, unsigned N);

// F(f(y), y) as a series in y.
YSeries compose_along(const MPoly& F, const YSeries& f);

struct NilpotentData {
    YSeries f_series;  // coefficients f_k of F(y) = Psi(f(y), y)
    YSeries g_series;  // coefficients g_k of G(y) = (Psi_x + Phi_y)(f(y), y)
    std::optional<unsigned> m, n;
    std::optional<Rational> f_m, g_n, delta;
    bool psi_zero = false;
    bool symbolic = false;  // a leading coefficient still depends on parameters
    unsigned order = 0;
};

NilpotentData fg_data(const MPoly& Psi, const MPoly& Phi, unsigned N);

enum class NilpotentKind { CenterOrFocus, Saddle, Cusp, SaddleNode, Node, HyperbolicElliptic, NotIsolated, Undetermined };

std::string to_string(NilpotentKind k);

struct NilpotentWitness {
    std::optional<unsigned> m, n;
    std::optional<Rational> f_m, g_n, delta;
};

struct NilpotentClass {
    NilpotentKind kind = NilpotentKind::Undetermined;
    std::optional<unsigned> multiplicity;
    NilpotentWitness witness;
};

NilpotentClass classify(const NilpotentData& data);
NilpotentClass classify(const NilpotentWitness& w);

enum class Half { Upper, Lower };

// Psi and Phi of one half of a system already shifted so the point sits at the origin:
// Psi = P, Phi = Q - x.
std::pair<MPoly, MPoly> psi_phi(const PlanarField& f);

// Half-system data at (1, 0) of the Z2 family.
NilpotentData family_data(const Z2CubicParams& p, Half which, unsigned N);

// Smallest k with f_k != 0 at (1, 0); nullopt when the point is not isolated.
std::optional<unsigned> multiplicity_of_family(const Z2CubicParams& p, Half which);

struct MonodromyVerdict {
    bool candidate = false;
    NilpotentClass upper, lower;
    std::string reason;
};

// Both halves at (1, 0) classified and combined with the a12 sign restrictions
// of the third-order (f2+ = 0) and second-order (f2+ < 0) cases.
MonodromyVerdict monodromic_candidate(const Z2CubicParams& p);

}  // namespace nilcyc
