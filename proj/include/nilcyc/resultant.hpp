#pragma once

#include "nilcyc/mpoly.hpp"

#include <string>
#include <vector>

namespace nilcyc {

// Determinant by Bareiss fraction-free elimination; entries stay polynomial.
MPoly bareiss_determinant(std::vector<std::vector<MPoly>> m);

std::vector<std::vector<MPoly>> sylvester_matrix(const MPoly& f, const MPoly& g, const std::string& var);

// Res_var(f, g) as the Sylvester determinant. Both need positive degree in var.
MPoly resultant(const MPoly& f, const MPoly& g, const std::string& var);

}  // namespace nilcyc
