#pragma once

#include <vector>

#include "gw/rational.hpp"

namespace gw {

// <tau_{a_1} ... tau_{a_n}>_g : integrals of psi monomials over the moduli
// of stable curves, exact rationals.  Returns 0 when the dimension
// constraint sum a_i = 3g - 3 + n fails or the moduli space is empty.
Rat psi_intersection(int g, std::vector<int> a);

}  // namespace gw
