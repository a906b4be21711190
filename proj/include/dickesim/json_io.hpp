#pragma once

#include <string>

#include "dickesim/density.hpp"
#include "dickesim/symstate.hpp"

// JSON wire formats used by the CLI and test fixtures:
//   pure state:     {"n": int, "amp": [[re, im], ...]}      (length 2^n)
//   density matrix: {"n": int, "rho": [[[re, im], ...], ...]} (2^n x 2^n)

namespace dsim {

std::string to_json(const symstate::PureState& psi);
std::string to_json(const DensityMatrix& rho);

symstate::PureState pure_state_from_json(const std::string& text);
DensityMatrix density_from_json(const std::string& text);

/// True when the JSON object carries a "rho" key (density matrix format).
bool json_is_density(const std::string& text);

}  // namespace dsim
