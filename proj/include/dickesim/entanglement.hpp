#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "dickesim/density.hpp"
#include "dickesim/symstate.hpp"

// Entanglement diagnostics and SLOCC machinery: the three-tangle, generic
// fidelity witnesses and the invertible local filters that move between
// SLOCC-equivalent states.

namespace dsim::entanglement {

using cd = std::complex<double>;
using symstate::LocalOperator;
using symstate::PureState;

/// Generic witness alpha*1 - |target><target|; expectation < 0 certifies
/// entanglement of the targeted type.
struct WitnessSpec {
    WitnessSpec(PureState target_, double offset_);
    PureState target;
    double offset;  // in (0, 1)
};

struct TangleResult {
    double value;  // tau_3 in [0, 1]
};

/// Three-tangle of a 3-qubit pure state, evaluated as 4|Hdet| of the amplitude
/// tensor (Cayley's 2x2x2 hyperdeterminant). Nonzero exactly on the GHZ class.
TangleResult three_tangle(const PureState& state);

/// tau_3 along the one-parameter family obtained by projecting |D_4^(2)> with
/// direction (cos theta, eps=0), theta in [0, pi/2]. With `filtered` the
/// T+ filter is applied to every qubit (postselected on success) first.
std::vector<std::pair<double, double>> tangle_curve(int samples, bool filtered);

// Local filters. t_plus/t_minus map the G_3 states onto GHZ_3 with success
// probability 1/9; t_r(r) rescales |V> by 1/r and reweights Dicke superpositions.
LocalOperator t_plus();
LocalOperator t_minus();
LocalOperator t_r(cd r);

/// Superposition weights (alpha, eps) of a two-Dicke-term five-qubit state;
/// beta = sqrt(1 - alpha^2) is implied.
struct DeltaParams {
    double alpha;
    double eps;
};

/// Filter parameter r such that t_r applied to all five qubits maps
/// delta5(from) onto delta5(to). Verified by construction; throws
/// not_retargetable_error when either state sits on a SLOCC class boundary.
cd retarget_r(const DeltaParams& from, const DeltaParams& to);

double witness_value(const WitnessSpec& w, const PureState& state);
double witness_value(const WitnessSpec& w, const DensityMatrix& rho);

}  // namespace dsim::entanglement
