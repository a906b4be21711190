#include "dickesim/entanglement.hpp"

#include <cmath>
#include <numbers>

namespace dsim::entanglement {

using symstate::dicke;
using symstate::ProjectorSpec;

WitnessSpec::WitnessSpec(PureState target_, double offset_)
    : target(std::move(target_)), offset(offset_) {
    if (offset <= 0.0 || offset >= 1.0)
        throw std::domain_error("WitnessSpec: offset must lie in (0, 1)");
}

TangleResult three_tangle(const PureState& state) {
    if (state.n() != 3) throw std::domain_error("three_tangle: need a 3-qubit state");
    const auto a = [&](int i, int j, int k) { return state.amp((i << 2) | (j << 1) | k); };

    const cd d1 = a(0, 0, 0) * a(0, 0, 0) * a(1, 1, 1) * a(1, 1, 1) +
                  a(0, 0, 1) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 0) +
                  a(0, 1, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 0, 1) +
                  a(1, 0, 0) * a(1, 0, 0) * a(0, 1, 1) * a(0, 1, 1);
    const cd d2 = a(0, 0, 0) * a(0, 0, 1) * a(1, 1, 0) * a(1, 1, 1) +
                  a(0, 0, 0) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 1) +
                  a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 0) * a(1, 1, 1) +
                  a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 1) * a(1, 1, 0) +
                  a(0, 0, 1) * a(0, 1, 1) * a(1, 1, 0) * a(1, 0, 0) +
                  a(0, 1, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 0, 0);
    const cd d3 = a(0, 0, 0) * a(0, 1, 1) * a(1, 0, 1) * a(1, 1, 0) +
                  a(0, 0, 1) * a(0, 1, 0) * a(1, 0, 0) * a(1, 1, 1);

    const double tau = 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
    return TangleResult{std::min(tau, 1.0 + 1e-9)};
}

std::vector<std::pair<double, double>> tangle_curve(int samples, bool filtered) {
    if (samples < 2) throw std::domain_error("tangle_curve: need at least 2 samples");
    const PureState d42 = dicke({4, 2});
    const std::vector<LocalOperator> filt(3, t_plus());
    std::vector<std::pair<double, double>> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double theta = (std::numbers::pi / 2.0) * i / (samples - 1);
        auto [state, p] = symstate::project_qubit(d42, 4, ProjectorSpec(std::cos(theta), 0.0));
        (void)p;
        if (filtered) state = symstate::apply_local(state, filt).first;
        out.emplace_back(theta, three_tangle(state).value);
    }
    return out;
}

namespace {

using Mat2 = std::array<cd, 4>;

Mat2 mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

const Mat2 kHadamard{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0),
                     -1.0 / std::sqrt(2.0)};

}  // namespace

LocalOperator t_plus() {
    // H [ ((1/sqrt3 + i) 1 + (1/sqrt3 - i) sigma_z) / 2 ] H; the bracket is
    // diag(1/sqrt3, i).
    const Mat2 mid{cd{1.0 / std::sqrt(3.0), 0.0}, 0.0, 0.0, cd{0.0, 1.0}};
    return LocalOperator::filter(mul(kHadamard, mul(mid, kHadamard)));
}

LocalOperator t_minus() {
    // H [ ((1/sqrt3 + i) sigma_x + i (1/sqrt3 - i) sigma_y) / 2 ] H; the bracket
    // is [[0, 1/sqrt3], [i, 0]].
    const Mat2 mid{0.0, cd{1.0 / std::sqrt(3.0), 0.0}, cd{0.0, 1.0}, 0.0};
    return LocalOperator::filter(mul(kHadamard, mul(mid, kHadamard)));
}

LocalOperator t_r(cd r) {
    if (std::abs(r) < 1e-15) throw std::domain_error("t_r: r must be nonzero");
    // [(1 + 1/r) 1 + (1 - 1/r) sigma_z] / 2 = diag(1, 1/r)
    return LocalOperator::filter({1.0, 0.0, 0.0, 1.0 / r});
}

cd retarget_r(const DeltaParams& from, const DeltaParams& to) {
    const double beta_f = std::sqrt(std::max(0.0, 1.0 - from.alpha * from.alpha));
    const double beta_t = std::sqrt(std::max(0.0, 1.0 - to.alpha * to.alpha));
    if (from.alpha < 1e-12 || beta_f < 1e-12 || to.alpha < 1e-12 || beta_t < 1e-12)
        throw not_retargetable_error(
            "retarget_r: source and target must both mix the two Dicke terms");

    const cd r = beta_f * to.alpha * std::polar(1.0, from.eps) /
                 (beta_t * from.alpha * std::polar(1.0, to.eps));

    // Verify by construction: apply the filter and demand fidelity 1.
    const std::vector<LocalOperator> ops(5, t_r(r));
    const PureState mapped =
        symstate::apply_local(symstate::delta5(from.alpha, from.eps), ops).first;
    const double f = symstate::fidelity_pure(mapped, symstate::delta5(to.alpha, to.eps));
    if (std::abs(f - 1.0) > 1e-10)
        throw std::logic_error("retarget_r: constructed filter failed verification");
    return r;
}

double witness_value(const WitnessSpec& w, const PureState& state) {
    if (state.n() != w.target.n()) throw std::domain_error("witness_value: dimension mismatch");
    return w.offset - symstate::fidelity_pure(w.target, state);
}

double witness_value(const WitnessSpec& w, const DensityMatrix& rho) {
    if (rho.n() != w.target.n()) throw std::domain_error("witness_value: dimension mismatch");
    return w.offset - rho.fidelity(w.target);
}

}  // namespace dsim::entanglement
