#include "dickesim/symstate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

namespace dsim::symstate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(n - k + i) / double(i);
    return r;
}

double reduce_mod_2pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0) r += kTwoPi;
    return r;
}

}  // namespace

PureState::PureState(int n, std::vector<cd> amplitudes) : n_(n), amp_(std::move(amplitudes)) {
    if (n_ < 1 || n_ > kMaxQubits)
        throw std::domain_error("PureState: qubit count must be in 1.." +
                                std::to_string(kMaxQubits));
    if (amp_.size() != (std::size_t{1} << n_))
        throw std::domain_error("PureState: amplitude vector length must be 2^n");
    double n2 = 0.0;
    for (const cd& a : amp_) n2 += std::norm(a);
    if (n2 < kAnnihilationTol)
        throw degenerate_input_error("PureState: amplitude vector has (near) zero norm");
    const double inv = 1.0 / std::sqrt(n2);
    if (std::abs(n2 - 1.0) > 1e-15)
        for (cd& a : amp_) a *= inv;
}

PureState PureState::basis(std::string_view kets) {
    const int n = static_cast<int>(kets.size());
    if (n < 1 || n > kMaxQubits) throw std::domain_error("basis: need 1..8 letters");
    std::size_t idx = 0;
    for (char c : kets) {
        if (c != 'H' && c != 'V') throw std::domain_error("basis: letters must be H or V");
        idx = (idx << 1) | (c == 'V' ? 1u : 0u);
    }
    std::vector<cd> amp(std::size_t{1} << n, cd{0.0, 0.0});
    amp[idx] = 1.0;
    return PureState(n, std::move(amp));
}

double PureState::norm_squared() const {
    double n2 = 0.0;
    for (const cd& a : amp_) n2 += std::norm(a);
    return n2;
}

PureState PureState::canonical() const {
    for (const cd& a : amp_) {
        if (std::abs(a) > 1e-14) {
            cd phase = std::abs(a) / a;
            std::vector<cd> out(amp_);
            for (cd& x : out) x *= phase;
            return PureState(n_, std::move(out));
        }
    }
    return *this;
}

ProjectorSpec::ProjectorSpec(double alpha_, double eps_) : alpha(alpha_), eps(reduce_mod_2pi(eps_)) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::domain_error("ProjectorSpec: alpha must lie in [0, 1]");
}

double ProjectorSpec::beta() const { return std::sqrt(std::max(0.0, 1.0 - alpha * alpha)); }

cd ProjectorSpec::ket_v() const { return beta() * std::polar(1.0, eps); }

LocalOperator LocalOperator::unitary(const std::array<cd, 4>& m) {
    // M^dag M = 1 within kNormTol
    const cd c00 = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    const cd c01 = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    const cd c11 = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    if (std::abs(c00 - 1.0) > kNormTol || std::abs(c11 - 1.0) > kNormTol ||
        std::abs(c01) > kNormTol)
        throw std::domain_error("LocalOperator: matrix is not unitary");
    return LocalOperator(m, true);
}

LocalOperator LocalOperator::filter(const std::array<cd, 4>& m) {
    if (std::abs(m[0] * m[3] - m[1] * m[2]) < 1e-15)
        throw std::domain_error("LocalOperator: filter must be invertible");
    return LocalOperator(m, false);
}

LocalOperator identity_op() { return LocalOperator::unitary({1.0, 0.0, 0.0, 1.0}); }
LocalOperator pauli_x() { return LocalOperator::unitary({0.0, 1.0, 1.0, 0.0}); }
LocalOperator pauli_y() {
    return LocalOperator::unitary({0.0, cd{0.0, -1.0}, cd{0.0, 1.0}, 0.0});
}
LocalOperator pauli_z() { return LocalOperator::unitary({1.0, 0.0, 0.0, -1.0}); }
LocalOperator hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return LocalOperator::unitary({s, s, s, -s});
}

PureState dicke(const DickeSpec& spec) {
    if (spec.n < 1 || spec.n > kMaxQubits)
        throw std::domain_error("dicke: qubit count out of range");
    if (spec.m < 0 || spec.m > spec.n)
        throw std::domain_error("dicke: excitation count out of range");
    const std::size_t dim = std::size_t{1} << spec.n;
    const double a = 1.0 / std::sqrt(binomial(spec.n, spec.m));
    std::vector<cd> amp(dim, cd{0.0, 0.0});
    for (std::size_t idx = 0; idx < dim; ++idx)
        if (std::popcount(idx) == spec.m) amp[idx] = a;
    return PureState(spec.n, std::move(amp));
}

PureState superpose(const std::vector<std::pair<cd, PureState>>& terms) {
    if (terms.empty()) throw std::domain_error("superpose: no terms");
    const int n = terms.front().second.n();
    std::vector<cd> amp(std::size_t{1} << n, cd{0.0, 0.0});
    for (const auto& [coeff, state] : terms) {
        if (state.n() != n) throw std::domain_error("superpose: mismatched qubit counts");
        for (std::size_t i = 0; i < amp.size(); ++i) amp[i] += coeff * state.amp(i);
    }
    double n2 = 0.0;
    for (const cd& a : amp) n2 += std::norm(a);
    if (n2 < kAnnihilationTol)
        throw degenerate_input_error("superpose: terms cancel to the zero vector");
    return PureState(n, std::move(amp));
}

std::pair<PureState, double> project_qubit(const PureState& state, int qubit,
                                           const ProjectorSpec& proj) {
    const int n = state.n();
    if (n < 2) throw std::domain_error("project_qubit: need at least 2 qubits");
    if (qubit < 1 || qubit > n) throw std::domain_error("project_qubit: qubit index out of range");

    const int pos = n - qubit;  // bit position of the measured qubit
    const cd wh = std::conj(proj.ket_h());
    const cd wv = std::conj(proj.ket_v());
    const std::size_t low_mask = (std::size_t{1} << pos) - 1;

    std::vector<cd> out(std::size_t{1} << (n - 1), cd{0.0, 0.0});
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        const cd a = state.amp(idx);
        if (a == cd{0.0, 0.0}) continue;
        const std::size_t rest = ((idx >> (pos + 1)) << pos) | (idx & low_mask);
        out[rest] += (((idx >> pos) & 1u) ? wv : wh) * a;
    }
    double p = 0.0;
    for (const cd& a : out) p += std::norm(a);
    if (p < kAnnihilationTol)
        throw annihilation_error("project_qubit: projection is orthogonal to the state");
    return {PureState(n - 1, std::move(out)), p};
}

std::pair<PureState, double> apply_local(const PureState& state,
                                         std::span<const LocalOperator> ops) {
    const int n = state.n();
    if (static_cast<int>(ops.size()) != n)
        throw std::domain_error("apply_local: need exactly one operator per qubit");

    std::vector<cd> amp(state.amplitudes());
    for (int q = 0; q < n; ++q) {
        const LocalOperator& op = ops[q];
        const int pos = n - 1 - q;  // ops[0] acts on qubit 1 (MSB)
        const std::size_t step = std::size_t{1} << pos;
        for (std::size_t base = 0; base < amp.size(); base += 2 * step)
            for (std::size_t off = 0; off < step; ++off) {
                const std::size_t i0 = base + off, i1 = i0 + step;
                const cd a = amp[i0], b = amp[i1];
                amp[i0] = op(0, 0) * a + op(0, 1) * b;
                amp[i1] = op(1, 0) * a + op(1, 1) * b;
            }
    }
    double p = 0.0;
    for (const cd& a : amp) p += std::norm(a);
    if (p < kAnnihilationTol)
        throw annihilation_error("apply_local: operators annihilated the state");
    return {PureState(n, std::move(amp)), p};
}

PureState delta5(double alpha, double eps) {
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("delta5: alpha must lie in [0, 1]");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    return superpose({{alpha, dicke({5, 2})}, {beta * std::polar(1.0, eps), dicke({5, 3})}});
}

PureState delta4_formula(double alpha, double eps, double alpha1, double eps1) {
    if (alpha < 0.0 || alpha > 1.0 || alpha1 < 0.0 || alpha1 > 1.0)
        throw std::domain_error("delta4_formula: weights must lie in [0, 1]");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const double beta1 = std::sqrt(std::max(0.0, 1.0 - alpha1 * alpha1));
    const cd a = alpha * beta1 * std::polar(1.0, -eps1);
    const cd b = alpha1 * beta * std::polar(1.0, eps);
    const cd c = alpha * alpha1 + beta * beta1 * std::polar(1.0, eps - eps1);
    const double w = std::sqrt(6.0 / 4.0);
    if (std::norm(a) + std::norm(b) + std::norm(c) < kAnnihilationTol)
        throw annihilation_error("delta4_formula: all coefficients vanish");
    return superpose({{a, dicke({4, 1})}, {b, dicke({4, 3})}, {w * c, dicke({4, 2})}});
}

PureState delta3(double alpha, double eps, double alpha1, double eps1, double alpha2,
                 double eps2) {
    if (alpha < 0.0 || alpha > 1.0 || alpha1 < 0.0 || alpha1 > 1.0 || alpha2 < 0.0 ||
        alpha2 > 1.0)
        throw std::domain_error("delta3: weights must lie in [0, 1]");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    const double beta1 = std::sqrt(std::max(0.0, 1.0 - alpha1 * alpha1));
    const double beta2 = std::sqrt(std::max(0.0, 1.0 - alpha2 * alpha2));

    // Coefficients of the two-projection cascade on delta5. In the D_3^(1) and
    // D_3^(2) brackets the D_4^(2) parent enters with unit weight; direct
    // expansion of the cascade fixes that (cross-checked against the
    // project_qubit route in the tests).
    const cd a = alpha * beta1 * std::polar(1.0, -eps1);             // D4^(1) parent
    const cd b = alpha1 * beta * std::polar(1.0, eps);               // D4^(3) parent
    const cd c = alpha * alpha1 + beta * beta1 * std::polar(1.0, eps - eps1);  // D4^(2) parent
    const cd pv = beta2 * std::polar(1.0, -eps2);  // second projector, V component conjugated

    const cd c0 = a * pv;
    const cd c3 = b * alpha2;
    const cd c1 = std::sqrt(3.0) * (a * alpha2 + c * pv);
    const cd c2 = std::sqrt(3.0) * (b * pv + c * alpha2);
    if (std::norm(c0) + std::norm(c1) + std::norm(c2) + std::norm(c3) < kAnnihilationTol)
        throw annihilation_error("delta3: all coefficients vanish");
    return superpose({{c0, dicke({3, 0})},
                      {c1, dicke({3, 1})},
                      {c2, dicke({3, 2})},
                      {c3, dicke({3, 3})}});
}

std::pair<cd, cd> decompose_ghz_dicke(const PureState& state) {
    if (state.n() != 4) throw std::domain_error("decompose_ghz_dicke: need a 4-qubit state");
    const PureState ghz4p =
        superpose({{1.0, dicke({4, 1})}, {1.0, dicke({4, 3})}});  // (D4^1 + D4^3)/sqrt2
    const PureState d42 = dicke({4, 2});
    const cd mu = inner(ghz4p, state);
    const cd nu = inner(d42, state);
    double residual2 = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i)
        residual2 += std::norm(state.amp(i) - mu * ghz4p.amp(i) - nu * d42.amp(i));
    if (std::sqrt(residual2) > 1e-9)
        throw not_in_family_error("decompose_ghz_dicke: state is outside span{GHZ4+, D4^(2)}");
    return {mu, nu};
}

cd inner(const PureState& a, const PureState& b) {
    if (a.n() != b.n()) throw std::domain_error("inner: mismatched qubit counts");
    cd s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a.amp(i)) * b.amp(i);
    return s;
}

double fidelity_pure(const PureState& a, const PureState& b) { return std::norm(inner(a, b)); }

PureState tensor(const PureState& a, const PureState& b) {
    if (a.n() + b.n() > kMaxQubits) throw std::domain_error("tensor: too many qubits");
    std::vector<cd> amp(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amp[(i << b.n()) | j] = a.amp(i) * b.amp(j);
    return PureState(a.n() + b.n(), std::move(amp));
}

PureState permute_qubits(const PureState& state, std::span<const int> perm) {
    const int n = state.n();
    if (static_cast<int>(perm.size()) != n)
        throw std::domain_error("permute_qubits: permutation length mismatch");
    std::vector<cd> amp(state.dim(), cd{0.0, 0.0});
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        std::size_t out = 0;
        for (int q = 1; q <= n; ++q) {
            const int src = perm[q - 1];
            const std::size_t bit = (idx >> (n - src)) & 1u;
            out |= bit << (n - q);
        }
        amp[out] = state.amp(idx);
    }
    return PureState(n, std::move(amp));
}

}  // namespace dsim::symstate
