#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "dickesim/errors.hpp"

// Exact algebra of few-qubit polarization states: Dicke states, superpositions,
// single-qubit projective measurements and local (possibly non-unitary) operators.
//
// Conventions, fixed project-wide:
//   - basis index bits: qubit 1 = most significant bit, bit 0 = |H>, bit 1 = |V>
//   - a projector direction (alpha, eps) denotes |v> = alpha|H> + beta e^{i eps}|V>
//     with beta = sqrt(1 - alpha^2); measuring "v" leaves the partial inner
//     product <v|psi> on the remaining qubits.

namespace dsim::symstate {

using cd = std::complex<double>;

inline constexpr int kMaxQubits = 8;
inline constexpr double kNormTol = 1e-12;
// Probability below this counts as an annihilated projection.
inline constexpr double kAnnihilationTol = 1e-12;

/// Normalized pure state of n qubits, dense over the 2^n computational basis.
class PureState {
  public:
    // Normalizes the amplitude vector; throws degenerate_input_error on (near) zero
    // input and std::domain_error for bad sizes or n outside 1..kMaxQubits.
    PureState(int n, std::vector<cd> amplitudes);

    // Computational basis ket from a string over {H, V}, e.g. "HHV".
    static PureState basis(std::string_view kets);

    int n() const { return n_; }
    std::size_t dim() const { return amp_.size(); }
    const std::vector<cd>& amplitudes() const { return amp_; }
    cd amp(std::size_t index) const { return amp_[index]; }

    double norm_squared() const;

    // Global phase fixed so the first nonzero amplitude is real and positive.
    PureState canonical() const;

  private:
    int n_;
    std::vector<cd> amp_;
};

struct DickeSpec {
    int n;
    int m;  // excitation (V) count, 0 <= m <= n
};

/// Single-qubit projection direction; beta is derived so alpha^2 + beta^2 = 1 exactly.
struct ProjectorSpec {
    ProjectorSpec(double alpha, double eps = 0.0);
    double alpha;
    double eps;  // stored reduced to [0, 2pi)
    double beta() const;
    cd ket_h() const { return alpha; }
    cd ket_v() const;  // beta e^{i eps}
};

/// 2x2 single-qubit operator. Unitary operators are validated on construction;
/// filters only need to be invertible.
class LocalOperator {
  public:
    static LocalOperator unitary(const std::array<cd, 4>& m);  // row-major
    static LocalOperator filter(const std::array<cd, 4>& m);

    cd operator()(int row, int col) const { return m_[2 * row + col]; }
    bool is_unitary() const { return unitary_; }
    cd det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  private:
    LocalOperator(const std::array<cd, 4>& m, bool unitary) : m_(m), unitary_(unitary) {}
    std::array<cd, 4> m_;
    bool unitary_;
};

LocalOperator identity_op();
LocalOperator pauli_x();
LocalOperator pauli_y();
LocalOperator pauli_z();
LocalOperator hadamard();

/// |D_n^(m)>: equal superposition of all basis strings with m V bits.
PureState dicke(const DickeSpec& spec);

/// Normalized linear combination; all terms must share the qubit count.
PureState superpose(const std::vector<std::pair<cd, PureState>>& terms);

/// Projects `qubit` (1-based) onto the direction of `proj` and returns the
/// normalized conditional (n-1)-qubit state together with the outcome probability.
std::pair<PureState, double> project_qubit(const PureState& state, int qubit,
                                           const ProjectorSpec& proj);

/// Applies one local operator per qubit; returns the renormalized result and the
/// squared pre-normalization norm (success probability for trace-reducing filters).
std::pair<PureState, double> apply_local(const PureState& state,
                                         std::span<const LocalOperator> ops);

/// Five-qubit superposition alpha|D_5^(2)> + beta e^{i eps}|D_5^(3)>.
PureState delta5(double alpha, double eps);

// Closed-form results of projecting delta5 once (delta4) and twice (delta3);
// each equals the corresponding project_qubit pipeline up to global phase.
PureState delta4_formula(double alpha, double eps, double alpha1, double eps1);
PureState delta3(double alpha, double eps, double alpha1, double eps1, double alpha2,
                 double eps2);

/// Coefficients (mu, nu) of a 4-qubit state in span{|GHZ_4^+>, |D_4^(2)>}.
/// Throws not_in_family_error when the residual exceeds 1e-9.
std::pair<cd, cd> decompose_ghz_dicke(const PureState& state);

cd inner(const PureState& a, const PureState& b);
double fidelity_pure(const PureState& a, const PureState& b);  // |<a|b>|^2

/// Tensor product (a occupies the most significant qubits).
PureState tensor(const PureState& a, const PureState& b);

/// Relabels qubits: qubit q of the result is qubit perm[q-1] of the input.
PureState permute_qubits(const PureState& state, std::span<const int> perm);

}  // namespace dsim::symstate
