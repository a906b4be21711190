#pragma once

#include <complex>
#include <vector>

#include "dickesim/symstate.hpp"

namespace dsim {

using cd = std::complex<double>;

/// Hermitian, unit-trace operator on an n-qubit space (row-major dense storage).
/// Produced by lossy postselection; also usable as input to witness evaluation.
class DensityMatrix {
  public:
    DensityMatrix(int n, std::vector<cd> elements);  // validates size, Hermiticity, trace
    static DensityMatrix from_pure(const symstate::PureState& psi);

    int n() const { return n_; }
    std::size_t dim() const { return dim_; }
    cd operator()(std::size_t row, std::size_t col) const { return m_[row * dim_ + col]; }
    const std::vector<cd>& elements() const { return m_; }

    double fidelity(const symstate::PureState& psi) const;  // <psi|rho|psi>
    double purity() const;                                  // Tr[rho^2]
    double min_eigenvalue() const;

  private:
    int n_;
    std::size_t dim_;
    std::vector<cd> m_;
};

}  // namespace dsim
