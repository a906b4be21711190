#include "dickesim/density.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace dsim {

DensityMatrix::DensityMatrix(int n, std::vector<cd> elements)
    : n_(n), dim_(std::size_t{1} << n), m_(std::move(elements)) {
    if (n < 1 || n > symstate::kMaxQubits)
        throw std::domain_error("DensityMatrix: qubit count out of range");
    if (m_.size() != dim_ * dim_)
        throw std::domain_error("DensityMatrix: element count must be 4^n");
    double herm = 0.0;
    cd tr{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i) {
        tr += m_[i * dim_ + i];
        for (std::size_t j = 0; j < dim_; ++j)
            herm = std::max(herm, std::abs(m_[i * dim_ + j] - std::conj(m_[j * dim_ + i])));
    }
    if (herm > 1e-9) throw std::domain_error("DensityMatrix: not Hermitian");
    if (std::abs(tr - 1.0) > 1e-9) throw std::domain_error("DensityMatrix: trace must be 1");
}

DensityMatrix DensityMatrix::from_pure(const symstate::PureState& psi) {
    const std::size_t d = psi.dim();
    std::vector<cd> m(d * d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m[i * d + j] = psi.amp(i) * std::conj(psi.amp(j));
    return DensityMatrix(psi.n(), std::move(m));
}

double DensityMatrix::fidelity(const symstate::PureState& psi) const {
    if (psi.n() != n_) throw std::domain_error("fidelity: dimension mismatch");
    cd s{0.0, 0.0};
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            s += std::conj(psi.amp(i)) * m_[i * dim_ + j] * psi.amp(j);
    return s.real();
}

double DensityMatrix::purity() const {
    double p = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            p += (m_[i * dim_ + j] * m_[j * dim_ + i]).real();
    return p;
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::MatrixXcd rho(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) rho(i, j) = m_[i * dim_ + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace dsim
