#include "oe/measurements.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace oe::meas {

Povm coarse_energy_povm(const EnergyWindowSpec& spec) {
    if (spec.delta_e <= 0.0) throw std::invalid_argument("coarse_energy_povm: delta_e must be > 0");
    if (!is_hermitian(spec.hamiltonian, tol::herm_per_dim * spec.hamiltonian.rows()))
        throw std::invalid_argument("coarse_energy_povm: H not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (spec.hamiltonian + spec.hamiltonian.adjoint()));
    const RVector& e = es.eigenvalues();

    std::map<long, std::vector<int>> windows;  // window index -> eigenvector columns
    for (int k = 0; k < e.size(); ++k) {
        long w = static_cast<long>(std::floor((e(k) - spec.origin) / spec.delta_e));
        windows[w].push_back(k);
    }

    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (const auto& [w, cols] : windows) {
        effects.push_back(projector_from_columns(es.eigenvectors(), cols));
        char buf[48];
        std::snprintf(buf, sizeof(buf), "E=%.9g", spec.origin + (double(w) + 0.5) * spec.delta_e);
        labels.emplace_back(buf);
    }
    return Povm(std::move(effects), std::move(labels));
}

StochasticMap::StochasticMap(Eigen::MatrixXd lam) : lam_(std::move(lam)) {
    if (lam_.rows() < 1 || lam_.cols() < 1) throw std::invalid_argument("StochasticMap: empty");
    if (lam_.minCoeff() < 0.0) throw std::invalid_argument("StochasticMap: negative entry");
    for (Eigen::Index j = 0; j < lam_.cols(); ++j)
        if (std::abs(lam_.col(j).sum() - 1.0) > 1e-12)
            throw std::invalid_argument("StochasticMap: column sum != 1");
}

Povm tensor(const Povm& m_a, const Povm& m_b) {
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (std::size_t x = 0; x < m_a.outcomes(); ++x)
        for (std::size_t y = 0; y < m_b.outcomes(); ++y) {
            effects.push_back(kron(m_a.effect(x), m_b.effect(y)));
            labels.push_back(m_a.labels()[x] + "|" + m_b.labels()[y]);
        }
    return Povm(std::move(effects), std::move(labels));
}

Povm one_sided(const Povm& m_a, int dim_b) {
    if (dim_b < 1) throw std::invalid_argument("one_sided: dim_b must be >= 1");
    Matrix id = Matrix::Identity(dim_b, dim_b);
    std::vector<Matrix> effects;
    for (std::size_t x = 0; x < m_a.outcomes(); ++x) effects.push_back(kron(m_a.effect(x), id));
    return Povm(std::move(effects), m_a.labels());
}

Povm postprocess(const StochasticMap& lam, const Povm& m) {
    if (lam.cols() != static_cast<Eigen::Index>(m.outcomes()))
        throw std::invalid_argument("postprocess: column count != outcome count");
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (Eigen::Index y = 0; y < lam.rows(); ++y) {
        Matrix e = Matrix::Zero(m.dim(), m.dim());
        for (Eigen::Index x = 0; x < lam.cols(); ++x) e += lam.matrix()(y, x) * m.effect(x);
        effects.push_back(std::move(e));
        labels.push_back("y" + std::to_string(y));
    }
    return Povm(std::move(effects), std::move(labels));
}

Povm disjoint_combine(double lambda, const Povm& m, const Povm& m2) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("disjoint_combine: lambda not in [0,1]");
    if (m.dim() != m2.dim()) throw std::invalid_argument("disjoint_combine: dimension mismatch");
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (std::size_t x = 0; x < m.outcomes(); ++x) {
        effects.push_back(lambda * m.effect(x));
        labels.push_back("a:" + m.labels()[x]);
    }
    for (std::size_t y = 0; y < m2.outcomes(); ++y) {
        effects.push_back((1.0 - lambda) * m2.effect(y));
        labels.push_back("b:" + m2.labels()[y]);
    }
    return Povm(std::move(effects), std::move(labels));
}

bool is_projective(const Povm& m, double tol) {
    for (std::size_t x = 0; x < m.outcomes(); ++x) {
        const Matrix& e = m.effect(x);
        if ((e * e - e).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

Eigen::MatrixXd sequential_joint_distribution(const Povm& first, const Povm& second,
                                              const DensityState& rho) {
    if (!is_projective(first))
        throw std::invalid_argument("sequential_joint_distribution: first measurement must be projective");
    if (first.dim() != second.dim() || first.dim() != rho.dim())
        throw std::invalid_argument("sequential_joint_distribution: dimension mismatch");
    Eigen::MatrixXd p(first.outcomes(), second.outcomes());
    for (std::size_t x = 0; x < first.outcomes(); ++x) {
        Matrix post = first.effect(x) * rho.matrix() * first.effect(x);
        for (std::size_t y = 0; y < second.outcomes(); ++y)
            p(x, y) = std::max(0.0, (second.effect(y) * post).trace().real());
    }
    return p;
}

} // namespace oe::meas
