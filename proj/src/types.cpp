#include "oe/types.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace oe {

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
    double sum = 0.0;
    for (double x : p_) {
        if (x < 0.0) throw std::invalid_argument("ProbVector: negative entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > tol::trace)
        throw std::invalid_argument("ProbVector: sum deviates from 1 by " + std::to_string(sum - 1.0));
}

bool is_hermitian(const Matrix& m, double t) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= t;
}

DensityState::DensityState(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw std::invalid_argument("DensityState: matrix not square");
    dim_ = static_cast<int>(m.rows());
    if (!is_hermitian(m, tol::herm_per_dim * dim_))
        throw std::invalid_argument("DensityState: not Hermitian within tolerance");
    double tr = m.trace().real();
    if (std::abs(tr - 1.0) > tol::trace)
        throw std::invalid_argument("DensityState: trace deviates from 1");

    mat_ = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("DensityState: eigendecomposition failed");
    evals_ = es.eigenvalues();
    evecs_ = es.eigenvectors();
    double clamped_sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
        if (evals_(i) < -tol::eig_negative)
            throw std::invalid_argument("DensityState: eigenvalue below -1e-10");
        if (evals_(i) < 0.0) evals_(i) = 0.0;
        clamped_sum += evals_(i);
    }
    evals_ /= clamped_sum;  // exact unit trace on the spectrum
}

DensityState DensityState::pure(const CVector& psi) {
    double n = psi.norm();
    if (n == 0.0) throw std::invalid_argument("DensityState::pure: zero vector");
    CVector v = psi / n;
    DensityState s;
    s.dim_ = static_cast<int>(v.size());
    s.mat_ = v * v.adjoint();
    s.evals_ = RVector::Zero(s.dim_);
    s.evals_(s.dim_ - 1) = 1.0;
    // eigenvector columns: arbitrary orthonormal completion is not needed by
    // the spectral helpers since the zero eigenvalues never contribute; keep
    // psi in the last column and zeros elsewhere.
    s.evecs_ = Matrix::Zero(s.dim_, s.dim_);
    s.evecs_.col(s.dim_ - 1) = v;
    return s;
}

Matrix DensityState::apply_spectral(const std::function<double(double)>& f) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        double fi = f(evals_(i));
        if (fi != 0.0) out += fi * (evecs_.col(i) * evecs_.col(i).adjoint());
    }
    return out;
}

Matrix DensityState::spectral_pow(cxd z) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
        if (evals_(i) > 0.0) out += std::pow(cxd(evals_(i), 0.0), z) * (evecs_.col(i) * evecs_.col(i).adjoint());
    }
    return out;
}

Povm::Povm(std::vector<Matrix> effects, std::vector<std::string> labels)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
    if (effects_.empty()) throw std::invalid_argument("Povm: no effects");
    if (labels_.size() != effects_.size())
        throw std::invalid_argument("Povm: labels not in bijection with effects");
    dim_ = static_cast<int>(effects_[0].rows());
    std::set<std::string> seen;
    Matrix sum = Matrix::Zero(dim_, dim_);
    for (std::size_t x = 0; x < effects_.size(); ++x) {
        const Matrix& e = effects_[x];
        if (e.rows() != dim_ || e.cols() != dim_)
            throw std::invalid_argument("Povm: inconsistent effect dimensions");
        if (!is_hermitian(e, tol::herm_per_dim * dim_))
            throw std::invalid_argument("Povm: effect not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (e + e.adjoint()), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol::eig_negative)
            throw std::invalid_argument("Povm: effect not PSD");
        if (!seen.insert(labels_[x]).second)
            throw std::invalid_argument("Povm: duplicate label '" + labels_[x] + "'");
        sum += e;
    }
    if ((sum - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > tol::herm_per_dim * dim_)
        throw std::invalid_argument("Povm: effects do not sum to identity");
}

Povm Povm::trivial(int dim) {
    return Povm({Matrix::Identity(dim, dim)}, {"all"});
}

Povm Povm::basis(int dim) {
    std::vector<Matrix> eff;
    std::vector<std::string> lab;
    for (int k = 0; k < dim; ++k) {
        Matrix e = Matrix::Zero(dim, dim);
        e(k, k) = 1.0;
        eff.push_back(e);
        lab.push_back(std::to_string(k));
    }
    return Povm(std::move(eff), std::move(lab));
}

const SeriesTrack& EntropySeries::track(const std::string& label) const {
    for (const auto& tr : tracks)
        if (tr.label == label) return tr;
    throw std::out_of_range("EntropySeries: no track '" + label + "'");
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix partial_trace_b(const Matrix& m, int da, int db) {
    Matrix out = Matrix::Zero(da, da);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
}

Matrix partial_trace_a(const Matrix& m, int da, int db) {
    Matrix out = Matrix::Zero(db, db);
    for (int k = 0; k < db; ++k)
        for (int l = 0; l < db; ++l)
            for (int i = 0; i < da; ++i) out(k, l) += m(i * db + k, i * db + l);
    return out;
}

Matrix projector_from_columns(const Matrix& vecs, const std::vector<int>& cols) {
    Matrix out = Matrix::Zero(vecs.rows(), vecs.rows());
    for (int c : cols) out += vecs.col(c) * vecs.col(c).adjoint();
    return out;
}

} // namespace oe
