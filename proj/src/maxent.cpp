#include "oe/maxent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "oe/entropy.hpp"

namespace oe::maxent {

namespace {

// Gibbs weights w_i = e^{-a_i}/Z computed with the usual max-shift.
RVector gibbs_weights(const RVector& a) {
    double amin = a.minCoeff();
    RVector w = (-(a.array() - amin)).exp();
    return w / w.sum();
}

// mean energy of e^{-beta e}/Z
double canonical_energy(const RVector& e, double beta) {
    RVector w = gibbs_weights(beta * e);
    return (w.array() * e.array()).sum();
}

} // namespace

Prior uniform_prior(int dim) {
    Prior p{DensityState(Matrix::Identity(dim, dim) / double(dim)),
            std::log(double(dim)),
            {},
            {},
            Constraint{ConstraintKind::TrivialUniform, {}, {}, ConstraintMode::Inequality}};
    return p;
}

Prior canonical_prior(const Matrix& h, double e_target) {
    if (!is_hermitian(h, tol::herm_per_dim * h.rows()))
        throw std::invalid_argument("canonical_prior: H not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const RVector& e = es.eigenvalues();
    double emin = e.minCoeff(), emax = e.maxCoeff();
    if (!(e_target > emin && e_target < emax))
        throw std::invalid_argument("canonical_prior: target outside open spectral interval");

    // E(beta) is monotone decreasing from emax (beta -> -inf) to emin
    // (beta -> +inf). Bracket by doubling, bisect, then polish with Newton
    // using E'(beta) = -Var(H).
    double lo = -1.0, hi = 1.0;
    while (canonical_energy(e, lo) < e_target) lo *= 2.0;
    while (canonical_energy(e, hi) > e_target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi) + 1.0); ++it) {
        double mid = 0.5 * (lo + hi);
        (canonical_energy(e, mid) > e_target ? lo : hi) = mid;
    }
    double beta = 0.5 * (lo + hi);
    double scale = std::max({std::abs(e_target), 1e-3 * (emax - emin)});
    for (int it = 0; it < 8; ++it) {
        RVector w = gibbs_weights(beta * e);
        double mean = (w.array() * e.array()).sum();
        double var = (w.array() * (e.array() - mean).square()).sum();
        if (std::abs(mean - e_target) <= 1e-10 * scale || var == 0.0) break;
        beta += (mean - e_target) / var;
    }
    if (std::abs(canonical_energy(e, beta) - e_target) > 1e-8 * scale)
        throw std::runtime_error("canonical_prior: beta solve failed to converge");

    RVector w = gibbs_weights(beta * e);
    Matrix tau = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
    Prior p{DensityState(tau), 0.0, {beta}, {std::abs(canonical_energy(e, beta) - e_target)},
            Constraint{ConstraintKind::CanonicalEnergy, {h}, {e_target}, ConstraintMode::Equality}};
    p.s_tau = von_neumann_entropy(p.tau);
    return p;
}

GibbsPoint gibbs_point(const std::vector<Matrix>& ops, const std::vector<double>& lambda) {
    const int k = static_cast<int>(ops.size());
    const int d = static_cast<int>(ops[0].rows());
    Matrix a = Matrix::Zero(d, d);
    for (int i = 0; i < k; ++i) a += lambda[i] * ops[i];
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()));
    const RVector& ev = es.eigenvalues();
    RVector w = gibbs_weights(ev);
    const Matrix& u = es.eigenvectors();

    GibbsPoint gp;
    gp.tau = u * w.asDiagonal() * u.adjoint();
    gp.expectations.resize(k);
    std::vector<Matrix> ops_eig(k);
    for (int i = 0; i < k; ++i) {
        ops_eig[i] = u.adjoint() * ops[i] * u;
        gp.expectations[i] = (gp.tau * ops[i]).trace().real();
    }

    // Kubo-Mori kernel: kern(m,n) = int_0^1 w_m^s w_n^{1-s} ds, the divided
    // difference of e^{-x} at the shifted eigenvalues.
    Eigen::MatrixXd kern(d, d);
    for (int m = 0; m < d; ++m)
        for (int n = 0; n < d; ++n) {
            double x = ev(m), y = ev(n);
            if (std::abs(x - y) < 1e-12 * (1.0 + std::abs(x) + std::abs(y))) {
                kern(m, n) = 0.5 * (w(m) + w(n));
            } else if (std::abs(x - y) > 0.5) {
                kern(m, n) = (w(m) - w(n)) / (y - x);
            } else {
                kern(m, n) = w(n) * std::expm1(y - x) / (y - x);
            }
        }

    gp.jacobian.resize(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            // d<ops_i>/d lambda_j = <ops_i><ops_j> - int_0^1 tr(tau^s B_j tau^{1-s} B_i) ds
            double acc = 0.0;
            for (int m = 0; m < d; ++m)
                for (int n = 0; n < d; ++n)
                    acc += (ops_eig[j](m, n) * ops_eig[i](n, m)).real() * kern(m, n);
            gp.jacobian(i, j) = gp.expectations[i] * gp.expectations[j] - acc;
        }
    return gp;
}

Prior charges_prior(const std::vector<Matrix>& qs, const std::vector<double>& cs) {
    if (qs.empty() || qs.size() != cs.size())
        throw std::invalid_argument("charges_prior: operators/targets mismatch");
    for (const auto& q : qs)
        if (!is_hermitian(q, tol::herm_per_dim * q.rows()))
            throw std::invalid_argument("charges_prior: charge not Hermitian");
    const int k = static_cast<int>(qs.size());

    std::vector<double> scale(k);
    for (int i = 0; i < k; ++i) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(qs[i], Eigen::EigenvaluesOnly);
        scale[i] = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    }

    std::vector<double> lambda(k, 0.0);
    GibbsPoint gp = gibbs_point(qs, lambda);
    auto resid_norm = [&](const GibbsPoint& g) {
        double r = 0.0;
        for (int i = 0; i < k; ++i) r = std::max(r, std::abs(g.expectations[i] - cs[i]) / scale[i]);
        return r;
    };

    double r0 = resid_norm(gp);
    for (int it = 0; it < 200 && r0 > 1e-9; ++it) {
        Eigen::VectorXd f(k);
        for (int i = 0; i < k; ++i) f(i) = gp.expectations[i] - cs[i];
        Eigen::VectorXd step = gp.jacobian.fullPivLu().solve(-f);
        if (!step.allFinite()) throw std::runtime_error("charges_prior: singular Jacobian");

        // damped update: halve the step while the residual increases
        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            std::vector<double> trial(lambda);
            for (int i = 0; i < k; ++i) trial[i] += alpha * step(i);
            GibbsPoint gt = gibbs_point(qs, trial);
            double rt = resid_norm(gt);
            if (rt < r0) {
                lambda = trial;
                gp = std::move(gt);
                r0 = rt;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    if (r0 > 1e-8)
        throw std::runtime_error("charges_prior: no convergence after 200 iterations (infeasible targets?)");

    Prior p{DensityState(gp.tau), 0.0, lambda, {},
            Constraint{ConstraintKind::CanonicalCharges, qs, cs, ConstraintMode::Equality}};
    for (int i = 0; i < k; ++i) p.residuals.push_back(std::abs(gp.expectations[i] - cs[i]));
    p.s_tau = von_neumann_entropy(p.tau);
    return p;
}

Prior microcanonical_prior(const Matrix& pi) {
    if (!is_hermitian(pi, tol::herm_per_dim * pi.rows()))
        throw std::invalid_argument("microcanonical_prior: Pi not Hermitian");
    if ((pi * pi - pi).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("microcanonical_prior: Pi is not a projector");
    double w = pi.trace().real();
    if (w < 0.5) throw std::invalid_argument("microcanonical_prior: zero projector");
    Prior p{DensityState(pi / w), std::log(w), {}, {},
            Constraint{ConstraintKind::MicrocanonicalProjector, {pi}, {}, ConstraintMode::Equality}};
    p.s_tau = von_neumann_entropy(p.tau);
    return p;
}

ConstraintCheck check_constraint(const DensityState& rho, const Prior& prior) {
    ExtReal cross = cross_entropy(rho, prior.tau);
    ConstraintCheck out;
    if (!cross.finite()) {
        out.slack = -HUGE_VAL;
        out.satisfied = false;
        return out;
    }
    out.slack = prior.s_tau - cross.value();
    if (prior.provenance.mode == ConstraintMode::Equality)
        out.satisfied = std::abs(out.slack) <= 1e-8;
    else
        out.satisfied = out.slack >= -1e-8;
    return out;
}

DensityState time_averaged_state(const Matrix& h, const DensityState& rho) {
    if (h.rows() != rho.dim()) throw std::invalid_argument("time_averaged_state: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    const RVector& e = es.eigenvalues();
    const Matrix& u = es.eigenvectors();
    const int d = rho.dim();
    double range = e(d - 1) - e(0);
    double gap_tol = 1e-9 * std::max(range, 1.0);

    // rho in the energy eigenbasis, block-projected onto degenerate groups
    Matrix r = u.adjoint() * rho.matrix() * u;
    Matrix out = Matrix::Zero(d, d);
    int start = 0;
    while (start < d) {
        int end = start + 1;
        while (end < d && e(end) - e(end - 1) <= gap_tol) ++end;
        out.block(start, start, end - start, end - start) = r.block(start, start, end - start, end - start);
        start = end;
    }
    Matrix avg = u * out * u.adjoint();
    DensityState result(avg);
    double comm = (avg * h - h * avg).cwiseAbs().maxCoeff();
    if (comm > 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff()))
        throw std::logic_error("time_averaged_state: result not stationary");
    return result;
}

} // namespace oe::maxent
