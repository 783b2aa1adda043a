#include "oe/random_instances.hpp"

#include <cmath>
#include <stdexcept>

#include "oe/entropy.hpp"

namespace oe::rnd {

Matrix ginibre(int dim, Rng& rng) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
    return g;
}

Matrix random_hermitian(int dim, Rng& rng) {
    Matrix g = ginibre(dim, rng);
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(int dim, Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(dim, rng));
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        cxd d = r(i, i);
        q.col(i) *= d / std::abs(d);
    }
    return q;
}

Matrix random_projector(int dim, int rank, Rng& rng) {
    Matrix u = random_unitary(dim, rng);
    Matrix p = Matrix::Zero(dim, dim);
    for (int k = 0; k < rank; ++k) p += u.col(k) * u.col(k).adjoint();
    return p;
}

DensityState random_density(int dim, Rng& rng) {
    Matrix g = ginibre(dim, rng);
    Matrix w = g * g.adjoint();
    return DensityState(w / w.trace().real());
}

DensityState random_pure(int dim, Rng& rng) {
    CVector psi(dim);
    for (int i = 0; i < dim; ++i) psi(i) = rng.cnormal();
    return DensityState::pure(psi);
}

ProbVector random_distribution(int k, Rng& rng) {
    std::vector<double> p(k);
    double sum = 0.0;
    for (double& x : p) {
        x = -std::log(1.0 - rng.uniform01());
        sum += x;
    }
    for (double& x : p) x /= sum;
    return ProbVector(std::move(p));
}

Povm random_povm(int dim, int outcomes, Rng& rng) {
    std::vector<Matrix> as;
    Matrix s = Matrix::Zero(dim, dim);
    for (int i = 0; i < outcomes; ++i) {
        Matrix g = ginibre(dim, rng);
        as.push_back(g * g.adjoint());
        s += as.back();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    Matrix inv_sqrt = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        inv_sqrt += (1.0 / std::sqrt(es.eigenvalues()(i))) * es.eigenvectors().col(i) *
                    es.eigenvectors().col(i).adjoint();
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (int i = 0; i < outcomes; ++i) {
        Matrix e = inv_sqrt * as[i] * inv_sqrt;
        effects.push_back(0.5 * (e + e.adjoint()));
        labels.push_back("m" + std::to_string(i));
    }
    // absorb residual round-off into the last effect
    Matrix resid = Matrix::Identity(dim, dim);
    for (const auto& e : effects) resid -= e;
    effects.back() += resid;
    return Povm(std::move(effects), std::move(labels));
}

Povm random_projective_povm(int dim, int outcomes, Rng& rng) {
    if (outcomes > dim) throw std::invalid_argument("random_projective_povm: outcomes > dim");
    Matrix u = random_unitary(dim, rng);
    // outcomes-1 distinct interior cut points split the columns into
    // nonempty groups
    std::vector<int> cuts = {0, dim};
    while (static_cast<int>(cuts.size()) < outcomes + 1) {
        int c = 1 + static_cast<int>(rng.uniform_index(dim - 1));
        if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Matrix> effects;
    std::vector<std::string> labels;
    for (int g = 0; g < outcomes; ++g) {
        std::vector<int> cols;
        for (int c = cuts[g]; c < cuts[g + 1]; ++c) cols.push_back(c);
        effects.push_back(projector_from_columns(u, cols));
        labels.push_back("p" + std::to_string(g));
    }
    return Povm(std::move(effects), std::move(labels));
}

maxent::Prior random_prior(int dim, int family, Rng& rng) {
    switch (((family % kPriorFamilies) + kPriorFamilies) % kPriorFamilies) {
        case 0:
            return maxent::uniform_prior(dim);
        case 1: {
            Matrix h = random_hermitian(dim, rng);
            Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
            double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
            double e = lo + (0.2 + 0.6 * rng.uniform01()) * (hi - lo);
            return maxent::canonical_prior(h, e);
        }
        case 2: {
            // feasible-by-construction targets: expectations at a random
            // multiplier vector
            std::vector<Matrix> qs = {random_hermitian(dim, rng), random_hermitian(dim, rng)};
            std::vector<double> lam = {rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
            maxent::GibbsPoint gp = maxent::gibbs_point(qs, lam);
            return maxent::charges_prior(qs, gp.expectations);
        }
        case 3: {
            int rank = 1 + static_cast<int>(rng.uniform_index(dim));
            return maxent::microcanonical_prior(random_projector(dim, rank, rng));
        }
        default: {
            Matrix h = random_hermitian(dim, rng);
            DensityState rho0 = random_density(dim, rng);
            DensityState rho_bar = maxent::time_averaged_state(h, rho0);
            maxent::Prior p{rho_bar, von_neumann_entropy(rho_bar), {}, {},
                            maxent::Constraint{maxent::ConstraintKind::TimeAveraged, {h},
                                               {}, maxent::ConstraintMode::Equality}};
            return p;
        }
    }
}

DensityState constrained_state(const maxent::Prior& prior, Rng& rng) {
    const int dim = prior.tau.dim();
    if (prior.provenance.kind == maxent::ConstraintKind::MicrocanonicalProjector) {
        // draw inside the projector subspace: every such state sits on the
        // constraint boundary S(rho;tau) = S(tau)
        const Matrix& pi = prior.provenance.operators[0];
        Matrix g = ginibre(dim, rng);
        Matrix w = pi * (g * g.adjoint()) * pi;
        double tr = w.trace().real();
        if (tr <= 0.0) return prior.tau;
        return DensityState(w / tr);
    }

    DensityState sigma = random_density(dim, rng);
    double s_tau = prior.s_tau;
    ExtReal cross = cross_entropy(sigma, prior.tau);
    if (cross.finite() && cross.value() <= s_tau) return sigma;

    // mix toward the maximal-slack state |top><top| of tau; cross entropy is
    // linear in the state, so the feasible mixing weight is explicit
    int top = 0;
    prior.tau.eigenvalues().maxCoeff(&top);
    DensityState ground = DensityState::pure(prior.tau.eigenvectors().col(top));
    double x_sigma = cross.as_double();
    double x_min = cross_entropy(ground, prior.tau).value();
    if (x_min >= s_tau) return prior.tau;  // degenerate prior, fall back
    if (!cross.finite()) return ground;
    double t_min = (x_sigma - s_tau) / (x_sigma - x_min);
    double t = t_min + (1.0 - t_min) * 0.8 * rng.uniform01();
    return DensityState((1.0 - t) * sigma.matrix() + t * ground.matrix());
}

} // namespace oe::rnd
