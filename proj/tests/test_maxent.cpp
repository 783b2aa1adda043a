#include <doctest.h>

#include <cmath>

#include "oe/entropy.hpp"
#include "oe/maxent.hpp"
#include "oe/measurements.hpp"
#include "oe/random_instances.hpp"
#include "oe/rmt.hpp"

using namespace oe;
using namespace oe::maxent;

TEST_SUITE("maxent") {

TEST_CASE("canonical prior: spectral mean, pinned qubit beta, zero-temperature limit") {
    Matrix h = Matrix::Zero(3, 3);
    h(0, 0) = -1.0;
    h(1, 1) = 0.5;
    h(2, 2) = 2.0;
    Prior p0 = canonical_prior(h, h.trace().real() / 3.0);
    CHECK(p0.multipliers[0] == doctest::Approx(0.0).epsilon(1e-9));
    CHECK((p0.tau.matrix() - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-9);

    // H = diag(0,1), target 0.25: e^{-b}/(1+e^{-b}) = 1/4 -> beta = ln 3
    Matrix h2 = Matrix::Zero(2, 2);
    h2(1, 1) = 1.0;
    Prior p = canonical_prior(h2, 0.25);
    CHECK(p.multipliers[0] == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK(p.tau.matrix()(0, 0).real() == doctest::Approx(0.75).epsilon(1e-9));

    // cold limit: tau approaches the ground state projector
    Prior cold = canonical_prior(h2, 1e-4);
    CHECK(cold.tau.matrix()(0, 0).real() > 0.9998);
    CHECK(von_neumann_entropy(cold.tau) < 0.01);

    CHECK_THROWS_AS(canonical_prior(h2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(canonical_prior(h2, 0.0), std::invalid_argument);
}

TEST_CASE("canonical prior supports negative temperature targets") {
    Matrix h = Matrix::Zero(2, 2);
    h(1, 1) = 1.0;
    Prior hot = canonical_prior(h, 0.75);
    CHECK(hot.multipliers[0] == doctest::Approx(-std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("charges prior: single-charge reduction and qubit Z/X targets") {
    Rng rng(41);
    Matrix h = rnd::random_hermitian(3, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    double e = 0.3 * es.eigenvalues().minCoeff() + 0.7 * es.eigenvalues().maxCoeff();
    Prior via_canonical = canonical_prior(h, e);
    Prior via_charges = charges_prior({h}, {e});
    CHECK((via_canonical.tau.matrix() - via_charges.tau.matrix()).cwiseAbs().maxCoeff() < 1e-8);

    Matrix z = Matrix::Zero(2, 2), x = Matrix::Zero(2, 2);
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    Prior p = charges_prior({z, x}, {0.3, 0.2});
    CHECK((p.tau.matrix() * z).trace().real() == doctest::Approx(0.3).epsilon(1e-8));
    CHECK((p.tau.matrix() * x).trace().real() == doctest::Approx(0.2).epsilon(1e-8));

    // oracle: dense 2-parameter grid search minimizing the residual, then
    // comparing the implied state
    double best = 1e9, best_lz = 0, best_lx = 0;
    for (int i = -60; i <= 60; ++i)
        for (int j = -60; j <= 60; ++j) {
            double lz = i * 0.02, lx = j * 0.02;
            GibbsPoint gp = gibbs_point({z, x}, {lz, lx});
            double r = std::abs(gp.expectations[0] - 0.3) + std::abs(gp.expectations[1] - 0.2);
            if (r < best) {
                best = r;
                best_lz = lz;
                best_lx = lx;
            }
        }
    CHECK(std::abs(best_lz - p.multipliers[0]) < 0.03);
    CHECK(std::abs(best_lx - p.multipliers[1]) < 0.03);

    // unconstrained limit: targets at the spectral means of commuting charges
    Matrix q1 = Matrix::Zero(2, 2), q2 = Matrix::Zero(2, 2);
    q1(0, 0) = 1.0;
    q2(0, 0) = 0.5;
    q2(1, 1) = 1.5;
    Prior flat = charges_prior({q1, q2}, {0.5, 1.0});
    CHECK(std::abs(flat.multipliers[0]) < 1e-6);
    CHECK(std::abs(flat.multipliers[1]) < 1e-6);

    CHECK_THROWS(charges_prior({z}, {1.5}));  // infeasible: |<Z>| <= 1
}

TEST_CASE("microcanonical prior") {
    CHECK(microcanonical_prior(Matrix::Identity(5, 5)).s_tau ==
          doctest::Approx(std::log(5.0)).epsilon(1e-12));
    Rng rng(43);
    Matrix pi = rnd::random_projector(8, 3, rng);
    Prior p = microcanonical_prior(pi);
    CHECK(p.s_tau == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK_THROWS_AS(microcanonical_prior(Matrix::Zero(4, 4)), std::invalid_argument);
    // energy-shell projector from a window POVM matches the eigenvector construction
    Matrix h = rnd::random_hermitian(6, rng);
    meas::EnergyWindowSpec spec{0.8, 0.0, h};
    Povm windows = meas::coarse_energy_povm(spec);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Matrix& shell = windows.effect(0);
    std::vector<int> cols;
    for (int k = 0; k < 6; ++k)
        if ((shell * es.eigenvectors().col(k)).norm() > 0.5) cols.push_back(k);
    Matrix direct = projector_from_columns(es.eigenvectors(), cols);
    CHECK((microcanonical_prior(shell).tau.matrix() - direct / double(cols.size()))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
}

TEST_CASE("check_constraint: identity, uniform prior, canonical sign") {
    Rng rng(47);
    Prior p = rnd::random_prior(4, 1, rng);
    ConstraintCheck self = check_constraint(p.tau, p);
    CHECK(self.satisfied);
    CHECK(self.slack == doctest::Approx(0.0).epsilon(1e-9));

    Prior unif = uniform_prior(4);
    DensityState rho = rnd::random_density(4, rng);
    ConstraintCheck uc = check_constraint(rho, unif);
    CHECK(uc.slack == doctest::Approx(0.0).epsilon(1e-9));  // ln d - ln d

    // canonical slack = beta (E - tr rho H)
    Matrix h = rnd::random_hermitian(3, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    double e = 0.7 * es.eigenvalues().minCoeff() + 0.3 * es.eigenvalues().maxCoeff();
    Prior cp = canonical_prior(h, e);
    DensityState probe = rnd::random_density(3, rng);
    double expected = cp.multipliers[0] * (e - (probe.matrix() * h).trace().real());
    ConstraintCheck cc = check_constraint(probe, cp);
    CHECK(cc.slack == doctest::Approx(expected).epsilon(1e-8));
    if ((probe.matrix() * h).trace().real() > e && cp.multipliers[0] > 0) CHECK_FALSE(cc.satisfied);
}

TEST_CASE("time-averaged state: stationary input, full dephasing, constraint") {
    Rng rng(53);
    Matrix h = rnd::random_hermitian(4, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);

    // [rho, H] = 0 -> unchanged
    ProbVector w = rnd::random_distribution(4, rng);
    Matrix stat = Matrix::Zero(4, 4);
    for (int k = 0; k < 4; ++k)
        stat += w[k] * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
    DensityState rho_stat(stat);
    CHECK((time_averaged_state(h, rho_stat).matrix() - stat).cwiseAbs().maxCoeff() < 1e-9);

    // pure state with nondegenerate H -> diagonal of |c_k|^2
    DensityState psi = rnd::random_pure(4, rng);
    DensityState bar = time_averaged_state(h, psi);
    for (int k = 0; k < 4; ++k) {
        double ck = std::norm((es.eigenvectors().col(k).adjoint() * psi.matrix() *
                               es.eigenvectors().col(k))(0));
        double wk = (es.eigenvectors().col(k).adjoint() * bar.matrix() * es.eigenvectors().col(k))(0)
                        .real();
        CHECK(wk == doctest::Approx(std::sqrt(ck)).epsilon(1e-8));
    }

    // S(rho(t); rho_bar) = S(rho_bar) along the trajectory
    for (double t : {0.3, 2.7, 9.1}) {
        DensityState rho_t = rmt::unitary_evolve(es.eigenvalues(), es.eigenvectors(), psi, t);
        CHECK(cross_entropy(rho_t, bar).value() ==
              doctest::Approx(von_neumann_entropy(bar)).epsilon(1e-8));
    }

    // degenerate block is projected, not dephased
    Matrix hd = Matrix::Zero(3, 3);
    hd(0, 0) = hd(1, 1) = 1.0;
    hd(2, 2) = 2.0;
    Matrix rho_m = Matrix::Identity(3, 3) / 3.0;
    rho_m(0, 1) = rho_m(1, 0) = 0.2;
    rho_m(0, 2) = rho_m(2, 0) = 0.2;
    DensityState dep = time_averaged_state(hd, DensityState(rho_m));
    CHECK(std::abs(dep.matrix()(0, 1)) == doctest::Approx(0.2).epsilon(1e-9));  // kept
    CHECK(std::abs(dep.matrix()(0, 2)) < 1e-12);                               // dephased
}

} // TEST_SUITE
