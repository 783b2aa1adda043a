#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oe/entropy.hpp"
#include "oe/maxent.hpp"
#include "oe/measurements.hpp"
#include "oe/random_instances.hpp"

using namespace oe;

namespace {

DensityState diag_state(std::initializer_list<double> d) {
    Matrix m = Matrix::Zero(d.size(), d.size());
    int i = 0;
    for (double v : d) m(i, i) = v, ++i;
    return DensityState(m);
}

} // namespace

TEST_SUITE("entropy-core") {

TEST_CASE("shannon entropy on pinned distributions") {
    CHECK(shannon_entropy(ProbVector({1.0, 0.0, 0.0})) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(shannon_entropy(ProbVector({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // direct high-precision evaluation of -0.75 ln 0.75 - 0.25 ln 0.25
    CHECK(shannon_entropy(ProbVector({0.75, 0.25})) == doctest::Approx(0.5623351446188083).epsilon(1e-12));
}

TEST_CASE("von Neumann entropy: pure, maximally mixed, diagonal") {
    CVector e0(2);
    e0 << 1.0, 0.0;
    CHECK(von_neumann_entropy(DensityState::pure(e0)) == doctest::Approx(0.0));
    DensityState mix(Matrix::Identity(4, 4) / 4.0);
    CHECK(von_neumann_entropy(mix) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(von_neumann_entropy(diag_state({0.75, 0.25})) ==
          doctest::Approx(0.5623351446188083).epsilon(1e-12));
}

TEST_CASE("relative entropy: identity, pinned value, disjoint supports") {
    DensityState rho = diag_state({0.75, 0.25});
    DensityState half(Matrix::Identity(2, 2) / 2.0);
    CHECK(relative_entropy(rho, rho).value() == doctest::Approx(0.0).epsilon(1e-12));
    // sum p ln(2p) evaluated directly
    CHECK(relative_entropy(rho, half).value() == doctest::Approx(0.13081203594113694).epsilon(1e-10));
    CVector a(2), b(2);
    a << 1, 0;
    b << 0, 1;
    CHECK(relative_entropy(DensityState::pure(a), DensityState::pure(b)).is_pos_inf());
    CHECK_THROWS_AS(relative_entropy(rho, DensityState(Matrix::Identity(3, 3) / 3.0)),
                    std::invalid_argument);
}

TEST_CASE("cross entropy values and the H + D identity") {
    DensityState rho = diag_state({0.75, 0.25});
    CHECK(cross_entropy(rho, rho).value() == doctest::Approx(0.5623351446188083).epsilon(1e-10));
    DensityState quarter(Matrix::Identity(4, 4) / 4.0);
    Rng rng11(11);
    DensityState any4 = rnd::random_density(4, rng11);
    CHECK(cross_entropy(any4, quarter).value() == doctest::Approx(std::log(4.0)).epsilon(1e-10));
    CHECK(cross_entropy(diag_state({0.9, 0.1}), diag_state({0.5, 0.5})).value() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-10));

    Rng rng(5);
    for (int it = 0; it < 25; ++it) {
        DensityState r = rnd::random_density(3, rng), s = rnd::random_density(3, rng);
        CHECK(cross_entropy(r, s).value() ==
              doctest::Approx(von_neumann_entropy(r) + relative_entropy(r, s).value()).epsilon(1e-9));
    }
}

TEST_CASE("measure: trivial, diagonal readout, proportional effects") {
    DensityState rho = diag_state({0.75, 0.25});
    ProbVector p1 = measure(Povm::trivial(2), rho);
    CHECK(p1[0] == doctest::Approx(1.0).epsilon(1e-12));
    ProbVector p2 = measure(Povm::basis(2), rho);
    CHECK(p2[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(p2[1] == doctest::Approx(0.25).epsilon(1e-12));
    Matrix half = 0.5 * Matrix::Identity(2, 2);
    Povm prop({half, half}, {"a", "b"});
    Rng rng3(3);
    ProbVector p3 = measure(prop, rnd::random_density(2, rng3));
    CHECK(p3[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("measured relative entropy: trivial, classical reduction, indistinguishable") {
    DensityState rho = diag_state({0.75, 0.25});
    DensityState half(Matrix::Identity(2, 2) / 2.0);
    CHECK(measured_relative_entropy(Povm::trivial(2), rho, half).value() ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(measured_relative_entropy(Povm::basis(2), rho, half).value() ==
          doctest::Approx(0.13081203594113694).epsilon(1e-10));
    // indistinguishable under proportional effects
    Matrix h2 = 0.5 * Matrix::Identity(2, 2);
    Povm prop({h2, h2}, {"a", "b"});
    Rng rng(7);
    DensityState sig = rnd::random_density(2, rng);
    CHECK(measured_relative_entropy(prop, rho, sig).value() == doctest::Approx(0.0).epsilon(1e-12));
    // bounded by the quantum relative entropy
    for (int it = 0; it < 40; ++it) {
        DensityState r = rnd::random_density(3, rng), s = rnd::random_density(3, rng);
        Povm m = rnd::random_povm(3, 3, rng);
        CHECK(measured_relative_entropy(m, r, s).as_double() <=
              relative_entropy(r, s).as_double() + 1e-9);
    }
}

TEST_CASE("observational entropy: uniform prior reduces to traditional OE") {
    Rng rng(13);
    for (int it = 0; it < 20; ++it) {
        int d = 2 + static_cast<int>(rng.uniform_index(4));
        DensityState rho = rnd::random_density(d, rng);
        Povm m = rnd::random_projective_povm(d, 1 + static_cast<int>(rng.uniform_index(d - 1)), rng);
        DensityState unif(Matrix::Identity(d, d) / double(d));
        EntropyReport rep = observational_entropy(m, unif, rho);
        CHECK(rep.s_oe.value() == doctest::Approx(traditional_oe(m, rho)).epsilon(1e-10));
    }
}

TEST_CASE("observational entropy: trivial measurement saturates S(tau)") {
    Rng rng(17);
    DensityState tau = rnd::random_density(4, rng);
    DensityState rho = rnd::random_density(4, rng);
    EntropyReport rep = observational_entropy(Povm::trivial(4), tau, rho);
    CHECK(rep.s_oe.value() == doctest::Approx(von_neumann_entropy(tau)).epsilon(1e-10));
}

TEST_CASE("observational entropy: commuting optimal case hits S(rho)") {
    DensityState rho = diag_state({0.75, 0.25});
    DensityState half(Matrix::Identity(2, 2) / 2.0);
    EntropyReport rep = observational_entropy(Povm::basis(2), half, rho);
    CHECK(rep.s_oe.value() == doctest::Approx(0.5623351446188083).epsilon(1e-10));
    CHECK(rep.s_oe.value() == doctest::Approx(std::log(2.0) - 0.13081203594113694).epsilon(1e-9));
    CHECK(rep.d_m.value() == doctest::Approx(0.13081203594113694).epsilon(1e-9));
    // report invariants
    CHECK(rep.s_oe.value() == doctest::Approx(rep.s_tau - rep.d_m.value()));
    CHECK(rep.s_oe.value() <= rep.s_tau + 1e-9);
}

TEST_CASE("minus-infinity flag when p_x > 0 on a zero-volume macrostate") {
    // tau supported on |0> only, rho with weight on |1>, basis measurement
    Matrix tau_m = Matrix::Zero(2, 2);
    tau_m(0, 0) = 1.0;
    EntropyReport rep = observational_entropy(Povm::basis(2), DensityState(tau_m),
                                              diag_state({0.5, 0.5}));
    CHECK(rep.d_m.is_pos_inf());
    CHECK(rep.s_oe.is_neg_inf());
    CHECK(rep.s_oe.str() == "-inf");
}

TEST_CASE("traditional OE: basis state, definite macrostate, pinned d=4 example") {
    CVector e0(3);
    e0 << 1, 0, 0;
    CHECK(traditional_oe(Povm::basis(3), DensityState::pure(e0)) == doctest::Approx(0.0));

    // M = (Pi, 1-Pi), rank(Pi)=2 in d=4, rho supported in Pi -> ln 2
    Matrix pi = Matrix::Zero(4, 4);
    pi(0, 0) = pi(1, 1) = 1.0;
    Povm m({pi, Matrix::Identity(4, 4) - pi}, {"in", "out"});
    Matrix rho_m = Matrix::Zero(4, 4);
    rho_m(0, 0) = 0.3;
    rho_m(1, 1) = 0.7;
    CHECK(traditional_oe(m, DensityState(rho_m)) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // d=4, rank-2 halves on I/4 -> ln 4
    Matrix pi2 = Matrix::Identity(4, 4) - pi;
    Povm halves({pi, pi2}, {"lo", "hi"});
    CHECK(traditional_oe(halves, DensityState(Matrix::Identity(4, 4) / 4.0)) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("Renyi OE pinned alpha=2 example") {
    // p=(3/4,1/4), q=(1/2,1/2), S(tau)=ln 2: D_2 = ln(sum p^2/q) = ln 1.25
    DensityState rho = diag_state({0.75, 0.25});
    DensityState half(Matrix::Identity(2, 2) / 2.0);
    ExtReal r = renyi_oe(Povm::basis(2), half, rho, 2.0);
    CHECK(r.value() == doctest::Approx(std::log(2.0) - std::log(1.25)).epsilon(1e-12));
    CHECK(r.value() == doctest::Approx(0.4700036292457356).epsilon(1e-9));
    // support failure for alpha > 1
    Matrix tau_m = Matrix::Zero(2, 2);
    tau_m(0, 0) = 1.0;
    CHECK(renyi_oe(Povm::basis(2), DensityState(tau_m), rho, 2.0).is_neg_inf());
}

TEST_CASE("I_max saturation: D(psi||tau) = S(tau) for the sqrt-amplitude state") {
    Rng rng(23);
    for (int it = 0; it < 50; ++it) {
        int d = 2 + static_cast<int>(rng.uniform_index(5));
        ProbVector spec = rnd::random_distribution(d, rng);
        Matrix tau_m = Matrix::Zero(d, d);
        CVector psi(d);
        for (int k = 0; k < d; ++k) {
            tau_m(k, k) = spec[k];
            psi(k) = std::sqrt(spec[k]);
        }
        DensityState tau(tau_m);
        DensityState psi_s = DensityState::pure(psi);
        CHECK(relative_entropy(psi_s, tau).value() ==
              doctest::Approx(von_neumann_entropy(tau)).epsilon(1e-9));
        // the basis measurement cannot distinguish psi from tau (p = q), and
        // no measurement extracts more than S(tau)
        CHECK(measured_relative_entropy(Povm::basis(d), psi_s, tau).value() ==
              doctest::Approx(0.0).epsilon(1e-10));
        Povm m = rnd::random_povm(d, 3, rng);
        CHECK(measured_relative_entropy(m, psi_s, tau).as_double() <=
              von_neumann_entropy(tau) + 1e-8);
    }
}

TEST_CASE("invalid states and POVMs are rejected") {
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = 0.5;  // not Hermitian
    CHECK_THROWS_AS(DensityState(bad), std::invalid_argument);
    Matrix neg = Matrix::Identity(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;  // eigenvalue below -1e-10
    CHECK_THROWS_AS(DensityState(neg), std::invalid_argument);
    Matrix half = 0.6 * Matrix::Identity(2, 2);
    CHECK_THROWS_AS(Povm({half, half}, {"a", "b"}), std::invalid_argument);  // sum != 1
    CHECK_THROWS_AS(Povm({half, Matrix::Identity(2, 2) - half}, {"a", "a"}),
                    std::invalid_argument);  // duplicate labels
    CHECK_THROWS_AS(ProbVector({0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(ProbVector({1.2, -0.2}), std::invalid_argument);
}

} // TEST_SUITE
