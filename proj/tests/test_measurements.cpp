#include <doctest.h>

#include <cmath>

#include "oe/entropy.hpp"
#include "oe/measurements.hpp"
#include "oe/random_instances.hpp"

using namespace oe;
using namespace oe::meas;

TEST_SUITE("measurements") {

TEST_CASE("coarse energy windows: fully coarse, fully fine, pinned binning") {
    Rng rng(61);
    Matrix h = rnd::random_hermitian(5, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    double range = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();

    Povm coarse = coarse_energy_povm({2.0 * range + 1.0, es.eigenvalues().minCoeff(), h});
    CHECK(coarse.outcomes() == 1);
    CHECK((coarse.effect(0) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-9);

    // windows smaller than every gap: rank-1 basis measurement
    double min_gap = range;
    for (int i = 1; i < 5; ++i) min_gap = std::min(min_gap, es.eigenvalues()(i) - es.eigenvalues()(i - 1));
    Povm fine = coarse_energy_povm({0.9 * min_gap, 0.0, h});
    CHECK(fine.outcomes() == 5);
    for (std::size_t x = 0; x < 5; ++x)
        CHECK(fine.effect(x).trace().real() == doctest::Approx(1.0).epsilon(1e-10));

    // pinned example: H = diag(0, 0.3, 0.9, 1.0), dE = 0.5, origin 0 ->
    // ranks (2, 1, 1)
    Matrix hd = Matrix::Zero(4, 4);
    hd(1, 1) = 0.3;
    hd(2, 2) = 0.9;
    hd(3, 3) = 1.0;
    Povm binned = coarse_energy_povm({0.5, 0.0, hd});
    REQUIRE(binned.outcomes() == 3);
    CHECK(binned.effect(0).trace().real() == doctest::Approx(2.0));
    CHECK(binned.effect(1).trace().real() == doctest::Approx(1.0));
    CHECK(binned.effect(2).trace().real() == doctest::Approx(1.0));
    CHECK(binned.labels()[0] == "E=0.25");
    CHECK(binned.labels()[2] == "E=1.25");
}

TEST_CASE("tensor products") {
    Povm ta = Povm::trivial(2), tb = Povm::trivial(3);
    Povm tt = tensor(ta, tb);
    CHECK(tt.outcomes() == 1);
    CHECK(tt.dim() == 6);

    Rng rng(67);
    Povm m2 = rnd::random_povm(2, 2, rng);
    Povm m3 = rnd::random_povm(3, 3, rng);
    Povm big = tensor(m2, m3);
    CHECK(big.outcomes() == 6);
    Matrix sum = Matrix::Zero(6, 6);
    for (const auto& e : big.effects()) sum += e;
    CHECK((sum - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);

    // tensor with a trivial second factor equals one_sided
    Povm via_tensor = tensor(m2, Povm::trivial(3));
    Povm via_onesided = one_sided(m2, 3);
    for (std::size_t x = 0; x < 2; ++x)
        CHECK((via_tensor.effect(x) - via_onesided.effect(x)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one-sided measurement agrees with the partial-trace route") {
    Rng rng(71);
    Povm m = rnd::random_povm(3, 3, rng);
    DensityState big = rnd::random_density(6, rng);
    ProbVector full = measure(one_sided(m, 2), big);
    ProbVector red = measure(m, DensityState(partial_trace_b(big.matrix(), 3, 2)));
    for (std::size_t x = 0; x < 3; ++x) CHECK(full[x] == doctest::Approx(red[x]).epsilon(1e-10));
}

TEST_CASE("postprocessing: permutation, full merge, pairwise merge") {
    Rng rng(73);
    Povm m = rnd::random_povm(3, 3, rng);

    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(3, 3);
    perm(0, 2) = perm(1, 0) = perm(2, 1) = 1.0;
    Povm relabeled = postprocess(StochasticMap(perm), m);
    CHECK((relabeled.effect(0) - m.effect(2)).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(1, 3);
    Povm trivial = postprocess(StochasticMap(ones), m);
    CHECK(trivial.outcomes() == 1);
    CHECK((trivial.effect(0) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::MatrixXd merge = Eigen::MatrixXd::Zero(2, 3);
    merge(0, 0) = merge(0, 1) = 1.0;
    merge(1, 2) = 1.0;
    Povm merged = postprocess(StochasticMap(merge), m);
    CHECK((merged.effect(0) - (m.effect(0) + m.effect(1))).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(StochasticMap(Eigen::MatrixXd::Constant(2, 2, 0.3)), std::invalid_argument);
    CHECK_THROWS_AS(postprocess(StochasticMap(Eigen::MatrixXd::Ones(1, 2)), m),
                    std::invalid_argument);
}

TEST_CASE("disjoint combination and MRE linearity") {
    Rng rng(79);
    Povm m = rnd::random_povm(2, 2, rng);
    Povm m2 = rnd::random_povm(2, 3, rng);

    Povm lam1 = disjoint_combine(1.0, m, m2);
    CHECK(lam1.outcomes() == 5);
    for (std::size_t y = 2; y < 5; ++y) CHECK(lam1.effect(y).cwiseAbs().maxCoeff() < 1e-12);

    Povm half = disjoint_combine(0.5, Povm::trivial(2), Povm::trivial(2));
    CHECK((half.effect(0) - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

    for (int it = 0; it < 30; ++it) {
        double lam = rng.uniform01();
        DensityState rho = rnd::random_density(2, rng), sig = rnd::random_density(2, rng);
        double joint = measured_relative_entropy(disjoint_combine(lam, m, m2), rho, sig).as_double();
        double split = lam * measured_relative_entropy(m, rho, sig).as_double() +
                       (1 - lam) * measured_relative_entropy(m2, rho, sig).as_double();
        CHECK(joint == doctest::Approx(split).epsilon(1e-9));
    }
}

TEST_CASE("coarser measurements never reveal more information") {
    Rng rng(83);
    for (int it = 0; it < 100; ++it) {
        int d = 2 + static_cast<int>(rng.uniform_index(5));
        int outs = 2 + static_cast<int>(rng.uniform_index(3));
        Povm m = rnd::random_povm(d, outs, rng);
        DensityState tau = rnd::random_density(d, rng);
        DensityState rho = rnd::random_density(d, rng);
        int outs2 = 1 + static_cast<int>(rng.uniform_index(outs));
        Eigen::MatrixXd lam(outs2, outs);
        for (int col = 0; col < outs; ++col) {
            double s = 0;
            for (int row = 0; row < outs2; ++row) {
                lam(row, col) = 0.05 + rng.uniform01();
                s += lam(row, col);
            }
            lam.col(col) /= s;
        }
        Povm coarser = postprocess(StochasticMap(lam), m);
        double fine = measured_relative_entropy(m, rho, tau).as_double();
        double coarse = measured_relative_entropy(coarser, rho, tau).as_double();
        CHECK(coarse <= fine + 1e-8);
    }
}

TEST_CASE("sequential Lueders measurement: chain rule and monotonicity") {
    Rng rng(89);
    for (int it = 0; it < 50; ++it) {
        int d = 3 + static_cast<int>(rng.uniform_index(3));
        Povm first = rnd::random_projective_povm(d, 2, rng);
        Povm second = rnd::random_povm(d, 2, rng);
        DensityState rho = rnd::random_density(d, rng);
        DensityState sig = rnd::random_density(d, rng);

        Eigen::MatrixXd pj = sequential_joint_distribution(first, second, rho);
        Eigen::MatrixXd qj = sequential_joint_distribution(first, second, sig);
        std::vector<double> pf, qf;
        for (Eigen::Index a = 0; a < pj.rows(); ++a)
            for (Eigen::Index b = 0; b < pj.cols(); ++b) {
                pf.push_back(pj(a, b) / pj.sum());
                qf.push_back(qj(a, b) / qj.sum());
            }
        double d_joint = relative_entropy(ProbVector(pf), ProbVector(qf)).as_double();
        double d_first = measured_relative_entropy(first, rho, sig).as_double();
        CHECK(d_joint >= d_first - 1e-8);

        double cond = 0.0;
        for (Eigen::Index a = 0; a < pj.rows(); ++a) {
            double pa = pj.row(a).sum() / pj.sum(), qa = qj.row(a).sum() / qj.sum();
            if (pa <= 0) continue;
            for (Eigen::Index b = 0; b < pj.cols(); ++b) {
                double pyx = pj(a, b) / pj.sum() / pa, qyx = qj(a, b) / qj.sum() / qa;
                if (pyx > 0) cond += pa * pyx * std::log(pyx / qyx);
            }
        }
        CHECK(d_joint == doctest::Approx(d_first + cond).epsilon(1e-8));
    }
    // non-projective first measurement is rejected
    Rng rng2(97);
    Povm fuzzy = rnd::random_povm(3, 2, rng2);
    DensityState rho = rnd::random_density(3, rng2);
    if (!is_projective(fuzzy))
        CHECK_THROWS_AS(sequential_joint_distribution(fuzzy, fuzzy, rho), std::invalid_argument);
}

} // TEST_SUITE
