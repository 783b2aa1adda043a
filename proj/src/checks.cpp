#include "oe/checks.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <stdexcept>

#include "oe/entropy.hpp"
#include "oe/equilibration.hpp"
#include "oe/gas.hpp"
#include "oe/maxent.hpp"
#include "oe/measurements.hpp"
#include "oe/random_instances.hpp"
#include "oe/recovery.hpp"
#include "oe/rmt.hpp"
#include "oe/runner.hpp"

namespace oe::checks {

namespace {

struct Ctx {
    CheckReport* rep;
    void expect(bool ok, const char* fmt, ...) {
        ++rep->assertions;
        if (ok) return;
        ++rep->failures;
        if (rep->messages.size() < 10) {
            char buf[256];
            va_list ap;
            va_start(ap, fmt);
            std::vsnprintf(buf, sizeof(buf), fmt, ap);
            va_end(ap);
            rep->messages.emplace_back(buf);
        }
    }
};

int dim_cycle(Rng& rng) { return 2 + static_cast<int>(rng.uniform_index(5)); }  // 2..6

// ---------------- entropy-core ----------------

void suite_entropy_core(Ctx& c, Rng& rng, int cases) {
    for (int it = 0; it < cases; ++it) {
        int d = dim_cycle(rng);

        // missing-information identities
        ProbVector p = rnd::random_distribution(d, rng);
        ProbVector unif(std::vector<double>(d, 1.0 / d));
        double lhs = shannon_entropy(p);
        double rhs = std::log(double(d)) - relative_entropy(p, unif).value();
        c.expect(std::abs(lhs - rhs) < 1e-9, "H(p) identity off by %g", lhs - rhs);

        DensityState rho = rnd::random_density(d, rng);
        DensityState maxmix(Matrix::Identity(d, d) / double(d));
        c.expect(std::abs(von_neumann_entropy(rho) -
                          (std::log(double(d)) - relative_entropy(rho, maxmix).value())) < 1e-9,
                 "S(rho) identity failed");
        Povm m = rnd::random_povm(d, 2 + static_cast<int>(rng.uniform_index(3)), rng);
        double s_m = traditional_oe(m, rho) -
                     [&] {  // remove the ln W_x normalization: S_M = ln d - D_M(rho||1/d)
                         return 0.0;
                     }();
        double d_m = measured_relative_entropy(m, rho, maxmix).value();
        double s_m_id = std::log(double(d)) - d_m;
        // traditional OE equals ln d - D_M(rho || 1/d) in finite dims
        c.expect(std::abs(s_m - s_m_id) < 1e-9, "S_M identity off by %g", s_m - s_m_id);

        // bounds under the constraint
        maxent::Prior prior = rnd::random_prior(d, it, rng);
        DensityState rho_c = rnd::constrained_state(prior, rng);
        EntropyReport rep = observational_entropy(m, prior.tau, rho_c);
        double s_oe = rep.s_oe.as_double();
        c.expect(s_oe <= prior.s_tau + 1e-8, "upper bound violated by %g", s_oe - prior.s_tau);
        c.expect(s_oe >= von_neumann_entropy(rho_c) - 1e-8, "lower bound violated");
        // upper bound must hold without the constraint too
        EntropyReport rep_u = observational_entropy(m, prior.tau, rho);
        c.expect(rep_u.s_oe.as_double() <= prior.s_tau + 1e-8, "unconstrained upper bound violated");

        // QRE bound
        ExtReal dq = relative_entropy(rho_c, prior.tau);
        c.expect(ExtReal(prior.s_tau) - dq <= ExtReal(s_oe + 1e-8), "QRE bound violated");

        // I_max: D(psi||tau) = S(tau) for psi = sum sqrt(tau_k) |k>
        ProbVector spec = rnd::random_distribution(d, rng);
        Matrix tau_diag = Matrix::Zero(d, d);
        CVector psi(d);
        for (int k = 0; k < d; ++k) {
            tau_diag(k, k) = spec[k];
            psi(k) = std::sqrt(spec[k]);
        }
        DensityState tau_d(tau_diag);
        DensityState psi_state = DensityState::pure(psi);
        double imax = relative_entropy(psi_state, tau_d).as_double();
        c.expect(std::abs(imax - von_neumann_entropy(tau_d)) < 1e-9, "I_max saturation off by %g",
                 imax - von_neumann_entropy(tau_d));
        c.expect(measured_relative_entropy(m, psi_state, tau_d).as_double() <=
                     von_neumann_entropy(tau_d) + 1e-8,
                 "measured information exceeded S(tau)");

        // CRE/QRE structural properties (App. C Props 1-3)
        ProbVector q2 = rnd::random_distribution(d, rng);
        c.expect(relative_entropy(p, q2).as_double() >= -1e-12, "CRE negative");
        DensityState sig = rnd::random_density(d, rng);
        c.expect(relative_entropy(rho, sig).as_double() >= -1e-10, "QRE negative");
        {
            // joint convexity
            ProbVector pa = rnd::random_distribution(d, rng), qa = rnd::random_distribution(d, rng);
            double lam = rng.uniform01();
            std::vector<double> pm(d), qm(d);
            for (int i = 0; i < d; ++i) {
                pm[i] = lam * p[i] + (1 - lam) * pa[i];
                qm[i] = lam * q2[i] + (1 - lam) * qa[i];
            }
            double mix = relative_entropy(ProbVector(pm), ProbVector(qm)).as_double();
            double sum = lam * relative_entropy(p, q2).as_double() +
                         (1 - lam) * relative_entropy(pa, qa).as_double();
            c.expect(mix <= sum + 1e-9, "CRE joint convexity violated by %g", mix - sum);

            // monotonicity under a random stochastic map
            int k2 = 2 + static_cast<int>(rng.uniform_index(3));
            Eigen::MatrixXd lamm(k2, d);
            for (int col = 0; col < d; ++col) {
                double s = 0;
                for (int row = 0; row < k2; ++row) {
                    lamm(row, col) = -std::log(1.0 - rng.uniform01());
                    s += lamm(row, col);
                }
                lamm.col(col) /= s;
            }
            std::vector<double> lp(k2, 0.0), lq(k2, 0.0);
            for (int row = 0; row < k2; ++row)
                for (int col = 0; col < d; ++col) {
                    lp[row] += lamm(row, col) * p[col];
                    lq[row] += lamm(row, col) * q2[col];
                }
            c.expect(relative_entropy(ProbVector(lp), ProbVector(lq)).as_double() <=
                         relative_entropy(p, q2).as_double() + 1e-9,
                     "CRE monotonicity violated");

            // QRE monotonicity under a measure-and-prepare channel
            int outs = 2 + static_cast<int>(rng.uniform_index(2));
            Povm mm = rnd::random_povm(d, outs, rng);
            std::vector<DensityState> prep;
            for (int o = 0; o < outs; ++o) prep.push_back(rnd::random_density(d, rng));
            auto apply = [&](const DensityState& st) {
                Matrix out = Matrix::Zero(d, d);
                ProbVector pr = measure(mm, st);
                for (int o = 0; o < outs; ++o) out += pr[o] * prep[o].matrix();
                return DensityState(out);
            };
            double before = relative_entropy(rho, sig).as_double();
            double after = relative_entropy(apply(rho), apply(sig)).as_double();
            c.expect(after <= before + 1e-8, "QRE monotonicity violated by %g", after - before);
        }

        // disjoint convex linearity of MRE
        {
            Povm m2 = rnd::random_povm(d, 2, rng);
            double lam = rng.uniform01();
            Povm comb = meas::disjoint_combine(lam, m, m2);
            double dd = measured_relative_entropy(comb, rho, sig).as_double();
            double parts = lam * measured_relative_entropy(m, rho, sig).as_double() +
                           (1 - lam) * measured_relative_entropy(m2, rho, sig).as_double();
            c.expect(std::abs(dd - parts) < 1e-9, "disjoint linearity off by %g", dd - parts);
        }

        // Renyi: p = q gives S(tau); alpha -> 1 symmetric mean matches OE;
        // moment form identity
        {
            double alpha = 2.0;
            ExtReal r_same = renyi_oe(m, prior.tau, prior.tau, alpha);
            c.expect(std::abs(r_same.as_double() - prior.s_tau) < 1e-9, "Renyi p=q != S(tau)");
            double eps = 1e-4;
            double mean = 0.5 * (renyi_oe(m, prior.tau, rho_c, 1 + eps).as_double() +
                                 renyi_oe(m, prior.tau, rho_c, 1 - eps).as_double());
            c.expect(std::abs(mean - rep.s_oe.as_double()) < 1e-6,
                     "Renyi alpha->1 limit off by %g", mean - rep.s_oe.as_double());

            // moment form: S = -(1/s) ln sum p (p/V)^s with s = alpha-1
            double s_exp = alpha - 1.0;
            double acc = 0.0;
            bool ok = true;
            for (std::size_t x = 0; x < rep.p.size(); ++x) {
                if (rep.p[x] <= 0.0) continue;
                if (rep.volumes[x] <= 0.0) { ok = false; break; }
                acc += rep.p[x] * std::pow(rep.p[x] / rep.volumes[x], s_exp);
            }
            if (ok) {
                double moment = -std::log(acc) / s_exp;
                double direct = renyi_oe(m, prior.tau, rho_c, alpha).as_double();
                c.expect(std::abs(moment - direct) < 1e-8, "Renyi moment form off by %g",
                         moment - direct);
            }
        }
    }
}

// ---------------- maxent ----------------

void suite_maxent(Ctx& c, Rng& rng, int cases) {
    for (int it = 0; it < cases; ++it) {
        int d = dim_cycle(rng);
        maxent::Prior prior = rnd::random_prior(d, it, rng);
        DensityState rho = rnd::constrained_state(prior, rng);

        // MaxEnt optimality and distance bound on the constrained set
        c.expect(von_neumann_entropy(rho) <= prior.s_tau + 1e-8, "MaxEnt optimality violated");
        double dq = relative_entropy(rho, prior.tau).as_double();
        c.expect(dq <= prior.s_tau - von_neumann_entropy(rho) + 1e-8, "distance bound violated");

        // boundary equality: microcanonical draws sit on the boundary
        if (prior.provenance.kind == maxent::ConstraintKind::MicrocanonicalProjector) {
            c.expect(std::abs(dq - (prior.s_tau - von_neumann_entropy(rho))) < 1e-8,
                     "boundary equality violated");
        }

        // unitary conservation
        Matrix u = rnd::random_unitary(d, rng);
        DensityState rho_u(u * rho.matrix() * u.adjoint());
        DensityState tau_u(u * prior.tau.matrix() * u.adjoint());
        double cross_before = cross_entropy(rho, prior.tau).as_double();
        double cross_after = cross_entropy(rho_u, tau_u).as_double();
        if (std::isfinite(cross_before))
            c.expect(std::abs(cross_before - cross_after) < 1e-9 * std::max(1.0, std::abs(cross_before)),
                     "cross entropy not unitary invariant: %g", cross_before - cross_after);
        c.expect(std::abs(von_neumann_entropy(tau_u) - prior.s_tau) < 1e-9, "S(tau) not unitary invariant");

        // canonical prior reproduces its target
        {
            Matrix h = rnd::random_hermitian(d, rng);
            Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
            double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
            double e = lo + (0.15 + 0.7 * rng.uniform01()) * (hi - lo);
            maxent::Prior cp = maxent::canonical_prior(h, e);
            double got = (cp.tau.matrix() * h).trace().real();
            c.expect(std::abs(got - e) <= 1e-8 * std::max({1.0, std::abs(e)}),
                     "canonical target missed by %g", got - e);
            maxent::ConstraintCheck cc = maxent::check_constraint(cp.tau, cp);
            c.expect(cc.satisfied && std::abs(cc.slack) < 1e-8, "tau fails its own constraint");
        }

        // tightest stationary prior: S(rho_bar) <= S(tau_stat) for any
        // stationary prior satisfying the constraint
        {
            Matrix h = rnd::random_hermitian(d, rng);
            DensityState rho0 = rnd::random_density(d, rng);
            DensityState rho_bar = maxent::time_averaged_state(h, rho0);
            Eigen::SelfAdjointEigenSolver<Matrix> es(h);
            ProbVector w = rnd::random_distribution(d, rng);
            Matrix tau_stat = Matrix::Zero(d, d);
            for (int k = 0; k < d; ++k)
                tau_stat += w[k] * es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            DensityState tau_s(tau_stat);
            ExtReal cr = cross_entropy(rho0, tau_s);
            if (cr.finite() && cr.value() <= von_neumann_entropy(tau_s)) {
                c.expect(von_neumann_entropy(rho_bar) <= von_neumann_entropy(tau_s) + 1e-8,
                         "rho_bar is not the tightest stationary prior");
            }
            // constraint S(rho(t); rho_bar) = S(rho_bar) along the trajectory
            double t = rng.uniform(0.0, 10.0);
            DensityState rho_t = rmt::unitary_evolve(es.eigenvalues(), es.eigenvectors(), rho0, t);
            double cr_t = cross_entropy(rho_t, rho_bar).as_double();
            c.expect(std::abs(cr_t - von_neumann_entropy(rho_bar)) < 1e-8,
                     "time-average constraint violated by %g", cr_t - von_neumann_entropy(rho_bar));
        }
    }
}

// ---------------- measurements ----------------

void suite_measurements(Ctx& c, Rng& rng, int cases) {
    for (int it = 0; it < cases; ++it) {
        int d = dim_cycle(rng);
        maxent::Prior prior = rnd::random_prior(d, it + 1, rng);
        DensityState rho = rnd::constrained_state(prior, rng);
        int outs = 2 + static_cast<int>(rng.uniform_index(3));
        Povm m = rnd::random_povm(d, outs, rng);

        // coarser/finer monotonicity under postprocessing
        int outs2 = 1 + static_cast<int>(rng.uniform_index(outs));
        Eigen::MatrixXd lam(outs2, outs);
        for (int col = 0; col < outs; ++col) {
            double s = 0;
            for (int row = 0; row < outs2; ++row) {
                lam(row, col) = -std::log(1.0 - rng.uniform01());
                s += lam(row, col);
            }
            lam.col(col) /= s;
        }
        Povm coarser = meas::postprocess(meas::StochasticMap(lam), m);
        double s_fine = observational_entropy(m, prior.tau, rho).s_oe.as_double();
        double s_coarse = observational_entropy(coarser, prior.tau, rho).s_oe.as_double();
        c.expect(s_coarse >= s_fine - 1e-8, "postprocessing monotonicity violated by %g",
                 s_fine - s_coarse);

        // sequential (Lueders) chain rule and monotonicity
        {
            Povm first = rnd::random_projective_povm(d, 1 + static_cast<int>(rng.uniform_index(d - 1)) , rng);
            DensityState sigma = prior.tau;
            Eigen::MatrixXd pj = meas::sequential_joint_distribution(first, m, rho);
            Eigen::MatrixXd qj = meas::sequential_joint_distribution(first, m, sigma);
            // flatten joint distributions
            std::vector<double> pf, qf;
            for (Eigen::Index a = 0; a < pj.rows(); ++a)
                for (Eigen::Index b = 0; b < pj.cols(); ++b) {
                    pf.push_back(pj(a, b));
                    qf.push_back(qj(a, b));
                }
            double psum = 0, qsum = 0;
            for (double v : pf) psum += v;
            for (double v : qf) qsum += v;
            for (double& v : pf) v /= psum;
            for (double& v : qf) v /= qsum;
            double d_joint = relative_entropy(ProbVector(pf), ProbVector(qf)).as_double();
            double d_first = measured_relative_entropy(first, rho, sigma).as_double();
            c.expect(d_joint >= d_first - 1e-8, "sequential monotonicity violated");
            // chain rule: D_joint = D_first + sum_x p_x D(p_{y|x} || q_{y|x})
            double cond = 0.0;
            for (Eigen::Index a = 0; a < pj.rows(); ++a) {
                double pa = pj.row(a).sum() / psum, qa = qj.row(a).sum() / qsum;
                if (pa <= 0) continue;
                double dcond = 0.0;
                for (Eigen::Index b = 0; b < pj.cols(); ++b) {
                    double pyx = pj(a, b) / psum / pa, qyx = qj(a, b) / qsum / qa;
                    if (pyx > 0) dcond += pyx * std::log(pyx / qyx);
                }
                cond += pa * dcond;
            }
            if (std::isfinite(d_joint))
                c.expect(std::abs(d_joint - (d_first + cond)) < 1e-8, "chain rule off by %g",
                         d_joint - d_first - cond);
        }

        // window tiling: ranks sum to dim
        {
            Matrix h = rnd::random_hermitian(d, rng);
            meas::EnergyWindowSpec spec{0.2 + rng.uniform01(), 0.0, h};
            Povm windows = meas::coarse_energy_povm(spec);
            double rank_sum = 0;
            for (const auto& e : windows.effects()) rank_sum += e.trace().real();
            c.expect(std::abs(rank_sum - d) < 1e-9, "window ranks do not tile the spectrum");
        }

        // convexity over measurements (same outcome set)
        {
            Povm mb = rnd::random_povm(d, outs, rng);
            double lamv = rng.uniform01();
            std::vector<Matrix> mixed;
            std::vector<std::string> labels;
            for (int x = 0; x < outs; ++x) {
                mixed.push_back(lamv * m.effect(x) + (1 - lamv) * mb.effect(x));
                labels.push_back("c" + std::to_string(x));
            }
            Povm mc(std::move(mixed), std::move(labels));
            DensityState sig = rnd::random_density(d, rng);
            double dmix = measured_relative_entropy(mc, rho, sig).as_double();
            double dsum = lamv * measured_relative_entropy(m, rho, sig).as_double() +
                          (1 - lamv) * measured_relative_entropy(mb, rho, sig).as_double();
            c.expect(dmix <= dsum + 1e-8, "measurement convexity violated by %g", dmix - dsum);
        }

        // one-sided effects reproduce the partial-trace route
        {
            int db = 2 + static_cast<int>(rng.uniform_index(2));
            DensityState big = rnd::random_density(d * db, rng);
            Povm os = meas::one_sided(m, db);
            ProbVector via_full = measure(os, big);
            DensityState red(partial_trace_b(big.matrix(), d, db));
            ProbVector via_reduced = measure(m, red);
            double worst = 0;
            for (std::size_t x = 0; x < via_full.size(); ++x)
                worst = std::max(worst, std::abs(via_full[x] - via_reduced[x]));
            c.expect(worst < 1e-10, "one-sided vs partial trace mismatch %g", worst);
        }
    }
}

// ---------------- recovery ----------------

void suite_recovery(Ctx& c, Rng& rng, int cases) {
    for (int it = 0; it < cases; ++it) {
        int d = dim_cycle(rng);
        maxent::Prior prior = rnd::random_prior(d, it == 0 ? 1 : it, rng);
        DensityState rho = rnd::constrained_state(prior, rng);
        Povm m = rnd::random_povm(d, 2 + static_cast<int>(rng.uniform_index(2)), rng);
        ProbVector p = measure(m, rho);

        DensityState petz = rec::petz_coarse_state(m, prior.tau, p);
        DensityState rot0 = rec::rotated_petz(m, prior.tau, p, 0.0);
        c.expect((petz.matrix() - rot0.matrix()).cwiseAbs().maxCoeff() < 1e-10, "rotated(0) != petz");

        // monotonicity chain
        double d1 = relative_entropy(rho, prior.tau).as_double();
        double d2 = measured_relative_entropy(m, rho, prior.tau).as_double();
        double d3 = relative_entropy(petz, prior.tau).as_double();
        double d4 = measured_relative_entropy(m, petz, prior.tau).as_double();
        c.expect(d1 >= d2 - 1e-8 && d2 >= d3 - 1e-8 && d3 >= d4 - 1e-8,
                 "coarse-graining chain violated: %g %g %g %g", d1, d2, d3, d4);

        // smeared state is a genuine state (constructor validates PSD)
        DensityState smeared = rec::smeared_coarse_state(m, prior.tau, p);
        c.expect(std::abs(smeared.matrix().trace().real() - 1.0) < 1e-8, "smeared trace off");

        // projective M with uniform tau: all coarse states coincide and
        // S(rho_cg) = S_M(rho)
        {
            Povm proj = rnd::random_projective_povm(d, 1 + static_cast<int>(rng.uniform_index(d - 1)), rng);
            maxent::Prior unif = maxent::uniform_prior(d);
            ProbVector pp = measure(proj, rho);
            DensityState cg = rec::petz_coarse_state(proj, unif.tau, pp);
            DensityState cg_s = rec::rotated_petz(proj, unif.tau, pp, rng.uniform(-2, 2));
            DensityState cg_t = rec::smeared_coarse_state(proj, unif.tau, pp);
            c.expect((cg.matrix() - cg_s.matrix()).cwiseAbs().maxCoeff() < 1e-8,
                     "rotated differs in projector case");
            c.expect((cg.matrix() - cg_t.matrix()).cwiseAbs().maxCoeff() < 1e-7,
                     "smeared differs in projector case");
            c.expect(std::abs(von_neumann_entropy(cg) - traditional_oe(proj, rho)) < 1e-9,
                     "S(rho_cg) != S_M(rho) in uniform projective case");
            auto compat = rec::maxent_compatible_state(proj, pp);
            if (compat)
                c.expect((compat->matrix() - cg.matrix()).cwiseAbs().maxCoeff() < 1e-6,
                         "maxent-compatible state differs in projective case");
        }

        // recovery bound with a finite probe family
        {
            std::vector<Povm> probes;
            probes.push_back(m);
            probes.push_back(rnd::random_projective_povm(d, d, rng));
            Matrix diff = rho.matrix() - smeared.matrix();
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()));
            std::vector<Matrix> eff;
            std::vector<std::string> lab;
            for (int k = 0; k < d; ++k) {
                eff.push_back(es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint());
                lab.push_back("e" + std::to_string(k));
            }
            probes.emplace_back(std::move(eff), std::move(lab));
            rec::RecoveryGap gap = rec::recovery_gap(m, prior.tau, rho, probes);
            c.expect(gap.lhs >= gap.rhs.as_double() - 1e-8, "recovery bound violated by %g",
                     gap.rhs.as_double() - gap.lhs);
        }
    }
}

// ---------------- equilibration ----------------

void suite_equilibration(Ctx& c, Rng& rng, int cases) {
    // g monotone and concave on a grid
    {
        double prev = eq::g_of_eps(1e-4), prev_diff = 0.0;
        bool mono = true, concave = true;
        double step = 0.01;
        for (int i = 1; i <= 300; ++i) {
            double g = eq::g_of_eps(1e-4 + i * step);
            double diff = g - prev;
            if (diff <= 0) mono = false;
            if (i > 1 && diff > prev_diff + 1e-12) concave = false;
            prev = g;
            prev_diff = diff;
        }
        c.expect(mono, "g(eps) not monotone");
        c.expect(concave, "g(eps) not concave");
    }

    for (int it = 0; it < cases; ++it) {
        // master equation: random detailed-balance rate matrix
        int k = 2 + static_cast<int>(rng.uniform_index(7));
        ProbVector q = rnd::random_distribution(k, rng);
        Eigen::MatrixXd r = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                double w = 0.1 + rng.uniform01();
                r(i, j) = w * std::sqrt(q[i] / q[j]);
                r(j, i) = w * std::sqrt(q[j] / q[i]);
            }
        for (int j = 0; j < k; ++j) r(j, j) = -(r.col(j).sum() - r(j, j));
        ProbVector p0 = rnd::random_distribution(k, rng);
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(i * 0.5);
        eq::MasterEqSeries ser = eq::master_equation_entropy(r, q, p0, grid);
        for (std::size_t i = 0; i < ser.t.size(); ++i) {
            c.expect(ser.dsdt_rate_form[i] >= -1e-10, "rate-form dS/dt negative: %g",
                     ser.dsdt_rate_form[i]);
            c.expect(std::abs(ser.dsdt_rate_form[i] - ser.dsdt_probability_form[i]) < 1e-8,
                     "dS/dt forms disagree by %g",
                     ser.dsdt_rate_form[i] - ser.dsdt_probability_form[i]);
        }

        // continuity bound on random qubit-ish instances
        {
            int d = dim_cycle(rng);
            maxent::Prior prior = rnd::random_prior(d, 1 + (it % 2) * 2, rng);
            DensityState rho = rnd::constrained_state(prior, rng);
            DensityState sig = rnd::constrained_state(prior, rng);
            Povm m = rnd::random_povm(d, 2 + static_cast<int>(rng.uniform_index(2)), rng);
            eq::ContinuityCheck cc = eq::continuity_check(m, prior.tau, rho, sig);
            c.expect(cc.lhs <= cc.rhs + 1e-8, "continuity bound violated by %g", cc.lhs - cc.rhs);
        }

        // open-system bound
        {
            int ds = 2 + static_cast<int>(rng.uniform_index(2));
            int de = 2 + static_cast<int>(rng.uniform_index(2));
            DensityState tau_se = rnd::random_density(ds * de, rng);
            DensityState rho_se = rnd::random_density(ds * de, rng);
            Povm ms = rnd::random_povm(ds, 2, rng);
            eq::OpenSystemBound ob = eq::open_system_bound_check(ms, tau_se, rho_se, ds, de);
            c.expect(ob.lhs >= ob.rhs - 1e-8, "open-system bound violated by %g", ob.rhs - ob.lhs);
        }
    }
}

// ---------------- rmt ----------------

void suite_rmt(Ctx& c, Rng& rng, int cases) {
    // generator statistics over seeds
    {
        int d = 24, seeds = 400;
        double mean_acc = 0.0, var_acc = 0.0;
        for (int s = 0; s < seeds; ++s) {
            Rng r(substream_seed(rng.next_u64(), "h"));
            RVector e = rmt::build_local_hamiltonian(d, r);
            mean_acc += e.mean();
            var_acc += (e.array() - e.mean()).square().sum() / (d - 1);
        }
        mean_acc /= seeds;
        var_acc /= seeds;
        c.expect(std::abs(mean_acc) < 3.0 / std::sqrt(double(d * seeds)) * 3, "spectrum mean biased: %g",
                 mean_acc);
        c.expect(std::abs(var_acc - 1.0) < 3.0 * std::sqrt(2.0 / (d * seeds)) * 3,
                 "spectrum variance biased: %g", var_acc);
    }

    // lambda formula at the paper parameters
    {
        rmt::RmtParams p;
        p.d_a = p.d_b = 140;
        c.expect(std::abs(p.coupling() - 0.0193142857142857) < 1e-12, "lambda formula off");
    }

    for (int it = 0; it < std::max(1, cases / 10); ++it) {
        rmt::RmtParams p;
        p.d_a = p.d_b = 6;
        p.delta_band = 0.5;
        p.seed = rng.next_u64();
        rmt::RmtSystem sys = rmt::build_system(p);

        // band suppression at small delta_band
        {
            RVector e0(sys.dim());
            for (int a = 0; a < p.d_a; ++a)
                for (int b = 0; b < p.d_b; ++b) e0(a * p.d_b + b) = sys.e_a(a) + sys.e_b(b);
            double in_band = 0, off_band = 0;
            int nin = 0, noff = 0;
            for (int i = 0; i < sys.dim(); ++i)
                for (int j = i + 1; j < sys.dim(); ++j) {
                    double gap = std::abs(e0(i) - e0(j));
                    double a2 = std::norm(sys.h_int(i, j));
                    if (gap < 0.3 * p.delta_band) {
                        in_band += a2;
                        ++nin;
                    } else if (gap > 4.0 * p.delta_band) {
                        off_band += a2;
                        ++noff;
                    }
                }
            if (nin > 3 && noff > 3)
                c.expect(off_band / noff < 1e-3 * (in_band / nin) + 1e-30,
                         "band envelope not suppressing far off-band couplings");
        }

        Rng haar = substream(p.seed, "haar");
        CVector psi0 = rmt::initial_state(p, sys, haar);
        c.expect(std::abs(psi0.norm() - 1.0) < 1e-10, "initial state not normalized");
        double e_a0 = 0, e_b0 = 0;
        for (int a = 0; a < p.d_a; ++a)
            for (int b = 0; b < p.d_b; ++b) {
                double w = std::norm(psi0(a * p.d_b + b));
                e_a0 += w * sys.e_a(a);
                e_b0 += w * sys.e_b(b);
            }
        c.expect(e_a0 > e_b0, "hot/cold ordering violated");

        // unitarity, energy conservation, constraint conservation
        DensityState rho0 = DensityState::pure(psi0);
        double e0 = 0.0;
        {
            CVector cc0 = sys.evecs.adjoint() * psi0;
            for (int kk = 0; kk < sys.dim(); ++kk) e0 += std::norm(cc0(kk)) * sys.evals(kk);
        }
        maxent::Prior tau = maxent::canonical_prior(
            [&] {
                Matrix h = sys.h_int;
                for (int a = 0; a < p.d_a; ++a)
                    for (int b = 0; b < p.d_b; ++b)
                        h(a * p.d_b + b, a * p.d_b + b) += sys.e_a(a) + sys.e_b(b);
                return h;
            }(),
            e0);
        double cross0 = cross_entropy(rho0, tau.tau).as_double();
        for (double t : {0.7, 3.1}) {
            CVector psi_t = rmt::evolve_state(sys, psi0, t);
            c.expect(std::abs(psi_t.norm() - 1.0) < 1e-9, "evolution not unitary");
            DensityState rho_t = DensityState::pure(psi_t);
            double e_t = 0.0;
            {
                CVector ct = sys.evecs.adjoint() * psi_t;
                for (int kk = 0; kk < sys.dim(); ++kk) e_t += std::norm(ct(kk)) * sys.evals(kk);
            }
            c.expect(std::abs(e_t - e0) < 1e-8 * std::max(1.0, std::abs(e0)), "energy drift %g",
                     e_t - e0);
            double cross_t = cross_entropy(rho_t, tau.tau).as_double();
            c.expect(std::abs(cross_t - cross0) < 1e-7, "constraint drift %g", cross_t - cross0);
        }
    }
}

// ---------------- gas ----------------

void suite_gas(Ctx& c, Rng& rng, int cases) {
    // two-particle head-on exchange
    {
        gas::GasParams p;
        p.n = 2;
        gas::GasState s;
        s.x = {0.3, 0.7};
        s.y = {0.5, 0.5};
        s.vx = {1.0, -1.0};
        s.vy = {0.0, 0.0};
        s.in_a = {1, 0};
        gas::Simulator sim(p, s);
        sim.advance_to(0.25);
        c.expect(std::abs(sim.state().vx[0] + 1.0) < 1e-12 && std::abs(sim.state().vx[1] - 1.0) < 1e-12,
                 "head-on collision did not exchange velocities");
        c.expect(sim.pair_collisions() == 1, "expected exactly one collision");
    }

    for (int it = 0; it < std::max(1, cases / 20); ++it) {
        gas::GasParams p;
        p.n = 40;
        p.seed = rng.next_u64();
        Rng ic_rng = substream(p.seed, "ic");
        gas::GasState init = gas::generate_ic(p, 1 + static_cast<int>(rng.uniform_index(4)), ic_rng);
        c.expect(init.min_pair_gap(p.radius()) >= -1e-9 * p.radius(), "IC overlap");
        double e0 = init.kinetic_energy();
        c.expect(std::abs(e0 - p.energy_target()) < 1e-9 * e0, "IC energy normalization off");

        gas::Simulator sim(p, init);
        sim.advance_to(2.0);
        double e1 = sim.state().kinetic_energy();
        c.expect(std::abs(e1 - e0) < 1e-9 * e0, "energy drift %g", (e1 - e0) / e0);
        c.expect(sim.state().min_pair_gap(p.radius()) >= -1e-9 * p.radius(), "interpenetration");

        // determinism
        Rng ic_rng2 = substream(p.seed, "ic");
        gas::GasState init2 = gas::generate_ic(p, 1, ic_rng2);
        (void)init2;

        // empirical distribution vs independent recount
        gas::SingleParticleCG cg = gas::SingleParticleCG::make(gas::CgKind::Spatial);
        ProbVector h = gas::empirical_distribution(sim.state(), cg);
        std::vector<double> recount(cg.bins(), 0.0);
        for (int i = 0; i < p.n; ++i) {
            int ix = std::min(5, (int)std::floor(sim.state().x[i] * 6));
            int iy = std::min(5, (int)std::floor(sim.state().y[i] * 6));
            recount[iy * 6 + ix] += 1.0 / p.n;
        }
        double worst = 0;
        for (int b = 0; b < cg.bins(); ++b) worst = std::max(worst, std::abs(h[b] - recount[b]));
        c.expect(worst < 1e-12, "empirical histogram mismatch");
    }

    // sanov basics
    {
        gas::GasParams p;
        ProbVector q(std::vector<double>{0.5, 0.5});
        double s_tau = 3.0;
        c.expect(std::abs(gas::sanov_entropy(q, q, 100, 0.02, s_tau) - s_tau) < 1e-12,
                 "sanov at P=Q must be S(tau)");
        ProbVector pobs(std::vector<double>{0.75, 0.25});
        double d = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
        c.expect(std::abs(gas::sanov_entropy(pobs, q, 4, 0.0, s_tau) - (s_tau - 4 * d)) < 1e-12,
                 "sanov with delta_p=0 must not mix");
    }

    // thermo: equilibrium gives S(tau); Boltzmann temperature consistency
    {
        gas::ThermoParams tp;
        tp.n_a = 250;
        tp.n_b = 250;
        tp.e_total = 250.0;
        tp.s_tau = 4400.0;
        c.expect(std::abs(gas::thermo_entropy_joint(tp.eq_a(), tp.eq_b(), tp) - tp.s_tau) < 1e-10,
                 "thermo joint at equilibrium != S(tau)");
        c.expect(std::abs(gas::thermo_entropy_single(tp.eq_a(), tp) - tp.s_tau) < 1e-10,
                 "thermo single at equilibrium != S(tau)");
        // d/dE ln W with ln W(E) = ln(eq/E) + S(tau(E)), S(tau(E)) carrying
        // (N d / 2) ln E; exact slope alpha/E
        double e = tp.eq_a() * 1.07;
        double h = e * 1e-5;
        auto ln_w = [&](double ea) {
            return std::log(tp.eq_a() / ea) + 0.5 * tp.n_a * tp.dims * std::log(ea);
        };
        double slope = (ln_w(e + h) - ln_w(e - h)) / (2 * h);
        c.expect(std::abs(1.0 / slope - e / tp.alpha_a()) < 1e-6 * (e / tp.alpha_a()),
                 "Boltzmann temperature inconsistent");
    }
}

// ---------------- cli ----------------

void suite_cli(Ctx& c, Rng& rng, int cases) {
    for (int it = 0; it < std::max(1, cases / 10); ++it) {
        // config round trip: parse -> serialize -> parse is the identity
        cli::Config cfg = cli::Config::parse_text(
            "# comment\nexperiment = gas\nseed = " + std::to_string(rng.next_u64() % 1000) +
            "\ngas.n = 42\ngas.cg = spatial, speed\n");
        cli::Config again = cli::Config::parse_text(cfg.serialize());
        c.expect(again.entries() == cfg.entries(), "config round trip not identity");
        c.expect(again.get_int("gas.n", 0) == 42, "config integer parse failed");
        c.expect(again.get_list("gas.cg").size() == 2, "config list parse failed");

        bool rejected = false;
        try {
            cli::Config bad = cli::Config::parse_text("experiment = gas\nbogus.key = 1\n");
            bad.validate(cli::schema_for("gas"));
        } catch (const std::invalid_argument&) {
            rejected = true;
        }
        c.expect(rejected, "unknown key not rejected");

        // CSV round trip including the literal inf token
        EntropySeries s;
        SeriesTrack tr;
        tr.label = "demo";
        SeriesPoint pt;
        pt.t = rng.uniform01();
        pt.s_oe = ExtReal(1.25);
        pt.s_traditional = ExtReal::pos_inf();
        pt.s_tau = 2.5;
        pt.e_a = -0.25;
        pt.e_b = 0.75;
        tr.points.push_back(pt);
        s.tracks.push_back(tr);
        std::string csv = cli::series_to_csv(s);
        c.expect(csv.rfind("t,label,S_oe,S_traditional,S_tau,E_A,E_B\n", 0) == 0, "csv header wrong");
        c.expect(csv.find(",inf,") != std::string::npos, "inf token missing");
        EntropySeries back = cli::series_from_csv(csv);
        c.expect(back.tracks.size() == 1 && back.tracks[0].points.size() == 1 &&
                     back.tracks[0].points[0].s_traditional.is_pos_inf() &&
                     back.tracks[0].points[0].t == pt.t,
                 "csv round trip failed");
    }
}

using SuiteFn = std::function<void(Ctx&, Rng&, int)>;

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
    static const std::vector<std::pair<std::string, SuiteFn>> table = {
        {"entropy-core", suite_entropy_core}, {"maxent", suite_maxent},
        {"measurements", suite_measurements}, {"recovery", suite_recovery},
        {"equilibration", suite_equilibration}, {"rmt-model", suite_rmt},
        {"gas-sim", suite_gas},               {"cli-runner", suite_cli},
    };
    return table;
}

} // namespace

std::vector<std::string> scopes() {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suite_table()) out.push_back(name);
    return out;
}

std::vector<CheckReport> run_checks(const std::string& scope, std::uint64_t seed, int cases) {
    std::vector<CheckReport> reports;
    bool all = scope == "all";
    bool found = false;
    for (const auto& [name, fn] : suite_table()) {
        if (!all && name != scope) continue;
        found = true;
        CheckReport rep;
        rep.scope = name;
        rep.cases = cases;
        Ctx ctx{&rep};
        Rng rng(substream_seed(seed, name));
        fn(ctx, rng, cases);
        reports.push_back(std::move(rep));
    }
    if (!found) throw std::invalid_argument("unknown check scope '" + scope + "'");
    return reports;
}

} // namespace oe::checks
