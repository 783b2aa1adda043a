#include "oe/equilibration.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "oe/entropy.hpp"
#include "oe/maxent.hpp"
#include "oe/measurements.hpp"

namespace oe::eq {

namespace {

std::vector<TailEntry> tail_table(const std::vector<double>& d_samples, double delta) {
    std::vector<TailEntry> tails;
    for (double mult : {2.0, 5.0, 10.0}) {
        TailEntry e;
        e.delta = mult * delta;
        if (e.delta > 0.0) {
            int count = 0;
            for (double d : d_samples)
                if (d >= e.delta) ++count;
            e.observed_fraction = double(count) / d_samples.size();
            e.markov_bound = delta / e.delta;
        }
        tails.push_back(e);
    }
    return tails;
}

} // namespace

EquilibrationReport delta_statistics(const SeriesTrack& track, double s_tau) {
    const std::size_t n = track.points.size();
    if (n < 50) throw std::invalid_argument("delta_statistics: needs at least 50 samples");

    EquilibrationReport rep;
    rep.samples = static_cast<int>(n);
    std::vector<double> d_samples(n);

    if (!track.probs.empty()) {
        // quantum path: per-sample induced distributions and prior q
        if (track.probs.size() != n || track.prior_probs.empty())
            throw std::invalid_argument("delta_statistics: malformed probability data");
        const std::size_t k = track.prior_probs.size();
        std::vector<double> pbar(k, 0.0);
        for (const auto& p : track.probs)
            for (std::size_t x = 0; x < k; ++x) pbar[x] += p[x] / n;
        double eq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dq = 0.0, dbar = 0.0;
            for (std::size_t x = 0; x < k; ++x) {
                if (track.probs[i][x] > 0.0) {
                    dq += track.probs[i][x] * std::log(track.probs[i][x] / track.prior_probs[x]);
                    dbar += track.probs[i][x] * std::log(track.probs[i][x] / pbar[x]);
                }
            }
            d_samples[i] = dq;
            eq += dbar / n;
        }
        rep.eq_term = eq;
        double to_tau = 0.0;
        for (std::size_t x = 0; x < k; ++x)
            if (pbar[x] > 0.0) to_tau += pbar[x] * std::log(pbar[x] / track.prior_probs[x]);
        rep.to_tau_term = to_tau;
    } else if (!track.macro_ids.empty()) {
        // classical definite-macrostate path: D_t = -ln q(x_t) with
        // q(x_t) = exp(S_oe(t) - S(tau)); p_bar from occupation counts.
        if (track.macro_ids.size() != n)
            throw std::invalid_argument("delta_statistics: malformed macrostate ids");
        std::map<long long, double> counts, logq;
        for (std::size_t i = 0; i < n; ++i) {
            d_samples[i] = s_tau - track.points[i].s_oe.as_double();
            counts[track.macro_ids[i]] += 1.0 / n;
            logq[track.macro_ids[i]] = -d_samples[i];
        }
        double eq = 0.0;
        for (std::size_t i = 0; i < n; ++i) eq += -std::log(counts[track.macro_ids[i]]) / n;
        rep.eq_term = eq;
        double to_tau = 0.0;
        for (const auto& [id, pb] : counts) to_tau += pb * (std::log(pb) - logq[id]);
        rep.to_tau_term = to_tau;
    } else {
        throw std::invalid_argument("delta_statistics: track has neither probs nor macrostate ids");
    }

    double delta = 0.0;
    for (double d : d_samples) delta += d / n;
    rep.delta = delta;
    rep.tails = tail_table(d_samples, delta);
    return rep;
}

double g_of_eps(double eps) {
    if (eps <= 0.0) return 0.0;
    return -eps * std::log(eps) + (1.0 + eps) * std::log1p(eps);
}

double bound_rhobar_from_d2(int m_outcomes, double d2) {
    double eps = m_outcomes / (4.0 * std::sqrt(d2));
    return eps * std::log(double(m_outcomes)) + g_of_eps(eps);
}

double bound_rhobar(int m_outcomes, const DensityState& rho_bar) {
    double purity = rho_bar.eigenvalues().squaredNorm();
    return bound_rhobar_from_d2(m_outcomes, 1.0 / purity);
}

EthSpread eth_spread(const Povm& m, const Matrix& h, double e_lo, double e_hi) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
    std::vector<int> in_window;
    for (int k = 0; k < es.eigenvalues().size(); ++k)
        if (es.eigenvalues()(k) >= e_lo && es.eigenvalues()(k) <= e_hi) in_window.push_back(k);
    if (in_window.size() < 2) throw std::invalid_argument("eth_spread: fewer than 2 eigenstates in window");

    std::vector<ProbVector> dists;
    for (int k : in_window)
        dists.push_back(measure(m, DensityState::pure(es.eigenvectors().col(k))));

    EthSpread out;
    for (std::size_t i = 0; i < dists.size(); ++i)
        for (std::size_t j = 0; j < dists.size(); ++j) {
            if (i == j) continue;
            ++out.pairs;
            ExtReal d = relative_entropy(dists[i], dists[j]);
            if (d.finite())
                out.max_finite = std::max(out.max_finite, d.value());
            else
                ++out.infinite_pairs;
        }
    return out;
}

TemperatureReport temperature_equilibration(const EntropySeries& series, const TemperatureParams& p) {
    const SeriesTrack& joint = series.track(p.joint_label);
    const std::size_t n = joint.points.size();
    if (n < 8) throw std::invalid_argument("temperature_equilibration: too few samples");

    TemperatureReport rep;
    rep.t.resize(n);
    rep.t_a.resize(n);
    rep.t_b.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.t[i] = joint.points[i].t;
        rep.t_a[i] = 2.0 * joint.points[i].e_a / (p.n_a * p.dims);
        rep.t_b[i] = 2.0 * joint.points[i].e_b / (p.n_b * p.dims);
    }

    std::size_t q0 = (3 * n) / 4;
    double tdiff = 0.0, ta_mean = 0.0;
    for (std::size_t i = q0; i < n; ++i) {
        tdiff += std::abs(rep.t_a[i] - rep.t_b[i]) / (0.5 * (rep.t_a[i] + rep.t_b[i]));
        ta_mean += rep.t_a[i];
    }
    rep.last_quarter_tdiff_rel = tdiff / (n - q0);
    ta_mean /= (n - q0);
    rep.last_quarter_ta_vs_beta_rel = std::abs(ta_mean - 1.0 / p.beta) * p.beta;

    // Clausius integral by trapezoid in the sampled energies
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double de_a = joint.points[i + 1].e_a - joint.points[i].e_a;
        double de_b = joint.points[i + 1].e_b - joint.points[i].e_b;
        integral += 0.5 * (1.0 / rep.t_a[i] + 1.0 / rep.t_a[i + 1]) * de_a;
        integral += 0.5 * (1.0 / rep.t_b[i] + 1.0 / rep.t_b[i + 1]) * de_b;
    }
    rep.clausius_integral = integral;
    rep.delta_s_m = joint.points[n - 1].s_oe.as_double() - joint.points[0].s_oe.as_double();
    rep.clausius_rel_err = std::abs(integral - rep.delta_s_m) / std::max(1e-12, std::abs(rep.delta_s_m));
    return rep;
}

MasterEqSeries master_equation_entropy(const Eigen::MatrixXd& r, const ProbVector& q,
                                       const ProbVector& p0, const std::vector<double>& t_grid) {
    const int k = static_cast<int>(q.size());
    if (r.rows() != k || r.cols() != k || static_cast<int>(p0.size()) != k)
        throw std::invalid_argument("master_equation_entropy: size mismatch");
    for (int j = 0; j < k; ++j) {
        if (std::abs(r.col(j).sum()) > 1e-10)
            throw std::invalid_argument("master_equation_entropy: columns must sum to 0");
        for (int i = 0; i < k; ++i)
            if (i != j && r(i, j) < 0.0)
                throw std::invalid_argument("master_equation_entropy: negative off-diagonal rate");
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            double lhs = r(i, j) * q[j], rhs = r(j, i) * q[i];
            if (std::abs(lhs - rhs) > 1e-10 * std::max(1.0, std::abs(lhs)))
                throw std::invalid_argument("master_equation_entropy: detailed balance violated");
        }

    // Detailed balance makes Q^{-1/2} R Q^{1/2} symmetric; evolve through its
    // eigendecomposition.
    Eigen::VectorXd sq(k);
    for (int i = 0; i < k; ++i) sq(i) = std::sqrt(q[i]);
    Eigen::MatrixXd sym(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sym(i, j) = r(i, j) * sq(j) / sq(i);
    sym = 0.5 * (sym + sym.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);

    Eigen::VectorXd v0(k);
    for (int i = 0; i < k; ++i) v0(i) = p0[i] / sq(i);
    Eigen::VectorXd coeff = es.eigenvectors().transpose() * v0;

    MasterEqSeries out;
    for (double t : t_grid) {
        Eigen::VectorXd vt = es.eigenvectors() * (es.eigenvalues().array() * t).exp().matrix().asDiagonal() * coeff;
        Eigen::VectorXd p = vt.cwiseProduct(sq);
        double psum = p.sum();
        p /= psum;
        std::vector<double> pvec(k);
        for (int i = 0; i < k; ++i) pvec[i] = std::max(0.0, p(i));

        Eigen::VectorXd pdot = r * p;
        double ds_prob = 0.0;
        for (int x = 0; x < k; ++x)
            if (pvec[x] > 0.0) ds_prob += pdot(x) * (std::log(q[x]) - std::log(pvec[x]));
        double ds_rate = 0.0;
        for (int x = 0; x < k; ++x)
            for (int xp = 0; xp < k; ++xp) {
                if (x == xp) continue;
                double fwd = r(x, xp) * pvec[xp], bwd = r(xp, x) * pvec[x];
                if (fwd > 0.0 && bwd > 0.0) ds_rate += fwd * std::log(fwd / bwd);
            }
        out.t.push_back(t);
        out.p.push_back(std::move(pvec));
        out.dsdt_probability_form.push_back(ds_prob);
        out.dsdt_rate_form.push_back(ds_rate);
    }
    return out;
}

ContinuityCheck continuity_check(const Povm& m, const DensityState& tau, const DensityState& rho,
                                 const DensityState& sigma) {
    double s_tau = von_neumann_entropy(tau);
    for (const DensityState* st : {&rho, &sigma}) {
        ExtReal c = cross_entropy(*st, tau);
        if (!c.finite() || c.value() > s_tau + 1e-8)
            throw std::invalid_argument("continuity_check: constraint violated");
    }
    EntropyReport ra = observational_entropy(m, tau, rho);
    EntropyReport rb = observational_entropy(m, tau, sigma);

    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
    double s = 0.5 * es.eigenvalues().cwiseAbs().sum();

    double vmax = 0.0;
    for (double v : ra.volumes) vmax = std::max(vmax, v);
    int a_count = 0;
    double b_max = 0.0;
    for (double v : ra.volumes) {
        if (v > tol::support_rel * vmax) {
            ++a_count;
            b_max = std::max(b_max, std::abs(std::log(v)));
        }
    }
    double h = (s > 0.0 && s < 1.0) ? -s * std::log(s) - (1.0 - s) * std::log1p(-s) : 0.0;
    ContinuityCheck out;
    out.lhs = std::abs(ra.s_oe.as_double() - rb.s_oe.as_double());
    out.rhs = h + s * (std::log(double(a_count)) + b_max);
    return out;
}

EpSeries ep_clausius_check(const Matrix& h_s, const Matrix& h_b, const Matrix& v,
                           const DensityState& rho_s0, double beta0, const std::vector<double>& t_grid) {
    const int ds = static_cast<int>(h_s.rows());
    const int db = static_cast<int>(h_b.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> esb(0.5 * (h_b + h_b.adjoint()));
    const RVector& eb = esb.eigenvalues();

    auto bath_energy = [&](double beta) {
        RVector a = beta * eb;
        double amin = a.minCoeff();
        RVector w = (-(a.array() - amin)).exp();
        w /= w.sum();
        return (w.array() * eb.array()).sum();
    };
    auto bath_state = [&](double beta) {
        RVector a = beta * eb;
        double amin = a.minCoeff();
        RVector w = (-(a.array() - amin)).exp();
        w /= w.sum();
        return DensityState(esb.eigenvectors() * w.asDiagonal() * esb.eigenvectors().adjoint());
    };
    auto solve_beta = [&](double e_target) {
        double lo = -1.0, hi = 1.0;
        while (bath_energy(lo) < e_target) lo *= 2.0;
        while (bath_energy(hi) > e_target) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-14 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
            double mid = 0.5 * (lo + hi);
            (bath_energy(mid) > e_target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    DensityState tau_b0 = bath_state(beta0);
    Matrix rho0 = kron(rho_s0.matrix(), tau_b0.matrix());
    Matrix h_tot = kron(h_s, Matrix::Identity(db, db)) + kron(Matrix::Identity(ds, ds), h_b) + v;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h_tot + h_tot.adjoint()));
    Matrix rho0_eig = es.eigenvectors().adjoint() * rho0 * es.eigenvectors();
    Matrix h_b_full = kron(Matrix::Identity(ds, ds), h_b);

    double s_rho_s0 = von_neumann_entropy(rho_s0);
    EpSeries out;
    double integral = 0.0;
    double prev_eb = 0.0, prev_beta = beta0;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        double t = t_grid[i];
        CVector phase(es.eigenvalues().size());
        for (int kk = 0; kk < phase.size(); ++kk) phase(kk) = std::exp(cxd(0.0, -es.eigenvalues()(kk) * t));
        Matrix rho_t_eig = phase.asDiagonal() * rho0_eig * phase.conjugate().asDiagonal();
        Matrix rho_t = es.eigenvectors() * rho_t_eig * es.eigenvectors().adjoint();
        DensityState rho(0.5 * (rho_t + rho_t.adjoint()));

        DensityState rho_s(partial_trace_b(rho.matrix(), ds, db));
        double e_b_now = (h_b_full * rho.matrix()).trace().real();
        double beta_now = solve_beta(e_b_now);
        DensityState tau_b = bath_state(beta_now);

        if (i > 0) integral += 0.5 * (prev_beta + beta_now) * (e_b_now - prev_eb);
        prev_eb = e_b_now;
        prev_beta = beta_now;

        double clausius = (von_neumann_entropy(rho_s) - s_rho_s0) + integral;
        DensityState gamma(kron(rho_s.matrix(), tau_b.matrix()));
        ExtReal re = relative_entropy(rho, gamma);

        out.t.push_back(t);
        out.clausius.push_back(clausius);
        out.re_form.push_back(re.as_double());
    }
    return out;
}

OpenSystemBound open_system_bound_check(const Povm& m_s, const DensityState& tau_se,
                                        const DensityState& rho_se, int d_s, int d_e) {
    if (d_s * d_e != rho_se.dim() || m_s.dim() != d_s)
        throw std::invalid_argument("open_system_bound_check: dimension mismatch");
    Povm big = meas::one_sided(m_s, d_e);
    EntropyReport rep = observational_entropy(big, tau_se, rho_se);
    DensityState rho_s(partial_trace_b(rho_se.matrix(), d_s, d_e));
    DensityState tau_s(partial_trace_b(tau_se.matrix(), d_s, d_e));
    OpenSystemBound out;
    out.lhs = rep.s_oe.as_double();
    out.rhs = rep.s_tau - relative_entropy(rho_s, tau_s).as_double();
    return out;
}

} // namespace oe::eq
