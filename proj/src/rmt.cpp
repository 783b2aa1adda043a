#include "oe/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "oe/entropy.hpp"
#include "oe/threads.hpp"

namespace oe::rmt {

namespace {

RVector gibbs_weights(const RVector& a) {
    double amin = a.minCoeff();
    RVector w = (-(a.array() - amin)).exp();
    return w / w.sum();
}

double solve_beta(const RVector& evals, double e_target) {
    auto energy = [&](double beta) {
        RVector w = gibbs_weights(beta * evals);
        return (w.array() * evals.array()).sum();
    };
    double lo = -1.0, hi = 1.0;
    while (energy(lo) < e_target) lo *= 2.0;
    while (energy(hi) > e_target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        (energy(mid) > e_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<double> cell_sums(const IndexPartition& part, const RVector& per_index) {
    std::vector<double> out(part.outcomes(), 0.0);
    for (std::size_t x = 0; x < part.outcomes(); ++x)
        for (int d : part.cells[x]) out[x] += per_index(d);
    return out;
}

double classical_re(const std::vector<double>& p, const std::vector<double>& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) d += p[i] * std::log(p[i] / q[i]);
    return d;
}

} // namespace

std::vector<double> RmtParams::make_time_grid() const {
    if (!time_grid.empty()) return time_grid;
    std::vector<double> ts(n_times);
    double t_scale = timescale();
    if (log_grid) {
        double umax = std::log1p(t_max_over_t);
        for (int i = 0; i < n_times; ++i)
            ts[i] = t_scale * std::expm1(umax * i / double(n_times - 1));
    } else {
        for (int i = 0; i < n_times; ++i)
            ts[i] = t_scale * t_max_over_t * i / double(n_times - 1);
    }
    return ts;
}

RVector build_local_hamiltonian(int d, Rng& rng) {
    if (d < 2) throw std::invalid_argument("build_local_hamiltonian: d must be >= 2");
    std::vector<double> e(d);
    for (double& x : e) x = rng.normal();
    std::sort(e.begin(), e.end());
    RVector out(d);
    for (int i = 0; i < d; ++i) out(i) = e[i];
    return out;
}

Matrix build_banded_interaction(const RmtParams& params, const RVector& e_a, const RVector& e_b,
                                Rng& rng) {
    const int da = static_cast<int>(e_a.size()), db = static_cast<int>(e_b.size());
    const int d = da * db;
    RVector e0(d);
    for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b) e0(a * db + b) = e_a(a) + e_b(b);

    Matrix v(d, d);
    const double inv_band = 1.0 / params.delta_band;
    for (int i = 0; i < d; ++i) {
        v(i, i) = params.delta_v * rng.normal();
        for (int j = i + 1; j < d; ++j) {
            double env = std::exp(-0.5 * std::pow((e0(i) - e0(j)) * inv_band, 2.0));
            cxd z = params.delta_v * env * rng.cnormal();
            v(i, j) = z;
            v(j, i) = std::conj(z);
        }
    }
    return params.coupling() * v;
}

RmtSystem build_system(const RmtParams& params) {
    if (params.d_a < 2 || params.d_b < 2) throw std::invalid_argument("build_system: dims must be >= 2");
    RmtSystem sys;
    sys.params = params;
    Rng h_rng = substream(params.seed, "hamiltonian");
    sys.e_a = build_local_hamiltonian(params.d_a, h_rng);
    // the two local Hamiltonians share one sampled spectrum when the
    // dimensions agree (H0 (x) 1 + 1 (x) H0 layout)
    sys.e_b = (params.d_b == params.d_a) ? sys.e_a : build_local_hamiltonian(params.d_b, h_rng);

    Rng v_rng = substream(params.seed, "interaction");
    sys.h_int = build_banded_interaction(params, sys.e_a, sys.e_b, v_rng);

    const int d = sys.dim();
    Matrix h = sys.h_int;
    for (int a = 0; a < params.d_a; ++a)
        for (int b = 0; b < params.d_b; ++b) h(a * params.d_b + b, a * params.d_b + b) += sys.e_a(a) + sys.e_b(b);

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("build_system: diagonalization failed");
    sys.evals = es.eigenvalues();
    sys.evecs = es.eigenvectors();

    // reconstruction sanity on a few matrix elements
    double scale = sys.evals.cwiseAbs().maxCoeff();
    for (int probe = 0; probe < std::min(4, d); ++probe) {
        cxd rec = (sys.evecs.row(probe) * sys.evals.asDiagonal() * sys.evecs.adjoint().col(probe))(0);
        if (std::abs(rec - h(probe, probe)) > 1e-8 * std::max(1.0, scale))
            throw std::runtime_error("build_system: eigendecomposition reconstruction off");
    }
    return sys;
}

CVector initial_state(const RmtParams& params, const RmtSystem& system, Rng& rng) {
    const int d = system.dim();
    CVector psi(d);
    for (int a = 0; a < params.d_a; ++a) {
        double wa = std::exp(-0.5 * params.beta_a * (system.e_a(a) - system.e_a(0)));
        for (int b = 0; b < params.d_b; ++b) {
            double wb = std::exp(-0.5 * params.beta_b * (system.e_b(b) - system.e_b(0)));
            psi(a * params.d_b + b) = wa * wb * rng.cnormal();
        }
    }
    psi /= psi.norm();
    return psi;
}

CVector evolve_state(const RmtSystem& system, const CVector& psi0, double t) {
    CVector c = system.evecs.adjoint() * psi0;
    for (int k = 0; k < c.size(); ++k) c(k) *= std::exp(cxd(0.0, -system.evals(k) * t));
    return system.evecs * c;
}

DensityState unitary_evolve(const RVector& evals, const Matrix& evecs, const DensityState& rho0,
                            double t) {
    Matrix r = evecs.adjoint() * rho0.matrix() * evecs;
    CVector phase(evals.size());
    for (int k = 0; k < evals.size(); ++k) phase(k) = std::exp(cxd(0.0, -evals(k) * t));
    Matrix rt = phase.asDiagonal() * r * phase.conjugate().asDiagonal();
    Matrix out = evecs * rt * evecs.adjoint();
    return DensityState(0.5 * (out + out.adjoint()));
}

DensityState evolve(const RmtSystem& system, const DensityState& rho0, double t) {
    return unitary_evolve(system.evals, system.evecs, rho0, t);
}

IndexPartition joint_energy_partition(const RVector& e_a, const RVector& e_b, double delta_e,
                                      double origin) {
    const int da = static_cast<int>(e_a.size()), db = static_cast<int>(e_b.size());
    std::map<std::pair<long, long>, std::vector<int>> cells;
    for (int a = 0; a < da; ++a) {
        long wa = static_cast<long>(std::floor((e_a(a) - origin) / delta_e));
        for (int b = 0; b < db; ++b) {
            long wb = static_cast<long>(std::floor((e_b(b) - origin) / delta_e));
            cells[{wa, wb}].push_back(a * db + b);
        }
    }
    IndexPartition part;
    for (auto& [key, idx] : cells) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "EA=%.9g|EB=%.9g", origin + (double(key.first) + 0.5) * delta_e,
                      origin + (double(key.second) + 0.5) * delta_e);
        part.labels.emplace_back(buf);
        part.cells.push_back(std::move(idx));
    }
    return part;
}

IndexPartition one_sided_energy_partition(const RVector& e_a, int d_b, double delta_e,
                                          double origin) {
    const int da = static_cast<int>(e_a.size());
    std::map<long, std::vector<int>> cells;
    for (int a = 0; a < da; ++a) {
        long wa = static_cast<long>(std::floor((e_a(a) - origin) / delta_e));
        for (int b = 0; b < d_b; ++b) cells[wa].push_back(a * d_b + b);
    }
    IndexPartition part;
    for (auto& [key, idx] : cells) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "EA=%.9g", origin + (double(key) + 0.5) * delta_e);
        part.labels.emplace_back(buf);
        part.cells.push_back(std::move(idx));
    }
    return part;
}

RmtResult run_rmt_experiment(const RmtParams& params) {
    RmtSystem sys = build_system(params);
    Rng haar = substream(params.seed, "haar");
    CVector psi0 = initial_state(params, sys, haar);
    const int d = sys.dim();
    const int db = params.d_b;

    // eigenbasis amplitudes; all dynamics happen on these
    CVector c0 = sys.evecs.adjoint() * psi0;
    double e_total = 0.0;
    for (int k = 0; k < d; ++k) e_total += std::norm(c0(k)) * sys.evals(k);

    // canonical prior tau = e^{-beta H}/Z at the conserved energy
    double beta = solve_beta(sys.evals, e_total);
    RVector w_tau = gibbs_weights(beta * sys.evals);
    double s_tau = 0.0;
    for (int k = 0; k < d; ++k)
        if (w_tau(k) > 0.0) s_tau -= w_tau(k) * std::log(w_tau(k));

    // |evecs|^2 moves spectral weights to product-basis populations
    Eigen::MatrixXd amp2 = sys.evecs.cwiseAbs2();
    RVector tau_diag = amp2 * w_tau;

    // rho_bar = dephased psi0: spectral weights |c0|^2
    RVector w_bar = c0.cwiseAbs2();
    RVector bar_diag = amp2 * w_bar;

    IndexPartition joint = joint_energy_partition(sys.e_a, sys.e_b, params.delta_e_meas);
    IndexPartition one_sided = one_sided_energy_partition(sys.e_a, db, params.delta_e_meas);

    RmtResult res;
    res.s_tau = s_tau;
    res.beta = beta;
    res.e_total = e_total;
    res.timescale = params.timescale();
    res.d2_rho_bar = 1.0 / w_bar.squaredNorm();
    res.s_rho_bar = 0.0;
    for (int k = 0; k < d; ++k)
        if (w_bar(k) > 0.0) res.s_rho_bar -= w_bar(k) * std::log(w_bar(k));
    res.qbar_joint = cell_sums(joint, bar_diag);
    res.qbar_one_sided = cell_sums(one_sided, bar_diag);
    res.m_joint = static_cast<int>(joint.outcomes());
    res.m_one_sided = static_cast<int>(one_sided.outcomes());

    std::vector<double> q_joint = cell_sums(joint, tau_diag);
    std::vector<double> q_one = cell_sums(one_sided, tau_diag);
    std::vector<double> w_joint(joint.outcomes()), w_one(one_sided.outcomes());
    for (std::size_t x = 0; x < joint.outcomes(); ++x) w_joint[x] = double(joint.cells[x].size());
    for (std::size_t x = 0; x < one_sided.outcomes(); ++x) w_one[x] = double(one_sided.cells[x].size());

    // local energies per product-basis index
    RVector ea_idx(d), eb_idx(d);
    for (int a = 0; a < params.d_a; ++a)
        for (int b = 0; b < db; ++b) {
            ea_idx(a * db + b) = sys.e_a(a);
            eb_idx(a * db + b) = sys.e_b(b);
        }

    std::vector<double> ts = params.make_time_grid();
    const std::size_t nt = ts.size();

    SeriesTrack tr_joint, tr_one;
    tr_joint.label = "EAxEB";
    tr_one.label = "EAx1";
    tr_joint.prior_probs = q_joint;
    tr_one.prior_probs = q_one;
    tr_joint.points.resize(nt);
    tr_one.points.resize(nt);
    tr_joint.probs.resize(nt);
    tr_one.probs.resize(nt);

    parallel_for(nt, [&](std::size_t i) {
        CVector c = c0;
        for (int k = 0; k < d; ++k) c(k) *= std::exp(cxd(0.0, -sys.evals(k) * ts[i]));
        CVector psi = sys.evecs * c;
        RVector pop = psi.cwiseAbs2();
        double norm = pop.sum();
        pop /= norm;

        double e_a_now = (pop.array() * ea_idx.array()).sum();
        double e_b_now = (pop.array() * eb_idx.array()).sum();

        std::vector<double> p_j = cell_sums(joint, pop);
        std::vector<double> p_o = cell_sums(one_sided, pop);

        auto fill = [&](SeriesTrack& tr, const std::vector<double>& p, const std::vector<double>& q,
                        const std::vector<double>& w, std::size_t idx) {
            SeriesPoint pt;
            pt.t = ts[i];
            pt.s_tau = s_tau;
            pt.e_a = e_a_now;
            pt.e_b = e_b_now;
            pt.s_oe = ExtReal(s_tau - classical_re(p, q));
            double trad = 0.0;
            for (std::size_t x = 0; x < p.size(); ++x)
                if (p[x] > 0.0) trad -= p[x] * std::log(p[x] / w[x]);
            pt.s_traditional = ExtReal(trad);
            tr.points[idx] = pt;
            tr.probs[idx] = p;
        };
        fill(tr_joint, p_j, q_joint, w_joint, i);
        fill(tr_one, p_o, q_one, w_one, i);
    });

    res.series.tracks.push_back(std::move(tr_joint));
    res.series.tracks.push_back(std::move(tr_one));
    return res;
}

} // namespace oe::rmt
