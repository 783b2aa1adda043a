#include "oe/recovery.hpp"

#include <cmath>
#include <stdexcept>

#include "oe/entropy.hpp"
#include "oe/maxent.hpp"

namespace oe::rec {

namespace {

// common validation: p_x must vanish wherever tr(M_x tau) does
std::vector<double> effect_priors(const Povm& m, const DensityState& tau, const ProbVector& p) {
    if (m.dim() != tau.dim()) throw std::invalid_argument("recovery: dimension mismatch");
    if (p.size() != m.outcomes()) throw std::invalid_argument("recovery: outcome count mismatch");
    std::vector<double> q(m.outcomes());
    for (std::size_t x = 0; x < m.outcomes(); ++x) {
        q[x] = std::max(0.0, (m.effect(x) * tau.matrix()).trace().real());
        if (q[x] < 1e-14 && p[x] > 1e-12)
            throw std::invalid_argument("recovery: p_x > 0 on an effect with tr(M_x tau) = 0");
    }
    return q;
}

DensityState assemble(const Matrix& raw) {
    // symmetrize round-off before validating
    return DensityState(0.5 * (raw + raw.adjoint()));
}

} // namespace

DensityState petz_coarse_state(const Povm& m, const DensityState& tau, const ProbVector& p) {
    auto q = effect_priors(m, tau, p);
    Matrix sq = tau.spectral_pow(0.5);
    Matrix out = Matrix::Zero(m.dim(), m.dim());
    for (std::size_t x = 0; x < m.outcomes(); ++x)
        if (p[x] > 0.0) out += (p[x] / q[x]) * (sq * m.effect(x) * sq);
    return assemble(out);
}

DensityState rotated_petz(const Povm& m, const DensityState& tau, const ProbVector& p, double s) {
    auto q = effect_priors(m, tau, p);
    Matrix left = tau.spectral_pow(cxd(0.5, 0.5 * s));
    Matrix right = tau.spectral_pow(cxd(0.5, -0.5 * s));
    Matrix out = Matrix::Zero(m.dim(), m.dim());
    for (std::size_t x = 0; x < m.outcomes(); ++x)
        if (p[x] > 0.0) out += (p[x] / q[x]) * (left * m.effect(x) * right);
    return assemble(out);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
}

DensityState smeared_coarse_state(const Povm& m, const DensityState& tau, const ProbVector& p,
                                  int nodes, double s_cut) {
    auto q = effect_priors(m, tau, p);
    std::vector<double> xs, ws;
    gauss_legendre(nodes, xs, ws);

    Matrix out = Matrix::Zero(m.dim(), m.dim());
    for (int i = 0; i < nodes; ++i) {
        double s = s_cut * xs[i];
        double beta = (M_PI / 2.0) / (1.0 + std::cosh(M_PI * s));
        Matrix left = tau.spectral_pow(cxd(0.5, 0.5 * s));
        Matrix right = tau.spectral_pow(cxd(0.5, -0.5 * s));
        Matrix term = Matrix::Zero(m.dim(), m.dim());
        for (std::size_t x = 0; x < m.outcomes(); ++x)
            if (p[x] > 0.0) term += (p[x] / q[x]) * (left * m.effect(x) * right);
        out += (ws[i] * s_cut * beta) * term;
    }
    Matrix herm = 0.5 * (out + out.adjoint());
    if (std::abs(herm.trace().real() - 1.0) > 1e-8)
        throw std::runtime_error("smeared_coarse_state: trace deviates beyond quadrature tolerance");
    return DensityState(herm / herm.trace().real());
}

std::optional<DensityState> maxent_compatible_state(const Povm& m, const ProbVector& p) {
    if (p.size() != m.outcomes()) throw std::invalid_argument("maxent_compatible_state: size mismatch");
    const int k = static_cast<int>(m.outcomes());
    std::vector<double> lambda(k, 0.0);

    auto residual = [&](const maxent::GibbsPoint& gp) {
        double r = 0.0;
        for (int x = 0; x < k; ++x) r = std::max(r, std::abs(gp.expectations[x] - p[x]));
        return r;
    };

    maxent::GibbsPoint gp = maxent::gibbs_point(m.effects(), lambda);
    double r0 = residual(gp);
    for (int it = 0; it < 500 && r0 > 1e-9; ++it) {
        // Newton step in the gauge sum(lambda) = 0: the Jacobian is singular
        // along the all-ones direction because sum_x M_x = 1, so solve the
        // least-squares system with the gauge row appended.
        Eigen::MatrixXd a(k + 1, k);
        Eigen::VectorXd b(k + 1);
        for (int y = 0; y < k; ++y) {
            b(y) = p[y] - gp.expectations[y];
            for (int x = 0; x < k; ++x) a(y, x) = gp.jacobian(y, x);
        }
        a.row(k).setOnes();
        b(k) = 0.0;
        Eigen::VectorXd step = a.colPivHouseholderQr().solve(b);
        if (!step.allFinite()) return std::nullopt;

        double alpha = 1.0;
        bool accepted = false;
        for (int h = 0; h < 40; ++h) {
            std::vector<double> trial(lambda);
            for (int x = 0; x < k; ++x) trial[x] += alpha * step(x);
            double shift = 0.0;
            for (double v : trial) shift += v;
            for (double& v : trial) v -= shift / k;  // re-impose the gauge
            maxent::GibbsPoint gt = maxent::gibbs_point(m.effects(), trial);
            double rt = residual(gt);
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
    if (r0 > 1e-7) return std::nullopt;
    return DensityState(gp.tau);
}

CoarseStateBundle coarse_state_bundle(const Povm& m, const DensityState& tau, const ProbVector& p,
                                      const std::vector<double>& s_values) {
    CoarseStateBundle b{petz_coarse_state(m, tau, p), {}, smeared_coarse_state(m, tau, p),
                        maxent_compatible_state(m, p)};
    for (double s : s_values) b.rotated.emplace_back(s, rotated_petz(m, tau, p, s));
    return b;
}

RecoveryGap recovery_gap(const Povm& m, const DensityState& tau, const DensityState& rho,
                         const std::vector<Povm>& probes) {
    ExtReal cross = cross_entropy(rho, tau);
    double s_tau = von_neumann_entropy(tau);
    if (!cross.finite() || cross.value() > s_tau + 1e-8)
        throw std::invalid_argument("recovery_gap: constraint S(rho;tau) <= S(tau) violated");

    EntropyReport rep = observational_entropy(m, tau, rho);
    RecoveryGap out;
    out.lhs = rep.s_oe.value() - von_neumann_entropy(rho);
    DensityState smeared = smeared_coarse_state(m, tau, rep.p);
    ExtReal best(0.0);
    for (const Povm& probe : probes) {
        ExtReal d = measured_relative_entropy(probe, rho, smeared);
        if (best < d) best = d;
    }
    out.rhs = best;
    return out;
}

} // namespace oe::rec
