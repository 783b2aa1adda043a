#include "oe/entropy.hpp"

#include <cmath>
#include <stdexcept>

namespace oe {

namespace {

double xlnx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// kernel mask of a distribution: entries below support_rel * max
std::vector<bool> kernel_mask(const std::vector<double>& q) {
    double qmax = 0.0;
    for (double x : q) qmax = std::max(qmax, x);
    std::vector<bool> mask(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) mask[i] = q[i] < tol::support_rel * qmax;
    return mask;
}

} // namespace

double shannon_entropy(const ProbVector& p) {
    double s = 0.0;
    for (double x : p.probs()) s -= xlnx(x);
    return std::max(s, 0.0);
}

double von_neumann_entropy(const DensityState& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i) s -= xlnx(rho.eigenvalues()(i));
    return std::max(s, 0.0);
}

ExtReal relative_entropy(const ProbVector& p, const ProbVector& q) {
    if (p.size() != q.size()) throw std::invalid_argument("relative_entropy: size mismatch");
    auto mask = kernel_mask(q.probs());
    double kernel_weight = 0.0, d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (mask[i]) {
            kernel_weight += p[i];
        } else if (p[i] > 0.0) {
            d += p[i] * std::log(p[i] / q[i]);
        }
    }
    if (kernel_weight > tol::support_weight) return ExtReal::pos_inf();
    return ExtReal(d);
}

ExtReal relative_entropy(const DensityState& rho, const DensityState& sigma) {
    if (rho.dim() != sigma.dim()) throw std::invalid_argument("relative_entropy: dimension mismatch");
    double lmax = sigma.eigenvalues().maxCoeff();
    double cut = tol::support_rel * lmax;
    double support_weight_sum = 0.0, cross = 0.0;
    for (int i = 0; i < sigma.dim(); ++i) {
        double li = sigma.eigenvalues()(i);
        if (li < cut) continue;
        double w = (sigma.eigenvectors().col(i).adjoint() * rho.matrix() * sigma.eigenvectors().col(i))(0).real();
        w = std::max(w, 0.0);
        support_weight_sum += w;
        cross -= w * std::log(li);
    }
    if (1.0 - support_weight_sum > tol::support_weight) return ExtReal::pos_inf();
    return ExtReal(cross - von_neumann_entropy(rho));
}

ExtReal cross_entropy(const DensityState& rho, const DensityState& sigma) {
    ExtReal d = relative_entropy(rho, sigma);
    if (!d.finite()) return d;
    return ExtReal(von_neumann_entropy(rho) + d.value());
}

double cross_entropy(const ProbVector& p, const ProbVector& q) {
    ExtReal d = relative_entropy(p, q);
    if (!d.finite()) return HUGE_VAL;
    return shannon_entropy(p) + d.value();
}

ProbVector measure(const Povm& m, const DensityState& rho) {
    if (m.dim() != rho.dim()) throw std::invalid_argument("measure: dimension mismatch");
    std::vector<double> p(m.outcomes());
    double sum = 0.0;
    for (std::size_t x = 0; x < m.outcomes(); ++x) {
        double px = (m.effect(x) * rho.matrix()).trace().real();
        p[x] = std::max(px, 0.0);
        sum += p[x];
    }
    if (std::abs(sum - 1.0) > tol::prob_renorm)
        throw std::runtime_error("measure: outcome probabilities sum to " + std::to_string(sum));
    for (double& x : p) x /= sum;
    return ProbVector(std::move(p));
}

ExtReal measured_relative_entropy(const Povm& m, const DensityState& rho, const DensityState& sigma) {
    return relative_entropy(measure(m, rho), measure(m, sigma));
}

double traditional_oe(const Povm& m, const DensityState& rho) {
    ProbVector p = measure(m, rho);
    double s = 0.0;
    for (std::size_t x = 0; x < m.outcomes(); ++x) {
        if (p[x] > 0.0) s -= p[x] * std::log(p[x] / m.effect(x).trace().real());
    }
    return s;
}

EntropyReport observational_entropy(const Povm& m, const DensityState& tau, const DensityState& rho) {
    if (m.dim() != rho.dim() || m.dim() != tau.dim())
        throw std::invalid_argument("observational_entropy: dimension mismatch");
    EntropyReport r;
    r.p = measure(m, rho);
    ProbVector q = measure(m, tau);
    r.s_tau = von_neumann_entropy(tau);
    r.d_m = relative_entropy(r.p, q);
    r.s_oe = ExtReal(r.s_tau) - r.d_m;
    r.s_traditional = ExtReal(traditional_oe(m, rho));
    double vol_scale = std::exp(r.s_tau);
    r.volumes.resize(m.outcomes());
    for (std::size_t x = 0; x < m.outcomes(); ++x) r.volumes[x] = q[x] * vol_scale;

    if (r.s_oe.finite()) {
        // cross-check the volume form and the Shannon+Boltzmann split
        double s_vol = 0.0, boltz = 0.0;
        for (std::size_t x = 0; x < m.outcomes(); ++x) {
            if (r.p[x] > 0.0) {
                s_vol -= r.p[x] * std::log(r.p[x] / r.volumes[x]);
                boltz += r.p[x] * std::log(r.volumes[x]);
            }
        }
        double s = r.s_oe.value();
        if (std::abs(s_vol - s) > 1e-9 * std::max(1.0, std::abs(s)))
            throw std::logic_error("observational_entropy: volume form disagrees");
        if (std::abs(shannon_entropy(r.p) + boltz - s) > 1e-9 * std::max(1.0, std::abs(s)))
            throw std::logic_error("observational_entropy: Shannon+Boltzmann split disagrees");
        if (s > r.s_tau + 1e-9)
            throw std::logic_error("observational_entropy: upper bound violated");
    }
    return r;
}

ExtReal renyi_divergence(const ProbVector& p, const ProbVector& q, double alpha) {
    if (p.size() != q.size()) throw std::invalid_argument("renyi_divergence: size mismatch");
    if (alpha <= 0.0 || alpha == 1.0) throw std::invalid_argument("renyi_divergence: alpha must be > 0, != 1");
    auto mask = kernel_mask(q.probs());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (mask[i]) {
            if (alpha > 1.0) return ExtReal::pos_inf();  // support violation
            continue;
        }
        acc += std::pow(p[i], alpha) * std::pow(q[i], 1.0 - alpha);
    }
    if (acc <= 0.0) return ExtReal::pos_inf();
    return ExtReal(std::log(acc) / (alpha - 1.0));
}

ExtReal renyi_oe(const Povm& m, const DensityState& tau, const DensityState& rho, double alpha) {
    ExtReal d = renyi_divergence(measure(m, rho), measure(m, tau), alpha);
    return ExtReal(von_neumann_entropy(tau)) - d;
}

} // namespace oe
