#ifndef OE_RECOVERY_HPP
#define OE_RECOVERY_HPP

#include <optional>
#include <vector>

#include "oe/extreal.hpp"
#include "oe/types.hpp"

namespace oe::rec {

// Petz-recovered coarse state: sum_x p_x sqrt(tau) M_x sqrt(tau) / tr(tau M_x).
DensityState petz_coarse_state(const Povm& m, const DensityState& tau, const ProbVector& p);

// Rotated Petz family: sum_x p_x tau^{(1+is)/2} M_x tau^{(1-is)/2} / tr(tau M_x).
DensityState rotated_petz(const Povm& m, const DensityState& tau, const ProbVector& p, double s);

// Quadrature of the rotated family against beta(s) = (pi/2)/(1+cosh(pi s)),
// Gauss-Legendre on [-s_cut, s_cut] (tail mass of beta below 1e-10).
DensityState smeared_coarse_state(const Povm& m, const DensityState& tau, const ProbVector& p,
                                  int nodes = 96, double s_cut = 7.5);

// MaxEnt state compatible with fixed outcome probabilities,
// tau~ = e^{-sum_x lambda_x M_x}/Z with measure(M, tau~) = p (gauge
// sum lambda = 0). Empty on non-convergence after 500 iterations.
std::optional<DensityState> maxent_compatible_state(const Povm& m, const ProbVector& p);

struct CoarseStateBundle {
    DensityState petz;
    std::vector<std::pair<double, DensityState>> rotated;
    DensityState smeared;
    std::optional<DensityState> maxent_compatible;
};

CoarseStateBundle coarse_state_bundle(const Povm& m, const DensityState& tau, const ProbVector& p,
                                      const std::vector<double>& s_values = {-1.0, 0.5, 2.0});

struct RecoveryGap {
    double lhs = 0.0;   // S_M^tau(rho) - S(rho)
    ExtReal rhs;        // max over probes of D_{M'}(rho || smeared coarse state)
};

// Certified lower bound on the recovery-bound supremum over the given finite
// probe family. Requires the constraint S(rho;tau) <= S(tau).
RecoveryGap recovery_gap(const Povm& m, const DensityState& tau, const DensityState& rho,
                         const std::vector<Povm>& probe_measurements);

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

} // namespace oe::rec

#endif
