#ifndef OE_ENTROPY_HPP
#define OE_ENTROPY_HPP

#include "oe/types.hpp"

namespace oe {

// All entropies are in natural log units (nats).

// H(p) = -sum p ln p, with 0 ln 0 = 0.
double shannon_entropy(const ProbVector& p);

// S(rho) = -tr rho ln rho evaluated on the clamped spectrum.
double von_neumann_entropy(const DensityState& rho);

// Classical relative entropy D(p||q) = sum p ln(p/q); +inf when p puts more
// than tol::support_weight of mass on the kernel of q (entries below
// tol::support_rel * max q).
ExtReal relative_entropy(const ProbVector& p, const ProbVector& q);

// Quantum relative entropy D(rho||sigma) = tr rho (ln rho - ln sigma); +inf
// when rho has weight above tol::support_weight on the kernel of sigma
// (eigenvalues below tol::support_rel * lambda_max(sigma)).
ExtReal relative_entropy(const DensityState& rho, const DensityState& sigma);

// Cross entropy S(rho;sigma) = -tr rho ln sigma (same support rule).
ExtReal cross_entropy(const DensityState& rho, const DensityState& sigma);
double cross_entropy(const ProbVector& p, const ProbVector& q);  // classical; may be inf

// p_x = Re tr(M_x rho), clamped at 0 and renormalized when the deviation of
// the sum from 1 is below tol::prob_renorm; larger deviations are errors.
ProbVector measure(const Povm& m, const DensityState& rho);

// D_M(rho||sigma) = D(p^rho || p^sigma).
ExtReal measured_relative_entropy(const Povm& m, const DensityState& rho, const DensityState& sigma);

// S_M^tau(rho) = S(tau) - D_M(rho||tau), reported together with the
// macrostate volumes V_x = tr(M_x tau) e^{S(tau)} and the traditional OE.
// Checking the prior constraint S(rho;tau) <= S(tau) is the caller's duty.
EntropyReport observational_entropy(const Povm& m, const DensityState& tau, const DensityState& rho);

// Traditional OE, -sum p_x ln(p_x / tr M_x); finite in finite dimensions.
double traditional_oe(const Povm& m, const DensityState& rho);

// Renyi observational entropy S(tau) - D_alpha(p||q) with the classical Renyi
// divergence of the induced distributions; alpha > 0, alpha != 1.
ExtReal renyi_oe(const Povm& m, const DensityState& tau, const DensityState& rho, double alpha);

// Classical Renyi divergence D_alpha(p||q).
ExtReal renyi_divergence(const ProbVector& p, const ProbVector& q, double alpha);

} // namespace oe

#endif
