#ifndef OE_RANDOM_INSTANCES_HPP
#define OE_RANDOM_INSTANCES_HPP

#include "oe/maxent.hpp"
#include "oe/rng.hpp"
#include "oe/types.hpp"

namespace oe::rnd {

// Random test instances used by the property suites and the acceptance
// inequality sweep.

Matrix ginibre(int dim, Rng& rng);
Matrix random_hermitian(int dim, Rng& rng);
Matrix random_unitary(int dim, Rng& rng);           // Haar via QR
Matrix random_projector(int dim, int rank, Rng& rng);
DensityState random_density(int dim, Rng& rng);     // Wishart-normalized
DensityState random_pure(int dim, Rng& rng);
ProbVector random_distribution(int k, Rng& rng);

// POVM from a random PSD decomposition of the identity:
// M_i = S^{-1/2} A_i S^{-1/2} with A_i random PSD, S = sum A_i.
Povm random_povm(int dim, int outcomes, Rng& rng);
Povm random_projective_povm(int dim, int outcomes, Rng& rng);

// One of the Table-I prior families, cycling by index: uniform, canonical,
// two-charge canonical, microcanonical, time-averaged.
maxent::Prior random_prior(int dim, int family, Rng& rng);
inline constexpr int kPriorFamilies = 5;

// A state satisfying the prior constraint S(rho;tau) <= S(tau): rejection
// first, otherwise mixed toward the maximal-slack state (the top-eigenvalue
// eigenstate of tau). Microcanonical priors get states drawn inside the
// projector subspace.
DensityState constrained_state(const maxent::Prior& prior, Rng& rng);

} // namespace oe::rnd

#endif
