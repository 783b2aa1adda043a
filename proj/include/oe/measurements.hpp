#ifndef OE_MEASUREMENTS_HPP
#define OE_MEASUREMENTS_HPP

#include <Eigen/Dense>

#include "oe/types.hpp"

namespace oe::meas {

// Coarse energy windows tiling the spectrum of a Hamiltonian. Windows are
// half-open [origin + k*delta_e, origin + (k+1)*delta_e), labeled by their
// centers; an eigenvalue exactly on a boundary belongs to the window whose
// lower edge it is.
struct EnergyWindowSpec {
    double delta_e = 1.0;
    double origin = 0.0;
    Matrix hamiltonian;
};

Povm coarse_energy_povm(const EnergyWindowSpec& spec);

// Classical post-processing map: nonnegative matrix with unit column sums.
class StochasticMap {
public:
    explicit StochasticMap(Eigen::MatrixXd lam);
    const Eigen::MatrixXd& matrix() const { return lam_; }
    Eigen::Index rows() const { return lam_.rows(); }
    Eigen::Index cols() const { return lam_.cols(); }

private:
    Eigen::MatrixXd lam_;
};

// All Kronecker products of effects, labels paired as "la|lb".
Povm tensor(const Povm& m_a, const Povm& m_b);

// M_x (x) 1_B for every effect.
Povm one_sided(const Povm& m_a, int dim_b);

// Coarser POVM (Lambda M)_y = sum_x Lambda_{y|x} M_x.
Povm postprocess(const StochasticMap& lam, const Povm& m);

// Disjoint convex combination lambda*M (+) (1-lambda)*M', outcome sets kept
// separate.
Povm disjoint_combine(double lambda, const Povm& m, const Povm& m2);

bool is_projective(const Povm& m, double tol = 1e-9);

// Joint outcome distribution p_{xy} of a projective first measurement with
// Lueders update followed by a second POVM: p_{xy} = tr(N_y Pi_x rho Pi_x).
Eigen::MatrixXd sequential_joint_distribution(const Povm& first_projective, const Povm& second,
                                              const DensityState& rho);

} // namespace oe::meas

#endif
