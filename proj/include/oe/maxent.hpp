#ifndef OE_MAXENT_HPP
#define OE_MAXENT_HPP

#include <optional>
#include <vector>

#include "oe/types.hpp"

namespace oe::maxent {

enum class ConstraintKind {
    CanonicalEnergy,
    CanonicalCharges,
    MicrocanonicalProjector,
    TrivialUniform,
    TimeAveraged,
};

enum class ConstraintMode { Equality, Inequality };

struct Constraint {
    ConstraintKind kind = ConstraintKind::TrivialUniform;
    std::vector<Matrix> operators;  // H, or {Q_k}, or {Pi}
    std::vector<double> targets;    // E, or {c_k}
    ConstraintMode mode = ConstraintMode::Inequality;
};

// MaxEnt prior tau together with its entropy, Lagrange multipliers, and the
// constraint it came from. Immutable after construction.
struct Prior {
    DensityState tau;
    double s_tau;
    std::vector<double> multipliers;  // beta, or lambda_k
    std::vector<double> residuals;    // |tr tau Q_k - c_k| at convergence
    Constraint provenance;
};

Prior uniform_prior(int dim);

// tau = e^{-beta H}/Z with beta solved so tr(tau H) = e_target (relative
// tolerance 1e-10). beta may be negative. e_target must lie strictly inside
// the spectral range of H.
Prior canonical_prior(const Matrix& h, double e_target);

// tau = e^{-sum_k lambda_k Q_k}/Z with all tr(tau Q_k) = c_k to relative
// tolerance 1e-8, by damped Newton from lambda = 0. Throws on
// non-convergence after 200 iterations.
Prior charges_prior(const std::vector<Matrix>& qs, const std::vector<double>& cs);

// tau = Pi / tr Pi for a projector Pi; S(tau) = ln rank.
Prior microcanonical_prior(const Matrix& pi);

struct ConstraintCheck {
    bool satisfied = false;
    double slack = 0.0;  // S(tau) - S(rho;tau); -inf when the cross entropy is infinite
};

// Informational form of the constraint: slack = S(tau) - S(rho;tau),
// satisfied iff slack >= -1e-8 (inequality mode) or |slack| <= 1e-8
// (equality mode).
ConstraintCheck check_constraint(const DensityState& rho, const Prior& prior);

// Dephasing of rho in the eigenbasis of h. Eigenvalues within 1e-9 of each
// other (relative to the spectral range) are grouped into one degenerate
// block and rho is block-projected there rather than fully dephased.
DensityState time_averaged_state(const Matrix& h, const DensityState& rho);

// Shared solver: tau = e^{-A}/Z for A = sum_k lambda_k ops[k], plus the
// Kubo-Mori Jacobian J_{kj} = d tr(tau ops[k]) / d lambda_j. Used by
// charges_prior and by the measurement-compatible MaxEnt state.
struct GibbsPoint {
    Matrix tau;
    std::vector<double> expectations;
    Eigen::MatrixXd jacobian;
};
GibbsPoint gibbs_point(const std::vector<Matrix>& ops, const std::vector<double>& lambda);

} // namespace oe::maxent

#endif
