#ifndef OE_EQUILIBRATION_HPP
#define OE_EQUILIBRATION_HPP

#include <optional>
#include <vector>

#include "oe/types.hpp"

namespace oe::eq {

struct TailEntry {
    double delta = 0.0;
    double observed_fraction = 0.0;
    double markov_bound = 0.0;
};

struct EquilibrationReport {
    double delta = 0.0;        // finite-time average of D_M = S(tau) - S_M^tau
    double eq_term = 0.0;      // mean_t D(p_t || p_bar), equilibration term
    double to_tau_term = 0.0;  // D(p_bar || q), "to tau" term
    std::optional<double> bound_rhobar;   // eps ln m + g(eps), when available
    std::optional<double> bound_eigenstate;  // S(rho_bar)
    std::optional<double> eth_spread;
    std::vector<TailEntry> tails;
    int samples = 0;
};

// Finite-time Delta statistics and the Eq.-(29)-style decomposition, computed
// from the per-sample induced distributions when the track carries them, or
// from macrostate occupation ids in the classical definite-macrostate case.
// Averages are arithmetic means over the samples; the decomposition identity
// delta = eq_term + to_tau_term is exact in that convention.
EquilibrationReport delta_statistics(const SeriesTrack& track, double s_tau);

// g(eps) = -eps ln eps + (1+eps) ln(1+eps)
double g_of_eps(double eps);

// eps ln m + g(eps) with eps = m / (4 sqrt(d2)), d2 = 1/tr(rho_bar^2)
double bound_rhobar(int m_outcomes, const DensityState& rho_bar);
double bound_rhobar_from_d2(int m_outcomes, double d2);

struct EthSpread {
    double max_finite = 0.0;
    int infinite_pairs = 0;
    int pairs = 0;
};

// max over eigenstate pairs in the energy window of D_M(psi_E || psi_E');
// infinite entries are excluded from the max and counted separately.
EthSpread eth_spread(const Povm& m, const Matrix& h, double e_lo, double e_hi);

struct TemperatureParams {
    int n_a = 0, n_b = 0;
    int dims = 2;
    double beta = 2.0;       // reduced-unit prior temperature
    std::string joint_label = "energy_joint";
};

struct TemperatureReport {
    std::vector<double> t, t_a, t_b;
    double last_quarter_tdiff_rel = 0.0;   // mean |T_A - T_B| / Tbar over last quarter
    double clausius_integral = 0.0;        // int dE_A/T_A + int dE_B/T_B (trapezoid)
    double delta_s_m = 0.0;                // S_M^tau(end) - S_M^tau(0), joint track
    double clausius_rel_err = 0.0;
    double last_quarter_ta_vs_beta_rel = 0.0;  // |mean T_A - 1/beta| * beta, last quarter
};

TemperatureReport temperature_equilibration(const EntropySeries& series, const TemperatureParams& p);

struct MasterEqSeries {
    std::vector<double> t;
    std::vector<std::vector<double>> p;
    std::vector<double> dsdt_probability_form;  // sum_x dp_x (ln q_x - ln p_x)
    std::vector<double> dsdt_rate_form;         // sum_{xx'} R p ln(R p / R' p')
};

// Evolve p by the detailed-balance rate matrix (columns sum to zero,
// nonnegative off-diagonals, R_{xx'} q_{x'} = R_{x'x} q_x within 1e-10) and
// evaluate dS_M^tau/dt by both formulas on the grid.
MasterEqSeries master_equation_entropy(const Eigen::MatrixXd& r, const ProbVector& q,
                                       const ProbVector& p0, const std::vector<double>& t_grid);

struct ContinuityCheck {
    double lhs = 0.0;  // |S_M^tau(rho) - S_M^tau(sigma)|
    double rhs = 0.0;  // h(s) + s (ln A + B)
};

ContinuityCheck continuity_check(const Povm& m, const DensityState& tau, const DensityState& rho,
                                 const DensityState& sigma);

struct EpSeries {
    std::vector<double> t;
    std::vector<double> clausius;  // dS(rho_S) + int dE_B / T_B
    std::vector<double> re_form;   // D(rho(t) || rho_S(t) (x) tau_B(t))
};

// System S coupled to a finite bath B, product initial state
// rho_S(0) (x) e^{-beta0 H_B}/Z_B; at each time the bath temperature is
// re-solved from the bath energy expectation and the two entropy-production
// forms are evaluated.
EpSeries ep_clausius_check(const Matrix& h_s, const Matrix& h_b, const Matrix& v,
                           const DensityState& rho_s0, double beta0, const std::vector<double>& t_grid);

struct OpenSystemBound {
    double lhs = 0.0;  // S^{tau_SE}_{M_S (x) 1}(rho_SE)
    double rhs = 0.0;  // S(tau_SE) - D(rho_S || tau_S)
};

OpenSystemBound open_system_bound_check(const Povm& m_s, const DensityState& tau_se,
                                        const DensityState& rho_se, int d_s, int d_e);

} // namespace oe::eq

#endif
