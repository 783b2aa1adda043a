#ifndef OE_RMT_HPP
#define OE_RMT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oe/rng.hpp"
#include "oe/types.hpp"

namespace oe::rmt {

// Random-matrix heat-exchange model: two subsystems with random local
// spectra, a banded random interaction, canonical prior from total-energy
// conservation, and coarse local-energy measurements.
struct RmtParams {
    int d_a = 40;
    int d_b = 40;
    double delta_band = 5.2;   // band width of the interaction envelope
    double delta_v = 0.5;      // in-band RMS of V entries
    std::optional<double> coupling_override;  // lambda, computed unless overridden
    double beta_a = 0.25;      // hot side
    double beta_b = 7.0;       // cold side
    double delta_e_meas = 0.5; // coarse energy window width
    std::uint64_t seed = 1;
    std::vector<double> time_grid;  // empty -> built from the fields below
    double t_max_over_t = 300.0;
    int n_times = 240;
    bool log_grid = true;  // log-spaced in ln(1 + t/T), else uniform in t

    double coupling() const {
        if (coupling_override) return *coupling_override;
        return delta_band * delta_band / (20.0 * d_a * delta_v);
    }
    double timescale() const { return 1.0 / (50.0 * coupling()); }
    std::vector<double> make_time_grid() const;
};

struct RmtSystem {
    RmtParams params;
    RVector e_a, e_b;   // local spectra (the local Hamiltonians are diagonal)
    Matrix h_int;       // lambda * V in the product basis
    RVector evals;      // spectrum of the total Hamiltonian
    Matrix evecs;       // eigenvectors, columns, in the product basis
    int dim() const { return params.d_a * params.d_b; }
};

// i.i.d. standard-normal spectrum, sorted ascending.
RVector build_local_hamiltonian(int d, Rng& rng);

// Hermitian V in the product eigenbasis with E|V_ij|^2 = delta_v^2 *
// exp(-((E_i - E_j)/delta_band)^2), real Gaussian diagonal; returns
// lambda * V.
Matrix build_banded_interaction(const RmtParams& params, const RVector& e_a, const RVector& e_b,
                                Rng& rng);

RmtSystem build_system(const RmtParams& params);

// |psi> ~ (e^{-beta_a H_A/2} (x) e^{-beta_b H_B/2}) |phi>, phi Haar-random;
// amplitudes in the product basis.
CVector initial_state(const RmtParams& params, const RmtSystem& system, Rng& rng);

// spectral evolution helpers
CVector evolve_state(const RmtSystem& system, const CVector& psi0, double t);
DensityState unitary_evolve(const RVector& evals, const Matrix& evecs, const DensityState& rho0,
                            double t);
DensityState evolve(const RmtSystem& system, const DensityState& rho0, double t);

// Coarse local-energy measurement as a partition of product-basis indices
// (all effects are diagonal 0/1 projectors in that basis).
struct IndexPartition {
    std::vector<std::vector<int>> cells;
    std::vector<std::string> labels;
    std::size_t outcomes() const { return cells.size(); }
};

IndexPartition joint_energy_partition(const RVector& e_a, const RVector& e_b, double delta_e,
                                      double origin = 0.0);
IndexPartition one_sided_energy_partition(const RVector& e_a, int d_b, double delta_e,
                                          double origin = 0.0);

struct RmtResult {
    EntropySeries series;   // tracks "EAxEB" and "EAx1"
    double s_tau = 0.0;
    double beta = 0.0;      // canonical prior temperature
    double e_total = 0.0;
    double timescale = 0.0;
    // time-averaged-state diagnostics (rho_bar = dephased initial state)
    double d2_rho_bar = 0.0;       // effective dimension 1/tr(rho_bar^2)
    double s_rho_bar = 0.0;        // S(rho_bar)
    std::vector<double> qbar_joint;     // rho_bar-induced distribution, joint M
    std::vector<double> qbar_one_sided;
    int m_joint = 0;               // outcome counts
    int m_one_sided = 0;
};

RmtResult run_rmt_experiment(const RmtParams& params);

} // namespace oe::rmt

#endif
