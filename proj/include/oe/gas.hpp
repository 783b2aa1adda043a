#ifndef OE_GAS_HPP
#define OE_GAS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oe/rng.hpp"
#include "oe/types.hpp"

namespace oe::gas {

// 2D hard-sphere gas. The simulation runs in reduced units: box side L = 1,
// particle mass m = 1, and initial conditions rescaled so the total kinetic
// energy matches the reduced inverse temperature beta_red = 2 (thermal speed
// v0 = 1, box-crossing time T = 1). Physical parameters enter only through
// the thermal wavelength in the Sackur-Tetrode entropy.
struct GasParams {
    int n = 500;
    double l_over_r0 = 200.0;   // box side in units of the sphere radius
    double r0_pm = 100.0;       // sphere radius, picometers
    double mass_gev = 30.0;     // GeV/c^2
    double beta_inv_mev = 25.0; // physical temperature, meV
    std::uint64_t seed = 1;

    static constexpr int dims = 2;
    static constexpr double beta_red = 2.0;

    double radius() const { return 1.0 / l_over_r0; }
    double energy_target() const { return n * dims / (2.0 * beta_red); }
    double box_l_pm() const { return l_over_r0 * r0_pm; }
};

struct GasState {
    std::vector<double> x, y, vx, vy;
    std::vector<std::uint8_t> in_a;  // subsystem A membership (fixed per IC)
    double time = 0.0;

    int n() const { return static_cast<int>(x.size()); }
    double kinetic_energy() const;
    double energy_a() const;
    int count_a() const;
    double min_pair_gap(double radius) const;  // min distance - 2r over pairs
};

// Initial conditions 1..4: two-temperature halves; corner concentration;
// projectiles on a stationary block; rightward-moving chain.
GasState generate_ic(const GasParams& params, int kind, Rng& rng);

// Exact event-driven dynamics: priority queue of predicted wall/pair events
// with lazy invalidation through per-particle collision counters.
class Simulator {
public:
    Simulator(const GasParams& params, GasState initial, bool interactions = true);
    void advance_to(double t);
    const GasState& state() const { return s_; }
    long long pair_collisions() const { return pair_events_; }
    long long wall_collisions() const { return wall_events_; }

private:
    struct Event {
        double t;
        std::int32_t i, j;  // j >= 0 pair, j = -1 x-wall, j = -2 y-wall
        std::uint32_t ci, cj;
    };
    struct EventLater {
        bool operator()(const Event& a, const Event& b) const {
            if (a.t != b.t) return a.t > b.t;
            if (a.i != b.i) return a.i > b.i;
            return a.j > b.j;
        }
    };

    void drift_to(double t);
    void predict_for(int i, bool pairs_above_only);
    void predict_walls(int i);
    double pair_time(int i, int j) const;
    void rebuild_queue();
    void process(const Event& e);

    GasParams params_;
    GasState s_;
    bool interactions_;
    double r2_;  // (2r)^2
    std::vector<std::uint32_t> counter_;
    std::vector<Event> heap_;
    long long pair_events_ = 0, wall_events_ = 0;
};

// ---- single-particle coarse-grainings (empirical-distribution class) ----

enum class CgKind { Spatial, Velocity, Speed, PhaseCell, KineticEnergy };

struct SingleParticleCG {
    CgKind kind = CgKind::Spatial;
    double delta_p = 0.02;  // meta-bin width for the macrostate histogram

    // binning parameters in reduced units (v0 = 1, L = 1)
    int spatial_per_axis = 6;      // dx/L = 1/6
    double vel_width = 0.3;        // velocity grid step
    double vel_range = 2.4;        // velocity grid extent, +/-
    double speed_width = 0.1;      // = vel_width / 3
    double speed_range = 3.0;
    int pc_spatial_per_axis = 3;   // phase cells: coarser spatial grid ...
    double pc_vel_width = 1.0;     // ... times a coarser velocity grid
    double pc_vel_range = 3.0;
    double ke_width = 0.125;       // single-particle kinetic energy bins
    double ke_range = 3.0;

    static SingleParticleCG make(CgKind kind);
    static SingleParticleCG make(const std::string& name);
    std::string name() const;
    int bins() const;
    int bin_of(double x, double y, double vx, double vy) const;
};

// Histogram of particles over the CG bins, normalized by n.
ProbVector empirical_distribution(const GasState& state, const SingleParticleCG& cg);

// Bin-integrated reference distribution under the canonical prior
// (spatial uniform; velocity Gaussian; speed v e^{-v^2}; kinetic energy
// exponential), with the tail aggregated into the overflow bin.
ProbVector reference_distribution(const SingleParticleCG& cg, const GasParams& params);

// Sanov estimate S(tau) - n D(P*||Q) where P* mixes the observed histogram
// toward Q by the largest gamma in [0,1] moving every component by at most
// delta_p/2: gamma = min(1, (delta_p/2)/max_j |P_j - Q_j|).
double sanov_entropy(const ProbVector& p_obs, const ProbVector& q, int n, double delta_p,
                     double s_tau);

// Parameters of the thermodynamic (subsystem-energy) coarse-grainings.
struct ThermoParams {
    int n_a = 0, n_b = 0;
    double e_total = 0.0;  // conserved, reduced units
    double s_tau = 0.0;
    int dims = 2;

    double beta() const { return (n_a + n_b) * dims / (2.0 * e_total); }
    double eq_a() const { return e_total * n_a / double(n_a + n_b); }
    double eq_b() const { return e_total * n_b / double(n_a + n_b); }
    double alpha_a() const { return n_a * dims / 2.0 - 1.0; }
    double alpha_b() const { return n_b * dims / 2.0 - 1.0; }
    double delta_e_a() const;  // sqrt(2 pi) sigma at equilibrium
    double delta_e_b() const;
};

double thermo_entropy_joint(double e_a, double e_b, const ThermoParams& p);
double thermo_entropy_single(double e_a, const ThermoParams& p, bool drop_beta_term = false);

// S(tau) from the Sackur-Tetrode form N d ln[(L/N^{1/d})/lambda_th * sqrt(e)],
// in nats; physical parameters enter through lambda_th.
double sackur_tetrode(const GasParams& params);
// pre-Stirling form N d (ln(L/lambda_th) + 1/2) - ln N! for cross-checks
double sackur_tetrode_exact(const GasParams& params);
double thermal_wavelength_pm(const GasParams& params);

struct BoltzmannH {
    double h1 = 0.0;  // phase-cell CG (second H-theorem, finer)
    double h2 = 0.0;  // kinetic-energy CG (first H-theorem, coarser)
};
BoltzmannH boltzmann_h_entropies(const GasState& state, const GasParams& params, double s_tau);

struct GasResult {
    EntropySeries series;
    double s_tau = 0.0;
    double e_total = 0.0;
    long long pair_collisions = 0;
    GasState final_state;
};

// Run one IC and evaluate the requested coarse-grainings at the sample
// times. Track labels: spatial, velocity, speed, phase_cell, kinetic_energy,
// energy_joint, energy_single. on_sample, when set, receives every sampled
// state (snapshot export).
GasResult run_gas_experiment(const GasParams& params, int ic, const std::vector<std::string>& cgs,
                             const std::vector<double>& sample_times, bool free_streaming = false,
                             const std::function<void(const GasState&)>& on_sample = {});

} // namespace oe::gas

#endif
