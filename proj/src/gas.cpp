#include "oe/gas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "oe/threads.hpp"

namespace oe::gas {

namespace {
constexpr double kHbarC_eV_pm = 197326.9804;  // hbar c in eV * pm
}

double GasState::kinetic_energy() const {
    double e = 0.0;
    for (int i = 0; i < n(); ++i) e += 0.5 * (vx[i] * vx[i] + vy[i] * vy[i]);
    return e;
}

double GasState::energy_a() const {
    double e = 0.0;
    for (int i = 0; i < n(); ++i)
        if (in_a[i]) e += 0.5 * (vx[i] * vx[i] + vy[i] * vy[i]);
    return e;
}

int GasState::count_a() const {
    int c = 0;
    for (auto f : in_a) c += f ? 1 : 0;
    return c;
}

double GasState::min_pair_gap(double radius) const {
    double best = HUGE_VAL;
    for (int i = 0; i < n(); ++i)
        for (int j = i + 1; j < n(); ++j) {
            double dx = x[j] - x[i], dy = y[j] - y[i];
            best = std::min(best, std::sqrt(dx * dx + dy * dy) - 2.0 * radius);
        }
    return best;
}

// ---- initial conditions ----

namespace {

// place a particle uniformly in [x0,x1]x[y0,y1] without overlapping earlier ones
void place_uniform(GasState& s, int i, double x0, double x1, double y0, double y1, double r,
                   Rng& rng) {
    for (long attempt = 0; attempt < 1000000; ++attempt) {
        double px = rng.uniform(x0, x1), py = rng.uniform(y0, y1);
        bool ok = true;
        for (int j = 0; j < i; ++j) {
            double dx = px - s.x[j], dy = py - s.y[j];
            if (dx * dx + dy * dy < 4.0 * r * r) {
                ok = false;
                break;
            }
        }
        if (ok) {
            s.x[i] = px;
            s.y[i] = py;
            return;
        }
    }
    throw std::runtime_error("generate_ic: rejection sampling failed after 1e6 attempts");
}

void rescale_to_target(GasState& s, double e_target) {
    double e = s.kinetic_energy();
    if (e <= 0.0) throw std::runtime_error("generate_ic: zero kinetic energy");
    double f = std::sqrt(e_target / e);
    for (int i = 0; i < s.n(); ++i) {
        s.vx[i] *= f;
        s.vy[i] *= f;
    }
}

} // namespace

GasState generate_ic(const GasParams& params, int kind, Rng& rng) {
    const int n = params.n;
    const double r = params.radius();
    if (params.l_over_r0 <= 4.0) throw std::invalid_argument("generate_ic: radius too large for box");
    GasState s;
    s.x.assign(n, 0.0);
    s.y.assign(n, 0.0);
    s.vx.assign(n, 0.0);
    s.vy.assign(n, 0.0);
    s.in_a.assign(n, 0);

    switch (kind) {
        case 1: {
            // halves at two temperatures, A = left half
            int na = n / 2;
            double t_hot = 1.5, t_cold = 0.5;
            for (int i = 0; i < n; ++i) {
                bool a = i < na;
                s.in_a[i] = a ? 1 : 0;
                if (a)
                    place_uniform(s, i, r, 0.5 - r, r, 1.0 - r, r, rng);
                else
                    place_uniform(s, i, 0.5 + r, 1.0 - r, r, 1.0 - r, r, rng);
                double sig = std::sqrt(a ? t_hot : t_cold);
                s.vx[i] = sig * rng.normal();
                s.vy[i] = sig * rng.normal();
            }
            break;
        }
        case 2: {
            // corner concentration, uniform random velocities; A = random quarter
            for (int i = 0; i < n; ++i) {
                place_uniform(s, i, r, 1.0 / 3.0 - r, r, 1.0 / 3.0 - r, r, rng);
                s.vx[i] = rng.uniform(-1.0, 1.0);
                s.vy[i] = rng.uniform(-1.0, 1.0);
            }
            int marked = 0;
            while (marked < n / 4) {
                int i = static_cast<int>(rng.uniform_index(n));
                if (!s.in_a[i]) {
                    s.in_a[i] = 1;
                    ++marked;
                }
            }
            break;
        }
        case 3: {
            // projectiles impinging on a stationary block; A = projectiles
            int n_proj = std::max(1, n / 20);
            for (int i = 0; i < n_proj; ++i) {
                s.in_a[i] = 1;
                place_uniform(s, i, r, 0.08, r, 1.0 - r, r, rng);
                s.vx[i] = 6.0 + rng.uniform(0.0, 0.5);
                s.vy[i] = 0.1 * rng.normal();
            }
            // block: lattice centered right of the middle, at rest
            int rows = static_cast<int>(std::ceil(std::sqrt(double(n - n_proj))));
            double spacing = 2.4 * r;
            double x0 = 0.55 - 0.5 * rows * spacing, y0 = 0.5 - 0.5 * rows * spacing;
            int placed = n_proj;
            for (int row = 0; row < rows && placed < n; ++row)
                for (int col = 0; col < rows && placed < n; ++col) {
                    s.x[placed] = x0 + col * spacing;
                    s.y[placed] = y0 + row * spacing;
                    ++placed;
                }
            break;
        }
        case 4: {
            // rightward-moving chain x = i/2n, y = x^2, v = (e^{3x}, e^{3y});
            // positions jittered (the literal curve overlaps hard spheres at
            // N = 500) and re-drawn until disjoint; A = leftmost quarter
            for (int i = 0; i < n; ++i) {
                double xb = double(i) / (2.0 * n);
                double yb = xb * xb;
                s.in_a[i] = i < n / 4 ? 1 : 0;
                for (long attempt = 0;; ++attempt) {
                    if (attempt >= 1000000)
                        throw std::runtime_error("generate_ic: rejection sampling failed after 1e6 attempts");
                    double px = std::clamp(xb + rng.uniform(-0.07, 0.07), r, 1.0 - r);
                    double py = std::clamp(yb + 0.1 + rng.uniform(-0.07, 0.07), r, 1.0 - r);
                    bool ok = true;
                    for (int j = 0; j < i; ++j) {
                        double dx = px - s.x[j], dy = py - s.y[j];
                        if (dx * dx + dy * dy < 4.0 * r * r) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) {
                        s.x[i] = px;
                        s.y[i] = py;
                        break;
                    }
                }
                s.vx[i] = std::exp(3.0 * xb);
                s.vy[i] = std::exp(3.0 * yb);
            }
            break;
        }
        default:
            throw std::invalid_argument("generate_ic: kind must be 1..4");
    }
    rescale_to_target(s, params.energy_target());
    return s;
}

// ---- event-driven simulator ----

Simulator::Simulator(const GasParams& params, GasState initial, bool interactions)
    : params_(params), s_(std::move(initial)), interactions_(interactions) {
    const double r = params_.radius();
    r2_ = 4.0 * r * r;
    counter_.assign(s_.n(), 0);
    if (interactions_ && s_.min_pair_gap(r) < -1e-9 * r)
        throw std::invalid_argument("Simulator: initial overlap");
    rebuild_queue();
}

double Simulator::pair_time(int i, int j) const {
    double dx = s_.x[j] - s_.x[i], dy = s_.y[j] - s_.y[i];
    double dvx = s_.vx[j] - s_.vx[i], dvy = s_.vy[j] - s_.vy[i];
    double b = dx * dvx + dy * dvy;
    if (b >= 0.0) return -1.0;  // receding
    double c = dx * dx + dy * dy - r2_;
    if (c < 0.0) return 0.0;  // round-off overlap, approaching: collide now
    double v2 = dvx * dvx + dvy * dvy;
    double disc = b * b - v2 * c;
    if (disc <= 0.0) return -1.0;
    return c / (-b + std::sqrt(disc));  // stable form, no cancellation
}

void Simulator::predict_walls(int i) {
    const double r = params_.radius();
    if (s_.vx[i] != 0.0) {
        double t = s_.vx[i] > 0.0 ? (1.0 - r - s_.x[i]) / s_.vx[i] : (r - s_.x[i]) / s_.vx[i];
        heap_.push_back({s_.time + std::max(t, 0.0), i, -1, counter_[i], 0});
        std::push_heap(heap_.begin(), heap_.end(), EventLater{});
    }
    if (s_.vy[i] != 0.0) {
        double t = s_.vy[i] > 0.0 ? (1.0 - r - s_.y[i]) / s_.vy[i] : (r - s_.y[i]) / s_.vy[i];
        heap_.push_back({s_.time + std::max(t, 0.0), i, -2, counter_[i], 0});
        std::push_heap(heap_.begin(), heap_.end(), EventLater{});
    }
}

void Simulator::predict_for(int i, bool pairs_above_only) {
    predict_walls(i);
    if (!interactions_) return;
    int j0 = pairs_above_only ? i + 1 : 0;
    for (int j = j0; j < s_.n(); ++j) {
        if (j == i) continue;
        double t = pair_time(i, j);
        if (t >= 0.0) {
            heap_.push_back({s_.time + t, std::min(i, j), std::max(i, j),
                             counter_[std::min(i, j)], counter_[std::max(i, j)]});
            std::push_heap(heap_.begin(), heap_.end(), EventLater{});
        }
    }
}

void Simulator::rebuild_queue() {
    heap_.clear();
    for (int i = 0; i < s_.n(); ++i) predict_for(i, true);
}

void Simulator::drift_to(double t) {
    double dt = t - s_.time;
    if (dt == 0.0) return;
    if (dt < -1e-12) throw std::runtime_error("Simulator: event-time regression");
    for (int i = 0; i < s_.n(); ++i) {
        s_.x[i] += s_.vx[i] * dt;
        s_.y[i] += s_.vy[i] * dt;
    }
    s_.time = t;
}

void Simulator::process(const Event& e) {
    drift_to(std::max(e.t, s_.time));
    const double r = params_.radius();
    if (e.j >= 0) {
        int i = e.i, j = e.j;
        double dx = s_.x[j] - s_.x[i], dy = s_.y[j] - s_.y[i];
        double d = std::sqrt(dx * dx + dy * dy);
        double nx = dx / d, ny = dy / d;
        double w = (s_.vx[j] - s_.vx[i]) * nx + (s_.vy[j] - s_.vy[i]) * ny;
        if (w >= 0.0) return;  // stale geometry, drop
        s_.vx[i] += w * nx;
        s_.vy[i] += w * ny;
        s_.vx[j] -= w * nx;
        s_.vy[j] -= w * ny;
        ++counter_[i];
        ++counter_[j];
        ++pair_events_;
        predict_for(i, false);
        predict_for(j, false);
    } else {
        int i = e.i;
        if (e.j == -1) {
            s_.x[i] = s_.vx[i] > 0.0 ? 1.0 - r : r;  // pin to the contact plane
            s_.vx[i] = -s_.vx[i];
        } else {
            s_.y[i] = s_.vy[i] > 0.0 ? 1.0 - r : r;
            s_.vy[i] = -s_.vy[i];
        }
        ++counter_[i];
        ++wall_events_;
        predict_for(i, false);
    }
}

void Simulator::advance_to(double t_end) {
    while (!heap_.empty() && heap_.front().t <= t_end) {
        std::pop_heap(heap_.begin(), heap_.end(), EventLater{});
        Event e = heap_.back();
        heap_.pop_back();
        bool valid = counter_[e.i] == e.ci && (e.j < 0 || counter_[e.j] == e.cj);
        if (valid) process(e);
        if (heap_.size() > 4000000) {
            drift_to(s_.time);
            rebuild_queue();
        }
    }
    drift_to(t_end);
}

// ---- coarse-grainings ----

SingleParticleCG SingleParticleCG::make(CgKind kind) {
    SingleParticleCG cg;
    cg.kind = kind;
    return cg;
}

SingleParticleCG SingleParticleCG::make(const std::string& name) {
    if (name == "spatial") return make(CgKind::Spatial);
    if (name == "velocity") return make(CgKind::Velocity);
    if (name == "speed") return make(CgKind::Speed);
    if (name == "phase_cell") return make(CgKind::PhaseCell);
    if (name == "kinetic_energy") return make(CgKind::KineticEnergy);
    throw std::invalid_argument("SingleParticleCG: unknown kind '" + name + "'");
}

std::string SingleParticleCG::name() const {
    switch (kind) {
        case CgKind::Spatial: return "spatial";
        case CgKind::Velocity: return "velocity";
        case CgKind::Speed: return "speed";
        case CgKind::PhaseCell: return "phase_cell";
        case CgKind::KineticEnergy: return "kinetic_energy";
    }
    return "?";
}

int SingleParticleCG::bins() const {
    int vg = 2 * static_cast<int>(std::round(vel_range / vel_width));
    int pcg = 2 * static_cast<int>(std::round(pc_vel_range / pc_vel_width));
    switch (kind) {
        case CgKind::Spatial: return spatial_per_axis * spatial_per_axis;
        case CgKind::Velocity: return vg * vg + 1;
        case CgKind::Speed: return static_cast<int>(std::round(speed_range / speed_width)) + 1;
        case CgKind::PhaseCell: return pc_spatial_per_axis * pc_spatial_per_axis * (pcg * pcg + 1);
        case CgKind::KineticEnergy: return static_cast<int>(std::round(ke_range / ke_width)) + 1;
    }
    return 0;
}

namespace {
inline int grid_index(double v, double width, double range) {
    // symmetric grid about 0 covering [-range, range); -1 = overflow
    if (v < -range || v >= range) return -1;
    return static_cast<int>(std::floor((v + range) / width));
}
} // namespace

int SingleParticleCG::bin_of(double px, double py, double pvx, double pvy) const {
    switch (kind) {
        case CgKind::Spatial: {
            int ix = std::min(spatial_per_axis - 1, std::max(0, (int)std::floor(px * spatial_per_axis)));
            int iy = std::min(spatial_per_axis - 1, std::max(0, (int)std::floor(py * spatial_per_axis)));
            return iy * spatial_per_axis + ix;
        }
        case CgKind::Velocity: {
            int per_axis = 2 * static_cast<int>(std::round(vel_range / vel_width));
            int ix = grid_index(pvx, vel_width, vel_range);
            int iy = grid_index(pvy, vel_width, vel_range);
            if (ix < 0 || iy < 0) return per_axis * per_axis;  // overflow
            return iy * per_axis + ix;
        }
        case CgKind::Speed: {
            double v = std::sqrt(pvx * pvx + pvy * pvy);
            int nb = static_cast<int>(std::round(speed_range / speed_width));
            int ix = static_cast<int>(std::floor(v / speed_width));
            return ix >= nb ? nb : ix;
        }
        case CgKind::PhaseCell: {
            int sx = std::min(pc_spatial_per_axis - 1, std::max(0, (int)std::floor(px * pc_spatial_per_axis)));
            int sy = std::min(pc_spatial_per_axis - 1, std::max(0, (int)std::floor(py * pc_spatial_per_axis)));
            int scell = sy * pc_spatial_per_axis + sx;
            int per_axis = 2 * static_cast<int>(std::round(pc_vel_range / pc_vel_width));
            int vcells = per_axis * per_axis + 1;
            int ix = grid_index(pvx, pc_vel_width, pc_vel_range);
            int iy = grid_index(pvy, pc_vel_width, pc_vel_range);
            int vcell = (ix < 0 || iy < 0) ? per_axis * per_axis : iy * per_axis + ix;
            return scell * vcells + vcell;
        }
        case CgKind::KineticEnergy: {
            double e = 0.5 * (pvx * pvx + pvy * pvy);
            int nb = static_cast<int>(std::round(ke_range / ke_width));
            int ix = static_cast<int>(std::floor(e / ke_width));
            return ix >= nb ? nb : ix;
        }
    }
    return 0;
}

ProbVector empirical_distribution(const GasState& state, const SingleParticleCG& cg) {
    std::vector<double> h(cg.bins(), 0.0);
    for (int i = 0; i < state.n(); ++i)
        h[cg.bin_of(state.x[i], state.y[i], state.vx[i], state.vy[i])] += 1.0 / state.n();
    return ProbVector(std::move(h));
}

namespace {

// 1D Gaussian bin mass for density ~ e^{-v^2} (v0 = 1)
double gauss_bin(double a, double b) { return 0.5 * (std::erf(b) - std::erf(a)); }

std::vector<double> velocity_grid_reference(double width, double range) {
    int per_axis = 2 * static_cast<int>(std::round(range / width));
    std::vector<double> q(per_axis * per_axis + 1, 0.0);
    std::vector<double> axis(per_axis);
    for (int i = 0; i < per_axis; ++i) axis[i] = gauss_bin(-range + i * width, -range + (i + 1) * width);
    double covered = 0.0;
    for (int iy = 0; iy < per_axis; ++iy)
        for (int ix = 0; ix < per_axis; ++ix) {
            q[iy * per_axis + ix] = axis[ix] * axis[iy];
            covered += q[iy * per_axis + ix];
        }
    q[per_axis * per_axis] = std::max(0.0, 1.0 - covered);
    return q;
}

} // namespace

ProbVector reference_distribution(const SingleParticleCG& cg, const GasParams&) {
    // reduced units: v0 = 1, beta_red = 2, single-particle KE ~ Exp(beta_red)
    switch (cg.kind) {
        case CgKind::Spatial: {
            int b = cg.spatial_per_axis * cg.spatial_per_axis;
            return ProbVector(std::vector<double>(b, 1.0 / b));
        }
        case CgKind::Velocity:
            return ProbVector(velocity_grid_reference(cg.vel_width, cg.vel_range));
        case CgKind::Speed: {
            int nb = static_cast<int>(std::round(cg.speed_range / cg.speed_width));
            std::vector<double> q(nb + 1, 0.0);
            for (int i = 0; i < nb; ++i) {
                double a = i * cg.speed_width, b = (i + 1) * cg.speed_width;
                q[i] = std::exp(-a * a) - std::exp(-b * b);
            }
            q[nb] = std::exp(-cg.speed_range * cg.speed_range);
            return ProbVector(std::move(q));
        }
        case CgKind::PhaseCell: {
            std::vector<double> vq = velocity_grid_reference(cg.pc_vel_width, cg.pc_vel_range);
            int scells = cg.pc_spatial_per_axis * cg.pc_spatial_per_axis;
            std::vector<double> q;
            q.reserve(scells * vq.size());
            for (int s = 0; s < scells; ++s)
                for (double v : vq) q.push_back(v / scells);
            return ProbVector(std::move(q));
        }
        case CgKind::KineticEnergy: {
            int nb = static_cast<int>(std::round(cg.ke_range / cg.ke_width));
            std::vector<double> q(nb + 1, 0.0);
            for (int i = 0; i < nb; ++i) {
                double a = i * cg.ke_width, b = (i + 1) * cg.ke_width;
                q[i] = std::exp(-GasParams::beta_red * a) - std::exp(-GasParams::beta_red * b);
            }
            q[nb] = std::exp(-GasParams::beta_red * cg.ke_range);
            return ProbVector(std::move(q));
        }
    }
    throw std::logic_error("reference_distribution: unreachable");
}

double sanov_entropy(const ProbVector& p_obs, const ProbVector& q, int n, double delta_p,
                     double s_tau) {
    if (p_obs.size() != q.size()) throw std::invalid_argument("sanov_entropy: size mismatch");
    double max_dev = 0.0;
    for (std::size_t j = 0; j < p_obs.size(); ++j) {
        if (q[j] <= 0.0 && p_obs[j] > 0.0)
            throw std::invalid_argument("sanov_entropy: observed mass outside the reference support");
        max_dev = std::max(max_dev, std::abs(p_obs[j] - q[j]));
    }
    double gamma = max_dev > 0.0 ? std::min(1.0, (0.5 * delta_p) / max_dev) : 1.0;
    double d = 0.0;
    for (std::size_t j = 0; j < p_obs.size(); ++j) {
        double pj = (1.0 - gamma) * p_obs[j] + gamma * q[j];
        if (pj > 0.0) d += pj * std::log(pj / q[j]);
    }
    return s_tau - n * d;
}

double ThermoParams::delta_e_a() const { return std::sqrt(2.0 * M_PI) * std::sqrt(2.0 / (n_a * dims)) * eq_a(); }
double ThermoParams::delta_e_b() const { return std::sqrt(2.0 * M_PI) * std::sqrt(2.0 / (n_b * dims)) * eq_b(); }

double thermo_entropy_joint(double e_a, double e_b, const ThermoParams& p) {
    if (e_a <= 0.0 || e_b <= 0.0) throw std::invalid_argument("thermo_entropy_joint: nonpositive energy");
    return p.s_tau - p.alpha_a() * std::log(p.eq_a() / e_a) - p.alpha_b() * std::log(p.eq_b() / e_b);
}

double thermo_entropy_single(double e_a, const ThermoParams& p, bool drop_beta_term) {
    if (e_a <= 0.0) throw std::invalid_argument("thermo_entropy_single: nonpositive energy");
    double s = p.s_tau - p.alpha_a() * std::log(p.eq_a() / e_a);
    if (!drop_beta_term) s -= p.beta() * (e_a - p.eq_a());
    return s;
}

double thermal_wavelength_pm(const GasParams& params) {
    double beta_per_ev = 1.0 / (params.beta_inv_mev * 1e-3);
    double mc2_ev = params.mass_gev * 1e9;
    return kHbarC_eV_pm * std::sqrt(2.0 * M_PI * beta_per_ev / mc2_ev);
}

double sackur_tetrode(const GasParams& params) {
    double l_pm = params.box_l_pm();
    double per_particle_cell = l_pm / std::pow(double(params.n), 1.0 / GasParams::dims);
    return params.n * GasParams::dims *
           (std::log(per_particle_cell / thermal_wavelength_pm(params)) + 0.5);
}

double sackur_tetrode_exact(const GasParams& params) {
    double l_pm = params.box_l_pm();
    return params.n * GasParams::dims * (std::log(l_pm / thermal_wavelength_pm(params)) + 0.5) -
           std::lgamma(double(params.n) + 1.0);
}

BoltzmannH boltzmann_h_entropies(const GasState& state, const GasParams& params, double s_tau) {
    BoltzmannH out;
    SingleParticleCG pc = SingleParticleCG::make(CgKind::PhaseCell);
    SingleParticleCG ke = SingleParticleCG::make(CgKind::KineticEnergy);
    out.h1 = sanov_entropy(empirical_distribution(state, pc), reference_distribution(pc, params),
                           state.n(), pc.delta_p, s_tau);
    out.h2 = sanov_entropy(empirical_distribution(state, ke), reference_distribution(ke, params),
                           state.n(), ke.delta_p, s_tau);
    return out;
}

// ---- experiment driver ----

namespace {

// macrostate identity of a histogram: the exact count vector
long long macro_id_of(const ProbVector& p, int n, std::map<std::vector<int>, long long>& dict) {
    std::vector<int> key(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) key[j] = static_cast<int>(std::lround(p[j] * n));
    auto [it, fresh] = dict.emplace(key, static_cast<long long>(dict.size()));
    return it->second;
}

} // namespace

GasResult run_gas_experiment(const GasParams& params, int ic, const std::vector<std::string>& cgs,
                             const std::vector<double>& sample_times, bool free_streaming,
                             const std::function<void(const GasState&)>& on_sample) {
    Rng ic_rng = substream(params.seed, "ic");
    GasState initial = generate_ic(params, ic, ic_rng);
    Simulator sim(params, initial, !free_streaming);

    GasResult res;
    res.s_tau = sackur_tetrode(params);
    res.e_total = initial.kinetic_energy();

    ThermoParams tp;
    tp.n_a = initial.count_a();
    tp.n_b = params.n - tp.n_a;
    tp.e_total = res.e_total;
    tp.s_tau = res.s_tau;

    struct CgSlot {
        SingleParticleCG cg;
        ProbVector q;
        std::map<std::vector<int>, long long> dict;
    };
    std::vector<CgSlot> sanov_slots;
    bool want_joint = false, want_single = false;
    for (const std::string& name : cgs) {
        if (name == "energy_joint") {
            want_joint = true;
        } else if (name == "energy_single") {
            want_single = true;
        } else {
            SingleParticleCG cg = SingleParticleCG::make(name);
            sanov_slots.push_back({cg, reference_distribution(cg, params), {}});
        }
    }

    auto make_track = [&](const std::string& label) {
        SeriesTrack tr;
        tr.label = label;
        tr.points.resize(sample_times.size());
        tr.macro_ids.resize(sample_times.size());
        return tr;
    };
    std::vector<SeriesTrack> tracks;
    for (auto& slot : sanov_slots) tracks.push_back(make_track(slot.cg.name()));
    if (want_joint) tracks.push_back(make_track("energy_joint"));
    if (want_single) tracks.push_back(make_track("energy_single"));

    for (std::size_t k = 0; k < sample_times.size(); ++k) {
        sim.advance_to(sample_times[k]);
        const GasState& st = sim.state();
        if (on_sample) on_sample(st);

        double e_a = st.energy_a();
        double e_b = st.kinetic_energy() - e_a;
        std::size_t ti = 0;
        for (auto& slot : sanov_slots) {
            ProbVector p = empirical_distribution(st, slot.cg);
            SeriesPoint pt;
            pt.t = st.time;
            pt.s_tau = res.s_tau;
            pt.e_a = e_a;
            pt.e_b = e_b;
            pt.s_oe = ExtReal(sanov_entropy(p, slot.q, params.n, slot.cg.delta_p, res.s_tau));
            pt.s_traditional = ExtReal::pos_inf();  // W_x infinite in the continuum
            tracks[ti].points[k] = pt;
            tracks[ti].macro_ids[k] = macro_id_of(p, params.n, slot.dict);
            ++ti;
        }
        if (want_joint) {
            SeriesPoint pt;
            pt.t = st.time;
            pt.s_tau = res.s_tau;
            pt.e_a = e_a;
            pt.e_b = e_b;
            double s = thermo_entropy_joint(e_a, e_b, tp);
            pt.s_oe = ExtReal(s);
            pt.s_traditional = ExtReal(s);  // equal at the computed order
            tracks[ti].points[k] = pt;
            long long wa = llround(std::floor((e_a - tp.eq_a()) / tp.delta_e_a() + 0.5));
            long long wb = llround(std::floor((e_b - tp.eq_b()) / tp.delta_e_b() + 0.5));
            tracks[ti].macro_ids[k] = wa * 100003 + wb;
            ++ti;
        }
        if (want_single) {
            SeriesPoint pt;
            pt.t = st.time;
            pt.s_tau = res.s_tau;
            pt.e_a = e_a;
            pt.e_b = e_b;
            pt.s_oe = ExtReal(thermo_entropy_single(e_a, tp));
            pt.s_traditional = ExtReal(thermo_entropy_single(e_a, tp, true));
            tracks[ti].points[k] = pt;
            tracks[ti].macro_ids[k] = llround(std::floor((e_a - tp.eq_a()) / tp.delta_e_a() + 0.5));
            ++ti;
        }
    }

    res.series.tracks = std::move(tracks);
    res.pair_collisions = sim.pair_collisions();
    res.final_state = sim.state();
    return res;
}

} // namespace oe::gas
