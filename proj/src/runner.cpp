#include "oe/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "oe/checks.hpp"
#include "oe/entropy.hpp"
#include "oe/equilibration.hpp"
#include "oe/gas.hpp"
#include "oe/maxent.hpp"
#include "oe/measurements.hpp"
#include "oe/rmt.hpp"
#include "oe/svg.hpp"

namespace oe::cli {

namespace {

using nlohmann::json;

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json report_to_json(const eq::EquilibrationReport& rep) {
    json j;
    j["delta"] = rep.delta;
    j["eq_term"] = rep.eq_term;
    j["to_tau_term"] = rep.to_tau_term;
    j["samples"] = rep.samples;
    if (rep.bound_rhobar) j["bound_rhobar"] = *rep.bound_rhobar;
    if (rep.bound_eigenstate) j["bound_eigenstate"] = *rep.bound_eigenstate;
    if (rep.eth_spread) j["eth_spread"] = *rep.eth_spread;
    j["tails"] = json::array();
    for (const auto& t : rep.tails)
        j["tails"].push_back({{"delta", t.delta},
                              {"observed_fraction", t.observed_fraction},
                              {"markov_bound", t.markov_bound}});
    return j;
}

void write_outputs(const Config& cfg, const EntropySeries& series, json summary, double t_scale) {
    std::string csv = series_to_csv(series);
    if (cfg.has("output.csv")) atomic_write(cfg.get("output.csv", ""), csv);

    // delta statistics per track, when enough samples are present
    summary["tracks"] = json::array();
    for (const auto& tr : series.tracks) {
        json tj;
        tj["label"] = tr.label;
        tj["points"] = tr.points.size();
        if (tr.points.size() >= 50) {
            try {
                eq::EquilibrationReport rep = eq::delta_statistics(tr, tr.points[0].s_tau);
                tj["delta_statistics"] = report_to_json(rep);
            } catch (const std::exception& e) {
                tj["delta_statistics_error"] = e.what();
            }
        }
        summary["tracks"].push_back(tj);
    }
    if (cfg.has("output.json")) atomic_write(cfg.get("output.json", ""), summary.dump(2) + "\n");

    if (cfg.has("output.svg")) {
        bool bits = cfg.get_bool("bits", false);
        double unit = bits ? 1.0 / std::log(2.0) : 1.0;
        std::vector<PlotSeries> plots;
        for (const auto& tr : series.tracks) {
            PlotSeries ps;
            ps.label = tr.label;
            for (const auto& pt : tr.points) {
                ps.x.push_back(std::log1p(pt.t / t_scale));
                ps.y.push_back(pt.s_oe.finite() ? pt.s_oe.value() * unit : NAN);
            }
            plots.push_back(std::move(ps));
        }
        atomic_write(cfg.get("output.svg", ""),
                     render_svg(plots, "ln(1 + t/T)", bits ? "S [bits]" : "S [nats]"));
    }
}

int run_rmt(const Config& cfg) {
    rmt::RmtParams p;
    bool full = cfg.get_bool("rmt.full_scale", false);
    if (full) {
        p.d_a = p.d_b = 140;
        std::fprintf(stderr,
                     "note: full-scale run (d=140 per side, total dimension 19600); "
                     "dense diagonalization will take hours and several GB of memory\n");
    }
    p.d_a = static_cast<int>(cfg.get_int("rmt.d_a", p.d_a));
    p.d_b = static_cast<int>(cfg.get_int("rmt.d_b", p.d_b));
    p.delta_band = cfg.get_num("rmt.delta_band", p.delta_band);
    p.delta_v = cfg.get_num("rmt.delta_v", p.delta_v);
    if (cfg.has("rmt.coupling")) p.coupling_override = cfg.get_num("rmt.coupling", 0.0);
    p.beta_a = cfg.get_num("rmt.beta_a", p.beta_a);
    p.beta_b = cfg.get_num("rmt.beta_b", p.beta_b);
    p.delta_e_meas = cfg.get_num("rmt.delta_e_meas", p.delta_e_meas);
    p.t_max_over_t = cfg.get_num("rmt.t_max_over_t", p.t_max_over_t);
    p.n_times = static_cast<int>(cfg.get_int("rmt.n_times", p.n_times));
    p.log_grid = cfg.get("rmt.grid", "log") == "log";
    p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));

    rmt::RmtResult res = rmt::run_rmt_experiment(p);
    json summary;
    summary["experiment"] = "rmt";
    summary["seed"] = p.seed;
    summary["s_tau"] = res.s_tau;
    summary["beta"] = res.beta;
    summary["e_total"] = res.e_total;
    summary["timescale"] = res.timescale;
    summary["d2_rho_bar"] = res.d2_rho_bar;
    summary["s_rho_bar"] = res.s_rho_bar;
    summary["m_joint"] = res.m_joint;
    summary["m_one_sided"] = res.m_one_sided;
    summary["bound_rhobar_joint"] = eq::bound_rhobar_from_d2(res.m_joint, res.d2_rho_bar);
    write_outputs(cfg, res.series, std::move(summary), res.timescale);
    return kExitOk;
}

int run_gas(const Config& cfg) {
    gas::GasParams p;
    p.n = static_cast<int>(cfg.get_int("gas.n", p.n));
    p.l_over_r0 = cfg.get_num("gas.l_over_r0", p.l_over_r0);
    p.r0_pm = cfg.get_num("gas.r0_pm", p.r0_pm);
    p.mass_gev = cfg.get_num("gas.mass_gev", p.mass_gev);
    p.beta_inv_mev = cfg.get_num("gas.beta_inv_mev", p.beta_inv_mev);
    p.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 1));
    int ic = static_cast<int>(cfg.get_int("gas.ic", 1));
    double t_end = cfg.get_num("gas.t_end", 12.0);
    int n_times = static_cast<int>(cfg.get_int("gas.n_times", 240));
    bool free_case = cfg.get_bool("gas.free", false);
    std::vector<std::string> cgs = cfg.get_list("gas.cg");
    if (cgs.empty()) cgs = {"spatial", "velocity", "speed", "energy_joint", "energy_single"};

    std::vector<double> times(n_times);
    for (int i = 0; i < n_times; ++i) times[i] = t_end * i / double(n_times - 1);

    std::string snapshots;
    std::function<void(const gas::GasState&)> on_sample;
    if (cfg.has("output.snapshots")) {
        on_sample = [&snapshots](const gas::GasState& st) {
            for (int i = 0; i < st.n(); ++i) {
                snapshots += fmt_full(st.time) + " " + std::to_string(i) + " " + fmt_full(st.x[i]) +
                             " " + fmt_full(st.y[i]) + " " + fmt_full(st.vx[i]) + " " +
                             fmt_full(st.vy[i]) + "\n";
            }
        };
    }

    gas::GasResult res = gas::run_gas_experiment(p, ic, cgs, times, free_case, on_sample);
    if (cfg.has("output.snapshots"))
        atomic_write(cfg.get("output.snapshots", ""), "# t id x y vx vy\n" + snapshots);

    json summary;
    summary["experiment"] = "gas";
    summary["seed"] = p.seed;
    summary["ic"] = ic;
    summary["free"] = free_case;
    summary["s_tau"] = res.s_tau;
    summary["s_tau_per_particle"] = res.s_tau / p.n;
    summary["e_total"] = res.e_total;
    summary["pair_collisions"] = res.pair_collisions;
    write_outputs(cfg, res.series, std::move(summary), 1.0);
    return kExitOk;
}

int run_entropy_eval(const Config& cfg) {
    std::vector<double> diag = cfg.get_num_list("eval.state.diag");
    if (diag.empty()) throw std::invalid_argument("entropy-eval: eval.state.diag required");
    int dim = static_cast<int>(cfg.get_int("eval.dim", static_cast<long long>(diag.size())));
    if (dim != static_cast<int>(diag.size()))
        throw std::invalid_argument("entropy-eval: eval.dim disagrees with state length");
    Matrix rho_m = Matrix::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) rho_m(i, i) = diag[i];
    DensityState rho(rho_m);

    std::string prior_kind = cfg.get("eval.prior", "uniform");
    maxent::Prior prior = maxent::uniform_prior(dim);
    Matrix h = Matrix::Zero(dim, dim);
    std::vector<double> hdiag = cfg.get_num_list("eval.prior.h.diag");
    if (!hdiag.empty()) {
        if (static_cast<int>(hdiag.size()) != dim)
            throw std::invalid_argument("entropy-eval: prior H dimension mismatch");
        for (int i = 0; i < dim; ++i) h(i, i) = hdiag[i];
    }
    if (prior_kind == "canonical") {
        prior = maxent::canonical_prior(h, cfg.get_num("eval.prior.e", 0.0));
    } else if (prior_kind == "microcanonical") {
        int rank = static_cast<int>(cfg.get_int("eval.prior.rank", 1));
        Matrix pi = Matrix::Zero(dim, dim);
        for (int i = 0; i < rank; ++i) pi(i, i) = 1.0;
        prior = maxent::microcanonical_prior(pi);
    } else if (prior_kind != "uniform") {
        throw std::invalid_argument("entropy-eval: unknown prior '" + prior_kind + "'");
    }

    std::string meas_kind = cfg.get("eval.measurement", "basis");
    Povm m = Povm::basis(dim);
    if (meas_kind == "trivial") {
        m = Povm::trivial(dim);
    } else if (meas_kind == "windows") {
        meas::EnergyWindowSpec spec{cfg.get_num("eval.measurement.delta_e", 1.0), 0.0, h};
        m = meas::coarse_energy_povm(spec);
    } else if (meas_kind != "basis") {
        throw std::invalid_argument("entropy-eval: unknown measurement '" + meas_kind + "'");
    }

    maxent::ConstraintCheck cc = maxent::check_constraint(rho, prior);
    EntropyReport rep = observational_entropy(m, prior.tau, rho);
    bool bits = cfg.get_bool("bits", false);
    double unit = bits ? 1.0 / std::log(2.0) : 1.0;

    json out;
    out["experiment"] = "entropy-eval";
    out["unit"] = bits ? "bits" : "nats";
    out["s_oe"] = rep.s_oe.finite() ? json(rep.s_oe.value() * unit) : json(rep.s_oe.str());
    out["s_traditional"] =
        rep.s_traditional.finite() ? json(rep.s_traditional.value() * unit) : json(rep.s_traditional.str());
    out["s_tau"] = rep.s_tau * unit;
    out["d_m"] = rep.d_m.finite() ? json(rep.d_m.value() * unit) : json(rep.d_m.str());
    out["s_rho"] = von_neumann_entropy(rho) * unit;
    out["constraint_satisfied"] = cc.satisfied;
    out["constraint_slack"] = cc.slack;
    out["p"] = rep.p.probs();
    out["volumes"] = rep.volumes;
    if (cfg.has("eval.renyi_alpha")) {
        double alpha = cfg.get_num("eval.renyi_alpha", 2.0);
        ExtReal r = renyi_oe(m, prior.tau, rho, alpha);
        out["s_renyi"] = r.finite() ? json(r.value() * unit) : json(r.str());
    }
    std::string text = out.dump(2) + "\n";
    if (cfg.has("output.json"))
        atomic_write(cfg.get("output.json", ""), text);
    else
        std::fputs(text.c_str(), stdout);
    return kExitOk;
}

} // namespace

std::string series_to_csv(const EntropySeries& series) {
    std::string out = "t,label,S_oe,S_traditional,S_tau,E_A,E_B\n";
    // rows grouped by time across tracks, one row per (time, label)
    std::size_t npts = 0;
    for (const auto& tr : series.tracks) npts = std::max(npts, tr.points.size());
    for (std::size_t i = 0; i < npts; ++i) {
        for (const auto& tr : series.tracks) {
            if (i >= tr.points.size()) continue;
            const SeriesPoint& pt = tr.points[i];
            out += fmt_full(pt.t) + "," + tr.label + "," + pt.s_oe.str() + "," +
                   pt.s_traditional.str() + "," + fmt_full(pt.s_tau) + "," + fmt_full(pt.e_a) +
                   "," + fmt_full(pt.e_b) + "\n";
        }
    }
    return out;
}

EntropySeries series_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t,label,S_oe,S_traditional,S_tau,E_A,E_B")
        throw std::invalid_argument("csv: bad header");
    std::map<std::string, std::size_t> index;
    EntropySeries series;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string f[7];
        for (int i = 0; i < 7; ++i)
            if (!std::getline(ls, f[i], ','))
                throw std::invalid_argument("csv: short row");
        auto num = [](const std::string& s) {
            if (s == "inf") return ExtReal::pos_inf();
            if (s == "-inf") return ExtReal::neg_inf();
            return ExtReal(std::stod(s));
        };
        if (!index.count(f[1])) {
            index[f[1]] = series.tracks.size();
            series.tracks.push_back(SeriesTrack{f[1], {}, {}, {}, {}});
        }
        SeriesPoint pt;
        pt.t = std::stod(f[0]);
        pt.s_oe = num(f[2]);
        pt.s_traditional = num(f[3]);
        pt.s_tau = std::stod(f[4]);
        pt.e_a = std::stod(f[5]);
        pt.e_b = std::stod(f[6]);
        series.tracks[index[f[1]]].points.push_back(pt);
    }
    return series;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename into '" + path + "'");
}

int run_config(const std::string& config_path) {
    Config cfg;
    std::string experiment;
    try {
        cfg = Config::parse_file(config_path);
        experiment = cfg.get("experiment", "");
        cfg.validate(schema_for(experiment));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }
    try {
        if (experiment == "rmt") return run_rmt(cfg);
        if (experiment == "gas") return run_gas(cfg);
        if (experiment == "entropy-eval") return run_entropy_eval(cfg);
        if (experiment == "check")
            return run_check_command(cfg.get("check.scope", "all"),
                                     static_cast<std::uint64_t>(cfg.get_int("seed", 1)),
                                     static_cast<int>(cfg.get_int("check.cases", 100)),
                                     cfg.get("output.json", ""));
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    std::fprintf(stderr, "config error: unreachable experiment dispatch\n");
    return kExitConfig;
}

int run_check_command(const std::string& scope, std::uint64_t seed, int cases,
                      const std::string& json_out) {
    std::vector<checks::CheckReport> reports;
    try {
        reports = checks::run_checks(scope, seed, cases);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    json j = json::array();
    bool all_pass = true;
    for (const auto& rep : reports) {
        all_pass = all_pass && rep.pass();
        json r;
        r["scope"] = rep.scope;
        r["cases"] = rep.cases;
        r["assertions"] = rep.assertions;
        r["failures"] = rep.failures;
        r["pass"] = rep.pass();
        r["messages"] = rep.messages;
        j.push_back(r);
        std::printf("%-16s %s  (%lld assertions, %lld failures)\n", rep.scope.c_str(),
                    rep.pass() ? "PASS" : "FAIL", rep.assertions, rep.failures);
        for (const auto& msg : rep.messages) std::printf("    %s\n", msg.c_str());
    }
    if (!json_out.empty()) atomic_write(json_out, j.dump(2) + "\n");
    return all_pass ? kExitOk : 1;
}

int run_plot_command(const std::string& csv_path, const std::string& out_path, double t_scale) {
    std::ifstream in(csv_path);
    if (!in) {
        std::fprintf(stderr, "error: cannot read '%s'\n", csv_path.c_str());
        return kExitConfig;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    EntropySeries series;
    try {
        series = series_from_csv(buf.str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    std::vector<PlotSeries> plots;
    for (const auto& tr : series.tracks) {
        PlotSeries ps;
        ps.label = tr.label;
        for (const auto& pt : tr.points) {
            ps.x.push_back(std::log1p(pt.t / t_scale));
            ps.y.push_back(pt.s_oe.finite() ? pt.s_oe.value() : NAN);
        }
        plots.push_back(std::move(ps));
    }
    atomic_write(out_path, render_svg(plots, "ln(1 + t/T)", "S [nats]"));
    return kExitOk;
}

} // namespace oe::cli
