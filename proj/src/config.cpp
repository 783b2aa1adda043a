#include "oe/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace oe::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

Config Config::parse_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key on line " + std::to_string(lineno));
        if (cfg.kv_.count(key))
            throw std::invalid_argument("config: duplicate key '" + key + "'");
        cfg.kv_[key] = val;
    }
    return cfg;
}

std::string Config::serialize() const {
    std::string out;
    for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
    return out;
}

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_num(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size())
        throw std::invalid_argument("config: key '" + key + "' is not a number");
    return v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::size_t pos = 0;
    long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size())
        throw std::invalid_argument("config: key '" + key + "' is not an integer");
    return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument("config: key '" + key + "' is not a boolean");
}

std::vector<std::string> Config::get_list(const std::string& key) const {
    std::vector<std::string> out;
    auto it = kv_.find(key);
    if (it == kv_.end()) return out;
    std::istringstream in(it->second);
    std::string part;
    while (std::getline(in, part, ',')) {
        part = trim(part);
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

std::vector<double> Config::get_num_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& s : get_list(key)) out.push_back(std::stod(s));
    return out;
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

void Config::validate(const std::vector<std::string>& allowed) const {
    std::string bad;
    for (const auto& [k, v] : kv_) {
        bool ok = false;
        for (const auto& a : allowed)
            if (k == a) {
                ok = true;
                break;
            }
        if (!ok) bad += (bad.empty() ? "" : ", ") + k;
    }
    if (!bad.empty()) throw std::invalid_argument("config: unknown keys: " + bad);
}

std::vector<std::string> schema_for(const std::string& experiment) {
    std::vector<std::string> keys = {"experiment", "seed",        "output.csv",
                                     "output.json", "output.svg", "bits"};
    if (experiment == "rmt") {
        for (const char* k :
             {"rmt.d_a", "rmt.d_b", "rmt.delta_band", "rmt.delta_v", "rmt.coupling",
              "rmt.beta_a", "rmt.beta_b", "rmt.delta_e_meas", "rmt.t_max_over_t", "rmt.n_times",
              "rmt.grid", "rmt.full_scale"})
            keys.push_back(k);
    } else if (experiment == "gas") {
        for (const char* k : {"gas.n", "gas.l_over_r0", "gas.r0_pm", "gas.mass_gev",
                              "gas.beta_inv_mev", "gas.ic", "gas.t_end", "gas.n_times", "gas.free",
                              "gas.cg", "output.snapshots"})
            keys.push_back(k);
    } else if (experiment == "entropy-eval") {
        for (const char* k : {"eval.dim", "eval.state.diag", "eval.prior", "eval.prior.h.diag",
                              "eval.prior.e", "eval.prior.rank", "eval.measurement",
                              "eval.measurement.delta_e", "eval.renyi_alpha"})
            keys.push_back(k);
    } else if (experiment == "check") {
        for (const char* k : {"check.scope", "check.cases"}) keys.push_back(k);
    } else {
        throw std::invalid_argument("config: unknown experiment '" + experiment + "'");
    }
    return keys;
}

} // namespace oe::cli
