#ifndef OE_CONFIG_HPP
#define OE_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oe::cli {

// Flat dotted-key configuration (`gas.n=500`). Lines are `key = value`;
// blank lines and lines starting with '#' are ignored. Keys are validated
// against a per-experiment schema; unknown keys are rejected.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_text(const std::string& text);
    std::string serialize() const;  // sorted keys, round-trips through parse

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_num(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<std::string> get_list(const std::string& key) const;  // comma-separated
    std::vector<double> get_num_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return kv_; }

    // throws std::invalid_argument listing offending keys
    void validate(const std::vector<std::string>& allowed_keys) const;

private:
    std::map<std::string, std::string> kv_;
};

// allowed keys per experiment type
std::vector<std::string> schema_for(const std::string& experiment);

} // namespace oe::cli

#endif
