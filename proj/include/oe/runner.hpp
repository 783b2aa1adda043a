#ifndef OE_RUNNER_HPP
#define OE_RUNNER_HPP

#include <string>

#include "oe/config.hpp"
#include "oe/types.hpp"

namespace oe::cli {

// exit codes: 0 success, 2 config error, 3 numerical failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

int run_config(const std::string& config_path);
int run_check_command(const std::string& scope, std::uint64_t seed, int cases,
                      const std::string& json_out);
int run_plot_command(const std::string& csv_path, const std::string& out_path, double t_scale);

// CSV schema: t,label,S_oe,S_traditional,S_tau,E_A,E_B (full round-trip
// precision, literal `inf` for flagged infinities)
std::string series_to_csv(const EntropySeries& series);
EntropySeries series_from_csv(const std::string& text);

// temp-file-plus-rename write
void atomic_write(const std::string& path, const std::string& content);

} // namespace oe::cli

#endif
