#ifndef OE_CHECKS_HPP
#define OE_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace oe::checks {

// Randomized property suites, one per module, runnable from the CLI
// (`oetool check`) and reused by the test binaries.
struct CheckReport {
    std::string scope;
    int cases = 0;
    long long assertions = 0;
    long long failures = 0;
    std::vector<std::string> messages;  // first few failure descriptions
    bool pass() const { return failures == 0; }
};

std::vector<std::string> scopes();

// scope: one of scopes() or "all"; throws std::invalid_argument otherwise.
std::vector<CheckReport> run_checks(const std::string& scope, std::uint64_t seed, int cases);

} // namespace oe::checks

#endif
