#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "heckelab/cache.hpp"
#include "heckelab/report.hpp"

namespace heckelab::cli {

class UnknownSuite : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SuiteConfig {
    std::string suite;
    std::vector<int> ps;               // empty: suite default
    std::optional<int> g;              // genus, or the matrix size for rcount
    std::optional<int> i;              // T_{p,i} index
    std::vector<std::int64_t> moduli;  // M values; empty: suite default
    unsigned threads = 1;
    std::uint64_t budget = kDefaultBudget;
    const EnumerationCache* cache = nullptr;
};

const std::vector<std::string>& suite_ids();

// Checks the grid against the suite's preconditions without running anything.
// Throws UnknownSuite or DomainError.
void validate(const SuiteConfig& cfg);

// Validates, then runs. "all" runs every suite, restricting the given p and M
// lists to what each suite accepts.
VerificationReport run_suite(const SuiteConfig& cfg);

}  // namespace heckelab::cli
