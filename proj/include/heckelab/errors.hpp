#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace heckelab {

// Precondition or shape violation on caller-supplied data.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An enumeration whose closed-form size prediction exceeds the configured cap.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::uint64_t predicted, std::uint64_t cap)
        : std::runtime_error(what + ": predicted " + std::to_string(predicted) +
                             " submodules, cap " + std::to_string(cap)),
          predicted_(predicted), cap_(cap) {}
    std::uint64_t predicted() const noexcept { return predicted_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t predicted_;
    std::uint64_t cap_;
};

// Internal consistency failure (e.g. a combined coefficient that should be integral is not).
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

}  // namespace heckelab
