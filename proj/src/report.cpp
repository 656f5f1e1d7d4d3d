#include "heckelab/report.hpp"

#include <algorithm>

namespace heckelab {

const char* source_tag(Source s) {
    switch (s) {
        case Source::Reference: return "reference";
        case Source::Derived: return "derived";
        case Source::Trivial: return "trivial";
    }
    return "derived";
}

bool VerificationReport::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::size_t VerificationReport::failures() const {
    return std::size_t(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
}

Check& VerificationReport::check(std::string name, std::string expected, std::string actual,
                                 Source src, std::string anchor, bool ok) {
    checks.push_back(Check{std::move(name), std::move(expected), std::move(actual), src,
                           std::move(anchor), ok});
    return checks.back();
}

void VerificationReport::merge(const VerificationReport& other, const std::string& raw_prefix) {
    const std::string prefix = raw_prefix.empty() ? raw_prefix : raw_prefix + ": ";
    for (auto c : other.checks) {
        c.name = prefix + c.name;
        checks.push_back(std::move(c));
    }
    for (auto t : other.tables) {
        t.name = prefix + t.name;
        tables.push_back(std::move(t));
    }
    for (const auto& n : other.notes) notes.push_back(prefix + n);
    cache_hits += other.cache_hits;
}

}  // namespace heckelab
