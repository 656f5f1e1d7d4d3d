#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace heckelab {

// Where an expected value comes from.
enum class Source { Reference, Derived, Trivial };
const char* source_tag(Source s);

struct Check {
    std::string name;
    std::string expected;
    std::string actual;
    Source source = Source::Derived;
    std::string anchor;  // short description of the claim being checked
    bool pass = false;
};

struct Table {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct VerificationReport {
    std::string suite;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<Check> checks;
    std::vector<Table> tables;
    std::vector<std::string> notes;
    double wall_seconds = 0.0;
    std::uint64_t cache_hits = 0;

    bool pass() const;
    std::size_t failures() const;

    Check& check(std::string name, std::string expected, std::string actual, Source src,
                 std::string anchor, bool pass);
    // expected == actual, both rendered with std::to_string-like formatting.
    template <class T>
    Check& expect_eq(std::string name, const T& expected, const T& actual, Source src,
                     std::string anchor) {
        return check(std::move(name), render(expected), render(actual), src, std::move(anchor),
                     expected == actual);
    }
    void merge(const VerificationReport& other, const std::string& prefix);

    static std::string render(const std::string& s) { return s; }
    static std::string render(const char* s) { return s; }
    static std::string render(bool b) { return b ? "true" : "false"; }
    template <class T>
    static std::string render(const T& v) {
        if constexpr (requires { v.str(); })
            return v.str();
        else
            return std::to_string(v);
    }
};

}  // namespace heckelab
