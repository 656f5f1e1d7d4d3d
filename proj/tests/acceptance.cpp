// One PASS/FAIL line per acceptance criterion. All numeric comparisons are
// exact; the only tolerances are the wall-clock targets below.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "heckelab/cache.hpp"
#include "heckelab/heckealg.hpp"
#include "heckelab/kolyvagin.hpp"
#include "heckelab/partitions.hpp"
#include "props.hpp"

using namespace heckelab;

namespace {

constexpr std::uint64_t kExactTolerance = 0;  // integer results must match exactly
constexpr double kCensusSeconds = 10.0;
constexpr double kTp1Seconds = 60.0;
constexpr double kG4Seconds = 600.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::size_t mismatches(const VerificationReport& r, std::string& detail) {
    for (const auto& c : r.checks)
        if (!c.pass && detail.size() < 300) detail += " [" + c.name + ": expected " + c.expected + ", got " + c.actual + "]";
    return r.failures();
}

Outcome from_reports(const std::vector<VerificationReport>& reps) {
    Outcome o;
    std::size_t checks = 0, bad = 0;
    for (const auto& r : reps) {
        checks += r.checks.size();
        bad += mismatches(r, o.detail);
    }
    o.pass = checks > 0 && bad <= kExactTolerance;
    o.detail = std::to_string(checks) + " checks, " + std::to_string(bad) + " failed" + o.detail;
    return o;
}

Outcome from_props(const std::vector<props::Result>& rs) {
    Outcome o;
    std::size_t cases = 0;
    for (const auto& r : rs) {
        cases += r.cases;
        if (!r.ok) {
            o.pass = false;
            o.detail += " [" + r.detail + "]";
        }
    }
    o.detail = std::to_string(cases) + " cases" + o.detail;
    return o;
}

Outcome timed(double limit, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o = f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[96];
    std::snprintf(buf, sizeof buf, "; %.2f s (target < %.0f s)", s, limit);
    o.detail += buf;
    if (s >= limit) o.pass = false;
    return o;
}

}  // namespace

int main() {
    SuiteContext ctx;
    ctx.opt.threads = std::max(1u, std::thread::hardware_concurrency());

    const auto cache_dir = std::filesystem::temp_directory_path() / "heckelab_acceptance_cache";
    std::filesystem::remove_all(cache_dir);
    const EnumerationCache cache(cache_dir);

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
    criteria.emplace_back("plane census at p=2,3", [&] {
        return timed(kCensusSeconds, [&] { return from_reports({verify_plane_census(2, ctx), verify_plane_census(3, ctx)}); });
    });
    criteria.emplace_back("T_{p,1} census at p=2", [&] {
        return timed(kTp1Seconds, [&] { return from_reports({verify_tp1_census(2, ctx)}); });
    });
    criteria.emplace_back("lift counts p^3 (p=2 exhaustive, p=3 sampled)", [&] {
        return from_reports({verify_lift_counts(2, 0, ctx), verify_lift_counts(3, 100, ctx)});
    });
    criteria.emplace_back("good/bad fiber table at p=3", [&] { return from_reports({verify_good_bad_fibers(3, ctx)}); });
    criteria.emplace_back("good/bad support sets at p=3,5",
                          [&] { return from_reports({verify_bad_support(3, ctx), verify_bad_support(5, ctx)}); });
    criteria.emplace_back("fiber laws and global identity at g=3", [&] {
        return from_reports({verify_fiber_laws(3, 2, ctx, FiberLaw::Ordinary), verify_fiber_laws(3, 3, ctx, FiberLaw::Both)});
    });
    criteria.emplace_back("ordinary T_{p,1} coefficients vs fibers at p=2",
                          [&] { return from_reports({verify_ordinary_tpi_fibers(2, ctx)}); });
    criteria.emplace_back("non-ordinary T_{p,1} coefficients and the 112 vs 120 cell at p=2", [&] {
        return from_reports({verify_nonordinary_tpi_fibers(2, ctx), verify_discrepancy(2, ctx)});
    });
    criteria.emplace_back("g=4 non-uniformity at p=3", [&] {
        SuiteContext cached = ctx;
        cached.cache = &cache;
        return timed(kG4Seconds, [&] { return from_reports({verify_g4_nonuniformity(3, cached)}); });
    });
    criteria.emplace_back("corank counts for n<=3, p=2,3,5", [] { return from_reports({verify_corank_counts({2, 3, 5}, 3)}); });
    criteria.emplace_back("Satake identities and residue pattern at M=9,27",
                          [] { return from_reports({verify_satake_identities({9, 27})}); });
    criteria.emplace_back("descent pipeline at M=9,27", [] { return from_reports({verify_descent_pipeline({9, 27})}); });
    criteria.emplace_back("Kummer map beta(z) = -2bz for d=1,2, M=3,9",
                          [] { return from_reports({verify_kummer({1, 2}, {3, 9})}); });
    criteria.emplace_back("derivative identity p<=100 and 200 Chow models", [] {
        std::vector<VerificationReport> reps;
        for (int p = 1; p <= 100; ++p) reps.push_back(derivative_identity(p));
        reps.push_back(verify_chow_models(200));
        return from_reports(reps);
    });
    criteria.emplace_back("property suites", [] {
        return from_props({props::canonical_uniqueness(1000, 11), props::duality_involution(500, 12),
                           props::partition_exhaustiveness(), props::omega_choice_independence(13),
                           props::flag_choice_independence(14), props::thread_determinism()});
    });

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %2zu: %-70s %s  (%s)\n", k + 1, criteria[k].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::filesystem::remove_all(cache_dir);
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
