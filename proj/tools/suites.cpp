#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>

#include "heckelab/errors.hpp"
#include "heckelab/heckealg.hpp"
#include "heckelab/kolyvagin.hpp"
#include "heckelab/partitions.hpp"

namespace heckelab::cli {

namespace {

struct Grid {
    std::vector<int> ps;
    int g = 3;
    std::vector<std::int64_t> moduli;
};

using Runner = std::function<VerificationReport(const Grid&, const SuiteContext&)>;

struct Suite {
    std::string id;
    std::vector<int> allowed_p;  // empty: suite takes no p
    std::vector<int> default_p;
    bool uses_moduli = false;
    std::vector<int> allowed_g;  // empty: g ignored
    int default_g = 3;
    bool tpi1 = false;  // runs on T_{p,1} only
    Runner run;
};

template <class F>
VerificationReport per_p(const std::string& id, const Grid& grid, F&& f) {
    VerificationReport rep;
    rep.suite = id;
    for (int p : grid.ps) rep.merge(f(p), "p=" + std::to_string(p));
    return rep;
}

const std::vector<Suite>& registry() {
    static const std::vector<Suite> suites = [] {
        std::vector<Suite> s;
        s.push_back({"a23", {2, 3, 5}, {2, 3}, false, {}, 3, false, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("a23", gr, [&](int p) { return verify_plane_census(p, c); });
                     }});
        s.push_back({"a24", {2, 3}, {2}, false, {}, 3, true, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("a24", gr, [&](int p) {
                             VerificationReport r = verify_tp1_census(p, c);
                             r.merge(verify_lift_counts(p, p == 2 ? 0 : 100, c), "lift counts");
                             return r;
                         });
                     }});
        s.push_back({"t438", {3, 5}, {3}, false, {}, 3, false, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("t438", gr, [&](int p) { return verify_good_bad_fibers(p, c); });
                     }});
        s.push_back({"lemma4312", {3, 5}, {3, 5}, false, {}, 3, false, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("lemma4312", gr, [&](int p) { return verify_bad_support(p, c); });
                     }});
        s.push_back({"fibers41", {2, 3, 5}, {2, 3}, false, {1, 2, 3}, 3, false,
                     [](const Grid& gr, const SuiteContext& c) {
                         return per_p("fibers41", gr,
                                      [&](int p) { return verify_fiber_laws(gr.g, p, c, FiberLaw::Ordinary); });
                     }});
        s.push_back({"fibers42", {2, 3, 5}, {3}, false, {1, 2, 3}, 3, false,
                     [](const Grid& gr, const SuiteContext& c) {
                         return per_p("fibers42", gr,
                                      [&](int p) { return verify_fiber_laws(gr.g, p, c, FiberLaw::NonOrdinary); });
                     }});
        s.push_back({"coeff618", {2, 3}, {2}, false, {}, 3, true, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("coeff618", gr, [&](int p) { return verify_ordinary_tpi_fibers(p, c); });
                     }});
        s.push_back({"coeff626", {2, 3}, {2}, false, {}, 3, true, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("coeff626", gr, [&](int p) { return verify_nonordinary_tpi_fibers(p, c); });
                     }});
        s.push_back({"discrepancy629", {2, 3}, {2}, false, {}, 3, true, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("discrepancy629", gr, [&](int p) { return verify_discrepancy(p, c); });
                     }});
        s.push_back({"g4failure", {3}, {3}, false, {4}, 4, false, [](const Grid& gr, const SuiteContext& c) {
                         return per_p("g4failure", gr, [&](int p) { return verify_g4_nonuniformity(p, c); });
                     }});
        s.push_back({"rcount", {2, 3, 5, 7}, {2, 3, 5}, false, {1, 2, 3}, 3, false,
                     [](const Grid& gr, const SuiteContext&) { return verify_corank_counts(gr.ps, gr.g); }});
        s.push_back({"satake-identities", {}, {}, true, {}, 3, false,
                     [](const Grid& gr, const SuiteContext&) { return verify_satake_identities(gr.moduli); }});
        s.push_back({"appendix1", {}, {}, true, {}, 3, false,
                     [](const Grid& gr, const SuiteContext&) { return verify_descent_pipeline(gr.moduli); }});
        s.push_back({"ap1-residue", {}, {}, true, {}, 3, false,
                     [](const Grid& gr, const SuiteContext&) { return verify_tpi_residue(gr.moduli); }});
        s.push_back({"kolyvagin", {}, {}, true, {}, 3, false,
                     [](const Grid& gr, const SuiteContext&) { return verify_kolyvagin(gr.moduli); }});
        s.push_back({"chow-prop31", {}, {}, false, {}, 3, false,
                     [](const Grid&, const SuiteContext&) { return verify_chow_models(200); }});
        return s;
    }();
    return suites;
}

const Suite& find_suite(const std::string& id) {
    for (const auto& s : registry())
        if (s.id == id) return s;
    throw UnknownSuite("unknown suite '" + id + "'");
}

bool odd_prime_power(std::int64_t m) {
    if (m < 3 || m % 2 == 0) return false;
    std::int64_t l = 3;
    while (m % l != 0) l += 2;
    while (m % l == 0) m /= l;
    return m == 1;
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s;
}

// lenient: drop unsupported values instead of failing (used by "all").
Grid resolve(const Suite& s, const SuiteConfig& cfg, bool lenient) {
    Grid grid;
    if (!s.allowed_p.empty()) {
        for (int p : cfg.ps) {
            const bool ok = std::find(s.allowed_p.begin(), s.allowed_p.end(), p) != s.allowed_p.end();
            if (ok)
                grid.ps.push_back(p);
            else if (!lenient)
                throw DomainError(s.id + " does not accept p=" + std::to_string(p) + " (allowed: " + join(s.allowed_p) + ")");
        }
        if (grid.ps.empty()) grid.ps = s.default_p;
    }
    grid.g = s.default_g;
    if (!s.allowed_g.empty() && cfg.g) {
        const bool ok = std::find(s.allowed_g.begin(), s.allowed_g.end(), *cfg.g) != s.allowed_g.end();
        if (ok)
            grid.g = *cfg.g;
        else if (!lenient)
            throw DomainError(s.id + " does not accept g=" + std::to_string(*cfg.g) + " (allowed: " + join(s.allowed_g) + ")");
    }
    if (s.tpi1 && cfg.i && *cfg.i != 1 && !lenient)
        throw DomainError(s.id + " is defined for T_{p,1} only (got i=" + std::to_string(*cfg.i) + ")");
    if (s.uses_moduli) {
        for (auto m : cfg.moduli) {
            const bool ok = odd_prime_power(m) && m <= 27;
            if (ok)
                grid.moduli.push_back(m);
            else if (!lenient)
                throw DomainError(s.id + ": M=" + std::to_string(m) + " must be an odd prime power between 3 and 27");
        }
        if (grid.moduli.empty()) grid.moduli = {9, 27};
    }
    return grid;
}

void describe(VerificationReport& rep, const Grid& grid, const Suite& s) {
    if (!s.allowed_p.empty()) rep.params.emplace_back("p", join(grid.ps));
    if (!s.allowed_g.empty()) rep.params.emplace_back(s.id == "rcount" ? "max_n" : "g", std::to_string(grid.g));
    if (s.uses_moduli) {
        std::string m;
        for (auto x : grid.moduli) m += (m.empty() ? "" : ",") + std::to_string(x);
        rep.params.emplace_back("M", m);
    }
}

}  // namespace

const std::vector<std::string>& suite_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& s : registry()) v.push_back(s.id);
        v.push_back("all");
        return v;
    }();
    return ids;
}

void validate(const SuiteConfig& cfg) {
    if (cfg.threads == 0) throw DomainError("threads must be at least 1");
    if (cfg.budget == 0) throw DomainError("budget must be positive");
    for (int p : cfg.ps)
        if (!is_prime(p)) throw DomainError("p=" + std::to_string(p) + " is not prime");
    if (cfg.suite == "all") {
        for (const auto& s : registry()) resolve(s, cfg, true);
        return;
    }
    resolve(find_suite(cfg.suite), cfg, false);
}

VerificationReport run_suite(const SuiteConfig& cfg) {
    validate(cfg);
    SuiteContext ctx;
    ctx.opt.threads = cfg.threads;
    ctx.opt.budget = cfg.budget;
    ctx.cache = cfg.cache;
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    if (cfg.suite == "all") {
        rep.suite = "all";
        for (const auto& s : registry()) {
            const Grid grid = resolve(s, cfg, true);
            VerificationReport sub = s.run(grid, ctx);
            rep.merge(sub, s.id);
        }
    } else {
        const Suite& s = find_suite(cfg.suite);
        const Grid grid = resolve(s, cfg, false);
        rep = s.run(grid, ctx);
        rep.suite = s.id;
        describe(rep, grid, s);
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace heckelab::cli
