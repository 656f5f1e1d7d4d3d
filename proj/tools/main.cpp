#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "heckelab/cache.hpp"
#include "heckelab/errors.hpp"
#include "heckelab/kernels.hpp"
#include "report_io.hpp"
#include "suites.hpp"

#ifndef HECKELAB_VERSION
#define HECKELAB_VERSION "0.0.0"
#endif

namespace {

using namespace heckelab;

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kInvalidGrid = 3, kBudget = 4 };

void print_summary(const VerificationReport& r) {
    for (const auto& c : r.checks)
        std::cout << (c.pass ? "[ok]   " : "[FAIL] ") << c.name << ": expected " << c.expected << ", got " << c.actual
                  << "  (" << source_tag(c.source) << ")\n";
    for (const auto& n : r.notes) std::cout << "note: " << n << "\n";
    std::printf("%s: %s, %zu checks, %zu failed, %.2f s, %llu cache hits\n", r.suite.c_str(),
                r.pass() ? "PASS" : "FAIL", r.checks.size(), r.failures(), r.wall_seconds,
                static_cast<unsigned long long>(r.cache_hits));
}

struct CacheKeyParts {
    int g = 0, p = 0, i = 0;
    bool ok = false;
};

CacheKeyParts parse_key(const std::string& key) {
    CacheKeyParts k;
    unsigned model = 0;
    if (std::sscanf(key.c_str(), "g=%d;p=%d;type=Tp%d;model=%u", &k.g, &k.p, &k.i, &model) == 4) {
        k.ok = true;
    } else if (std::sscanf(key.c_str(), "g=%d;p=%d;type=Tp;model=%u", &k.g, &k.p, &model) == 3) {
        k.i = 0;
        k.ok = true;
    }
    return k;
}

int cache_command(const std::string& action, const std::string& dir, const std::vector<int>& ps, int g, int i,
                  const std::string& type, const EnumOptions& opt) {
    if (dir.empty()) {
        std::cerr << "cache: no cache directory (use --cache or HECKELAB_CACHE_DIR)\n";
        return kUsage;
    }
    EnumerationCache cache(dir);
    if (action == "status") {
        const auto entries = cache.status();
        if (entries.empty()) std::cout << "no cache files in " << dir << "\n";
        for (const auto& e : entries) {
            std::cout << e.file.filename().string() << "  ";
            if (!e.valid) {
                std::cout << "INVALID (corrupt or wrong format version)\n";
                continue;
            }
            std::cout << e.key << "  records=" << e.records;
            const CacheKeyParts k = parse_key(e.key);
            if (k.ok) {
                const std::uint64_t predicted =
                    predicted_count(k.g, k.p, k.i == 0 ? HeckeType::tp() : HeckeType::tpi(k.i));
                std::cout << "  predicted=" << predicted << (predicted == e.records ? "  ok" : "  MISMATCH");
            }
            std::cout << "\n";
        }
        return kPass;
    }
    if (action == "purge") {
        std::cout << "removed " << cache.purge() << " file(s) from " << dir << "\n";
        return kPass;
    }
    // prewarm
    const HeckeType t = type == "tp" ? HeckeType::tp() : HeckeType::tpi(i);
    for (int p : ps.empty() ? std::vector<int>{2} : ps) {
        const auto list = enumerate_cached(g, p, t, opt, &cache);
        const CacheKey key{g, p, t};
        std::cout << key.str() << "  records=" << list.size() << "  " << cache.path_for(key).string() << "\n";
    }
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heckelab: exact finite-model checks of Hecke correspondence combinatorics"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file mirroring the flags; flags on the command line win");
    app.set_version_flag("--version", HECKELAB_VERSION);

    std::vector<int> ps;
    std::vector<std::int64_t> moduli;
    int g = 0, i = 0;
    std::string out, cache_dir, type = "tpi";
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t budget = kDefaultBudget;

    app.add_option("--p", ps, "primes, comma separated")->delimiter(',');
    auto* g_opt = app.add_option("--g", g, "genus (matrix size for rcount)");
    auto* i_opt = app.add_option("--i", i, "T_{p,i} index");
    app.add_option("--M", moduli, "moduli M = l^n, comma separated")->delimiter(',');
    app.add_option("--out", out, "JSON report path; CSV tables are written next to it");
    app.add_option("--cache", cache_dir, "enumeration cache directory")->envname("HECKELAB_CACHE_DIR");
    app.add_option("--threads", threads, "worker threads");
    app.add_option("--budget", budget, "largest enumeration allowed (submodule count)");

    std::string suite;
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "suite id")->required()->check(CLI::IsMember(heckelab::cli::suite_ids()));
    verify->fallthrough();

    std::string action;
    auto* cache = app.add_subcommand("cache", "inspect or fill the enumeration cache");
    cache->add_option("action", action, "status, purge or prewarm")->required()->check(CLI::IsMember({"status", "purge", "prewarm"}));
    cache->add_option("--type", type, "prewarm: tp or tpi")->check(CLI::IsMember({"tp", "tpi"}));
    cache->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    std::cerr << "kernels: " << kernels::isa_name(kernels::active_isa()) << "\n";
    try {
        if (*cache) {
            EnumOptions opt;
            opt.threads = threads;
            opt.budget = budget;
            return cache_command(action, cache_dir, ps, *g_opt ? g : 3, *i_opt ? i : 1, type, opt);
        }
        std::unique_ptr<EnumerationCache> store;
        if (!cache_dir.empty()) store = std::make_unique<EnumerationCache>(cache_dir);
        heckelab::cli::SuiteConfig cfg;
        cfg.suite = suite;
        cfg.ps = ps;
        if (*g_opt) cfg.g = g;
        if (*i_opt) cfg.i = i;
        cfg.moduli = moduli;
        cfg.threads = threads;
        cfg.budget = budget;
        cfg.cache = store.get();
        const VerificationReport rep = heckelab::cli::run_suite(cfg);
        print_summary(rep);
        if (!out.empty()) heckelab::cli::write_report(rep, out, HECKELAB_VERSION);
        return rep.pass() ? kPass : kCheckFailure;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << " (raise --budget)\n";
        return kBudget;
    } catch (const heckelab::cli::UnknownSuite& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        std::cerr << "invalid grid: " << e.what() << "\n";
        return kInvalidGrid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailure;
    }
}
