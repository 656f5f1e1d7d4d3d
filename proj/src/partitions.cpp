#include "heckelab/partitions.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "heckelab/errors.hpp"
#include "heckelab/heckealg.hpp"
#include "heckelab/parallel.hpp"

namespace heckelab {

namespace {

IntPoly P(int e) { return IntPoly::monomial(1, e); }

std::uint64_t at_p(const IntPoly& poly, int p) {
    auto v = poly.eval(p);
    if (!v || *v < 0) throw InvariantViolation("expected count " + poly.str() + " is not a non-negative integer");
    return std::uint64_t(*v);
}

std::string S(std::uint64_t v) { return std::to_string(v); }

Vec unit(std::size_t n, std::size_t i) {
    Vec v(n, 0);
    v[i] = 1;
    return v;
}

Submodule span_units(RingCtx ctx, std::size_t n, std::size_t from, std::size_t to) {
    std::vector<Vec> rows;
    for (std::size_t i = from; i < to; ++i) rows.push_back(unit(n, i));
    return span_of(ctx, n, rows);
}

bool is_free_of_rank(const Submodule& w, int r) {
    if (w.ctx().e == 1) return w.log_order() == r;
    return module_type(w) == ModuleType{0, r};
}

SymplecticSpace space_of(const Submodule& w) {
    if (w.ambient() % 2 != 0) throw DomainError("ambient rank must be even");
    return SymplecticSpace::make(int(w.ambient() / 2), w.ctx());
}

// Extends a free isotropic summand one generator at a time using generators of
// its orthogonal, until it is maximal isotropic.
Submodule first_lagrangian_above(Submodule l) {
    const SymplecticSpace s = space_of(l);
    const int g = s.g;
    int rank = l.ctx().e == 1 ? l.log_order() : module_type(l).b;
    if (!is_free_of_rank(l, rank)) throw DomainError("starting module is not a free summand");
    while (rank < g) {
        const Submodule perp = orthogonal(l, s);
        bool grown = false;
        for (std::size_t r = 0; r < perp.num_gens() && !grown; ++r) {
            Submodule cand = sum(l, span_of(l.ctx(), l.ambient(), {perp.gens().row(r)}));
            if (is_free_of_rank(cand, rank + 1)) {
                l = std::move(cand);
                grown = true;
            }
        }
        if (!grown) throw InvariantViolation("no free isotropic extension found");
        ++rank;
    }
    return l;
}

Fp2Structure reduce_fp2(const Fp2Structure& f) {
    Fp2Structure out;
    out.ctx = RingCtx::make(f.ctx.p, 1);
    out.g = f.g;
    out.d = out.ctx.reduce(f.d);
    out.omega = f.omega.reduce_mod_p();
    return out;
}

FlagData finish(Submodule dg, Submodule dg1, std::optional<Fp2Structure> f, std::string desc) {
    FlagData fl;
    fl.Dg1_perp = orthogonal(dg1, space_of(dg1));
    fl.Dg = std::move(dg);
    fl.Dg1 = std::move(dg1);
    fl.fp2 = std::move(f);
    fl.description = std::move(desc);
    fl.validate();
    return fl;
}

Submodule embed(const Submodule& coords, const Submodule& d) {
    if (coords.is_zero()) return Submodule::zero(d.ctx(), d.ambient());
    return canonicalize(coords.gens() * d.gens());
}

std::uint64_t enumeration_cache_hits(const SuiteContext& ctx) { return ctx.cache ? ctx.cache->hits() : 0; }

std::vector<Submodule> load(int g, int p, HeckeType t, const SuiteContext& ctx) {
    return enumerate_cached(g, p, t, ctx.opt, ctx.cache);
}

void require_prime(int p) {
    if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not prime");
}

void require_odd_prime(int p) {
    require_prime(p);
    if (p == 2) throw DomainError("this suite needs an odd prime (an F_{p^2}-structure)");
}

// Per-point fiber size when uniform, otherwise nullopt; empty cells read as 0.
std::optional<std::uint64_t> uniform_value(const FiberReport& fr) {
    if (!fr.uniform) return std::nullopt;
    return fr.common_count.value_or(0);
}

std::string render_opt(std::optional<std::uint64_t> v) { return v ? S(*v) : "non-uniform"; }

}  // namespace

// ------------------------------------------------------------ flags

void FlagData::validate() const {
    if (Dg.ctx() != Dg1.ctx() || Dg.ambient() != Dg1.ambient()) throw DomainError("flag modules live in different rings");
    const SymplecticSpace s = space_of(Dg);
    const int e = Dg.ctx().e;
    if (!is_isotropic(Dg, s) || Dg.log_order() != s.g * e) throw DomainError("D_g is not maximal isotropic");
    if (!is_isotropic(Dg1, s)) throw DomainError("D_{g-1} is not isotropic");
    if (!(Dg1_perp == orthogonal(Dg1, s))) throw DomainError("stored orthogonal of D_{g-1} is wrong");
    if (!Dg1_perp.contains(Dg1)) throw DomainError("D_{g-1} is not contained in its orthogonal");
    if (fp2) {
        if (!(fp2->ctx == Dg.ctx()) || fp2->g != s.g) throw DomainError("F_{p^2}-structure lives elsewhere");
        if (!check_fp2(*fp2)) throw DomainError("omega violates omega^2 = d or the pairing relation");
        if (!omega_stable(Dg1, *fp2)) throw DomainError("D_{g-1} is not omega-stable");
    }
}

FlagData ordinary_flags_fp(int g, int p) {
    require_prime(p);
    if (g < 1) throw DomainError("genus must be positive");
    const RingCtx c = RingCtx::make(p, 1);
    const std::size_t n = 2 * g;
    return finish(span_units(c, n, g, n), span_units(c, n, g, n - 1), std::nullopt,
                  "F_p: D_g = span{e_{g+1..2g}}, D_{g-1} = span{e_{g+1..2g-1}}");
}

std::vector<Submodule> omega_stable_isotropic(int g, int k, const Fp2Structure& f) {
    if (f.ctx.e != 1) throw DomainError("omega-stable subspaces are enumerated over F_p");
    if (k % 2 != 0) return {};
    std::vector<Submodule> out;
    for (auto& w : enumerate_isotropic(g, k, f.ctx.p))
        if (omega_stable(w, f)) out.push_back(std::move(w));
    return out;
}

FlagData omega_flags_fp(int g, const Fp2Structure& f, std::size_t choice) {
    if (f.ctx.e != 1 || f.g != g) throw DomainError("need an F_{p^2}-structure on F_p^{2g}");
    const std::string d = std::to_string(f.d);
    if (g % 2 == 1) {
        const auto cands = omega_stable_isotropic(g, g - 1, f);
        if (choice >= cands.size()) throw DomainError("omega-stable D_{g-1} choice out of range");
        const Submodule dg1 = cands[choice];
        return finish(first_lagrangian_above(dg1), dg1, f,
                      "F_p, d=" + d + ": D_{g-1} omega-stable #" + std::to_string(choice) +
                          ", D_g first Lagrangian above it");
    }
    const auto cands = omega_stable_isotropic(g, g, f);
    if (choice >= cands.size()) throw DomainError("omega-stable D_g choice out of range");
    const Submodule dg = cands[choice];
    Submodule dg1 = Submodule::zero(f.ctx, 2 * g);
    if (g > 2) {
        bool found = false;
        for (const auto& c : enumerate_subspaces(g, g - 2, f.ctx.p)) {
            Submodule w = embed(c, dg);
            if (omega_stable(w, f)) {
                dg1 = std::move(w);
                found = true;
                break;
            }
        }
        if (!found) throw InvariantViolation("omega-stable Lagrangian has no omega-stable hyperplane pair");
    }
    return finish(dg, dg1, f,
                  "F_p, d=" + d + ": D_g omega-stable Lagrangian #" + std::to_string(choice) +
                      ", D_{g-1} replaced by the first omega-stable (g-2)-space inside it");
}

FlagData ordinary_flags_zp2(int g, int p) {
    require_prime(p);
    if (g < 1) throw DomainError("genus must be positive");
    const RingCtx c = RingCtx::make(p, 2);
    const std::size_t n = 2 * g;
    return finish(span_units(c, n, 0, g), span_units(c, n, 0, g - 1), std::nullopt,
                  "Z/p^2: D_g = span{e_1..e_g}, D_{g-1} = span{e_1..e_{g-1}}");
}

FlagData nonordinary_flags_zp2(int g, int p, const Fp2Structure* f, std::size_t choice, std::size_t lift_choice) {
    if (!f) {
        FlagData fl = ordinary_flags_zp2(g, p);
        fl.description = "Z/p^2 without omega: D_{g-1} = span{e_1..e_{g-1}}";
        return fl;
    }
    if (g != 3) throw DomainError("the omega-stable Z/p^2 flag is built for g = 3");
    if (f->ctx.e != 2 || f->ctx.p != p || f->g != g) throw DomainError("need an F_{p^2}-structure over Z/p^2");
    const RingCtx r2 = f->ctx;
    const std::size_t n = 2 * g;
    const SymplecticSpace s2 = SymplecticSpace::make(g, r2);
    const Fp2Structure fbar = reduce_fp2(*f);
    const auto planes = omega_stable_isotropic(g, 2, fbar);
    if (choice >= planes.size()) throw DomainError("omega-stable plane choice out of range");
    const Submodule& plane = planes[choice];
    const Vec vbar = plane.gens().row(0);

    // v = vbar + p t with <v, omega v> = 0 mod p^2 spans an isotropic free summand with omega v.
    std::vector<Submodule> found;
    const std::uint64_t total = ipow(p, int(n));
    for (std::uint64_t code = 0; code < total && found.size() <= lift_choice; ++code) {
        Vec v = vbar;
        std::uint64_t c = code;
        for (std::size_t a = 0; a < n; ++a) {
            v[a] = r2.reduce(v[a] + std::int64_t(p) * std::int64_t(c % p));
            c /= p;
        }
        const Vec wv = f->apply(v);
        if (pairing(v, wv, s2) != 0) continue;
        Submodule d2 = span_of(r2, n, {v, wv});
        if (std::find(found.begin(), found.end(), d2) != found.end()) continue;
        if (!is_free_of_rank(d2, 2) || !is_isotropic(d2, s2) || !omega_stable(d2, *f) ||
            !(reduce_mod_p(d2) == plane))
            throw InvariantViolation("lift of an omega-stable plane is not an omega-stable free summand");
        found.push_back(std::move(d2));
    }
    if (lift_choice >= found.size()) throw DomainError("lift choice out of range");
    const Submodule dg1 = found[lift_choice];
    return finish(first_lagrangian_above(dg1), dg1, *f,
                  "Z/p^2, d=" + std::to_string(f->d) + ": D_{g-1} omega-stable free rank 2 lifting plane #" +
                      std::to_string(choice) + " (lift #" + std::to_string(lift_choice) + ")");
}

FlagData transform_flags(const FlagData& f, const Matrix& s, const Matrix& s_inv) {
    std::optional<Fp2Structure> fp2;
    if (f.fp2) fp2 = conjugate_fp2(*f.fp2, s, s_inv);
    return finish(image(f.Dg, s), image(f.Dg1, s), std::move(fp2), f.description + " (transformed)");
}

// ------------------------------------------------------------ labels

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Ordinary: return "ordinary";
        case Scheme::NonOrdinary: return "non-ordinary";
        case Scheme::OmegaSpan: return "omega-span";
        case Scheme::OrdinaryType: return "ordinary-type";
        case Scheme::NonOrdinaryTypeMu: return "non-ordinary-type-mu";
    }
    return "?";
}

std::string PartitionLabel::str() const {
    static const std::vector<std::string> jk = {"j", "k", "mu"};
    std::ostringstream o;
    o << "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::string key = scheme == Scheme::OmegaSpan ? "i" : (i < jk.size() ? jk[i] : "v");
        o << (i ? "," : "") << key << "=" << values[i];
    }
    o << ")";
    return o.str();
}

PartitionLabel classify(const Submodule& w, const FlagData& flags, Scheme scheme) {
    if (!(w.ctx() == flags.Dg.ctx()) || w.ambient() != flags.Dg.ambient())
        throw DomainError("W and the flags live in different modules");
    const int e = w.ctx().e;
    const bool needs_fp = scheme == Scheme::Ordinary || scheme == Scheme::NonOrdinary || scheme == Scheme::OmegaSpan;
    if (needs_fp != (e == 1))
        throw DomainError(std::string("scheme ") + scheme_name(scheme) + " does not apply over Z/p^" + std::to_string(e));
    PartitionLabel label{scheme, {}};
    auto type_of = [&](const Submodule& d) {
        const ModuleType t = module_type(intersection(w, d));
        label.values = {t.b, t.a + t.b};
    };
    switch (scheme) {
        case Scheme::Ordinary: label.values = {intersection(w, flags.Dg).log_order()}; break;
        case Scheme::NonOrdinary: label.values = {intersection(w, flags.Dg1).log_order()}; break;
        case Scheme::OmegaSpan:
            if (!flags.fp2) throw DomainError("omega-span scheme needs an F_{p^2}-structure");
            label.values = {omega_span_dim(w, *flags.fp2)};
            break;
        case Scheme::OrdinaryType: type_of(flags.Dg); break;
        case Scheme::NonOrdinaryTypeMu:
            type_of(flags.Dg1);
            label.values.push_back(intersection(times_p(w), flags.Dg1).log_order());
            break;
    }
    return label;
}

Census partition(const std::vector<Submodule>& ws, const FlagData& flags, Scheme scheme, unsigned threads) {
    std::vector<PartitionLabel> labels(ws.size());
    parallel_for(ws.size(), threads, [&](std::size_t i) { labels[i] = classify(ws[i], flags, scheme); });
    Census out;
    for (std::size_t i = 0; i < ws.size(); ++i) out[labels[i]].push_back(ws[i]);
    return out;
}

// ------------------------------------------------------------ Grassmannians

std::optional<std::size_t> GrassmannianIndex::find(const Submodule& w) const {
    auto it = std::lower_bound(points.begin(), points.end(), w);
    if (it == points.end() || !(*it == w)) return std::nullopt;
    return std::size_t(it - points.begin());
}

std::string GrassmannianIndex::name() const {
    if (over_zp2) return "G(j=" + std::to_string(j) + ",k=" + std::to_string(k) + ") in (Z/p^2)^" + std::to_string(D.num_gens());
    return "G(j=" + std::to_string(j) + ") in F_p^" + std::to_string(D.num_gens());
}

GrassmannianIndex grassmannian_fp(const Submodule& d, int j) {
    if (d.ctx().e != 1) throw DomainError("grassmannian_fp needs a subspace over F_p");
    const int m = int(d.num_gens());
    if (j < 0 || j > m) throw DomainError("subspace dimension out of range");
    GrassmannianIndex gi;
    gi.j = gi.k = j;
    gi.D = d;
    if (j == 0) {
        gi.points.push_back(Submodule::zero(d.ctx(), d.ambient()));
        return gi;
    }
    for (const auto& c : enumerate_subspaces(m, j, d.ctx().p)) gi.points.push_back(embed(c, d));
    std::sort(gi.points.begin(), gi.points.end());
    if (gi.points.size() != gaussian_binomial(m, j, d.ctx().p))
        throw InvariantViolation("Grassmannian size disagrees with the Gaussian binomial");
    return gi;
}

std::uint64_t count_submodules_of_type(int m, int p, int a, int b) {
    if (a < 0 || b < 0 || a + b > m) return 0;
    return gaussian_binomial(m, b, p) * gaussian_binomial(m - b, a, p) * ipow(p, b * (m - a - b));
}

std::vector<Submodule> submodules_of_type(int m, int p, int a, int b) {
    require_prime(p);
    if (a < 0 || b < 0 || a + b > m) throw DomainError("module type does not fit in rank m");
    const RingCtx r2 = RingCtx::make(p, 2);
    const int k = a + b;
    if (k == 0) return {Submodule::zero(r2, m)};
    // W is determined by its reduction N (dim b), by U with W cap pB = pU
    // (dim k, U contains N), and by the p-parts of lifts of a basis of N,
    // taken modulo U.
    const auto ns = b == 0 ? std::vector<Submodule>{Submodule::zero(RingCtx::make(p, 1), m)}
                           : enumerate_subspaces(m, b, p);
    const auto us = enumerate_subspaces(m, k, p);
    std::vector<Submodule> out;
    for (const auto& nbar : ns)
        for (const auto& u : us) {
            if (!u.contains(nbar)) continue;
            std::vector<int> free;
            for (int c = 0; c < m; ++c)
                if (std::find(u.pivot_cols().begin(), u.pivot_cols().end(), c) == u.pivot_cols().end())
                    free.push_back(c);
            const std::uint64_t total = ipow(p, b * int(free.size()));
            for (std::uint64_t code = 0; code < total; ++code) {
                std::vector<Vec> gens;
                std::uint64_t z = code;
                for (int i = 0; i < b; ++i) {
                    Vec v = nbar.gens().row(i);
                    for (int c : free) {
                        v[c] += p * std::int32_t(z % p);
                        z /= p;
                    }
                    gens.push_back(std::move(v));
                }
                for (std::size_t r = 0; r < u.num_gens(); ++r) {
                    Vec v = u.gens().row(r);
                    for (auto& x : v) x *= p;
                    gens.push_back(std::move(v));
                }
                out.push_back(span_of(r2, m, gens));
            }
        }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw InvariantViolation("generalized Grassmannian parameterization produced a duplicate");
    if (out.size() != count_submodules_of_type(m, p, a, b))
        throw InvariantViolation("generalized Grassmannian size disagrees with its closed form");
    return out;
}

GrassmannianIndex grassmannian_zp2(const Submodule& d, int j, int k) {
    if (d.ctx().e != 2) throw DomainError("grassmannian_zp2 needs a module over Z/p^2");
    const int m = int(d.num_gens());
    if (!is_free_of_rank(d, m)) throw DomainError("D must be a free summand");
    if (j < 0 || k < j || k > m) throw DomainError("need 0 <= j <= k <= rank D");
    GrassmannianIndex gi;
    gi.over_zp2 = true;
    gi.j = j;
    gi.k = k;
    gi.D = d;
    for (const auto& c : submodules_of_type(m, d.ctx().p, k - j, j)) gi.points.push_back(embed(c, d));
    std::sort(gi.points.begin(), gi.points.end());
    return gi;
}

FiberReport fiber_stats(const std::vector<Submodule>& cell, const GrassmannianIndex& target, PartitionLabel label) {
    FiberReport fr;
    fr.cell = std::move(label);
    fr.target = target.name();
    fr.total = cell.size();
    if (cell.empty()) return fr;
    fr.counts.assign(target.points.size(), 0);
    for (const auto& w : cell) {
        auto idx = target.find(intersection(w, target.D));
        if (!idx) throw DomainError("W cap D is not a point of " + target.name());
        ++fr.counts[*idx];
    }
    fr.uniform = std::adjacent_find(fr.counts.begin(), fr.counts.end(), std::not_equal_to<>()) == fr.counts.end();
    if (fr.uniform) fr.common_count = fr.counts.front();
    return fr;
}

// ------------------------------------------------------------ suites

VerificationReport verify_plane_census(int p, const SuiteContext& ctx) {
    require_prime(p);
    VerificationReport rep;
    rep.suite = "a23";
    rep.params.emplace_back("p", S(p));
    const RingCtx c = RingCtx::make(p, 1);
    const SymplecticSpace s = SymplecticSpace::make(3, c);
    const Submodule d = span_units(c, 6, 0, 2);
    const auto planes = enumerate_isotropic(3, 2, p, ctx.opt);
    std::uint64_t counts[3][3] = {};
    for (const auto& w2 : planes) {
        const int j2 = intersection(w2, d).log_order();
        const int j4 = intersection(orthogonal(w2, s), d).log_order();
        ++counts[j2][j4];
    }
    const IntPoly expected[3][3] = {
        {P(7), P(6) + P(5) * 2 + P(4), 0},
        {0, P(4) + P(3), P(3) + P(2) * 2 + P(1)},
        {0, 0, 1},
    };
    Table tab{"a23", {"j2", "j4", "expected", "measured"}, {}};
    std::uint64_t expected_sum = 0, measured_sum = 0;
    for (int j2 = 0; j2 < 3; ++j2)
        for (int j4 = 0; j4 < 3; ++j4) {
            const std::uint64_t want = at_p(expected[j2][j4], p);
            expected_sum += want;
            measured_sum += counts[j2][j4];
            rep.expect_eq("cell j2=" + S(j2) + " j4=" + S(j4), want, counts[j2][j4], Source::Reference,
                          "isotropic planes W_2 by (dim W_2 cap D, dim W_2^perp cap D) = " + expected[j2][j4].str());
            tab.rows.push_back({S(j2), S(j4), expected[j2][j4].str() + " = " + S(want), S(counts[j2][j4])});
        }
    const std::uint64_t total = count_isotropic(3, 2, p);
    rep.expect_eq("enumerated planes = closed-form isotropic count", total, measured_sum, Source::Derived,
                  "isotropic 2-spaces of F_p^6");
    rep.expect_eq("table sum = closed-form isotropic count", total, expected_sum, Source::Derived,
                  "isotropic 2-spaces of F_p^6");
    rep.tables.push_back(std::move(tab));
    return rep;
}

VerificationReport verify_tp1_census(int p, const SuiteContext& ctx) {
    require_prime(p);
    VerificationReport rep;
    rep.suite = "a24";
    rep.params.emplace_back("p", S(p));
    const std::uint64_t hits0 = enumeration_cache_hits(ctx);
    const auto ws = load(3, p, HeckeType::tpi(1), ctx);
    const FlagData flags = nonordinary_flags_zp2(3, p, nullptr);
    const Census census = partition(ws, flags, Scheme::NonOrdinaryTypeMu, ctx.opt.threads);

    struct Row {
        int j, nu, mu;
        IntPoly expected;
        int j2, j4;
    };
    const std::vector<Row> rows = {
        {0, 0, 0, P(10), 0, 0},
        {0, 1, 0, P(9) + P(8) * 2 + P(7), 0, 1},
        {0, 1, 1, P(7) - P(5), 1, 1},
        {1, 0, 1, P(6) + P(5), 1, 1},
        {0, 2, 0, 0, 0, 2},
        {0, 2, 1, (P(1) - 1) * P(2) * (P(1) + 1).pow(3), 1, 2},
        {0, 2, 2, P(3) - P(2), 2, 2},
        {1, 1, 1, P(4) + P(3) * 2 + P(2), 1, 2},
        {1, 1, 2, P(2) - 1, 2, 2},
        {2, 0, 2, 1, 2, 2},
    };
    Table tab{"a24", {"j", "nu", "mu", "expected", "measured", "j2", "j4"}, {}};
    std::uint64_t covered = 0;
    const Submodule& d = flags.Dg1;
    for (const auto& r : rows) {
        const PartitionLabel label{Scheme::NonOrdinaryTypeMu, {r.j, r.j + r.nu, r.mu}};
        auto it = census.find(label);
        const std::vector<Submodule> empty;
        const auto& cell = it == census.end() ? empty : it->second;
        covered += cell.size();
        const std::uint64_t want = at_p(r.expected, p);
        const std::string tag = "(" + S(r.j) + "," + S(r.nu) + "," + S(r.mu) + ")";
        rep.expect_eq("row " + tag, want, std::uint64_t(cell.size()), Source::Reference,
                      "T_{p,1} census row " + tag + " = " + r.expected.str());
        std::size_t off = 0;
        for (const auto& w : cell)
            if (intersection(p_torsion(w), d).log_order() != r.j4) ++off;
        rep.expect_eq("row " + tag + " has j4 = " + S(r.j4), std::size_t(0), off, Source::Reference,
                      "dim (W cap pB) cap D column");
        tab.rows.push_back({S(r.j), S(r.nu), S(r.mu), r.expected.str() + " = " + S(want), S(cell.size()), S(r.j2),
                            S(r.j4)});
    }
    rep.expect_eq("no W outside the listed invariant triples", std::uint64_t(ws.size()), covered, Source::Reference,
                  "the ten rows exhaust T_{p,1}");
    rep.expect_eq("enumeration size", count_tpi(3, 1, p), std::uint64_t(ws.size()), Source::Derived,
                  "closed-form T_{p,1} count");
    rep.tables.push_back(std::move(tab));
    rep.cache_hits = enumeration_cache_hits(ctx) - hits0;
    return rep;
}

VerificationReport verify_lift_counts(int p, std::size_t samples, const SuiteContext& ctx) {
    require_prime(p);
    VerificationReport rep;
    rep.suite = "lift-count";
    rep.params.emplace_back("p", S(p));
    const RingCtx c1 = RingCtx::make(p, 1), c2 = RingCtx::make(p, 2);
    const SymplecticSpace s1 = SymplecticSpace::make(3, c1);
    const auto planes = enumerate_isotropic(3, 2, p, ctx.opt);
    std::vector<std::size_t> picked;
    if (samples == 0 || samples >= planes.size()) {
        for (std::size_t i = 0; i < planes.size(); ++i) picked.push_back(i);
    } else {
        for (std::size_t i = 0; i < samples; ++i) picked.push_back(i * planes.size() / samples);
    }
    std::vector<std::int64_t> counts(picked.size());
    parallel_for(picked.size(), ctx.opt.threads, [&](std::size_t i) {
        const Submodule perp = orthogonal(planes[picked[i]], s1);
        const Submodule w4 = times_p(canonicalize(perp.gens().lifted(c2)));
        counts[i] = lift_count(w4, 3, p, 1);
    });
    const std::int64_t want = std::int64_t(ipow(p, 3));
    const std::size_t bad = std::count_if(counts.begin(), counts.end(), [&](auto v) { return v != want; });
    rep.params.emplace_back("w4_tested", S(picked.size()));
    rep.expect_eq("W4 with a lift count other than p^3 (of " + S(picked.size()) + ")", std::size_t(0), bad,
                  Source::Reference, "each admissible W4 has p^3 lifts");

    if (count_tpi(3, 1, p) <= ctx.opt.budget) {
        const auto ws = load(3, p, HeckeType::tpi(1), ctx);
        std::map<Submodule, std::uint64_t> groups;
        for (const auto& w : ws) ++groups[p_torsion(w)];
        std::size_t off = 0;
        for (const auto& [w4, n] : groups)
            if (n != std::uint64_t(want)) ++off;
        rep.expect_eq("distinct W cap pB in the full enumeration", count_isotropic(3, 2, p),
                      std::uint64_t(groups.size()), Source::Derived, "one W4 per isotropic plane");
        rep.expect_eq("groups of size other than p^3", std::size_t(0), off, Source::Derived,
                      "grouping the full enumeration by W cap pB");
    } else {
        rep.notes.push_back("full-enumeration grouping skipped: T_{p,1} exceeds the budget");
    }
    return rep;
}

namespace {

struct GoodBad {
    FlagData flags;
    std::vector<Submodule> good;
    std::vector<Submodule> bad;
    std::size_t total = 0;
    std::size_t other = 0;
};

GoodBad split_good_bad(int p, const SuiteContext& ctx) {
    require_odd_prime(p);
    GoodBad gb;
    gb.flags = omega_flags_fp(3, make_fp2(3, RingCtx::make(p, 1)));
    const auto ws = load(3, p, HeckeType::tp(), ctx);
    gb.total = ws.size();
    for (auto& [label, cell] : partition(ws, gb.flags, Scheme::OmegaSpan, ctx.opt.threads)) {
        if (label.values[0] == 3)
            gb.good = std::move(cell);
        else if (label.values[0] == 2)
            gb.bad = std::move(cell);
        else
            gb.other += cell.size();
    }
    return gb;
}

std::vector<Submodule> cell_of(const Census& c, PartitionLabel l) {
    auto it = c.find(l);
    return it == c.end() ? std::vector<Submodule>{} : it->second;
}

std::string set_str(const std::set<int>& s) {
    std::string out = "{";
    for (int v : s) out += (out.size() > 1 ? "," : "") + std::to_string(v);
    return out + "}";
}

}  // namespace

VerificationReport verify_good_bad_fibers(int p, const SuiteContext& ctx) {
    VerificationReport rep;
    rep.suite = "t438";
    rep.params.emplace_back("p", S(p));
    const std::uint64_t hits0 = enumeration_cache_hits(ctx);
    const GoodBad gb = split_good_bad(p, ctx);
    rep.expect_eq("W with omega-span dimension other than 2 or 3", std::size_t(0), gb.other, Source::Trivial,
                  "a Lagrangian spans at least a 2-dimensional F_{p^2}-space");

    const IntPoly n_good[3] = {P(5) - P(3), P(2), 0};
    const IntPoly n_bad[3] = {P(4) + P(3), 0, P(1) + 1};
    Table tab{"t438", {"class", "j", "points", "expected_per_point", "measured_per_point", "uniform", "cell_size"}, {}};
    std::uint64_t s1_size = 0, bad_total = 0;
    for (int cls = 0; cls < 2; ++cls) {
        const bool good = cls == 0;
        const Census by_j = partition(good ? gb.good : gb.bad, gb.flags, Scheme::NonOrdinary, ctx.opt.threads);
        for (int j = 0; j <= 2; ++j) {
            const GrassmannianIndex target = grassmannian_fp(gb.flags.Dg1, j);
            const PartitionLabel label{Scheme::NonOrdinary, {j}};
            const FiberReport fr = fiber_stats(cell_of(by_j, label), target, label);
            const IntPoly want = good ? (P(1) + 1) * n_good[j] : n_bad[j];
            const std::string name = std::string(good ? "good" : "bad") + " j=" + S(j);
            rep.expect_eq(name + " fibers uniform", true, fr.uniform, Source::Reference,
                          "fiber size independent of the point of G(j, D_{g-1})");
            rep.check(name + " fiber size", S(at_p(want, p)), render_opt(uniform_value(fr)), Source::Reference,
                      std::string(good ? "(p+1) n_j for the good class = " : "n_j for the bad class = ") + want.str(),
                      uniform_value(fr) == at_p(want, p));
            tab.rows.push_back({good ? "good" : "bad", S(j), S(target.points.size()), want.str() + " = " + S(at_p(want, p)),
                                render_opt(uniform_value(fr)), fr.uniform ? "true" : "false", S(fr.total)});
            if (j == 1) s1_size += fr.total;
            if (!good) bad_total += fr.total;
        }
    }
    rep.expect_eq("bad class size", at_p(P(4) + P(3) + P(1) + 1, p), bad_total, Source::Reference,
                  "p^4 + p^3 + p + 1 bad W");
    rep.expect_eq("|S*(1)|", at_p(P(4) + P(3) * 2 + P(2), p), s1_size, Source::Reference,
                  "p^4 + 2p^3 + p^2 elements with dim W cap D_{g-1} = 1");
    std::uint64_t row_sum = 0;
    for (int j = 0; j <= 2; ++j)
        row_sum += ((p + 1) * at_p(n_good[j], p) + at_p(n_bad[j], p)) * gaussian_binomial(2, j, p);
    rep.expect_eq("table row-sum identity", count_lagrangians(3, p), row_sum, Source::Derived,
                  "sum over j of fiber size times |G(j,2)| equals prod (p^i + 1)");
    rep.expect_eq("enumeration size", count_lagrangians(3, p), std::uint64_t(gb.total), Source::Derived,
                  "closed-form Lagrangian count");
    rep.notes.push_back("good-class fibers are aggregated over the p+1 Galois orbits; per-orbit uniformity is not "
                        "tested because the orbit rule is not available");
    rep.notes.push_back("flags: " + gb.flags.description);
    rep.tables.push_back(std::move(tab));
    rep.cache_hits = enumeration_cache_hits(ctx) - hits0;
    return rep;
}

VerificationReport verify_bad_support(int p, const SuiteContext& ctx) {
    VerificationReport rep;
    rep.suite = "lemma4312";
    rep.params.emplace_back("p", S(p));
    const std::uint64_t hits0 = enumeration_cache_hits(ctx);
    const GoodBad gb = split_good_bad(p, ctx);
    Table tab{"lemma4312", {"class", "j", "count"}, {}};
    std::set<int> good_j, bad_j;
    for (int cls = 0; cls < 2; ++cls) {
        const bool good = cls == 0;
        for (const auto& [label, cell] : partition(good ? gb.good : gb.bad, gb.flags, Scheme::NonOrdinary, ctx.opt.threads)) {
            (good ? good_j : bad_j).insert(label.values[0]);
            tab.rows.push_back({good ? "good" : "bad", S(label.values[0]), S(cell.size())});
        }
    }
    rep.check("support of the bad class", "{0,2}", set_str(bad_j), Source::Reference,
              "bad W meet D_{g-1} in dimension 0 or 2", bad_j == std::set<int>{0, 2});
    rep.check("support of the good class", "{0,1}", set_str(good_j), Source::Reference,
              "good W meet D_{g-1} in dimension 0 or 1", good_j == std::set<int>{0, 1});
    rep.tables.push_back(std::move(tab));
    rep.cache_hits = enumeration_cache_hits(ctx) - hits0;
    return rep;
}

VerificationReport verify_fiber_laws(int g, int p, const SuiteContext& ctx, FiberLaw which) {
    require_prime(p);
    if (g < 1 || g > 3) throw DomainError("fiber laws are checked for 1 <= g <= 3");
    VerificationReport rep;
    rep.suite = which == FiberLaw::Ordinary ? "fibers41" : which == FiberLaw::NonOrdinary ? "fibers42" : "fiber-laws";
    rep.params = {{"g", S(g)}, {"p", S(p)}};
    const std::uint64_t hits0 = enumeration_cache_hits(ctx);
    const auto ws = load(g, p, HeckeType::tp(), ctx);
    const std::uint64_t lag = count_lagrangians(g, p);
    Table tab{"fiber-laws", {"scheme", "j", "points", "expected", "measured", "uniform"}, {}};

    auto run = [&](bool ordinary) {
        FlagData flags;
        if (ordinary) {
            flags = ordinary_flags_fp(g, p);
        } else if (g % 2 == 1 && p != 2) {
            flags = omega_flags_fp(g, make_fp2(g, RingCtx::make(p, 1)));
        } else {
            flags = ordinary_flags_fp(g, p);
            rep.notes.push_back("non-ordinary law at g=" + S(g) + ", p=" + S(p) +
                                ": D_{g-1} is a plain isotropic subspace (no omega-stable one of this dimension)");
        }
        const Scheme sch = ordinary ? Scheme::Ordinary : Scheme::NonOrdinary;
        const Census census = partition(ws, flags, sch, ctx.opt.threads);
        const Submodule& d = ordinary ? flags.Dg : flags.Dg1;
        const int top = ordinary ? g : g - 1;
        std::uint64_t law_sum = 0, measured_sum = 0;
        for (int j = 0; j <= top; ++j) {
            const PartitionLabel label{sch, {j}};
            const GrassmannianIndex target = grassmannian_fp(d, j);
            const FiberReport fr = fiber_stats(cell_of(census, label), target, label);
            const int b = triangular(g - j);
            const IntPoly law = ordinary ? P(b) : P(b) + P(b - 1);
            const std::string name = std::string(ordinary ? "ordinary" : "non-ordinary") + " j=" + S(j);
            rep.check(name, S(at_p(law, p)), render_opt(uniform_value(fr)), Source::Reference,
                      std::string(ordinary ? "fiber over G(j, D_g) = " : "fiber over G(j, D_{g-1}) = ") + law.str(),
                      uniform_value(fr) == at_p(law, p));
            law_sum += at_p(law, p) * gaussian_binomial(top, j, p);
            measured_sum += fr.total;
            tab.rows.push_back({ordinary ? "ordinary" : "non-ordinary", S(j), S(target.points.size()),
                                law.str() + " = " + S(at_p(law, p)), render_opt(uniform_value(fr)),
                                fr.uniform ? "true" : "false"});
        }
        rep.expect_eq(std::string(ordinary ? "ordinary" : "non-ordinary") + " global identity", lag, law_sum,
                      Source::Derived, "sum over j of law(j) |G(j)| = prod (p^i + 1)");
        rep.expect_eq(std::string(ordinary ? "ordinary" : "non-ordinary") + " cells exhaust T_p", std::uint64_t(ws.size()),
                      measured_sum, Source::Trivial, "partition exhaustiveness");
    };
    if (which != FiberLaw::NonOrdinary) run(true);
    if (which != FiberLaw::Ordinary) run(false);
    rep.tables.push_back(std::move(tab));
    rep.cache_hits = enumeration_cache_hits(ctx) - hits0;
    return rep;
}

VerificationReport verify_ordinary_tpi_fibers(int p, const SuiteContext& ctx) {
    require_prime(p);
    VerificationReport rep;
    rep.suite = "coeff618";
    rep.params.emplace_back("p", S(p));
    const std::uint64_t hits0 = enumeration_cache_hits(ctx);
    const auto ws = load(3, p, HeckeType::tpi(1), ctx);
    const FlagData flags = ordinary_flags_zp2(3, p);
    const Census census = partition(ws, flags, Scheme::OrdinaryType, ctx.opt.threads);
    const PhiExpansion coeffs = assemble_tpi_ordinary(3, 1);
    Table tab{"coeff618", {"j", "k", "points", "coefficient", "measured_fiber", "uniform", "cell_size"}, {}};
    std::uint64_t weighted = 0, covered = 0;
    for (int k = 0; k <= 3; ++k)
        for (int j = 0; j <= k; ++j) {
            const PartitionLabel label{Scheme::OrdinaryType, {j, k}};
            const auto cell = cell_of(census, label);
            covered += cell.size();
            const IntPoly coeff = coeffs.at({j, k});
            const std::string tag = "y_" + S(j) + S(k);
            if (coeff.is_zero()) {
                rep.expect_eq(tag + " cell empty", std::size_t(0), cell.size(), Source::Derived,
                              "no such term in the T_{p,1} expansion");
                continue;
            }
            const GrassmannianIndex target = grassmannian_zp2(flags.Dg, j, k);
            const FiberReport fr = fiber_stats(cell, target, label);
            const std::uint64_t want = at_p(coeff, p);
            const bool formula_only = j == 0 && k == 3;
            rep.check(tag + " fiber = coefficient", S(want), render_opt(uniform_value(fr)),
                      formula_only ? Source::Derived : Source::Reference,
                      "coefficient " + coeff.str() + " of " + tag + " equals the fiber of W -> W cap D_g",
                      uniform_value(fr) == want);
            weighted += fr.total;
            tab.rows.push_back({S(j), S(k), S(target.points.size()), coeff.str() + " = " + S(want),
                                render_opt(uniform_value(fr)), fr.uniform ? "true" : "false", S(fr.total)});
            if (formula_only)
                rep.notes.push_back("y_03: printed coefficient p^3 - 1 = " + S(at_p(P(3) - 1, p)) +
                                    " vs measured fiber " + render_opt(uniform_value(fr)) + " = p^5 - p^2; the "
                                    "corank-formula value is used");
        }
    rep.expect_eq("cells exhaust T_{p,1}", std::uint64_t(ws.size()), covered, Source::Trivial,
                  "partition exhaustiveness");
    rep.expect_eq("sum of fiber x |G(j,k,3)|", count_tpi(3, 1, p), weighted, Source::Derived,
                  "total T_{p,1} count");
    rep.tables.push_back(std::move(tab));
    rep.cache_hits = enumeration_cache_hits(ctx) - hits0;
    return rep;
}

namespace {

VerificationReport nonordinary_tpi_report(int p, const SuiteContext& ctx, bool discrepancy_only) {
    require_prime(p);
    VerificationReport rep;
    rep.suite = discrepancy_only ? "discrepancy629" : "coeff626";
    rep.params.emplace_back("p", S(p));
    const std::uint64_t hits0 = enumeration_cache_hits(ctx);
    const auto ws = load(3, p, HeckeType::tpi(1), ctx);
    std::optional<Fp2Structure> f;
    if (p != 2) f = make_fp2(3, RingCtx::make(p, 2));
    const FlagData flags = nonordinary_flags_zp2(3, p, f ? &*f : nullptr);
    rep.params.emplace_back("flags", flags.description);
    if (!f) rep.notes.push_back("p=2 has no F_{p^2}-structure of this form; D_{g-1} = span{e_1,e_2} without omega");
    const Census census = partition(ws, flags, Scheme::NonOrdinaryTypeMu, ctx.opt.threads);
    std::map<std::pair<int, int>, std::vector<Submodule>> agg;
    for (const auto& [label, cell] : census) {
        auto& dst = agg[{label.values[0], label.values[1]}];
        dst.insert(dst.end(), cell.begin(), cell.end());
    }
    for (auto& [jk, cell] : agg) std::sort(cell.begin(), cell.end());
    const PhiExpansion coeffs = assemble_tpi_nonordinary(3, 1);
    Table tab{rep.suite, {"j", "k", "points", "coefficient", "measured_fiber", "uniform", "cell_size"}, {}};
    Table mu_tab{rep.suite + "-mu", {"j", "k", "mu", "cell_size", "uniform", "fiber"}, {}};
    std::uint64_t weighted = 0;
    for (int k = 0; k <= 2; ++k)
        for (int j = 0; j <= k; ++j) {
            const bool special = j == 0 && k == 2;
            if (discrepancy_only && !special) continue;
            const std::vector<Submodule>& cell = agg[{j, k}];
            const IntPoly coeff = coeffs.at({j, k});
            const GrassmannianIndex target = grassmannian_zp2(flags.Dg1, j, k);
            const PartitionLabel label{Scheme::NonOrdinaryTypeMu, {j, k}};
            const FiberReport fr = fiber_stats(cell, target, label);
            const std::uint64_t want = at_p(coeff, p);
            const auto got = uniform_value(fr);
            const std::string tag = "z_" + S(j) + S(k);
            weighted += fr.total;
            rep.expect_eq(tag + " fibers uniform", true, fr.uniform, Source::Reference,
                          "mu-aggregated fiber of W -> W cap D_{g-1}");
            if (special) {
                const IntPoly measured_law = P(6) + P(5) * 2 - P(3) - P(2) * 2;
                rep.check(tag + " measured fiber", S(at_p(measured_law, p)), render_opt(got), Source::Reference,
                          "fiber of the (0,2) cell = " + measured_law.str(), got == at_p(measured_law, p));
                rep.check(tag + " coefficient", S(at_p(P(6) + P(5) * 2 - P(2) * 2, p)), S(want), Source::Reference,
                          "assembled coefficient p^6 + 2p^5 - 2p^2", coeff == P(6) + P(5) * 2 - P(2) * 2);
                const std::string diff = got ? std::to_string(std::int64_t(want) - std::int64_t(*got)) : "n/a";
                rep.check(tag + " coefficient - fiber", S(ipow(p, 3)), diff, Source::Reference,
                          "the two differ by exactly p^3", got && want - *got == ipow(p, 3));
            } else {
                rep.check(tag + " fiber = coefficient", S(want), render_opt(got), Source::Reference,
                          "coefficient " + coeff.str() + " of " + tag + " equals the fiber", got == want);
            }
            tab.rows.push_back({S(j), S(k), S(target.points.size()), coeff.str() + " = " + S(want), render_opt(got),
                                fr.uniform ? "true" : "false", S(fr.total)});
            for (int mu = 0; mu <= 2; ++mu) {
                const PartitionLabel ml{Scheme::NonOrdinaryTypeMu, {j, k, mu}};
                const auto mcell = cell_of(census, ml);
                if (mcell.empty()) continue;
                const FiberReport mf = fiber_stats(mcell, target, ml);
                mu_tab.rows.push_back({S(j), S(k), S(mu), S(mcell.size()), mf.uniform ? "true" : "false",
                                       render_opt(uniform_value(mf))});
            }
        }
    if (!discrepancy_only) {
        std::uint64_t other = 0;
        for (const auto& [jk, cell] : agg)
            if (jk.second > 2) other += cell.size();
        rep.expect_eq("cells exhaust T_{p,1}", count_tpi(3, 1, p), weighted + other, Source::Trivial,
                      "partition exhaustiveness");
        rep.notes.push_back("mu-refined statistics are informational only");
    }
    rep.tables.push_back(std::move(tab));
    rep.tables.push_back(std::move(mu_tab));
    rep.cache_hits = enumeration_cache_hits(ctx) - hits0;
    return rep;
}

}  // namespace

VerificationReport verify_nonordinary_tpi_fibers(int p, const SuiteContext& ctx) {
    return nonordinary_tpi_report(p, ctx, false);
}

VerificationReport verify_discrepancy(int p, const SuiteContext& ctx) { return nonordinary_tpi_report(p, ctx, true); }

VerificationReport verify_g4_nonuniformity(int p, const SuiteContext& ctx) {
    require_odd_prime(p);
    VerificationReport rep;
    rep.suite = "g4failure";
    rep.params = {{"g", "4"}, {"p", S(p)}};
    const std::uint64_t hits0 = enumeration_cache_hits(ctx);
    const Fp2Structure f = make_fp2(4, RingCtx::make(p, 1));
    const FlagData flags = omega_flags_fp(4, f);
    const auto ws = load(4, p, HeckeType::tp(), ctx);
    const Census spans = partition(ws, flags, Scheme::OmegaSpan, ctx.opt.threads);
    const auto top = cell_of(spans, {Scheme::OmegaSpan, {4}});
    const Census dims = partition(top, flags, Scheme::Ordinary, ctx.opt.threads);
    std::set<int> dim_set;
    for (const auto& [label, cell] : dims) dim_set.insert(label.values[0]);
    rep.check("dimensions of W cap D_4 on the full-span class", "{0,1,2}", set_str(dim_set), Source::Reference,
              "W cap D_g has dimension 0, 1 or 2", dim_set == std::set<int>{0, 1, 2});

    const auto cell2 = cell_of(dims, {Scheme::Ordinary, {2}});
    std::size_t closure_bad = 0;
    for (const auto& w : cell2)
        if (omega_closure(intersection(w, flags.Dg), f).log_order() != 4) ++closure_bad;
    rep.expect_eq("2-dim intersections whose omega-closure is not 4-dim", std::size_t(0), closure_bad,
                  Source::Reference, "the F_{p^2}-span of W cap D_g has twice its F_p-dimension");

    const GrassmannianIndex g2 = grassmannian_fp(flags.Dg, 2);
    const FiberReport fr = fiber_stats(cell2, g2, {Scheme::Ordinary, {2}});
    std::size_t stable = 0, stable_empty = 0, unstable = 0, unstable_hit = 0;
    std::map<std::pair<bool, std::uint64_t>, std::size_t> histogram;
    for (std::size_t i = 0; i < g2.points.size(); ++i) {
        const bool st = omega_stable(g2.points[i], f);
        const std::uint64_t n = fr.counts.empty() ? 0 : fr.counts[i];
        ++histogram[{st, n}];
        if (st) {
            ++stable;
            if (n == 0) ++stable_empty;
        } else {
            ++unstable;
            if (n > 0) ++unstable_hit;
        }
    }
    rep.expect_eq("omega-stable planes in D_4", std::size_t(p * p + 1), stable, Source::Derived,
                  "F_{p^2}-lines of a 2-dimensional F_{p^2}-space");
    rep.expect_eq("omega-stable planes with an empty fiber", stable, stable_empty, Source::Reference,
                  "fiber over an omega-stable t is empty");
    rep.expect_eq("other planes with a non-empty fiber", unstable, unstable_hit, Source::Reference,
                  "fiber over a non-omega-stable t is non-empty");
    rep.expect_eq("fibers over G(2, D_4) uniform", false, fr.uniform, Source::Reference,
                  "uniformity of fibers fails for g = 4");

    const GrassmannianIndex g1 = grassmannian_fp(flags.Dg, 1);
    const FiberReport f1 = fiber_stats(cell_of(dims, {Scheme::Ordinary, {1}}), g1, {Scheme::Ordinary, {1}});
    const std::size_t missed = f1.counts.empty() ? g1.points.size()
                                                 : std::size_t(std::count(f1.counts.begin(), f1.counts.end(), 0u));
    rep.expect_eq("lines of D_4 missed by the dim-1 cell", std::size_t(0), missed, Source::Derived,
                  "every line is some W cap D_4");

    Table tab{"g4failure", {"omega_stable", "fiber", "planes"}, {}};
    for (const auto& [key, n] : histogram) tab.rows.push_back({key.first ? "true" : "false", S(key.second), S(n)});
    rep.tables.push_back(std::move(tab));
    rep.params.emplace_back("full_span_class", S(top.size()));
    rep.params.emplace_back("flags", flags.description);
    rep.cache_hits = enumeration_cache_hits(ctx) - hits0;
    return rep;
}

}  // namespace heckelab
