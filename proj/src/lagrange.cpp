#include "heckelab/lagrange.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "heckelab/kernels.hpp"
#include "heckelab/parallel.hpp"

namespace heckelab {

SymplecticSpace SymplecticSpace::make(int g, RingCtx ctx) {
    if (g < 1) throw DomainError("genus must be positive");
    return SymplecticSpace{ctx, g, symplectic_gram(ctx, g)};
}

std::int32_t pairing(const Vec& x, const Vec& y, const SymplecticSpace& s) {
    if (x.size() != s.rank() || y.size() != s.rank()) throw DomainError("vector length is not 2g");
    std::int64_t acc = 0;
    for (int i = 0; i < s.g; ++i)
        acc += std::int64_t(x[i]) * y[s.g + i] - std::int64_t(x[s.g + i]) * y[i];
    return s.ctx.reduce(acc);
}

Submodule orthogonal(const Submodule& w, const SymplecticSpace& s) {
    return left_kernel(s.gram * w.gens().transpose());
}

bool is_isotropic(const Submodule& w, const SymplecticSpace& s) {
    for (std::size_t a = 0; a < w.num_gens(); ++a)
        for (std::size_t b = a + 1; b < w.num_gens(); ++b)
            if (pairing(w.gens().row(a), w.gens().row(b), s) != 0) return false;
    return true;
}

std::string HeckeType::name() const {
    return kind == Kind::Tp ? "Tp" : "Tp" + std::to_string(i);
}

// ---------------------------------------------------------------- closed forms

std::uint64_t ipow(std::uint64_t base, int exp) {
    std::uint64_t r = 1;
    for (int k = 0; k < exp; ++k) r *= base;
    return r;
}

std::uint64_t gaussian_binomial(int n, int k, std::uint64_t q) {
    if (k < 0 || k > n) return 0;
    // Product form; every partial quotient is an integer.
    unsigned __int128 num = 1, den = 1;
    for (int i = 0; i < k; ++i) {
        num *= (ipow(q, n - i) - 1);
        den *= (ipow(q, i + 1) - 1);
    }
    return std::uint64_t(num / den);
}

std::uint64_t count_isotropic(int g, int k, int p) {
    if (k < 0 || k > g) return 0;
    std::uint64_t r = gaussian_binomial(g, k, p);
    for (int i = 0; i < k; ++i) r *= ipow(p, g - i) + 1;
    return r;
}

std::uint64_t count_lagrangians(int g, int p) { return count_isotropic(g, g, p); }

std::uint64_t count_tpi(int g, int i, int p) {
    return count_isotropic(g, g - i, p) * ipow(p, triangular(g - i));
}

std::uint64_t predicted_count(int g, int p, HeckeType t) {
    return t.kind == HeckeType::Kind::Tp ? count_lagrangians(g, p) : count_tpi(g, t.i, p);
}

// ---------------------------------------------------------------- echelon-shape enumeration

namespace {

void check_budget(const char* what, std::uint64_t predicted, const EnumOptions& opt) {
    if (predicted > opt.budget) throw BudgetExceeded(what, predicted, opt.budget);
}

std::vector<std::vector<int>> combinations(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == k) {
            out.push_back(cur);
            return;
        }
        for (int c = start; c <= n - (k - depth); ++c) {
            cur[depth] = c;
            self(self, c + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

// All echelon rows compatible with one pivot shape, stored column-major so the
// pairing filter is a batched dot product.
struct RowBatch {
    std::size_t count = 0;
    std::vector<std::vector<std::int32_t>> cols;
};

RowBatch make_batch(int n, int p, const std::vector<int>& piv, int r) {
    std::vector<int> free;
    for (int c = piv[r] + 1; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.push_back(c);
    RowBatch b;
    b.count = ipow(p, int(free.size()));
    b.cols.assign(n, std::vector<std::int32_t>(b.count, 0));
    std::fill(b.cols[piv[r]].begin(), b.cols[piv[r]].end(), 1);
    for (std::size_t t = 0; t < b.count; ++t) {
        std::size_t x = t;
        for (int f : free) {
            b.cols[f][t] = std::int32_t(x % p);
            x /= p;
        }
    }
    return b;
}

void enumerate_shape(int n, int p, const std::vector<int>& piv, const Matrix* gram,
                     std::vector<Submodule>& out) {
    const int k = int(piv.size());
    const RingCtx ctx = RingCtx::make(p, 1);
    std::vector<RowBatch> batches;
    for (int r = 0; r < k; ++r) batches.push_back(make_batch(n, p, piv, r));
    std::vector<Vec> rows(k, Vec(n, 0));
    std::vector<std::vector<Vec>> weights(k);  // J * row, per filled row

    auto rec = [&](auto&& self, int r) -> void {
        if (r < 0) {
            out.push_back(span_of(ctx, n, rows));
            return;
        }
        const RowBatch& b = batches[r];
        std::vector<char> ok(b.count, 1);
        if (gram != nullptr && r + 1 < k) {
            std::vector<const std::int32_t*> colp(n);
            for (int c = 0; c < n; ++c) colp[c] = b.cols[c].data();
            std::vector<std::int32_t> dots(b.count);
            for (int s = r + 1; s < k; ++s) {
                kernels::dot_batch(colp.data(), weights[s][0].data(), n, b.count, p, dots.data());
                for (std::size_t t = 0; t < b.count; ++t)
                    if (dots[t] != 0) ok[t] = 0;
            }
        }
        for (std::size_t t = 0; t < b.count; ++t) {
            if (!ok[t]) continue;
            for (int c = 0; c < n; ++c) rows[r][c] = b.cols[c][t];
            if (gram != nullptr) {
                Vec w(n, 0);
                for (int a = 0; a < n; ++a) {
                    std::int64_t acc = 0;
                    for (int c = 0; c < n; ++c) acc += std::int64_t(gram->at(a, c)) * rows[r][c];
                    w[a] = ctx.reduce(acc);
                }
                weights[r] = {std::move(w)};
            }
            self(self, r - 1);
        }
    };
    rec(rec, k - 1);
}

std::vector<Submodule> enumerate_echelon(int n, int k, int p, const EnumOptions& opt,
                                         const Matrix* gram) {
    auto shapes = combinations(n, k);
    std::vector<std::vector<Submodule>> parts(shapes.size());
    parallel_for(shapes.size(), opt.threads,
                 [&](std::size_t i) { enumerate_shape(n, p, shapes[i], gram, parts[i]); });
    std::vector<Submodule> out;
    for (auto& part : parts)
        for (auto& w : part) out.push_back(std::move(w));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Submodule> enumerate_subspaces(int n, int k, int p, const EnumOptions& opt,
                                           const Matrix* gram) {
    if (!is_prime(p)) throw DomainError("p must be prime");
    if (k < 0 || k > n) throw DomainError("subspace dimension out of range");
    check_budget("subspace enumeration", gaussian_binomial(n, k, p), opt);
    return enumerate_echelon(n, k, p, opt, gram);
}

std::vector<Submodule> enumerate_isotropic(int g, int k, int p, const EnumOptions& opt) {
    if (!is_prime(p)) throw DomainError("p must be prime");
    if (k < 0 || k > g) throw DomainError("isotropic dimension out of range");
    check_budget("isotropic enumeration", count_isotropic(g, k, p), opt);
    Matrix j = symplectic_gram(RingCtx::make(p, 1), g);
    auto out = enumerate_echelon(2 * g, k, p, opt, &j);
    if (out.size() != count_isotropic(g, k, p))
        throw InvariantViolation("isotropic enumeration count disagrees with closed form");
    return out;
}

std::vector<Submodule> enumerate_tp(int g, int p, const EnumOptions& opt) {
    if (g < 1 || g > 4) throw DomainError("enumerate_tp supports 1 <= g <= 4");
    return enumerate_isotropic(g, g, p, opt);
}

std::vector<Submodule> lifts_of(const Submodule& wbar, int g) {
    const RingCtx fp = wbar.ctx();
    if (fp.e != 1) throw DomainError("lifts_of expects a subspace over F_p");
    const int p = fp.p, n = 2 * g;
    const RingCtx r2 = RingCtx::make(p, 2);
    const SymplecticSpace s1 = SymplecticSpace::make(g, fp);
    const SymplecticSpace s2 = SymplecticSpace::make(g, r2);
    if (!is_isotropic(wbar, s1)) throw DomainError("reduction mod p is not isotropic");
    const int m = int(wbar.num_gens());
    std::vector<Vec> x(m);
    for (int k = 0; k < m; ++k) x[k] = wbar.gens().row(k);  // integer lifts
    // c_kl = <x_k, x_l> / p over Z/p^2.
    std::vector<std::vector<std::int32_t>> c(m, std::vector<std::int32_t>(m, 0));
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) c[k][l] = pairing(x[k], x[l], s2) / p;
    // f_m = -J e_{pivot m}, so <xbar_k, f_m> = delta_km on the echelon basis.
    std::vector<Vec> f(m, Vec(n, 0));
    for (int k = 0; k < m; ++k) {
        const int col = wbar.pivot_cols()[k];
        for (int a = 0; a < n; ++a) f[k][a] = fp.neg(s1.gram.at(a, col));
    }
    std::vector<Vec> base;
    Submodule perp = orthogonal(wbar, s1);
    for (std::size_t r = 0; r < perp.num_gens(); ++r) {
        Vec v = perp.gens().row(r);
        for (auto& e : v) e *= p;
        base.push_back(std::move(v));
    }
    const int nsym = triangular(m);
    const std::uint64_t total = ipow(p, nsym);
    std::vector<Submodule> out;
    out.reserve(total);
    std::vector<std::vector<std::int32_t>> alpha(m, std::vector<std::int32_t>(m));
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t z = code;
        for (int k = 0; k < m; ++k)
            for (int l = k; l < m; ++l) {
                const std::int32_t sv = std::int32_t(z % p);
                z /= p;
                alpha[k][l] = fp.reduce(sv + (k < l ? -c[k][l] : 0));
                if (k != l) alpha[l][k] = sv;
            }
        std::vector<Vec> gens = base;
        for (int l = 0; l < m; ++l) {
            Vec v = x[l];
            for (int k = 0; k < m; ++k)
                if (alpha[k][l] != 0)
                    for (int a = 0; a < n; ++a) v[a] += p * alpha[k][l] * f[k][a];
            gens.push_back(std::move(v));
        }
        out.push_back(span_of(r2, n, gens));
    }
    return out;
}

std::vector<Submodule> enumerate_tpi(int g, int p, int i, const EnumOptions& opt) {
    if (g < 2 || i < 1 || i > g - 1)
        throw DomainError("T_{p,i} needs 1 <= i <= g-1 (got g=" + std::to_string(g) +
                          ", i=" + std::to_string(i) + ")");
    if (!is_prime(p)) throw DomainError("p must be prime");
    const std::uint64_t predicted = count_tpi(g, i, p);
    check_budget("T_{p,i} enumeration", predicted, opt);
    auto bases = enumerate_isotropic(g, g - i, p, opt);
    std::vector<std::vector<Submodule>> parts(bases.size());
    parallel_for(bases.size(), opt.threads, [&](std::size_t k) { parts[k] = lifts_of(bases[k], g); });
    std::vector<Submodule> out;
    out.reserve(predicted);
    for (auto& part : parts)
        for (auto& w : part) out.push_back(std::move(w));
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw InvariantViolation("structured T_{p,i} enumeration produced a duplicate");
    if (out.size() != predicted)
        throw InvariantViolation("T_{p,i} enumeration count disagrees with closed form");
    return out;
}

std::vector<Submodule> enumerate(int g, int p, HeckeType t, const EnumOptions& opt) {
    return t.kind == HeckeType::Kind::Tp ? enumerate_tp(g, p, opt) : enumerate_tpi(g, p, t.i, opt);
}

std::int64_t lift_count(const Submodule& w4, int g, int p, int i) {
    const RingCtx c = w4.ctx();
    if (c.e != 2 || c.p != p || int(w4.ambient()) != 2 * g)
        throw DomainError("W4 must live in (Z/p^2)^{2g}");
    if (i < 1 || i > g - 1) throw DomainError("index i out of range");
    for (auto v : w4.gens().data())
        if (v % p != 0) throw DomainError("W4 is not contained in pB");
    if (!(module_type(w4) == ModuleType{g + i, 0}))
        throw DomainError("W4 must be p-torsion of rank g+i");
    const RingCtx fp = RingCtx::make(p, 1);
    Matrix u(fp, 0, 2 * g);
    for (std::size_t r = 0; r < w4.num_gens(); ++r) {
        Vec v = w4.gens().row(r);
        for (auto& e : v) e /= p;
        u.append_row(v);
    }
    const SymplecticSpace s1 = SymplecticSpace::make(g, fp);
    const Submodule wbar = orthogonal(canonicalize(u), s1);
    if (!is_isotropic(wbar, s1)) throw DomainError("W4 is not W cap pB for an isotropic W");
    const SymplecticSpace s2 = SymplecticSpace::make(g, c);
    auto lifts = lifts_of(wbar, g);
    const Submodule pb = canonicalize(Matrix::identity(c, 2 * g).scaled(p));
    std::sort(lifts.begin(), lifts.end());
    lifts.erase(std::unique(lifts.begin(), lifts.end()), lifts.end());
    std::int64_t count = 0;
    for (const auto& w : lifts) {
        if (!is_isotropic(w, s2) || !(module_type(w) == ModuleType{2 * i, g - i}))
            throw InvariantViolation("symmetric-matrix lift is not of the expected type");
        if (intersection(w, pb) == w4) ++count;
    }
    return count;
}

Matrix transvection(const SymplecticSpace& s, const Vec& v, std::int32_t c) {
    const std::size_t n = s.rank();
    Vec jv(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        std::int64_t acc = 0;
        for (std::size_t b = 0; b < n; ++b) acc += std::int64_t(s.gram.at(a, b)) * v[b];
        jv[a] = s.ctx.reduce(acc);
    }
    Matrix t = Matrix::identity(s.ctx, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            t.set(a, b, t.at(a, b) + std::int64_t(c) * v[a] * jv[b]);
    return t;
}

bool is_symplectic(const Matrix& m, const SymplecticSpace& s) {
    return m.transpose() * s.gram * m == s.gram;
}

}  // namespace heckelab
