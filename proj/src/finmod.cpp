#include "heckelab/finmod.hpp"

#include <algorithm>

#include "heckelab/errors.hpp"
#include "heckelab/kernels.hpp"

namespace heckelab {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

RingCtx RingCtx::make(int p, int e) {
    if (!is_prime(p)) throw DomainError("modulus base " + std::to_string(p) + " is not prime");
    if (e != 1 && e != 2) throw DomainError("exponent must be 1 or 2");
    RingCtx c;
    c.p = p;
    c.e = e;
    c.q = e == 1 ? p : p * p;
    if (c.q >= (1 << 15)) throw DomainError("modulus too large for 32-bit kernels");
    return c;
}

int RingCtx::valuation(std::int32_t a) const {
    if (a % q == 0) return e;
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

std::int32_t RingCtx::inverse(std::int32_t unit) const {
    unit = reduce(unit);
    if (unit % p == 0) throw DomainError("residue " + std::to_string(unit) + " is not a unit");
    // q is tiny; extended Euclid is overkill but exact.
    std::int64_t t = 0, nt = 1, r = q, nr = unit;
    while (nr != 0) {
        std::int64_t k = r / nr;
        t -= k * nt;
        std::swap(t, nt);
        r -= k * nr;
        std::swap(r, nr);
    }
    return reduce(t);
}

std::int32_t RingCtx::pow_p(int k) const {
    std::int64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return reduce(r);
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(RingCtx ctx, std::size_t rows, std::size_t cols)
    : ctx_(ctx), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(RingCtx ctx, std::size_t n) {
    Matrix m(ctx, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::from_rows(RingCtx ctx, std::size_t cols, const std::vector<Vec>& rows) {
    Matrix m(ctx, 0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
}

Vec Matrix::row(std::size_t r) const { return Vec(row_ptr(r), row_ptr(r) + cols_); }

std::vector<Vec> Matrix::row_list() const {
    std::vector<Vec> out;
    out.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
    return out;
}

void Matrix::append_row(const Vec& v) {
    if (v.size() != cols_) throw DomainError("row length does not match column count");
    for (auto x : v) data_.push_back(ctx_.reduce(x));
    ++rows_;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_ || !(ctx_ == o.ctx_)) throw DomainError("matrix product shape mismatch");
    Matrix out(ctx_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < o.cols_; ++j) {
            std::int64_t acc = 0;
            for (std::size_t k = 0; k < cols_; ++k) acc += std::int64_t(at(i, k)) * o.at(k, j);
            out.set(i, j, acc);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DomainError("matrix sum shape mismatch");
    Matrix out(ctx_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = ctx_.add(data_[k], o.data_[k]);
    return out;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + o.scaled(-1); }

Matrix Matrix::scaled(std::int64_t s) const {
    Matrix out(ctx_, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = ctx_.reduce(s * data_[k]);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(ctx_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
    return out;
}

bool Matrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::int32_t x) { return x == 0; });
}

Matrix Matrix::reduce_mod_p() const { return lifted(RingCtx::make(ctx_.p, 1)); }

Matrix Matrix::lifted(RingCtx target) const {
    Matrix out(target, rows_, cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] = target.reduce(data_[k]);
    return out;
}

Vec Matrix::apply_row(const Vec& v) const {
    Vec out(cols_, 0);
    for (std::size_t j = 0; j < cols_; ++j) {
        std::int64_t acc = 0;
        for (std::size_t i = 0; i < rows_; ++i) acc += std::int64_t(v[i]) * at(i, j);
        out[j] = ctx_.reduce(acc);
    }
    return out;
}

// ---------------------------------------------------------------- Howell form

namespace {

bool zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](std::int32_t x) { return x == 0; });
}

void row_axpy(Vec& y, const Vec& x, std::int32_t f, const RingCtx& ctx) {
    kernels::axpy(y.data(), x.data(), ctx.reduce(f), y.size(), ctx.q);
}

}  // namespace

Submodule canonicalize(const Matrix& gens) {
    const RingCtx& ctx = gens.ctx();
    const std::size_t n = gens.cols();
    std::vector<Vec> pool;
    for (std::size_t r = 0; r < gens.rows(); ++r) {
        Vec v = gens.row(r);
        if (!zero_vec(v)) pool.push_back(std::move(v));
    }
    std::vector<Vec> out;
    std::vector<int> pcols, pvals;
    for (std::size_t c = 0; c < n && !pool.empty(); ++c) {
        int best = -1, bestv = ctx.e;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            int v = ctx.valuation(pool[i][c]);
            if (v < bestv) {
                bestv = v;
                best = int(i);
            }
        }
        if (best < 0) continue;
        Vec piv = std::move(pool[best]);
        pool.erase(pool.begin() + best);
        const std::int32_t pv = ctx.pow_p(bestv);
        const std::int32_t unit = piv[c] / pv;
        const std::int32_t inv = ctx.inverse(unit);
        for (auto& x : piv) x = ctx.mul(x, inv);
        for (auto& r : pool)
            if (r[c] != 0) row_axpy(r, piv, ctx.neg(r[c] / pv), ctx);
        if (bestv > 0) {
            Vec ann = piv;
            const std::int32_t s = ctx.pow_p(ctx.e - bestv);
            for (auto& x : ann) x = ctx.mul(x, s);
            if (!zero_vec(ann)) pool.push_back(std::move(ann));
        }
        pool.erase(std::remove_if(pool.begin(), pool.end(), zero_vec), pool.end());
        out.push_back(std::move(piv));
        pcols.push_back(int(c));
        pvals.push_back(bestv);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int c = pcols[i];
        const std::int32_t pv = ctx.pow_p(pvals[i]);
        for (std::size_t j = 0; j < i; ++j) {
            const std::int32_t f = out[j][c] / pv;
            if (f != 0) row_axpy(out[j], out[i], ctx.neg(f), ctx);
        }
    }
    Submodule s;
    s.gens_ = Matrix::from_rows(ctx, n, out);
    s.pivot_cols_ = std::move(pcols);
    s.pivot_vals_ = std::move(pvals);
    return s;
}

Submodule span_of(RingCtx ctx, std::size_t n, const std::vector<Vec>& rows) {
    return canonicalize(Matrix::from_rows(ctx, n, rows));
}

Submodule Submodule::zero(RingCtx ctx, std::size_t n) { return canonicalize(Matrix(ctx, 0, n)); }

Submodule Submodule::full(RingCtx ctx, std::size_t n) {
    return canonicalize(Matrix::identity(ctx, n));
}

bool Submodule::contains(const Vec& v) const {
    const RingCtx& c = ctx();
    Vec r(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) r[k] = c.reduce(v[k]);
    for (std::size_t i = 0; i < pivot_cols_.size(); ++i) {
        const int col = pivot_cols_[i];
        // Entries left of this pivot must already be cleared.
        const std::int32_t pv = c.pow_p(pivot_vals_[i]);
        if (r[col] % pv != 0) return false;
        const std::int32_t f = r[col] / pv;
        if (f != 0) {
            Vec g = gens_.row(i);
            row_axpy(r, g, c.neg(f), c);
        }
        for (int k = 0; k <= col; ++k)
            if (r[k] != 0) return false;
    }
    return zero_vec(r);
}

bool Submodule::contains(const Submodule& other) const {
    for (std::size_t r = 0; r < other.num_gens(); ++r)
        if (!contains(other.gens().row(r))) return false;
    return true;
}

int Submodule::log_order() const {
    int s = 0;
    for (int v : pivot_vals_) s += ctx().e - v;
    return s;
}

std::string Submodule::bytes() const {
    if (ctx().q > 255) throw DomainError("byte serialization needs modulus below 256");
    std::string b;
    b.push_back(char(gens_.rows()));
    for (auto x : gens_.data()) b.push_back(char(x));
    return b;
}

Submodule Submodule::from_bytes(RingCtx ctx, std::size_t n, const std::string& b) {
    if (b.empty()) throw DomainError("empty submodule record");
    const std::size_t rows = static_cast<unsigned char>(b[0]);
    if (b.size() != 1 + rows * n) throw DomainError("submodule record has wrong length");
    std::vector<Vec> rs(rows, Vec(n));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < n; ++c) rs[r][c] = static_cast<unsigned char>(b[1 + r * n + c]);
    Submodule s = span_of(ctx, n, rs);
    if (s.gens().rows() != rows || s.gens().data() != Matrix::from_rows(ctx, n, rs).data())
        throw DomainError("submodule record is not in canonical form");
    return s;
}

std::strong_ordering Submodule::operator<=>(const Submodule& o) const {
    if (auto c = gens_.rows() <=> o.gens_.rows(); c != 0) return c;
    const auto& a = gens_.data();
    const auto& b = o.gens_.data();
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

// ---------------------------------------------------------------- derived operations

ModuleType module_type(const Submodule& w) {
    ModuleType t;
    if (w.ctx().e == 1) {
        t.a = w.log_order();
        return t;
    }
    t.b = times_p(w).log_order();
    t.a = w.log_order() - 2 * t.b;
    return t;
}

Submodule sum(const Submodule& a, const Submodule& b) {
    Matrix m = a.gens();
    for (std::size_t r = 0; r < b.num_gens(); ++r) m.append_row(b.gens().row(r));
    return canonicalize(m);
}

Submodule intersection(const Submodule& a, const Submodule& b) {
    const std::size_t n = a.ambient();
    Matrix z(a.ctx(), 0, 2 * n);
    for (std::size_t r = 0; r < a.num_gens(); ++r) {
        Vec v = a.gens().row(r);
        Vec row(v);
        row.insert(row.end(), v.begin(), v.end());
        z.append_row(row);
    }
    for (std::size_t r = 0; r < b.num_gens(); ++r) {
        Vec row = b.gens().row(r);
        row.resize(2 * n, 0);
        z.append_row(row);
    }
    Submodule h = canonicalize(z);
    std::vector<Vec> out;
    for (std::size_t r = 0; r < h.num_gens(); ++r)
        if (h.pivot_cols()[r] >= int(n)) {
            Vec row = h.gens().row(r);
            out.emplace_back(row.begin() + n, row.end());
        }
    return span_of(a.ctx(), n, out);
}

Submodule left_kernel(const Matrix& a) {
    const std::size_t n = a.rows(), m = a.cols();
    Matrix z(a.ctx(), 0, m + n);
    for (std::size_t r = 0; r < n; ++r) {
        Vec row = a.row(r);
        row.resize(m + n, 0);
        row[m + r] = 1;
        z.append_row(row);
    }
    Submodule h = canonicalize(z);
    std::vector<Vec> out;
    for (std::size_t r = 0; r < h.num_gens(); ++r)
        if (h.pivot_cols()[r] >= int(m)) {
            Vec row = h.gens().row(r);
            out.emplace_back(row.begin() + m, row.end());
        }
    return span_of(a.ctx(), n, out);
}

Submodule times_p(const Submodule& w) { return canonicalize(w.gens().scaled(w.ctx().p)); }

Submodule reduce_mod_p(const Submodule& w) { return canonicalize(w.gens().reduce_mod_p()); }

Submodule p_torsion(const Submodule& w) {
    // x in w with px = 0: kernel of multiplication by p restricted to w.
    const RingCtx& c = w.ctx();
    if (c.e == 1) return w;
    const std::size_t n = w.ambient();
    Matrix scaled = w.gens().scaled(c.p);
    Submodule coeffs = left_kernel(scaled);
    std::vector<Vec> out;
    for (std::size_t r = 0; r < coeffs.num_gens(); ++r) {
        Vec comb = coeffs.gens().row(r);
        out.push_back(w.gens().apply_row(comb));
    }
    return span_of(c, n, out);
}

Submodule image(const Submodule& w, const Matrix& m) {
    return canonicalize(w.gens() * m.transpose());
}

Matrix symplectic_gram(RingCtx ctx, int g) {
    Matrix j(ctx, 2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        j.set(i, g + i, 1);
        j.set(g + i, i, -1);
    }
    return j;
}

// ---------------------------------------------------------------- F_{p^2}-structures

bool is_nonresidue(std::int64_t d, int p) {
    d %= p;
    if (d < 0) d += p;
    if (d == 0) return false;
    std::int64_t r = 1;
    for (int k = 0; k < (p - 1) / 2; ++k) r = r * d % p;
    return r == p - 1;
}

std::int32_t smallest_nonresidue(int p) {
    if (p == 2 || !is_prime(p)) throw DomainError("non-residues need an odd prime");
    for (int d = 2; d < p; ++d)
        if (is_nonresidue(d, p)) return d;
    throw InvariantViolation("no non-residue found");
}

Vec Fp2Structure::apply(const Vec& v) const {
    const std::size_t n = omega.rows();
    Vec out(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        std::int64_t acc = 0;
        for (std::size_t c = 0; c < n; ++c) acc += std::int64_t(omega.at(r, c)) * v[c];
        out[r] = ctx.reduce(acc);
    }
    return out;
}

Fp2Structure make_fp2(int g, RingCtx ctx, std::int32_t d) {
    if (ctx.p == 2)
        throw DomainError("F_{p^2}-structures via a non-residue need odd p (p=2 unsupported)");
    if (g < 1) throw DomainError("genus must be positive");
    if (d == 0) d = smallest_nonresidue(ctx.p);
    if (!is_nonresidue(d, ctx.p))
        throw DomainError(std::to_string(d) + " is not a quadratic non-residue mod " +
                          std::to_string(ctx.p));
    Fp2Structure f;
    f.ctx = ctx;
    f.g = g;
    f.d = ctx.reduce(d);
    f.omega = Matrix(ctx, 2 * g, 2 * g);
    for (int i = 0; i < g; ++i) {
        f.omega.set(g + i, i, 1);
        f.omega.set(i, g + i, d);
    }
    return f;
}

Fp2Structure conjugate_fp2(const Fp2Structure& f, const Matrix& s, const Matrix& s_inv) {
    Fp2Structure out = f;
    out.omega = s * f.omega * s_inv;
    return out;
}

bool check_fp2(const Fp2Structure& f) {
    const std::size_t n = 2 * f.g;
    Matrix j = symplectic_gram(f.ctx, f.g);
    Matrix sq = f.omega * f.omega;
    if (!(sq == Matrix::identity(f.ctx, n).scaled(f.d))) return false;
    return (f.omega.transpose() * j + j * f.omega).is_zero();
}

Submodule omega_closure(const Submodule& w, const Fp2Structure& f) {
    Matrix m = w.gens();
    Matrix img = w.gens() * f.omega.transpose();
    for (std::size_t r = 0; r < img.rows(); ++r) m.append_row(img.row(r));
    return canonicalize(m);
}

bool omega_stable(const Submodule& w, const Fp2Structure& f) { return omega_closure(w, f) == w; }

int omega_span_dim(const Submodule& w, const Fp2Structure& f) {
    Submodule c = omega_closure(w, f);
    if (c.ctx().e == 1) return c.log_order() / 2;
    ModuleType t = module_type(c);
    return (t.a + t.b) / 2;
}

}  // namespace heckelab
