#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace heckelab {

using Vec = std::vector<std::int32_t>;

bool is_prime(std::int64_t n);

// Z/p^e with e in {1,2}.
struct RingCtx {
    int p = 2;
    int e = 1;
    int q = 2;

    static RingCtx make(int p, int e);

    std::int32_t reduce(std::int64_t x) const {
        std::int64_t r = x % q;
        return std::int32_t(r < 0 ? r + q : r);
    }
    std::int32_t add(std::int32_t a, std::int32_t b) const { return reduce(std::int64_t(a) + b); }
    std::int32_t sub(std::int32_t a, std::int32_t b) const { return reduce(std::int64_t(a) - b); }
    std::int32_t mul(std::int32_t a, std::int32_t b) const { return reduce(std::int64_t(a) * b); }
    std::int32_t neg(std::int32_t a) const { return a == 0 ? 0 : q - a; }
    // p-adic valuation of a residue; e for zero.
    int valuation(std::int32_t a) const;
    std::int32_t inverse(std::int32_t unit) const;
    std::int32_t pow_p(int k) const;

    bool operator==(const RingCtx& o) const { return p == o.p && e == o.e; }
};

class Matrix {
public:
    Matrix() = default;
    Matrix(RingCtx ctx, std::size_t rows, std::size_t cols);
    static Matrix identity(RingCtx ctx, std::size_t n);
    static Matrix from_rows(RingCtx ctx, std::size_t cols, const std::vector<Vec>& rows);

    const RingCtx& ctx() const { return ctx_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::int64_t v) { data_[r * cols_ + c] = ctx_.reduce(v); }
    const std::int32_t* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
    Vec row(std::size_t r) const;
    std::vector<Vec> row_list() const;
    const std::vector<std::int32_t>& data() const { return data_; }

    void append_row(const Vec& v);
    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix scaled(std::int64_t s) const;
    Matrix transpose() const;
    bool is_zero() const;
    // Image of every entry under Z/p^e -> Z/p (e=2 only; identity copy for e=1).
    Matrix reduce_mod_p() const;
    // Reinterpret entries (taken as integers in [0, old q)) in another ring.
    Matrix lifted(RingCtx target) const;
    // Row vector times matrix.
    Vec apply_row(const Vec& v) const;

    bool operator==(const Matrix& o) const {
        return ctx_ == o.ctx_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    RingCtx ctx_{};
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int32_t> data_;
};

struct ModuleType {
    int a = 0;  // copies of Z/p
    int b = 0;  // copies of Z/p^2
    bool operator==(const ModuleType&) const = default;
    auto operator<=>(const ModuleType&) const = default;
};

// A submodule of (Z/p^e)^n held as its canonical (Howell) generator matrix:
// echelon rows, each leading entry a power of p, entries above a leading entry
// reduced below it, and closed under the annihilator of each row. Two
// generating sets of the same submodule give byte-identical matrices.
class Submodule {
public:
    Submodule() = default;
    static Submodule zero(RingCtx ctx, std::size_t n);
    static Submodule full(RingCtx ctx, std::size_t n);

    const RingCtx& ctx() const { return gens_.ctx(); }
    std::size_t ambient() const { return gens_.cols(); }
    const Matrix& gens() const { return gens_; }
    std::size_t num_gens() const { return gens_.rows(); }
    const std::vector<int>& pivot_cols() const { return pivot_cols_; }
    const std::vector<int>& pivot_vals() const { return pivot_vals_; }

    bool contains(const Vec& v) const;
    bool contains(const Submodule& other) const;
    // log_p of the number of elements.
    int log_order() const;
    bool is_zero() const { return gens_.rows() == 0; }

    // Fixed-width serialization of the canonical matrix: rows, then entries.
    std::string bytes() const;
    static Submodule from_bytes(RingCtx ctx, std::size_t n, const std::string& b);

    bool operator==(const Submodule& o) const { return gens_ == o.gens_; }
    std::strong_ordering operator<=>(const Submodule& o) const;

private:
    friend Submodule canonicalize(const Matrix& gens);
    Matrix gens_;
    std::vector<int> pivot_cols_;
    std::vector<int> pivot_vals_;  // valuation of each leading entry
};

Submodule canonicalize(const Matrix& gens);
Submodule span_of(RingCtx ctx, std::size_t n, const std::vector<Vec>& rows);

ModuleType module_type(const Submodule& w);
Submodule sum(const Submodule& a, const Submodule& b);
Submodule intersection(const Submodule& a, const Submodule& b);
// {x : x * A = 0} for an n x m matrix A, x a row vector of length n.
Submodule left_kernel(const Matrix& a);
// pW.
Submodule times_p(const Submodule& w);
// Image in (Z/p)^n of a submodule of (Z/p^2)^n.
Submodule reduce_mod_p(const Submodule& w);
// {x : px = 0}, the p-torsion of the ambient module intersected with w.
Submodule p_torsion(const Submodule& w);
// Image of w under v -> v * m^T (column convention: m acts on column vectors).
Submodule image(const Submodule& w, const Matrix& m);

// Standard symplectic Gram matrix [[0, I], [-I, 0]].
Matrix symplectic_gram(RingCtx ctx, int g);

// omega acts on column vectors; omega^2 = d and omega^T J = -J omega.
struct Fp2Structure {
    RingCtx ctx;
    int g = 0;
    std::int32_t d = 0;
    Matrix omega;

    Vec apply(const Vec& v) const;  // omega applied to a vector
};

// Smallest quadratic non-residue mod an odd prime.
std::int32_t smallest_nonresidue(int p);
bool is_nonresidue(std::int64_t d, int p);

// Hyperbolic-pair construction: omega e_i = e_{g+i}, omega e_{g+i} = d e_i.
// d = 0 picks the smallest non-residue.
Fp2Structure make_fp2(int g, RingCtx ctx, std::int32_t d = 0);
// S omega S^{-1} for a symplectic S; still satisfies both invariants.
Fp2Structure conjugate_fp2(const Fp2Structure& f, const Matrix& s, const Matrix& s_inv);
bool check_fp2(const Fp2Structure& f);

Submodule omega_closure(const Submodule& w, const Fp2Structure& f);
bool omega_stable(const Submodule& w, const Fp2Structure& f);
// F_{p^2}-dimension of the omega-closure. For e=2 this is the minimal number of
// generators of the closure as a module over Z/p^2[omega], i.e. (a+b)/2.
int omega_span_dim(const Submodule& w, const Fp2Structure& f);

}  // namespace heckelab
