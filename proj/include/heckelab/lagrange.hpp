#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heckelab/errors.hpp"
#include "heckelab/finmod.hpp"

namespace heckelab {

struct SymplecticSpace {
    RingCtx ctx;
    int g = 0;
    Matrix gram;

    static SymplecticSpace make(int g, RingCtx ctx);
    std::size_t rank() const { return std::size_t(2 * g); }
};

std::int32_t pairing(const Vec& x, const Vec& y, const SymplecticSpace& s);
Submodule orthogonal(const Submodule& w, const SymplecticSpace& s);
bool is_isotropic(const Submodule& w, const SymplecticSpace& s);

struct HeckeType {
    enum class Kind { Tp, Tpi };
    Kind kind = Kind::Tp;
    int i = 0;

    static HeckeType tp() { return {Kind::Tp, 0}; }
    static HeckeType tpi(int i) { return {Kind::Tpi, i}; }
    int exponent() const { return kind == Kind::Tp ? 1 : 2; }
    std::string name() const;
    bool operator==(const HeckeType&) const = default;
};

struct EnumOptions {
    std::uint64_t budget = kDefaultBudget;
    unsigned threads = 1;
};

// b(n) = n(n+1)/2
constexpr int triangular(int n) { return n * (n + 1) / 2; }
std::uint64_t ipow(std::uint64_t base, int exp);
std::uint64_t gaussian_binomial(int n, int k, std::uint64_t q);
std::uint64_t count_lagrangians(int g, int p);
// Isotropic k-dimensional subspaces of F_p^{2g}.
std::uint64_t count_isotropic(int g, int k, int p);
// Isotropic submodules of (Z/p^2)^{2g} of type (Z/p^2)^{g-i} + F_p^{2i}.
std::uint64_t count_tpi(int g, int i, int p);
std::uint64_t predicted_count(int g, int p, HeckeType t);

// k-dimensional subspaces of F_p^n in reduced echelon form, sorted. When
// `gram` is given only subspaces isotropic for it are kept.
std::vector<Submodule> enumerate_subspaces(int n, int k, int p, const EnumOptions& opt = {},
                                           const Matrix* gram = nullptr);
std::vector<Submodule> enumerate_isotropic(int g, int k, int p, const EnumOptions& opt = {});

std::vector<Submodule> enumerate_tp(int g, int p, const EnumOptions& opt = {});
std::vector<Submodule> enumerate_tpi(int g, int p, int i, const EnumOptions& opt = {});
std::vector<Submodule> enumerate(int g, int p, HeckeType t, const EnumOptions& opt = {});

// Every isotropic W of type (Z/p^2)^{g-i} + F_p^{2i} whose reduction mod p is
// `wbar` (an isotropic (g-i)-subspace of F_p^{2g}), one per symmetric matrix.
std::vector<Submodule> lifts_of(const Submodule& wbar, int g);

// Number of type-T_{p,i} W with W cap pB equal to the given p-torsion module.
std::int64_t lift_count(const Submodule& w4, int g, int p, int i = 1);

// Symplectic transvection x -> x + c <x, v> v as a matrix acting on columns.
Matrix transvection(const SymplecticSpace& s, const Vec& v, std::int32_t c);
bool is_symplectic(const Matrix& m, const SymplecticSpace& s);

}  // namespace heckelab
