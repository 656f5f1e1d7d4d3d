#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heckelab/cache.hpp"
#include "heckelab/finmod.hpp"
#include "heckelab/intpoly.hpp"
#include "heckelab/lagrange.hpp"
#include "heckelab/report.hpp"

namespace heckelab {

// D_g and D_{g-1} models inside the ambient symplectic module.
struct FlagData {
    Submodule Dg;
    Submodule Dg1;
    Submodule Dg1_perp;
    std::optional<Fp2Structure> fp2;
    std::string description;

    void validate() const;  // throws DomainError on a broken invariant
};

// F_p: D_g = span{e_{g+1..2g}}, D_{g-1} its first g-1 basis vectors.
FlagData ordinary_flags_fp(int g, int p);
// F_p with an F_{p^2}-structure. For odd g, D_{g-1} is the choice-th omega-stable
// isotropic (g-1)-subspace in sorted order and D_g the first Lagrangian above it.
// For even g, D_g is the choice-th omega-stable Lagrangian and D_{g-1} the
// first omega-stable (g-2)-subspace inside it.
FlagData omega_flags_fp(int g, const Fp2Structure& f, std::size_t choice = 0);
// Z/p^2: D_g = span{e_1..e_g}, D_{g-1} = span{e_1..e_{g-1}}.
FlagData ordinary_flags_zp2(int g, int p);
// Z/p^2, g = 3: for odd p, D_2 is an omega-stable free isotropic rank-2 summand
// lifting the choice-th omega-stable plane mod p (lift_choice-th admissible
// lift); with no structure (p = 2 allowed) D_2 = span{e_1, e_2}.
FlagData nonordinary_flags_zp2(int g, int p, const Fp2Structure* f, std::size_t choice = 0,
                               std::size_t lift_choice = 0);
// Image under a symplectic matrix s (column convention); omega is conjugated.
FlagData transform_flags(const FlagData& f, const Matrix& s, const Matrix& s_inv);

std::vector<Submodule> omega_stable_isotropic(int g, int k, const Fp2Structure& f);

enum class Scheme {
    Ordinary,           // j = dim W cap D_g
    NonOrdinary,        // j = dim W cap D_{g-1}
    OmegaSpan,          // F_{p^2}-dimension of the omega-closure of W
    OrdinaryType,       // W cap D_g = (Z/p)^{k-j} + (Z/p^2)^j
    NonOrdinaryTypeMu,  // same for D_{g-1}, plus mu = rank of pW cap D_{g-1}
};
const char* scheme_name(Scheme s);

struct PartitionLabel {
    Scheme scheme = Scheme::Ordinary;
    std::vector<int> values;

    std::string str() const;
    bool operator==(const PartitionLabel&) const = default;
    auto operator<=>(const PartitionLabel&) const = default;
};

PartitionLabel classify(const Submodule& w, const FlagData& flags, Scheme scheme);

using Census = std::map<PartitionLabel, std::vector<Submodule>>;
Census partition(const std::vector<Submodule>& ws, const FlagData& flags, Scheme scheme,
                 unsigned threads = 1);

// Points of G(j, D) over F_p, or of submodules of a free D = (Z/p^2)^m of
// type (Z/p)^{k-j} + (Z/p^2)^j, embedded in the ambient module and sorted.
struct GrassmannianIndex {
    bool over_zp2 = false;
    int j = 0;
    int k = 0;
    Submodule D;
    std::vector<Submodule> points;

    std::optional<std::size_t> find(const Submodule& w) const;
    std::string name() const;
};

GrassmannianIndex grassmannian_fp(const Submodule& d, int j);
GrassmannianIndex grassmannian_zp2(const Submodule& d, int j, int k);
// Submodules of (Z/p^2)^m isomorphic to (Z/p)^a + (Z/p^2)^b.
std::vector<Submodule> submodules_of_type(int m, int p, int a, int b);
std::uint64_t count_submodules_of_type(int m, int p, int a, int b);

struct FiberReport {
    PartitionLabel cell;
    std::string target;
    std::vector<std::uint64_t> counts;  // one per target point, same order
    std::uint64_t total = 0;
    bool uniform = true;
    std::optional<std::uint64_t> common_count;
    std::optional<IntPoly> expected;
};

// Counts W in `cell` by the target point W cap target.D.
FiberReport fiber_stats(const std::vector<Submodule>& cell, const GrassmannianIndex& target,
                        PartitionLabel label = {});

struct SuiteContext {
    EnumOptions opt;
    const EnumerationCache* cache = nullptr;
};

VerificationReport verify_plane_census(int p, const SuiteContext& ctx = {});
VerificationReport verify_tp1_census(int p, const SuiteContext& ctx = {});
VerificationReport verify_lift_counts(int p, std::size_t samples, const SuiteContext& ctx = {});
VerificationReport verify_good_bad_fibers(int p, const SuiteContext& ctx = {});
VerificationReport verify_bad_support(int p, const SuiteContext& ctx = {});
enum class FiberLaw { Ordinary, NonOrdinary, Both };
// Both also checks the global identity against the Lagrangian count.
VerificationReport verify_fiber_laws(int g, int p, const SuiteContext& ctx = {}, FiberLaw which = FiberLaw::Both);
VerificationReport verify_ordinary_tpi_fibers(int p, const SuiteContext& ctx = {});
VerificationReport verify_nonordinary_tpi_fibers(int p, const SuiteContext& ctx = {});
// Only the (0,2) cell: passes when the measured fiber falls short of the
// assembled coefficient by exactly p^3.
VerificationReport verify_discrepancy(int p, const SuiteContext& ctx = {});
VerificationReport verify_g4_nonuniformity(int p, const SuiteContext& ctx = {});

}  // namespace heckelab
