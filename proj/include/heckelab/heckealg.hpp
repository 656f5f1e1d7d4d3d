#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heckelab/errors.hpp"
#include "heckelab/intpoly.hpp"
#include "heckelab/report.hpp"

namespace heckelab {

// ------------------------------------------------------------ corank counts

// Symmetric n x n matrices over F_p of corank exactly i, by exhaustion over
// all p^{b(n)} matrices.
std::uint64_t count_symmetric_corank(int n, int p, int i, std::uint64_t budget = kDefaultBudget);
// Same count as a polynomial in p (MacWilliams' formula for rank n - i).
IntPoly symmetric_corank_poly(int n, int i);

// ------------------------------------------------------------ Phi expansions

// Coefficients on basis symbols indexed by one or two integers.
struct PhiExpansion {
    std::string symbol;  // "y" or "z"
    std::map<std::vector<int>, IntPoly> coeffs;

    IntPoly at(std::vector<int> idx) const;
    std::string str() const;
};

// (j, k) -> R_{k-j}(i) p^{-b(k-j)}, for 0 <= j <= k <= g with k - j >= i.
std::map<std::pair<int, int>, IntPoly> decomposition_coeffs(int g, int i);
// T_{p,i} on the ordinary basis: coefficient of y_{j,k} is
// R_{k-j}(i) p^{-b(k-j)+b(g-j)+b(g-k)}; throws InvariantViolation if not integral.
PhiExpansion assemble_tpi_ordinary(int g, int i);
// The same after substituting Phi_j Phi_k(y) = p^{b(g-j)+b(g-k)} [z_{j,k} +
// p^{g-j} z_{j-1,k} + p^{g-k} z_{j,k-1} + p^{2g-j-k} z_{j-1,k-1}], keeping
// 0 <= j <= k <= g-1.
PhiExpansion assemble_tpi_nonordinary(int g, int i);
// Sum over j of Phi_j(y) = p^{b(g-j)+g-j} z_{j-1} + p^{b(g-j)} z_j, z_0..z_{g-1}.
PhiExpansion assemble_tp_nonordinary(int g);
// p^{b(g-j)} + p^{b(g-j)-1}, the expected coefficient of z_j above.
IntPoly nonordinary_tp_law(int g, int j);

// ------------------------------------------------------------ Satake engine

enum class WeightClass { Middle, Reduced };  // Reduced: weight b(g)-1, b_1 pinned to p

struct SatakeParams {
    int g = 3;
    WeightClass weight = WeightClass::Reduced;

    static SatakeParams make(int g, WeightClass w);
    // Indices allowed in a basis subset I.
    int first_index() const { return weight == WeightClass::Reduced ? 2 : 1; }
};

// Integer combination of monomials U^u V^v in the torus Hecke algebra.
// Key: exponents (u_1..u_g, v_1..v_g).
struct TorusElement {
    int g = 0;
    std::map<std::vector<int>, std::int64_t> terms;

    static TorusElement one(int g);
    static TorusElement U(int g, int i);
    static TorusElement V(int g, int i);
    TorusElement operator+(const TorusElement& o) const;
    TorusElement operator*(const TorusElement& o) const;
    bool operator==(const TorusElement& o) const { return g == o.g && terms == o.terms; }
    std::string str() const;
};

// U_I = prod_{i in I} U_i prod_{i not in I} V_i.
TorusElement u_subset(int g, const std::vector<int>& I);
// Image of Phi_i: sum of U_I over #I = i.
TorusElement phi_element(int g, int i);
// prod_i (U_i + V_i).
TorusElement tp_element(int g);

// Exact sum of monomials a_0^x p^y b_1^{z_1}..b_g^{z_g}; key (x, y, z_1..z_g).
struct SatakeValue {
    int g = 0;
    std::map<std::vector<int>, std::int64_t> terms;

    SatakeValue operator+(const SatakeValue& o) const;
    SatakeValue operator*(const SatakeValue& o) const;
    bool operator==(const SatakeValue& o) const { return g == o.g && terms == o.terms; }
    std::string str() const;
};

// Eigenvalue of `op` on f_I: U_i contributes a^ b_i for i not in I and a^ for
// i in I; V_i the other way round; a^g = a_0. Throws InvariantViolation when
// the a^ exponent of a monomial is not divisible by g.
SatakeValue satake_eigenvalue(const TorusElement& op, const std::vector<int>& I,
                              const SatakeParams& params);
// a_0 (p+1) (b_2+1)(b_3+1) for g = 3 reduced weight.
SatakeValue tp_eigenvalue_closed_form();

// ------------------------------------------------------------ congruences

// M = l^n; a, b residues mod M; mod-M^2 lifts b_2 = 1 + sM and p = -1 + tM
// (or an explicit integer p = -1 mod M).
struct CongruenceSpec {
    int l = 3;
    int n = 1;
    std::int64_t M = 3;
    std::int64_t a = 1;
    std::int64_t b = 2;
    std::int64_t s = 0;
    std::int64_t t = 0;
    std::optional<std::int64_t> p_value;

    static CongruenceSpec make(int l, int n, std::int64_t a, std::int64_t b, std::int64_t s = 0,
                               std::int64_t t = 0);
    static CongruenceSpec with_p(int l, int n, std::int64_t a, std::int64_t b, std::int64_t p,
                                 std::int64_t s = 0);
    std::int64_t M2() const { return M * M; }
    std::int64_t p_mod_M2() const;
    std::string str() const;
};

// Unit pairs (a, b) mod M with a != b mod l.
std::vector<std::pair<std::int64_t, std::int64_t>> admissible_ab(int l, int n);

struct Residue {
    std::int64_t mod_M = 0;
    std::int64_t mod_M2 = 0;
};

// a_0 = 1+aM, p = p_mod_M2, b_2 = 1+sM, b_3 = -1+(a+b)M; g = 3 reduced weight only.
Residue specialize(const SatakeValue& v, const CongruenceSpec& spec);
// a_0^2 p b_2 b_3 == p^6 mod M^2 for this extension.
bool weil_relation_holds(const CongruenceSpec& spec);

enum class PhiIndex { Direct, Reversed };  // Phi_i or Phi_{g-i}

struct DescentResult {
    std::vector<std::int64_t> phi_residues;  // Phi_0..Phi_3 on f_3, mod M
    std::vector<std::int64_t> z;             // z_0, z_1, z_2 as multiples of y_1, mod M
    bool consistent = false;                 // the Phi_2 row agrees
    std::int64_t y_p = 0;
    std::int64_t y_bad = 0;
    std::int64_t kappa = 0;
    std::int64_t a_p_mod_M2 = 0;
    std::int64_t B = 0;  // descent class as a multiple of y_1, mod M
};

DescentResult descent_class(const CongruenceSpec& spec, PhiIndex convention = PhiIndex::Direct);

// T_{p,1} eigenvalue on f_3 mod M from the expansion over Phi_j Phi_k.
struct TpiResidue {
    std::map<std::pair<int, int>, std::int64_t> coeff_residues;
    std::int64_t value = 0;
};
TpiResidue tpi_eigenvalue_residue(const CongruenceSpec& spec);

// Suites.
VerificationReport verify_corank_counts(const std::vector<int>& primes, int max_n = 3);
VerificationReport verify_coefficient_assembly();
VerificationReport verify_satake_identities(const std::vector<std::int64_t>& moduli);
VerificationReport verify_descent_pipeline(const std::vector<std::int64_t>& moduli);
VerificationReport verify_tpi_residue(const std::vector<std::int64_t>& moduli);

// Splits M = l^n; throws DomainError unless l is an odd prime.
std::pair<int, int> split_prime_power(std::int64_t M);

}  // namespace heckelab
