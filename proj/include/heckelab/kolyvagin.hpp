#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "heckelab/heckealg.hpp"
#include "heckelab/report.hpp"

namespace heckelab {

using BigInt = boost::multiprecision::cpp_int;

// ------------------------------------------------------------ group ring Z[C_n]

struct GroupRingElem {
    int order = 1;
    std::vector<std::int64_t> c;  // coefficient of g^k

    static GroupRingElem zero(int order);
    static GroupRingElem one(int order);
    static GroupRingElem g_pow(int order, int k);
    static GroupRingElem norm(int order);  // sum of all g^k
    // sum_{k=0}^{order-1} k g^k
    static GroupRingElem derivative(int order);

    GroupRingElem operator+(const GroupRingElem& o) const;
    GroupRingElem operator-(const GroupRingElem& o) const;
    GroupRingElem operator*(const GroupRingElem& o) const;
    GroupRingElem scaled(std::int64_t s) const;
    bool operator==(const GroupRingElem& o) const = default;
    std::string str() const;
};

// (g - 1) D against (p+1) 1 - Norm in Z[C_{p+1}]; reports the sign relative
// to Norm - (p+1) 1.
VerificationReport derivative_identity(int p_like);

// ------------------------------------------------------------ Kummer model

using IntMat = std::vector<std::vector<std::int64_t>>;
using IntVec = std::vector<std::int64_t>;

// (Z/M^k)^{2d} with Frobenius diag(1+aM x d, -1+bM x d), sigma = diag(I, -I),
// and the standard symplectic pairing, possibly in a changed basis.
struct ToyGaloisModule {
    int d = 1;
    int l = 3;
    std::int64_t M = 3;
    int k = 2;
    std::int64_t a = 1;
    std::int64_t b = 2;
    IntMat fr;
    IntMat sigma;
    IntMat pairing;

    static ToyGaloisModule make(int d, std::int64_t M, std::int64_t a, std::int64_t b, int k = 2);
    // Same module written in the basis given by columns of P (P^{-1} supplied).
    ToyGaloisModule conjugated(const IntMat& P, const IntMat& P_inv) const;

    std::int64_t modulus() const;  // M^k
    IntVec apply(const IntMat& m, const IntVec& v) const;
    bool in_minus_torsion(const IntVec& z) const;
};

IntMat mat_mul(const IntMat& x, const IntMat& y, std::int64_t m);
IntMat identity_mat(int n);
// Random invertible matrix over Z/m and its inverse, from elementary operations.
std::pair<IntMat, IntMat> random_unimodular(int n, std::int64_t m, std::mt19937_64& rng);

// Lifts z = M x with x = z / M coordinatewise and returns (fr^2 - 1) x.
// Throws DomainError unless fr z = -z and M z = 0; throws InvariantViolation
// if the result is not -2b z.
IntVec kummer_beta(const ToyGaloisModule& t, const IntVec& z);
// Every z in the minus part killed by M.
std::vector<IntVec> minus_torsion(const ToyGaloisModule& t);

VerificationReport verify_kummer(const std::vector<int>& halfranks, const std::vector<std::int64_t>& moduli,
                                 std::uint64_t seed = 1);

// ------------------------------------------------------------ sigma formula

// Hom t : (Z/M)^m -> E_M given as a 2d x m matrix H; tau is the involution of
// (Z/M)^m induced by conjugation with sigma. Checks t((sigma g)^2) =
// t(g) + eps sigma t(g) for every g, computing (sigma g)^2 in the semidirect
// product. Throws DomainError if H tau != eps sigma H.
VerificationReport sigma_square_formula(const ToyGaloisModule& t, const IntMat& H, const IntMat& tau, int eps);
// (H + eps sigma H tau) / 2, the equivariant part of H.
IntMat equivariant_part(const ToyGaloisModule& t, const IntMat& H, const IntMat& tau, int eps);

// ------------------------------------------------------------ congruences

VerificationReport congruence_checks(const CongruenceSpec& spec);

// ------------------------------------------------------------ Chow model

// C = Z^{r+1} with C_0 = Z e_0. Each T_m maps e_0 to a_m e_0, induces A_m on
// C/C_0, and cl reads the e_0 coefficient on C_0.
struct ToyChowModel {
    int r = 1;
    std::vector<std::vector<BigInt>> T1;
    std::vector<std::vector<BigInt>> T2;

    // Throws DomainError unless both preserve C_0 and commute.
    static ToyChowModel from_operators(std::vector<std::vector<BigInt>> T1, std::vector<std::vector<BigInt>> T2);
    // T_2 a random integer polynomial in a random T_1.
    static ToyChowModel random(int r, std::mt19937_64& rng);

    BigInt eigenvalue(int m) const;  // a_m
    // Coefficients b_{m,0..r} of det(Z - A_m).
    std::vector<BigInt> charpoly(int m) const;
    // Q_m(T_m) V; lies in C_0.
    std::vector<BigInt> phi(int m, const std::vector<BigInt>& V) const;
};

VerificationReport phi_m_proportionality(const ToyChowModel& model, const std::vector<BigInt>& V);
VerificationReport verify_chow_models(int count, std::uint64_t seed = 7);

VerificationReport verify_kolyvagin(const std::vector<std::int64_t>& moduli, std::uint64_t seed = 1);

}  // namespace heckelab
