#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "heckelab/errors.hpp"
#include "heckelab/kolyvagin.hpp"

using namespace heckelab;

namespace {

std::vector<BigInt> big(std::initializer_list<long> xs) {
    std::vector<BigInt> v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

}  // namespace

TEST(GroupRing, DerivativeExamples) {
    // p = 2: D = g + 2g^2 and (g-1)D = 3 - (1 + g + g^2)
    const GroupRingElem g = GroupRingElem::g_pow(3, 1), one = GroupRingElem::one(3);
    const GroupRingElem D = GroupRingElem::derivative(3);
    EXPECT_EQ(D, g + GroupRingElem::g_pow(3, 2).scaled(2));
    EXPECT_EQ((g - one) * D, one.scaled(3) - GroupRingElem::norm(3));
    // p = 1: (g-1) g = 2 - (1 + g)
    const GroupRingElem h = GroupRingElem::g_pow(2, 1), one2 = GroupRingElem::one(2);
    EXPECT_EQ((h - one2) * GroupRingElem::derivative(2), one2.scaled(2) - GroupRingElem::norm(2));
    EXPECT_THROW(GroupRingElem::one(3) + GroupRingElem::one(4), DomainError);
}

TEST(GroupRing, DerivativeIdentityUpToHundred) {
    for (int p = 1; p <= 100; ++p) {
        const VerificationReport r = derivative_identity(p);
        EXPECT_TRUE(r.pass()) << "p=" << p;
    }
    EXPECT_THROW(derivative_identity(0), DomainError);
}

TEST(Kummer, ModelValidation) {
    EXPECT_THROW(ToyGaloisModule::make(1, 4, 1, 3), DomainError);  // l = 2
    EXPECT_THROW(ToyGaloisModule::make(1, 9, 1, 4), DomainError);  // a = b mod 3
    EXPECT_THROW(ToyGaloisModule::make(1, 9, 3, 1), DomainError);  // a not a unit
    EXPECT_THROW(ToyGaloisModule::make(1, 9, 1, 2, 3), DomainError);
    EXPECT_THROW(ToyGaloisModule::make(0, 9, 1, 2), DomainError);
}

TEST(Kummer, ZeroAndSmallExample) {
    const ToyGaloisModule t = ToyGaloisModule::make(1, 3, 2, 1);
    EXPECT_EQ(kummer_beta(t, {0, 0}), (IntVec{0, 0}));
    // minus part is the second coordinate; b = 1 so beta(z) = -2z = z mod 9
    const IntVec z{0, 3};
    EXPECT_EQ(kummer_beta(t, z), (IntVec{0, 3}));
    EXPECT_EQ(kummer_beta(t, IntVec{0, 6}), (IntVec{0, 6}));
}

TEST(Kummer, RejectsVectorsOutsideMinusTorsion) {
    const ToyGaloisModule t = ToyGaloisModule::make(1, 3, 1, 2);
    EXPECT_THROW(kummer_beta(t, {3, 0}), DomainError);  // plus part
    EXPECT_THROW(kummer_beta(t, {0, 1}), DomainError);  // not M-torsion
    EXPECT_THROW(kummer_beta(ToyGaloisModule::make(1, 3, 1, 2, 1), {0, 0}), DomainError);
}

TEST(Kummer, ExhaustiveAndBasisFree) {
    const VerificationReport r = verify_kummer({1, 2}, {3, 9}, 5);
    EXPECT_TRUE(r.pass());
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name;
    for (std::int64_t M : {3, 9})
        for (int d : {1, 2}) EXPECT_EQ(minus_torsion(ToyGaloisModule::make(d, M, 1, 2)).size(), std::size_t(std::pow(M, d)));
}

TEST(Kummer, UnimodularInverse) {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
        const auto [P, Pi] = random_unimodular(4, 81, rng);
        EXPECT_EQ(mat_mul(P, Pi, 81), identity_mat(4));
    }
}

TEST(Sigma, PlusPartCases) {
    const ToyGaloisModule t = ToyGaloisModule::make(1, 9, 1, 2);
    const IntMat H{{1}, {0}};  // into the plus part
    const IntMat id{{1}}, neg{{8}};
    EXPECT_TRUE(sigma_square_formula(t, H, id, 1).pass());    // lhs = 2 t(g)
    EXPECT_TRUE(sigma_square_formula(t, H, neg, -1).pass());  // lhs = 0
    EXPECT_THROW(sigma_square_formula(t, H, id, -1), DomainError);
    EXPECT_THROW(sigma_square_formula(t, H, IntMat{{2}}, 1), DomainError);
}

TEST(Sigma, RandomHomsGenusTwo) {
    std::mt19937_64 rng(19);
    const ToyGaloisModule t = ToyGaloisModule::make(2, 9, 1, 2);
    std::uniform_int_distribution<int> e(0, 8);
    const IntMat tau{{0, 1}, {1, 0}};
    for (int eps : {1, -1})
        for (int k = 0; k < 10; ++k) {
            IntMat H(4, IntVec(2));
            for (auto& row : H)
                for (auto& x : row) x = e(rng);
            const VerificationReport r = sigma_square_formula(t, equivariant_part(t, H, tau, eps), tau, eps);
            EXPECT_TRUE(r.pass());
        }
}

TEST(Congruences, ExampleSpec) {
    const VerificationReport r = congruence_checks(CongruenceSpec::with_p(3, 2, 1, 2, 17));
    EXPECT_TRUE(r.pass());
    bool saw_product = false;
    for (const auto& t : r.tables)
        for (const auto& row : t.rows)
            for (const auto& cell : row) saw_product |= cell == "8";
    EXPECT_TRUE(saw_product);
}

TEST(Chow, RankOneExamples) {
    for (long a1 : {-4L, 0L, 5L}) {
        const auto T1 = std::vector<std::vector<BigInt>>{big({a1, 7}), big({0, 2})};
        const auto T2 = std::vector<std::vector<BigInt>>{big({a1 + 1, 7}), big({0, 3})};
        const ToyChowModel m = ToyChowModel::from_operators(T1, T2);
        EXPECT_EQ(m.eigenvalue(1), BigInt(a1));
        // Q_1(Z) = Z - 2, so cl(phi_1 V) = (a_1 - 2) cl(V)
        EXPECT_EQ(m.charpoly(1), (std::vector<BigInt>{BigInt(-2), BigInt(1)}));
        const std::vector<BigInt> V = big({3, 5});
        EXPECT_EQ(m.phi(1, V)[0], (BigInt(a1) - 2) * 3 + 7 * 5);
        EXPECT_TRUE(phi_m_proportionality(m, V).pass());
        // V in C_0
        EXPECT_TRUE(phi_m_proportionality(m, big({4, 0})).pass());
    }
}

TEST(Chow, RandomModels) {
    const VerificationReport r = verify_chow_models(200, 99);
    EXPECT_TRUE(r.pass());
    std::mt19937_64 rng(1);
    for (int r_ = 1; r_ <= 4; ++r_) {
        const ToyChowModel m = ToyChowModel::random(r_, rng);
        std::vector<BigInt> V(std::size_t(r_ + 1));
        for (int i = 0; i <= r_; ++i) V[std::size_t(i)] = i * 3 - 2;
        EXPECT_TRUE(phi_m_proportionality(m, V).pass());
    }
}

TEST(Chow, RejectsBadOperators) {
    const auto T1 = std::vector<std::vector<BigInt>>{big({1, 1}), big({0, 2})};
    const auto noncommuting = std::vector<std::vector<BigInt>>{big({1, 0}), big({0, 3})};
    EXPECT_THROW(ToyChowModel::from_operators(T1, noncommuting), DomainError);
    const auto leaks = std::vector<std::vector<BigInt>>{big({1, 0}), big({1, 2})};
    EXPECT_THROW(ToyChowModel::from_operators(leaks, leaks), DomainError);
    const ToyChowModel m = ToyChowModel::from_operators(T1, T1);
    EXPECT_THROW(m.phi(1, big({1})), DomainError);
}

TEST(Suites, KolyvaginSuitePasses) {
    const VerificationReport r = verify_kolyvagin({3, 9}, 2);
    EXPECT_TRUE(r.pass());
    for (const auto& c : r.checks) EXPECT_TRUE(c.pass) << c.name;
}
