#include <gtest/gtest.h>

#include <random>
#include <set>

#include "heckelab/errors.hpp"
#include "heckelab/finmod.hpp"
#include "heckelab/lagrange.hpp"
#include "oracle.hpp"
#include "props.hpp"

using namespace heckelab;

namespace {

Submodule sub(int p, int e, std::size_t n, std::vector<Vec> rows) { return span_of(RingCtx::make(p, e), n, rows); }

}  // namespace

TEST(RingCtx, RejectsBadModuli) {
    EXPECT_THROW(RingCtx::make(4, 1), DomainError);
    EXPECT_THROW(RingCtx::make(3, 3), DomainError);
    EXPECT_THROW(RingCtx::make(2, 0), DomainError);
}

TEST(RingCtx, ArithmeticModP2) {
    const RingCtx r = RingCtx::make(3, 2);
    EXPECT_EQ(r.q, 9);
    EXPECT_EQ(r.reduce(-1), 8);
    EXPECT_EQ(r.valuation(0), 2);
    EXPECT_EQ(r.valuation(6), 1);
    EXPECT_EQ(r.valuation(4), 0);
    for (int u = 1; u < 9; ++u) {
        if (u % 3 == 0) {
            EXPECT_THROW(r.inverse(u), DomainError);
            continue;
        }
        EXPECT_EQ(r.mul(u, r.inverse(u)), 1);
    }
}

TEST(RingCtx, ReductionModPIsAHomomorphism) {
    const RingCtx r2 = RingCtx::make(3, 2), r1 = RingCtx::make(3, 1);
    for (int a = 0; a < 9; ++a)
        for (int b = 0; b < 9; ++b) {
            EXPECT_EQ(r1.reduce(r2.add(a, b)), r1.add(r1.reduce(a), r1.reduce(b)));
            EXPECT_EQ(r1.reduce(r2.mul(a, b)), r1.mul(r1.reduce(a), r1.reduce(b)));
        }
}

TEST(Canonical, IdentityRowsGiveFullModule) {
    EXPECT_EQ(sub(2, 2, 2, {{1, 0}, {0, 1}}), Submodule::full(RingCtx::make(2, 2), 2));
}

TEST(Canonical, DuplicateGeneratorsCollapse) {
    EXPECT_EQ(sub(2, 2, 2, {{2, 0}}), sub(2, 2, 2, {{2, 0}, {2, 0}}));
}

TEST(Canonical, OneGeneratorSubmodulesOfZ4Squared) {
    const oracle::Ambient amb(2, 2, 2);
    std::set<oracle::ElemSet> spans;
    std::set<std::string> forms;
    for (oracle::Elem x = 0; x < amb.size; ++x) {
        const Submodule w = sub(2, 2, 2, {amb.decode(x)});
        const oracle::ElemSet s = oracle::span(amb, {x});
        EXPECT_EQ(oracle::elements_of(amb, w), s);
        spans.insert(s);
        forms.insert(w.bytes());
    }
    EXPECT_EQ(spans.size(), forms.size());
}

TEST(Canonical, RandomRemixProperty) {
    const props::Result r = props::canonical_uniqueness(1000, 11);
    EXPECT_TRUE(r.ok) << r.detail;
    EXPECT_EQ(r.cases, 1000u);
}

// Every subgroup of (Z/4)^4: the canonical form spans exactly the subgroup,
// distinct subgroups get distinct forms, and the type matches the element count.
TEST(Canonical, AllSubmodulesOfZ4ToTheFourth) {
    const oracle::Ambient amb(2, 2, 4);
    const auto all = oracle::all_subgroups(amb, amb.size, false);
    std::set<std::string> forms;
    for (const auto& s : all) {
        std::vector<Vec> rows;
        for (auto x : s.gens) rows.push_back(amb.decode(x));
        const Submodule w = rows.empty() ? Submodule::zero(RingCtx::make(2, 2), 4) : sub(2, 2, 4, rows);
        ASSERT_EQ(oracle::elements_of(amb, w), s.elems);
        const ModuleType t = module_type(w);
        const auto [a, b] = oracle::type_of(amb, s.elems);
        EXPECT_EQ(t.a, a);
        EXPECT_EQ(t.b, b);
        EXPECT_EQ(std::size_t(1) << w.log_order(), s.elems.size());
        forms.insert(w.bytes());
    }
    EXPECT_EQ(forms.size(), all.size());
}

TEST(ModuleType, Examples) {
    const RingCtx r = RingCtx::make(2, 2);
    EXPECT_EQ(module_type(Submodule::zero(r, 2)), (ModuleType{0, 0}));
    EXPECT_EQ(module_type(sub(2, 2, 2, {{2, 0}})), (ModuleType{1, 0}));
    const Submodule w = sub(2, 2, 2, {{1, 0}, {0, 2}});
    EXPECT_EQ(module_type(w), (ModuleType{1, 1}));
    EXPECT_EQ(w.log_order(), 3);
}

TEST(Operations, AgreeWithElementSets) {
    std::mt19937_64 rng(5);
    for (auto [p, n] : {std::pair{2, 3}, std::pair{3, 2}, std::pair{2, 4}}) {
        const RingCtx r = RingCtx::make(p, 2);
        const oracle::Ambient amb(p, 2, n);
        for (int t = 0; t < 60; ++t) {
            const Submodule a = canonicalize(props::random_matrix(r, 1 + t % 2, std::size_t(n), rng));
            const Submodule b = canonicalize(props::random_matrix(r, 1 + t % 3, std::size_t(n), rng));
            const auto ea = oracle::elements_of(amb, a), eb = oracle::elements_of(amb, b);

            oracle::ElemSet inter, sumset;
            std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(inter));
            for (auto x : ea)
                for (auto y : eb) sumset.push_back(amb.add(x, y));
            std::sort(sumset.begin(), sumset.end());
            sumset.erase(std::unique(sumset.begin(), sumset.end()), sumset.end());
            EXPECT_EQ(oracle::elements_of(amb, intersection(a, b)), inter);
            EXPECT_EQ(oracle::elements_of(amb, sum(a, b)), sumset);

            oracle::ElemSet tors, pa;
            for (auto x : ea) {
                if (amb.scale(x, p) == 0) tors.push_back(x);
                pa.push_back(amb.scale(x, p));
            }
            std::sort(pa.begin(), pa.end());
            pa.erase(std::unique(pa.begin(), pa.end()), pa.end());
            EXPECT_EQ(oracle::elements_of(amb, p_torsion(a)), tors);
            EXPECT_EQ(oracle::elements_of(amb, times_p(a)), pa);

            for (oracle::Elem x = 0; x < amb.size; x += 7) EXPECT_EQ(a.contains(amb.decode(x)), oracle::contains(ea, x));
            EXPECT_EQ(a.contains(b), std::includes(ea.begin(), ea.end(), eb.begin(), eb.end()));

            const oracle::Ambient amb1(p, 1, n);
            oracle::ElemSet red;
            for (auto x : ea) {
                Vec v = amb.decode(x);
                for (auto& c : v) c %= p;
                red.push_back(amb1.encode(v));
            }
            std::sort(red.begin(), red.end());
            red.erase(std::unique(red.begin(), red.end()), red.end());
            EXPECT_EQ(oracle::elements_of(amb1, reduce_mod_p(a)), red);
        }
    }
}

TEST(Operations, LeftKernelAgreesWithScan) {
    std::mt19937_64 rng(9);
    const RingCtx r = RingCtx::make(3, 2);
    const oracle::Ambient amb(3, 2, 3);
    for (int t = 0; t < 30; ++t) {
        const Matrix a = props::random_matrix(r, 3, 2, rng);
        oracle::ElemSet ker;
        for (oracle::Elem x = 0; x < amb.size; ++x) {
            const Vec y = a.apply_row(amb.decode(x));
            if (y[0] == 0 && y[1] == 0) ker.push_back(x);
        }
        EXPECT_EQ(oracle::elements_of(amb, left_kernel(a)), ker);
    }
}

TEST(Operations, ReductionCommutesWithCanonicalization) {
    std::mt19937_64 rng(21);
    for (int p : {2, 3})
        for (int t = 0; t < 200; ++t) {
            const Matrix m = props::random_matrix(RingCtx::make(p, 2), std::size_t(1 + t % 5), 6, rng);
            EXPECT_EQ(reduce_mod_p(canonicalize(m)), canonicalize(m.reduce_mod_p()));
        }
}

TEST(Serialization, BytesRoundTripAndRejectNonCanonical) {
    std::mt19937_64 rng(3);
    const RingCtx r = RingCtx::make(3, 2);
    for (int t = 0; t < 100; ++t) {
        const Submodule w = canonicalize(props::random_matrix(r, std::size_t(1 + t % 4), 6, rng));
        EXPECT_EQ(Submodule::from_bytes(r, 6, w.bytes()), w);
    }
    std::string bad(1, char(1));
    bad += std::string("\x02\x00", 2);  // leading entry 2 is not a power of 3
    EXPECT_THROW(Submodule::from_bytes(r, 2, bad), DomainError);
    EXPECT_THROW(Submodule::from_bytes(r, 2, ""), DomainError);
}

TEST(Fp2, GenusOneExample) {
    const Fp2Structure f = make_fp2(1, RingCtx::make(3, 1), 2);
    const RingCtx r = f.ctx;
    EXPECT_EQ(f.omega, Matrix::from_rows(r, 2, {{0, 2}, {1, 0}}));
    EXPECT_EQ(f.omega * f.omega, Matrix::identity(r, 2).scaled(2));
}

TEST(Fp2, StructureIdentitiesHold) {
    for (int g = 1; g <= 4; ++g)
        for (int p : {3, 5})
            for (int e : {1, 2}) {
                const RingCtx r = RingCtx::make(p, e);
                const Fp2Structure f = make_fp2(g, r);
                const Matrix j = symplectic_gram(r, g);
                EXPECT_TRUE(check_fp2(f));
                EXPECT_EQ(f.omega * f.omega, Matrix::identity(r, std::size_t(2 * g)).scaled(f.d));
                EXPECT_TRUE((f.omega.transpose() * j + j * f.omega).is_zero());
                EXPECT_TRUE(is_nonresidue(f.d, p));
            }
}

TEST(Fp2, RejectsPTwoAndResidues) {
    EXPECT_THROW(make_fp2(3, RingCtx::make(2, 1)), DomainError);
    EXPECT_THROW(make_fp2(3, RingCtx::make(5, 1), 4), DomainError);
    EXPECT_THROW(make_fp2(3, RingCtx::make(3, 1), 1), DomainError);
}

TEST(Fp2, OmegaSpanExamples) {
    const RingCtx r = RingCtx::make(5, 1);
    const Fp2Structure f = make_fp2(3, r);
    EXPECT_EQ(omega_span_dim(Submodule::zero(r, 6), f), 0);
    const Submodule e1 = span_of(r, 6, {{1, 0, 0, 0, 0, 0}});
    EXPECT_EQ(omega_closure(e1, f).log_order(), 2);
    EXPECT_EQ(omega_closure(e1, f), span_of(r, 6, {{1, 0, 0, 0, 0, 0}, {0, 0, 0, 1, 0, 0}}));
    const Submodule line = omega_closure(span_of(r, 6, {{1, 2, 0, 0, 3, 1}}), f);
    EXPECT_TRUE(omega_stable(line, f));
    EXPECT_EQ(omega_span_dim(line, f), 1);
}

TEST(Fp2, LagrangianOmegaSpanIsTwoOrThree) {
    const Fp2Structure f = make_fp2(3, RingCtx::make(3, 1));
    std::set<int> dims;
    for (const auto& w : enumerate_tp(3, 3)) dims.insert(omega_span_dim(w, f));
    EXPECT_EQ(dims, (std::set<int>{2, 3}));
}
