#include "bdcover/checks.hpp"
#include "bdcover/covering_torus.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bdcover;

namespace {

TorusElement random_element(const CoveringTorus& t, std::mt19937_64& rng) {
    const auto& f = t.field();
    std::uniform_int_distribution<std::int64_t> v(-3, 3), e(0, f.q() - 2), z(0, f.n() - 1);
    TorusElement x = t.identity();
    x.zeta = {z(rng) * (f.M() / f.n())};
    for (auto& c : x.coords) c = f.make(v(rng), e(rng));
    return x;
}

// Central iff it commutes with y (x) pi and y (x) g for every basis vector y.
bool central_by_scan(const CoveringTorus& t, const TorusElement& x) {
    const auto& f = t.field();
    for (std::size_t j = 0; j < t.rank(); ++j)
        for (const auto& a : {f.uniformizer(), f.unit(1)})
            if (t.commutator(x, t.pure(unit_vec(t.rank(), j), a)).exp != 0) return false;
    return true;
}

}  // namespace

TEST(CoveringTorus, GroupLawsOnSeveralCovers) {
    auto r = torus_law_suite({7}, {{'A', 2, "sc"}, {'C', 2, "sc"}, {'G', 2, "sc"}, {'A', 1, "ad"}});
    EXPECT_EQ(r.violations, 0u) << (r.examples.empty() ? "" : r.examples.front());
}

TEST(CoveringTorus, MultiplicationIsAssociativeWithInverses) {
    std::mt19937_64 rng(1);
    for (std::int64_t n : {2, 3, 6}) {
        auto t = build_cover({'B', 3, "sc"}, 7, n);
        for (int k = 0; k < 200; ++k) {
            auto a = random_element(t, rng), b = random_element(t, rng), c = random_element(t, rng);
            EXPECT_EQ(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
            EXPECT_EQ(t.mul(a, t.inverse(a)), t.identity());
            EXPECT_EQ(t.pow(a, 3), t.mul(a, t.mul(a, a)));
            EXPECT_EQ(t.pow(a, -2), t.inverse(t.mul(a, a)));
        }
    }
}

TEST(CoveringTorus, CentralityMatchesCommutatorScan) {
    std::mt19937_64 rng(2);
    for (auto c : std::vector<CoverCase>{{'A', 1, "sc"}, {'A', 2, "ad"}, {'C', 2, "sc"}, {'G', 2, "sc"}})
        for (std::int64_t n : {1, 2, 3, 6}) {
            auto t = build_cover(c, 7, n);
            std::size_t central = 0;
            for (int k = 0; k < 300; ++k) {
                auto x = random_element(t, rng);
                // Bias towards the center by raising to the n-th power half the time.
                if (k % 2) x = t.pow(x, n);
                const bool scan = central_by_scan(t, x);
                EXPECT_EQ(t.is_central(x), scan) << t.datum().label << " n=" << n << " " << t.str(x);
                central += scan;
            }
            EXPECT_GT(central, 0u);
        }
}

TEST(CoveringTorus, PhiImagesAreCentral) {
    for (auto c : std::vector<CoverCase>{{'A', 3, "sc"}, {'C', 3, "sc"}, {'G', 2, "sc"}, {'B', 3, "ad"}})
        for (std::int64_t n : {1, 2, 3, 6}) {
            auto t = build_cover(c, 7, n);
            const auto& f = t.field();
            for (const auto& x : {f.uniformizer(), f.unit(1), f.make(2, 5)}) {
                for (const auto& e : t.phi_table(x)) EXPECT_TRUE(central_by_scan(t, e)) << t.datum().label << " n=" << n;
                EXPECT_EQ(t.phi_path_defects(x), 0u) << t.datum().label << " n=" << n;
            }
        }
}

TEST(CoveringTorus, PhiTableAgreesWithDirectPhiOnSimpleRoots) {
    auto t = build_cover({'C', 2, "sc"}, 7, 2);
    const auto pi = t.field().uniformizer();
    auto tab = t.phi_table(pi);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(tab[i], t.phi_h(i, t.field().pow(pi, to_i64(t.data().n_alpha[i]))));
}

TEST(CoveringTorus, PhiOfUnitIsTrivialRootForTrivialEta) {
    auto t = build_cover({'A', 1, "sc"}, 7, 2);
    auto x = t.phi_h(0, t.field().unit(1));
    EXPECT_EQ(x.zeta.exp, 0);
    EXPECT_EQ(x.coords[0], t.field().unit(1));
}

TEST(CoveringTorus, WeylConjugationOfCentralElements) {
    std::mt19937_64 rng(4);
    for (auto c : std::vector<CoverCase>{{'A', 2, "sc"}, {'C', 2, "sc"}, {'G', 2, "sc"}}) {
        auto t = build_cover(c, 7, 2);
        const auto& rd = t.datum();
        const auto& f = t.field();
        for (int k = 0; k < 50; ++k) {
            auto x = random_central(t, rng);
            for (int a = 1; a <= static_cast<int>(rd.ss_rank); ++a) {
                auto y = t.weyl_conjugate_central(a, x);
                EXPECT_TRUE(t.is_central(y));
                EXPECT_EQ(t.weyl_conjugate_central(a, y), x);
            }
            // Torus parts follow the reflection on Y.
            for (const auto& row : t.data().y_qn.basis.rows) {
                auto p = t.pure(row, f.make(1, 2));
                auto y = t.weyl_conjugate_central(1, p);
                EXPECT_EQ(y.coords, t.pure(rd.reflect_y(1, row), f.make(1, 2)).coords);
            }
        }
    }
}

TEST(CoveringTorus, WeylConjugationSatisfiesBraidRelation) {
    std::mt19937_64 rng(5);
    auto t = build_cover({'A', 2, "sc"}, 7, 3);
    for (int k = 0; k < 50; ++k) {
        auto x = random_central(t, rng);
        auto lhs = t.weyl_conjugate_central(1, t.weyl_conjugate_central(2, t.weyl_conjugate_central(1, x)));
        auto rhs = t.weyl_conjugate_central(2, t.weyl_conjugate_central(1, t.weyl_conjugate_central(2, x)));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(CoveringTorus, NonCentralConjugationThrows) {
    auto t = build_cover({'A', 1, "sc"}, 7, 2);
    auto x = t.pure(IntVec{1}, t.field().uniformizer());
    // B(1, 1) = 2 = 0 mod 2: alpha^vee (x) pi is central for the double cover of SL2.
    EXPECT_TRUE(t.is_central(x));
    auto t3 = build_cover({'A', 1, "sc"}, 7, 3);
    auto x3 = t3.pure(IntVec{1}, t3.field().uniformizer());
    EXPECT_FALSE(t3.is_central(x3));
    try {
        t3.weyl_conjugate_central(1, x3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotCentral);
    }
}

TEST(CoveringTorus, CommutatorIsSymbolPowerOfPolarization) {
    // [y1 (x) a, y2 (x) b] = (a, b)_n^{B(y1, y2)}.
    auto t = build_cover({'G', 2, "sc"}, 7, 6);
    const auto& f = t.field();
    for (const auto& a : element_box(f, -1, 1))
        for (const auto& b : element_box(f, -1, 1)) {
            IntVec y1{2, -1}, y2{1, 3};
            auto c = t.commutator(t.pure(y1, a), t.pure(y2, b));
            EXPECT_EQ(c, f.rpow(f.hilbert(a, b), to_i64(t.data().q.B(y1, y2))));
        }
}

TEST(CoveringTorus, ConstructorValidates) {
    auto rd = RootDatum::build('A', 1, "sc");
    auto q = minimal_q(rd);
    auto md = compute_metaplectic(rd, q, 2);
    auto d = fair_bisector_auto(rd, q).d;
    EXPECT_THROW(CoveringTorus(md, TameField(7, 7, 3), d, EtaMap::trivial(1)), Error);
    EXPECT_THROW(CoveringTorus(md, TameField(7, 7, 2), Bisector{IntMatrix::from_ll({{2}}, 1)}, EtaMap::trivial(1)), Error);
    EXPECT_THROW(CoveringTorus(md, TameField(7, 7, 2), d, EtaMap::trivial(2)), Error);
}
