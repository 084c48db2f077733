#include "bdcover/checks.hpp"
#include "bdcover/genuine_characters.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bdcover;

namespace {

// Independent Weil index model on 4th roots of unity, as exponents mod 4:
// gamma trivial on units, gamma(pi) = seed, gamma(x pi) = gamma(x) gamma(pi) (x, pi)_2.
// (pi^k u, pi)_2 = (-1)^{k(q-1)/2} * (u | q) with (u | q) = (-1)^{e} for u = g^e.
int hilbert2_exp4(std::int64_t q, std::int64_t k, std::int64_t e) {
    int s = 0;
    if ((k % 2 != 0) && ((q - 1) / 2) % 2 != 0) s ^= 1;
    if (e % 2 != 0) s ^= 1;
    return 2 * s;
}

int gamma_oracle(std::int64_t q, int seed4, std::int64_t val, std::int64_t e) {
    int g = 0;  // gamma(u) = 1
    std::int64_t k = 0;
    for (; k < val; ++k) g = (g + seed4 + hilbert2_exp4(q, k, e)) % 4;
    return g;
}

Monomial root4(int e) { return Monomial::root(e, 4); }

CoveringTorus cover(char t, int r, std::int64_t n, const std::string& iso = "sc") { return build_cover({t, r, iso}, 7, n); }

struct NamedRow {
    char type;
    int rank;
    IntVec y;  // coroot-basis coefficients (sc datum, so also Y coordinates)
    int power;
};

IntVec coroot_sum(int rank, const std::vector<int>& idx) {
    IntVec y(static_cast<std::size_t>(rank), 0);
    for (int i : idx) y[static_cast<std::size_t>(i - 1)] = 1;
    return y;
}

}  // namespace

TEST(WeilOracle, AgreesWithLibraryIndex) {
    TameField f(7, 7, 2, 3);
    WeilIndex g(f, WeilIndex::default_seed(f));
    for (std::int64_t v = 0; v <= 3; ++v)
        for (std::int64_t e = 0; e < 6; ++e)
            EXPECT_EQ(from_root(f, g(f.make(v, e))), root4(gamma_oracle(7, 1, v, e))) << v << " " << e;
}

TEST(Distinguished, NamedGeneratorTablesAtQ7) {
    std::vector<NamedRow> rows;
    for (int r = 2; r <= 5; ++r) rows.push_back({'C', r, coroot_sum(r, {1}), 1});
    rows.push_back({'A', 1, coroot_sum(1, {1}), 1});
    rows.push_back({'A', 3, coroot_sum(3, {1, 3}), 2});
    rows.push_back({'A', 5, coroot_sum(5, {1, 3, 5}), 3});
    rows.push_back({'D', 4, coroot_sum(4, {1, 2}), 2});
    rows.push_back({'D', 4, coroot_sum(4, {1, 4}), 2});
    rows.push_back({'D', 5, coroot_sum(5, {1, 2}), 2});
    rows.push_back({'D', 6, coroot_sum(6, {1, 4, 6}), 3});
    rows.push_back({'E', 7, coroot_sum(7, {4, 6, 7}), 3});
    rows.push_back({'B', 2, coroot_sum(2, {1}), 1});
    rows.push_back({'B', 4, coroot_sum(4, {1, 3}), 2});
    rows.push_back({'B', 6, coroot_sum(6, {1, 3, 5}), 3});
    for (const auto& row : rows) {
        auto t = cover(row.type, row.rank, 2);
        const auto& f = t.field();
        auto fc = construct_distinguished(t, WeilIndex::default_seed(f));
        ASSERT_TRUE(t.data().y_qn.contains(row.y)) << row.type << row.rank;
        for (std::int64_t v = 0; v <= 3; ++v)
            for (std::int64_t e = 0; e < 6; ++e) {
                const auto a = f.make(v, e);
                const auto expect = root4(gamma_oracle(7, 1, v, e) * row.power % 4);
                EXPECT_EQ(fc.chi.eval_pure(row.y, a), expect) << row.type << row.rank << " a=" << f.str(a);
                EXPECT_EQ(from_root(f, eval_formula(t, fc, row.y, a)), expect);
            }
    }
}

TEST(Distinguished, OtherSeedConjugatesTheTable) {
    auto t = cover('C', 2, 2);
    const auto& f = t.field();
    auto fc = construct_distinguished(t, WeilIndex::seed(f, "-i"));
    for (std::int64_t v = 0; v <= 3; ++v)
        for (std::int64_t e = 0; e < 6; ++e)
            EXPECT_EQ(fc.chi.eval_pure(coroot_sum(2, {1}), f.make(v, e)), root4(gamma_oracle(7, 3, v, e)));
}

TEST(Distinguished, PredicatesHoldOnABoxNotJustGenerators) {
    for (auto c : std::vector<CoverCase>{{'A', 1, "sc"}, {'A', 3, "sc"}, {'C', 2, "sc"}, {'C', 3, "sc"}, {'G', 2, "sc"}, {'D', 4, "sc"}, {'B', 3, "sc"}})
        for (std::int64_t n : {1, 2, 3, 6}) {
            auto t = build_cover(c, 7, n);
            const auto& f = t.field();
            if (!check_obstructions(t).ok()) continue;
            auto fc = construct_distinguished(t, WeilIndex::default_seed(f));
            const auto& md = t.data();
            for (const auto& a : element_box(f, -2, 2)) {
                for (std::size_t j = 0; j < md.rd.rank_y; ++j)
                    EXPECT_TRUE(fc.chi.eval_pure(scale(n, unit_vec(md.rd.rank_y, j)), a).is_one()) << md.rd.label << " n=" << n;
                for (std::size_t i = 0; i < md.rd.ss_rank; ++i)
                    EXPECT_TRUE(fc.chi.eval_pure(md.modified_coroot(i), a).is_one()) << md.rd.label << " n=" << n;
            }
            EXPECT_TRUE(is_distinguished(t, fc.chi));
            EXPECT_TRUE(is_qualified(t, fc.chi));
        }
}

TEST(Distinguished, WeylInvariantOnRandomCentralElements) {
    std::mt19937_64 rng(9);
    for (auto c : std::vector<CoverCase>{{'C', 2, "sc"}, {'A', 3, "sc"}, {'G', 2, "sc"}})
        for (std::int64_t n : {2, 3, 6}) {
            auto t = build_cover(c, 7, n);
            auto fc = construct_distinguished(t, WeilIndex::default_seed(t.field()));
            EXPECT_TRUE(weyl_invariance_check(t, fc.chi).ok) << t.datum().label << " n=" << n;
            for (int k = 0; k < 40; ++k) {
                auto x = random_central(t, rng);
                for (int a = 1; a <= static_cast<int>(t.datum().ss_rank); ++a)
                    EXPECT_EQ(fc.chi.eval(t, t.weyl_conjugate_central(a, x)), fc.chi.eval(t, x));
            }
        }
}

TEST(Distinguished, FormulaConstantsForSp4) {
    auto t = cover('C', 2, 2);
    auto fc = construct_distinguished(t, WeilIndex::default_seed(t.field()));
    // Y_{Q,2} = Y and J has index 2: one k_i = 2, A_i = 2Q(e_i)/2.
    Int prod = 1;
    for (std::size_t i = 0; i < fc.k.size(); ++i) {
        prod *= fc.k[i];
        EXPECT_EQ(fc.a[i], t.data().q.Q(fc.aligned.rows[i]));
        EXPECT_EQ(fc.f[i], (fc.k[i] - 1) * fc.a[i]);
    }
    EXPECT_EQ(prod, 2);
}

TEST(Distinguished, RequiresTrivialEta) {
    auto rd = RootDatum::build('A', 1, "sc");
    auto q = minimal_q(rd);
    auto md = compute_metaplectic(rd, q, 2);
    TameField f(7, 7, 2, 3);
    CoveringTorus t(md, f, fair_bisector_auto(rd, q).d, EtaMap{{f.unit(2)}});
    EXPECT_THROW(construct_distinguished(t, WeilIndex::default_seed(f)), Error);
}

TEST(Obstruction, PGL2WithUniformizerEta) {
    auto rd = RootDatum::build('A', 1, "ad");
    auto q = minimal_q(rd);
    ASSERT_EQ(q.Q(rd.coroots[0]), 4);
    auto md = compute_metaplectic(rd, q, 2);
    TameField f(7, 7, 2, 3);
    auto d = fair_bisector_auto(rd, q).d;
    CoveringTorus t(md, f, d, EtaMap{{f.uniformizer()}});
    auto rep = check_obstructions(t);
    EXPECT_FALSE(rep.obs1.ok);
    ASSERT_FALSE(rep.obs1.witnesses.empty());
    EXPECT_NE(rep.obs1.witnesses.front().find("a=" + f.str(f.minus_one())), std::string::npos) << rep.obs1.witnesses.front();
    EXPECT_EQ(f.str(f.minus_one()), "g^3");
}

TEST(Obstruction, PGL2WithUnitEtaClearsFirstObstructionInTheTameModel) {
    auto rd = RootDatum::build('A', 1, "ad");
    auto q = minimal_q(rd);
    auto md = compute_metaplectic(rd, q, 2);
    TameField f(7, 7, 2, 3);
    auto d = fair_bisector_auto(rd, q).d;
    for (std::int64_t e : {1, 2, 3}) {
        CoveringTorus t(md, f, d, EtaMap{{f.unit(e)}});
        // Symbols of two units are trivial, so only the valuation of eta can trip Obs1.
        EXPECT_TRUE(check_obstructions(t).obs1.ok) << e;
    }
}

TEST(Unramified, MultiplicativeAndGenuine) {
    auto r = multiplicativity_suite({7}, {{'A', 2, "sc"}, {'C', 2, "sc"}, {'G', 2, "sc"}, {'A', 1, "ad"}}, 3, 40);
    EXPECT_EQ(r.violations, 0u) << (r.examples.empty() ? "" : r.examples.front());
    std::mt19937_64 rng(1);
    auto t = cover('C', 2, 2);
    auto chi = random_unramified(t, rng);
    auto x = random_central(t, rng);
    auto zx = x;
    zx.zeta = t.field().rmul(x.zeta, RootOfUnity{t.field().M() / 2});
    EXPECT_EQ(chi.eval(t, zx), chi.eval(t, x) * Monomial::root(1, 2));
}

TEST(Unramified, RebaseDoesNotChangeValues) {
    std::mt19937_64 rng(12);
    auto t = cover('G', 2, 3);
    auto chi = random_unramified(t, rng);
    auto sm = smith_align(t.data().y_qn, t.data().j);
    auto other = chi.rebase(t, sm.aligned_basis);
    for (int k = 0; k < 100; ++k) {
        auto x = random_central(t, rng);
        EXPECT_EQ(other.eval(t, x), chi.eval(t, x));
    }
}

TEST(Unramified, ValidatesBasisAndCentrality) {
    auto t = cover('A', 1, 3);
    EXPECT_THROW(GenuineCharacter(t, IntMatrix::from_ll({{1}}, 1), {Monomial{}}), Error);
    auto chi = trivial_unramified(t);
    EXPECT_THROW(chi.eval(t, t.pure(IntVec{1}, t.field().uniformizer())), Error);
    EXPECT_THROW(chi.eval_pure(IntVec{1}, t.field().uniformizer()), Error);
}

TEST(Unramified, C0HoldsAutomatically) {
    std::mt19937_64 rng(21);
    for (auto c : std::vector<CoverCase>{{'A', 1, "sc"}, {'C', 2, "sc"}, {'A', 2, "ad"}, {'G', 2, "sc"}})
        for (std::int64_t n : {2, 3, 6}) {
            auto t = build_cover(c, 7, n);
            EXPECT_TRUE(check_c0(t, random_unramified(t, rng)).ok) << t.datum().label << " n=" << n;
        }
}

TEST(Monomial, Arithmetic) {
    auto a = Monomial::root(1, 4) * Monomial::q_power(Rat(1, 2), 1);
    auto b = Monomial::root(3, 4) * Monomial::q_power(Rat(-1, 2), -1);
    EXPECT_TRUE((a * b).is_one());
    EXPECT_EQ(a.inverse(), b);
    EXPECT_EQ(Monomial::root(2, 4), Monomial::root(1, 2));
    EXPECT_EQ(a.pow(4), Monomial::q_power(2, 4));
    EXPECT_EQ(Monomial::root(1, 3).str(), "zeta^(1/3)");
    EXPECT_EQ(Monomial::q_power(-1, 2).str(), "q^(-1-2*s)");
    auto v = Monomial::root(1, 4).value(7.0, {0.0, 0.0});
    EXPECT_NEAR(v.real(), 0.0, 1e-12);
    EXPECT_NEAR(v.imag(), 1.0, 1e-12);
}
