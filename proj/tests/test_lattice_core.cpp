#include "bdcover/lattice.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace bdcover;

namespace {

using LL = long long;
using Mat = std::vector<std::vector<LL>>;

LL det_ll(Mat m) {
    // Bareiss on small integer matrices.
    const std::size_t n = m.size();
    LL sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// gcd of all k x k minors, k = 1..min(rows, cols).
std::vector<LL> determinantal_divisors(const Mat& a) {
    const std::size_t r = a.size(), c = a[0].size();
    std::vector<LL> out;
    for (std::size_t k = 1; k <= std::min(r, c); ++k) {
        LL g = 0;
        std::vector<bool> rmask(r, false), cmask(c, false);
        std::fill(rmask.begin(), rmask.begin() + static_cast<long>(k), true);
        do {
            std::fill(cmask.begin(), cmask.end(), false);
            std::fill(cmask.begin(), cmask.begin() + static_cast<long>(k), true);
            do {
                Mat sub;
                for (std::size_t i = 0; i < r; ++i) {
                    if (!rmask[i]) continue;
                    std::vector<LL> row;
                    for (std::size_t j = 0; j < c; ++j)
                        if (cmask[j]) row.push_back(a[i][j]);
                    sub.push_back(row);
                }
                g = std::gcd(g, std::abs(det_ll(sub)));
            } while (std::prev_permutation(cmask.begin(), cmask.end()));
        } while (std::prev_permutation(rmask.begin(), rmask.end()));
        out.push_back(g);
    }
    return out;
}

IntMatrix to_matrix(const Mat& m) { return IntMatrix::from_ll(m, m[0].size()); }

Mat random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, LL lo, LL hi) {
    std::uniform_int_distribution<LL> d(lo, hi);
    Mat m(r, std::vector<LL>(c));
    for (auto& row : m)
        for (auto& x : row) x = d(rng);
    return m;
}

}  // namespace

TEST(LatticeCore, HnfIsCanonicalForTheRowLattice) {
    auto a = IntMatrix::from_ll({{2, 4}, {6, 3}}, 2);
    auto b = IntMatrix::from_ll({{8, 7}, {2, 4}, {4, 8}}, 2);  // same lattice, extra generator
    EXPECT_EQ(hnf(a), hnf(b));
    auto h = hnf(a);
    EXPECT_EQ(h, IntMatrix::from_ll({{2, 4}, {0, 9}}, 2));
}

TEST(LatticeCore, HnfTransformIsUnimodularAndCorrect) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        auto m = to_matrix(random_matrix(rng, 4, 3, -6, 6));
        auto res = hnf_with_transform(m);
        EXPECT_EQ(res.u * m, res.h);
        EXPECT_EQ(abs(determinant(res.u)), 1);
    }
}

TEST(LatticeCore, SmithDivisorsMatchDeterminantalDivisors) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 60; ++t) {
        const std::size_t r = 2 + t % 3, c = 2 + (t / 3) % 3;
        auto m = random_matrix(rng, r, c, -9, 9);
        auto dd = determinantal_divisors(m);
        auto s = smith(to_matrix(m));
        LL prod = 1;
        for (std::size_t k = 0; k < dd.size(); ++k) {
            if (dd[k] == 0) {
                EXPECT_EQ(s.d(k, k), 0);
                continue;
            }
            prod *= s.d(k, k).convert_to<LL>();
            EXPECT_EQ(prod, dd[k]) << "k=" << k + 1;
            if (k + 1 < dd.size() && s.d(k + 1, k + 1) != 0) {
                EXPECT_EQ(s.d(k + 1, k + 1) % s.d(k, k), 0);
            }
        }
    }
}

TEST(LatticeCore, IndexIsAbsoluteDeterminant) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        auto m = random_matrix(rng, 3, 3, -5, 5);
        LL d = std::abs(det_ll(m));
        if (d == 0) continue;
        EXPECT_EQ(lattice_index(Sublattice::full(3), Sublattice(3, to_matrix(m))), d);
    }
}

TEST(LatticeCore, QuotientInvariantsForKnownSublattice) {
    auto sub = Sublattice(3, IntMatrix::from_ll({{2, 0, 0}, {0, 6, 0}, {0, 0, 1}}, 3));
    auto inv = quotient_invariants(Sublattice::full(3), sub);
    ASSERT_EQ(inv.size(), 2u);
    EXPECT_EQ(inv[0], 2);
    EXPECT_EQ(inv[1], 6);
}

TEST(LatticeCore, SmithAlignGivesAdaptedBasis) {
    auto amb = Sublattice::full(3);
    auto sub = Sublattice(3, IntMatrix::from_ll({{2, 2, 0}, {0, 4, 2}, {6, 0, 0}}, 3));
    auto sa = smith_align(amb, sub);
    EXPECT_EQ(abs(determinant(sa.aligned_basis)), 1);
    Sublattice rebuilt(3, [&] {
        IntMatrix g(0, 3);
        for (std::size_t i = 0; i < 3; ++i) g.rows.push_back(scale(sa.divisors[i], sa.aligned_basis.rows[i]));
        return g;
    }());
    EXPECT_EQ(rebuilt, sub);
}

TEST(LatticeCore, IntersectionAgreesWithBoxMembership) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
        auto a = Sublattice(2, to_matrix(random_matrix(rng, 2, 2, -4, 4)));
        auto b = Sublattice(2, to_matrix(random_matrix(rng, 2, 2, -4, 4)));
        if (a.rank() < 2 || b.rank() < 2) continue;
        auto c = lattice_intersect(a, b);
        for (LL x = -30; x <= 30; ++x)
            for (LL y = -30; y <= 30; ++y) {
                IntVec v{Int(x), Int(y)};
                EXPECT_EQ(c.contains(v), a.contains(v) && b.contains(v)) << x << "," << y;
            }
    }
}

TEST(LatticeCore, SumContainsBothAndIsSmallest) {
    auto a = Sublattice(2, IntMatrix::from_ll({{4, 0}, {0, 6}}, 2));
    auto b = Sublattice(2, IntMatrix::from_ll({{6, 0}, {0, 4}}, 2));
    auto s = lattice_sum(a, b);
    EXPECT_EQ(s, Sublattice(2, IntMatrix::from_ll({{2, 0}, {0, 2}}, 2)));
    EXPECT_TRUE(is_sublattice(a, s));
    EXPECT_TRUE(is_sublattice(b, s));
}

TEST(LatticeCore, SolveCoordsRoundTrips) {
    auto basis = IntMatrix::from_ll({{1, 2, 3}, {0, 3, 1}}, 3);
    IntVec v = add(scale(5, basis.rows[0]), scale(-7, basis.rows[1]));
    auto x = solve_coords(basis, v);
    ASSERT_TRUE(x);
    EXPECT_EQ(row_times(*x, basis), v);
    EXPECT_FALSE(solve_coords(basis, IntVec{0, 0, 1}));
}

TEST(LatticeCore, KernelsAnnihilate) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        auto m = to_matrix(random_matrix(rng, 4, 2, -5, 5));
        auto k = left_kernel(m);
        EXPECT_GE(k.nrows(), 2u);
        for (const auto& row : k.rows) EXPECT_TRUE(is_zero(row_times(row, m)));
    }
}

TEST(LatticeCore, RankMismatchThrows) {
    EXPECT_THROW(lattice_intersect(Sublattice::full(2), Sublattice::full(3)), Error);
    EXPECT_THROW(IntMatrix::from_ll({{1, 2}, {3}}, 2), Error);
}

TEST(LatticeCore, BigIntegersDoNotOverflow) {
    Int big = Int(1) << 80;
    auto m = IntMatrix::from_rows({{big, Int(0)}, {Int(0), big * 3}}, 2);
    EXPECT_EQ(lattice_index(Sublattice::full(2), Sublattice(2, m)), big * big * 3);
}
