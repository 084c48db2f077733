#pragma once

#include "bdcover/errors.hpp"
#include "bdcover/integer.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bdcover {

// Dense integer matrix, row-major. cols is kept explicitly so that a
// matrix with zero rows still knows its width.
struct IntMatrix {
    std::size_t cols = 0;
    std::vector<IntVec> rows;

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : cols(c), rows(r, IntVec(c, 0)) {}

    static IntMatrix from_rows(std::vector<IntVec> rs, std::size_t c) {
        IntMatrix m;
        m.cols = c;
        for (auto& r : rs) {
            if (r.size() != c) throw Error(ErrorKind::RankMismatch, "row width mismatch");
        }
        m.rows = std::move(rs);
        return m;
    }

    static IntMatrix from_ll(const std::vector<std::vector<long long>>& rs, std::size_t c) {
        std::vector<IntVec> v;
        for (const auto& r : rs) v.push_back(to_intvec(r));
        return from_rows(std::move(v), c);
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.rows[i][i] = 1;
        return m;
    }

    std::size_t nrows() const { return rows.size(); }
    Int& operator()(std::size_t i, std::size_t j) { return rows[i][j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return rows[i][j]; }

    IntMatrix transpose() const {
        IntMatrix t(cols, nrows());
        for (std::size_t i = 0; i < nrows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) t.rows[j][i] = rows[i][j];
        return t;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols != o.nrows()) throw Error(ErrorKind::RankMismatch, "matrix product shape mismatch");
        IntMatrix r(nrows(), o.cols);
        for (std::size_t i = 0; i < nrows(); ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                if (rows[i][k] == 0) continue;
                for (std::size_t j = 0; j < o.cols; ++j) r.rows[i][j] += rows[i][k] * o.rows[k][j];
            }
        return r;
    }

    bool operator==(const IntMatrix& o) const { return cols == o.cols && rows == o.rows; }
};

// v * m
inline IntVec row_times(const IntVec& v, const IntMatrix& m) {
    IntVec r(m.cols, 0);
    for (std::size_t i = 0; i < m.nrows(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols; ++j) r[j] += v[i] * m.rows[i][j];
    }
    return r;
}

// m * v
inline IntVec mat_vec(const IntMatrix& m, const IntVec& v) {
    IntVec r(m.nrows(), 0);
    for (std::size_t i = 0; i < m.nrows(); ++i) r[i] = dot(m.rows[i], v);
    return r;
}

inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols != b.cols) throw Error(ErrorKind::RankMismatch, "vstack width mismatch");
    IntMatrix r = a;
    r.rows.insert(r.rows.end(), b.rows.begin(), b.rows.end());
    return r;
}

struct HnfResult {
    IntMatrix h;  // echelon form, zero rows at the bottom
    IntMatrix u;  // unimodular, u * input = h
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
};

inline HnfResult hnf_with_transform(const IntMatrix& m) {
    HnfResult res;
    res.h = m;
    res.u = IntMatrix::identity(m.nrows());
    auto& h = res.h.rows;
    auto& u = res.u.rows;
    const std::size_t nr = m.nrows();
    std::size_t r = 0;
    auto axpy = [&](std::size_t dst, std::size_t src, const Int& k) {
        for (auto& row : {&h, &u}) {
            auto& d = (*row)[dst];
            const auto& s = (*row)[src];
            for (std::size_t j = 0; j < d.size(); ++j) d[j] -= k * s[j];
        }
    };
    for (std::size_t c = 0; c < m.cols && r < nr; ++c) {
        while (true) {
            std::size_t best = nr;
            for (std::size_t i = r; i < nr; ++i)
                if (h[i][c] != 0 && (best == nr || abs(h[i][c]) < abs(h[best][c]))) best = i;
            if (best == nr) break;
            std::swap(h[r], h[best]);
            std::swap(u[r], u[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < nr; ++i) {
                if (h[i][c] == 0) continue;
                axpy(i, r, floor_div(h[i][c], h[r][c]));
                if (h[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (r >= nr || h[r][c] == 0) continue;
        if (h[r][c] < 0) {
            for (auto& x : h[r]) x = -x;
            for (auto& x : u[r]) x = -x;
        }
        for (std::size_t i = 0; i < r; ++i)
            if (h[i][c] != 0) axpy(i, r, floor_div(h[i][c], h[r][c]));
        res.pivots.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

// Row Hermite normal form with zero rows removed.
inline IntMatrix hnf(const IntMatrix& m) {
    auto res = hnf_with_transform(m);
    res.h.rows.resize(res.rank);
    return res.h;
}

// Basis (in HNF) of {u : u * m = 0}.
inline IntMatrix left_kernel(const IntMatrix& m) {
    auto res = hnf_with_transform(m);
    IntMatrix k(0, m.nrows());
    for (std::size_t i = res.rank; i < m.nrows(); ++i) k.rows.push_back(res.u.rows[i]);
    return hnf(k);
}

// Basis of {v : m * v = 0}.
inline IntMatrix right_kernel(const IntMatrix& m) { return left_kernel(m.transpose()); }

// Integer x with x * basis = v, or nothing if v is outside the row lattice.
inline std::optional<IntVec> solve_coords(const IntMatrix& basis, const IntVec& v) {
    auto res = hnf_with_transform(basis);
    IntVec resid = v;
    IntVec y(basis.nrows(), 0);
    for (std::size_t i = 0; i < res.rank; ++i) {
        std::size_t c = res.pivots[i];
        const Int& p = res.h.rows[i][c];
        if (resid[c] % p != 0) return std::nullopt;
        y[i] = resid[c] / p;
        for (std::size_t j = 0; j < resid.size(); ++j) resid[j] -= y[i] * res.h.rows[i][j];
    }
    if (!is_zero(resid)) return std::nullopt;
    return row_times(y, res.u);
}

// Rational x with x * basis = v (basis of full row rank), or nothing.
inline std::optional<RatVec> rat_coords(const IntMatrix& basis, const IntVec& v) {
    const std::size_t r = basis.nrows(), n = basis.cols;
    // Columns of the augmented system: unknowns x_0..x_{r-1}, equations per column j.
    std::vector<RatVec> a(n, RatVec(r + 1));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < r; ++i) a[j][i] = Rat(basis.rows[i][j]);
        a[j][r] = Rat(v[j]);
    }
    std::size_t row = 0;
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < r && row < n; ++c) {
        std::size_t p = row;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(a[p], a[row]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || a[i][c] == 0) continue;
            Rat f = a[i][c] / a[row][c];
            for (std::size_t k = c; k <= r; ++k) a[i][k] -= f * a[row][k];
        }
        piv.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (a[i][r] != 0) return std::nullopt;
    RatVec x(r, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a[i][r] / a[i][piv[i]];
    return x;
}

// Bareiss fraction-free determinant.
inline Int determinant(IntMatrix m) {
    const std::size_t n = m.nrows();
    if (n != m.cols) throw Error(ErrorKind::RankMismatch, "determinant of non-square matrix");
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    auto& a = m.rows;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

// Inverse of a unimodular matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
    const std::size_t n = m.nrows();
    IntMatrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        // row j of the inverse: x with x * m = e_j
        auto x = solve_coords(m, unit_vec(n, j));
        if (!x) throw Error(ErrorKind::Validation, "matrix is not unimodular");
        inv.rows[j] = *x;
    }
    return inv;
}

struct SmithResult {
    IntMatrix u, d, v, v_inv;  // u * a * v = d
};

inline SmithResult smith(const IntMatrix& a) {
    const std::size_t m = a.nrows(), n = a.cols;
    SmithResult s{IntMatrix::identity(m), a, IntMatrix::identity(n), IntMatrix::identity(n)};
    auto& d = s.d.rows;
    auto row_axpy = [&](std::size_t dst, std::size_t src, const Int& k) {  // row dst -= k row src
        for (std::size_t j = 0; j < n; ++j) d[dst][j] -= k * d[src][j];
        for (std::size_t j = 0; j < m; ++j) s.u.rows[dst][j] -= k * s.u.rows[src][j];
    };
    auto col_axpy = [&](std::size_t dst, std::size_t src, const Int& k) {  // col dst -= k col src
        for (std::size_t i = 0; i < m; ++i) d[i][dst] -= k * d[i][src];
        for (std::size_t i = 0; i < n; ++i) s.v.rows[i][dst] -= k * s.v.rows[i][src];
        for (std::size_t j = 0; j < n; ++j) s.v_inv.rows[src][j] += k * s.v_inv.rows[dst][j];
    };
    auto swap_rows = [&](std::size_t i, std::size_t j) {
        std::swap(d[i], d[j]);
        std::swap(s.u.rows[i], s.u.rows[j]);
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        for (std::size_t k = 0; k < m; ++k) std::swap(d[k][i], d[k][j]);
        for (std::size_t k = 0; k < n; ++k) std::swap(s.v.rows[k][i], s.v.rows[k][j]);
        std::swap(s.v_inv.rows[i], s.v_inv.rows[j]);
    };
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        while (true) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (d[i][j] != 0 && (bi == m || abs(d[i][j]) < abs(d[bi][bj]))) bi = i, bj = j;
            if (bi == m) return s;
            swap_rows(t, bi);
            swap_cols(t, bj);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i)
                if (d[i][t] != 0) {
                    row_axpy(i, t, floor_div(d[i][t], d[t][t]));
                    if (d[i][t] != 0) clean = false;
                }
            for (std::size_t j = t + 1; j < n; ++j)
                if (d[t][j] != 0) {
                    col_axpy(j, t, floor_div(d[t][j], d[t][t]));
                    if (d[t][j] != 0) clean = false;
                }
            if (!clean) continue;
            // enforce d_t | remaining entries
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d[i][j] % d[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            row_axpy(t, bad, Int(-1));
        }
        if (d[t][t] < 0) {
            for (auto& x : d[t]) x = -x;
            for (auto& x : s.u.rows[t]) x = -x;
        }
    }
    return s;
}

// Lattice given by a basis in HNF inside Z^ambient_rank.
struct Sublattice {
    std::size_t ambient_rank = 0;
    IntMatrix basis;

    Sublattice() = default;
    Sublattice(std::size_t n, const IntMatrix& gens) : ambient_rank(n), basis(hnf(gens)) {
        if (gens.cols != n) throw Error(ErrorKind::RankMismatch, "generator width differs from ambient rank");
    }

    static Sublattice full(std::size_t n) { return Sublattice(n, IntMatrix::identity(n)); }
    static Sublattice from_rows(std::size_t n, std::vector<IntVec> rows) {
        return Sublattice(n, IntMatrix::from_rows(std::move(rows), n));
    }

    std::size_t rank() const { return basis.nrows(); }
    bool contains(const IntVec& v) const { return solve_coords(basis, v).has_value(); }
    std::optional<IntVec> coords(const IntVec& v) const { return solve_coords(basis, v); }
    bool operator==(const Sublattice& o) const { return ambient_rank == o.ambient_rank && basis == o.basis; }
};

inline Sublattice scaled(const Sublattice& l, const Int& k) {
    IntMatrix b = l.basis;
    for (auto& r : b.rows) r = scale(k, r);
    return Sublattice(l.ambient_rank, b);
}

inline Sublattice lattice_sum(const Sublattice& a, const Sublattice& b) {
    if (a.ambient_rank != b.ambient_rank) throw Error(ErrorKind::RankMismatch, "lattice_sum ambient ranks differ");
    return Sublattice(a.ambient_rank, vstack(a.basis, b.basis));
}

inline Sublattice lattice_intersect(const Sublattice& a, const Sublattice& b) {
    if (a.ambient_rank != b.ambient_rank) throw Error(ErrorKind::RankMismatch, "lattice_intersect ambient ranks differ");
    IntMatrix neg_b = b.basis;
    for (auto& r : neg_b.rows) r = scale(-1, r);
    IntMatrix k = left_kernel(vstack(a.basis, neg_b));
    IntMatrix gens(0, a.ambient_rank);
    for (const auto& row : k.rows) {
        IntVec x(row.begin(), row.begin() + static_cast<long>(a.rank()));
        gens.rows.push_back(row_times(x, a.basis));
    }
    return Sublattice(a.ambient_rank, gens);
}

inline bool is_sublattice(const Sublattice& sub, const Sublattice& amb) {
    for (const auto& r : sub.basis.rows)
        if (!amb.contains(r)) return false;
    return true;
}

struct SmithDecomposition {
    IntMatrix aligned_basis;  // rows e_i, a basis of the ambient lattice
    std::vector<Int> divisors;  // k_i; 0 marks a direction missing from sub
};

inline SmithDecomposition smith_align(const Sublattice& ambient, const Sublattice& sub) {
    if (ambient.ambient_rank != sub.ambient_rank)
        throw Error(ErrorKind::RankMismatch, "smith_align ambient ranks differ");
    const std::size_t r = ambient.rank();
    IntMatrix c(0, r);
    for (const auto& row : sub.basis.rows) {
        auto x = ambient.coords(row);
        if (!x) throw Error(ErrorKind::NotASublattice, "generator is not in the ambient lattice");
        c.rows.push_back(*x);
    }
    auto s = smith(c);
    IntMatrix e = s.v_inv * ambient.basis;
    struct Item {
        Int k;
        IntVec e;
    };
    std::vector<Item> items;
    for (std::size_t i = 0; i < r; ++i) {
        Int k = (i < c.nrows()) ? s.d.rows[i][i] : Int(0);
        IntVec v = e.rows[i];
        auto nz = std::find_if(v.begin(), v.end(), [](const Int& x) { return x != 0; });
        if (nz != v.end() && *nz < 0) v = scale(-1, v);
        items.push_back({k, v});
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        bool za = a.k == 0, zb = b.k == 0;
        if (za != zb) return zb;
        if (a.k != b.k) return a.k < b.k;
        return a.e < b.e;
    });
    SmithDecomposition out;
    out.aligned_basis = IntMatrix(0, ambient.ambient_rank);
    for (auto& it : items) {
        out.divisors.push_back(it.k);
        out.aligned_basis.rows.push_back(it.e);
    }
    return out;
}

// Index [ambient : sub]; 0 when sub has smaller rank.
inline Int lattice_index(const Sublattice& ambient, const Sublattice& sub) {
    Int p = 1;
    for (const auto& k : smith_align(ambient, sub).divisors) p *= k;
    return p;
}

inline std::vector<Int> quotient_invariants(const Sublattice& ambient, const Sublattice& sub) {
    std::vector<Int> out;
    for (const auto& k : smith_align(ambient, sub).divisors)
        if (k != 1) out.push_back(k);
    return out;
}

}  // namespace bdcover
