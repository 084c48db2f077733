#pragma once

#include "bdcover/errors.hpp"
#include "bdcover/lattice.hpp"
#include "bdcover/quadratic.hpp"
#include "bdcover/root_datum.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace bdcover {

struct MetaplecticData {
    RootDatum rd;
    QuadraticForm q;
    std::int64_t n = 1;
    std::vector<Int> n_alpha;  // indexed like rd.roots
    Sublattice y, ny, y_sc, y_qn, y_qn_sc, j;

    IntVec modified_coroot(std::size_t r) const { return scale(n_alpha[r], rd.coroots[r]); }
};

// Y_{Q,n} = {y : B_Q(y, e_j) = 0 mod n for all j}; bilinearity reduces the
// condition on all of Y to the basis. Solved as the kernel of y -> (B y) mod n.
inline Sublattice compute_y_qn(const QuadraticForm& q, std::int64_t n) {
    const std::size_t r = q.rank();
    IntMatrix m = q.gram;  // symmetric, so y * B = (B y)^T
    IntMatrix nid = IntMatrix::identity(r);
    for (auto& row : nid.rows) row = scale(-n, row);
    IntMatrix k = left_kernel(vstack(m, nid));
    IntMatrix gens(0, r);
    for (const auto& row : k.rows) gens.rows.push_back(IntVec(row.begin(), row.begin() + static_cast<long>(r)));
    return Sublattice(r, gens);
}

inline MetaplecticData compute_metaplectic(const RootDatum& rd, const QuadraticForm& q, std::int64_t n) {
    if (n < 1) throw Error(ErrorKind::Validation, "cover degree n must be positive");
    if (q.rank() != rd.rank_y) throw Error(ErrorKind::RankMismatch, "quadratic form rank differs from Y");
    MetaplecticData md{rd, q, n, {}, {}, {}, {}, {}, {}, {}};
    const std::size_t r = rd.rank_y;
    for (std::size_t a = 0; a < rd.num_roots(); ++a) {
        Int qa = q.Q(rd.coroots[a]);
        Int g = boost::multiprecision::gcd(qa, Int(n));
        md.n_alpha.push_back(Int(n) / g);
    }
    md.y = Sublattice::full(r);
    md.ny = scaled(md.y, n);
    IntMatrix sc(0, r), scn(0, r);
    for (std::size_t a = 0; a < rd.num_roots(); ++a) {
        sc.rows.push_back(rd.coroots[a]);
        scn.rows.push_back(md.modified_coroot(a));
    }
    md.y_sc = Sublattice(r, sc);
    md.y_qn = compute_y_qn(q, n);
    md.y_qn_sc = Sublattice(r, scn);
    md.j = lattice_sum(md.ny, md.y_qn_sc);
    if (!is_sublattice(md.ny, md.y_qn) || !is_sublattice(md.y_qn_sc, md.y_qn))
        throw Error(ErrorKind::AxiomViolation, "modified lattices are not nested as expected");
    return md;
}

// Q(gamma^vee) divides n for every root, so that n_gamma Q(gamma^vee) = n.
inline bool q_divides_n(const MetaplecticData& md) {
    for (const auto& c : md.rd.coroots)
        if (Int(md.n) % md.q.Q(c) != 0) return false;
    return true;
}

// n_beta <alpha, beta^vee> = n_alpha <beta, alpha^vee> over all root pairs.
// Holds when q_divides_n(md); fails e.g. for C2 with n = 1.
inline std::size_t count_n_pairing_violations(const MetaplecticData& md) {
    std::size_t bad = 0;
    const auto& rd = md.rd;
    for (std::size_t a = 0; a < rd.num_roots(); ++a)
        for (std::size_t b = 0; b < rd.num_roots(); ++b)
            if (md.n_alpha[b] * dot(rd.roots[a], rd.coroots[b]) != md.n_alpha[a] * dot(rd.roots[b], rd.coroots[a])) ++bad;
    return bad;
}

// General form: n_beta <alpha, beta^vee> L_alpha = n_alpha <beta, alpha^vee> L_beta
// with L_gamma = n_gamma Q(gamma^vee) = lcm(n, Q(gamma^vee)).
inline std::size_t count_weighted_pairing_violations(const MetaplecticData& md) {
    std::size_t bad = 0;
    const auto& rd = md.rd;
    auto l = [&](std::size_t g) { return md.n_alpha[g] * md.q.Q(rd.coroots[g]); };
    for (std::size_t a = 0; a < rd.num_roots(); ++a)
        for (std::size_t b = 0; b < rd.num_roots(); ++b)
            if (md.n_alpha[b] * dot(rd.roots[a], rd.coroots[b]) * l(a) != md.n_alpha[a] * dot(rd.roots[b], rd.coroots[a]) * l(b))
                ++bad;
    return bad;
}

struct DualDatum {
    RootDatum rd;  // roots live in Y_{Q,n}, coroots in its dual
    IntMatrix basis;  // HNF basis of Y_{Q,n} in Y-coordinates
    std::string type;
};

inline DualDatum dual_datum(const MetaplecticData& md) {
    const auto& rd = md.rd;
    const IntMatrix& f = md.y_qn.basis;
    const std::size_t r = f.nrows();
    auto dual_pair = [&](std::size_t a) {
        auto x = md.y_qn.coords(md.modified_coroot(a));
        if (!x) throw Error(ErrorKind::AxiomViolation, "modified coroot outside Y_{Q,n}");
        IntVec c(r);
        for (std::size_t k = 0; k < r; ++k) {
            Int p = dot(rd.roots[a], f.rows[k]);
            if (p % md.n_alpha[a] != 0) throw Error(ErrorKind::AxiomViolation, "alpha / n_alpha is not integral on Y_{Q,n}");
            c[k] = p / md.n_alpha[a];
        }
        return std::make_pair(*x, c);
    };
    std::vector<IntVec> sr, sc;
    for (std::size_t i = 0; i < rd.ss_rank; ++i) {
        auto [x, c] = dual_pair(i);
        sr.push_back(x);
        sc.push_back(c);
    }
    DualDatum dd{RootDatum::from_simple(r, sr, sc), f, ""};
    dd.type = dd.rd.label;
    if (dd.rd.num_roots() != rd.num_roots())
        throw Error(ErrorKind::AxiomViolation, "dual root system has the wrong size");
    for (std::size_t a = 0; a < rd.num_roots(); ++a) {
        auto [x, c] = dual_pair(a);
        auto idx = dd.rd.root_index(x);
        if (!idx || dd.rd.coroots[*idx] != c)
            throw Error(ErrorKind::AxiomViolation, "modified coroot is not a root of the dual datum");
    }
    return dd;
}

// Vertex subsets with no two adjacent and every outside vertex adjacent to
// an even number of members; includes the empty set. 1-based indices.
inline std::vector<std::vector<int>> omega_subsets(const RootDatum& rd) {
    const std::size_t l = rd.ss_rank;
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j)
            if (i != j && rd.cartan[i][j] != 0 && rd.cartan[i][j] != -1)
                throw Error(ErrorKind::WrongHypothesis, "Omega subsets need a simply-laced diagram");
    if (l > 20) throw Error(ErrorKind::WrongHypothesis, "diagram too large for subset enumeration");
    std::vector<std::vector<int>> out;
    for (std::uint32_t mask = 0; mask < (1u << l); ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < l && ok; ++i) {
            int cnt = 0;
            for (std::size_t j = 0; j < l; ++j)
                if (j != i && rd.cartan[i][j] != 0 && (mask >> j & 1u)) ++cnt;
            if ((mask >> i & 1u) ? cnt != 0 : cnt % 2 != 0) ok = false;
        }
        if (!ok) continue;
        std::vector<int> s;
        for (std::size_t i = 0; i < l; ++i)
            if (mask >> i & 1u) s.push_back(static_cast<int>(i + 1));
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

inline IntVec omega_vector(const RootDatum& rd, const std::vector<int>& omega) {
    IntVec v(rd.rank_y, 0);
    for (int i : omega) v = add(v, rd.coroots[static_cast<std::size_t>(i - 1)]);
    return v;
}

// Invariant factors of Y_{Q,n} / J.
inline std::vector<Int> coset_structure(const MetaplecticData& md) { return quotient_invariants(md.y_qn, md.j); }

}  // namespace bdcover
