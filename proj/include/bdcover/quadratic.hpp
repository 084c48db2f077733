#pragma once

#include "bdcover/errors.hpp"
#include "bdcover/lattice.hpp"
#include "bdcover/root_datum.hpp"
#include "bdcover/tame_field.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace bdcover {

// Q is carried by the Gram matrix of B_Q on the Y-basis; Q(e_i) = B_ii / 2.
struct QuadraticForm {
    IntMatrix gram;

    std::size_t rank() const { return gram.nrows(); }
    Int B(const IntVec& a, const IntVec& b) const { return dot(a, mat_vec(gram, b)); }
    Int Q(const IntVec& y) const { return B(y, y) / 2; }
    Int q_value(std::size_t i) const { return gram(i, i) / 2; }
};

inline QuadraticForm make_quadratic(const IntMatrix& gram) {
    const std::size_t n = gram.nrows();
    if (gram.cols != n) throw Error(ErrorKind::Validation, "Gram matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (gram(i, i) % 2 != 0) throw Error(ErrorKind::Validation, "Gram matrix has an odd diagonal entry");
        for (std::size_t j = 0; j < n; ++j)
            if (gram(i, j) != gram(j, i)) throw Error(ErrorKind::Validation, "Gram matrix is not symmetric");
    }
    return {gram};
}

// Connected components of the Dynkin diagram, as lists of 0-based simple indices.
inline std::vector<std::vector<std::size_t>> dynkin_components(const RootDatum& rd) {
    const std::size_t l = rd.ss_rank;
    std::vector<int> seen(l, 0);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t s = 0; s < l; ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> comp;
        std::deque<std::size_t> dq{s};
        seen[s] = 1;
        while (!dq.empty()) {
            auto i = dq.front();
            dq.pop_front();
            comp.push_back(i);
            for (std::size_t j = 0; j < l; ++j)
                if (j != i && rd.cartan[i][j] != 0 && !seen[j]) seen[j] = 1, dq.push_back(j);
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(comp);
    }
    return out;
}

// Ratios Q(alpha_j^vee) / Q(alpha_i^vee) forced by Weyl invariance, normalized
// so the smallest value in each component is 1.
inline std::vector<Rat> relative_coroot_values(const RootDatum& rd) {
    std::vector<Rat> rel(rd.ss_rank, 0);
    for (const auto& comp : dynkin_components(rd)) {
        rel[comp[0]] = 1;
        std::deque<std::size_t> dq{comp[0]};
        std::vector<int> done(rd.ss_rank, 0);
        done[comp[0]] = 1;
        while (!dq.empty()) {
            auto i = dq.front();
            dq.pop_front();
            for (auto j : comp) {
                if (j == i || rd.cartan[i][j] == 0) continue;
                Rat v = rel[i] * make_rat(rd.cartan[i][j], rd.cartan[j][i]);
                if (done[j] && rel[j] != v) throw Error(ErrorKind::NotWeylInvariant, "inconsistent coroot ratios");
                if (!done[j]) rel[j] = v, done[j] = 1, dq.push_back(j);
            }
        }
        Rat mn = rel[comp[0]];
        for (auto j : comp) mn = std::min(mn, rel[j]);
        for (auto j : comp) rel[j] /= mn;
    }
    return rel;
}

// Checks B_Q(alpha^vee, e_k) = Q(alpha^vee) <alpha, e_k> for every root and basis vector.
inline std::size_t count_bq_violations(const RootDatum& rd, const QuadraticForm& q) {
    std::size_t bad = 0;
    for (std::size_t r = 0; r < rd.num_roots(); ++r) {
        Int qa = q.Q(rd.coroots[r]);
        IntVec row = mat_vec(q.gram, rd.coroots[r]);
        for (std::size_t k = 0; k < rd.rank_y; ++k)
            if (row[k] != qa * rd.roots[r][k]) ++bad;
    }
    return bad;
}

// values: one short-coroot value per Dynkin component (may be empty when a
// Gram matrix is supplied). gram: full B_Q on the Y-basis, needed when the
// coroots do not span Y over Q.
inline QuadraticForm q_from_short_coroots(const RootDatum& rd, const std::vector<Int>& values,
                                          const std::optional<IntMatrix>& gram = std::nullopt) {
    auto comps = dynkin_components(rd);
    auto rel = relative_coroot_values(rd);
    if (!values.empty() && values.size() != comps.size())
        throw Error(ErrorKind::Validation, "expected " + std::to_string(comps.size()) + " short-coroot value(s), got " +
                                               std::to_string(values.size()));
    for (const auto& v : values)
        if (v <= 0) throw Error(ErrorKind::Validation, "short-coroot values must be positive");
    if (gram) {
        QuadraticForm q = make_quadratic(*gram);
        if (q.rank() != rd.rank_y) throw Error(ErrorKind::RankMismatch, "Gram matrix size differs from rank of Y");
        for (std::size_t c = 0; c < comps.size(); ++c) {
            Int base = q.Q(rd.coroots[comps[c][0]]);
            for (auto j : comps[c])
                if (Rat(q.Q(rd.coroots[j])) != rel[j] * Rat(base) / rel[comps[c][0]])
                    throw Error(ErrorKind::NotWeylInvariant, "Gram matrix violates coroot value ratios");
            if (!values.empty()) {
                Int mn = q.Q(rd.coroots[comps[c][0]]);
                for (auto j : comps[c]) mn = std::min(mn, q.Q(rd.coroots[j]));
                if (mn != values[c])
                    throw Error(ErrorKind::NotWeylInvariant, "Gram matrix gives short-coroot value " + mn.str() +
                                                                 ", expected " + values[c].str());
            }
        }
        if (count_bq_violations(rd, q) != 0)
            throw Error(ErrorKind::NotWeylInvariant, "Gram matrix is not Weyl invariant");
        return q;
    }
    if (values.empty()) throw Error(ErrorKind::Validation, "short-coroot values are required");
    if (rd.ss_rank != rd.rank_y)
        throw Error(ErrorKind::Validation, "coroots do not span Y; a full Gram matrix is required");
    std::vector<Rat> qv(rd.ss_rank);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (auto j : comps[c]) {
            qv[j] = rel[j] * Rat(values[c]);
            if (!is_integral(qv[j])) throw Error(ErrorKind::NotWeylInvariant, "coroot value is not integral");
        }
    IntMatrix coroot_mat = IntMatrix::from_rows(std::vector<IntVec>(rd.coroots.begin(), rd.coroots.begin() + static_cast<long>(rd.ss_rank)), rd.rank_y);
    const std::size_t n = rd.rank_y;
    IntMatrix g(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        auto c = rat_coords(coroot_mat, unit_vec(n, k));
        if (!c) throw Error(ErrorKind::Validation, "coroots do not span Y over Q");
        for (std::size_t l = 0; l < n; ++l) {
            Rat s = 0;
            for (std::size_t i = 0; i < rd.ss_rank; ++i) s += (*c)[i] * qv[i] * Rat(rd.roots[i][l]);
            if (!is_integral(s))
                throw Error(ErrorKind::NotWeylInvariant, "no integral Weyl-invariant form on Y with these coroot values");
            g(k, l) = numerator(s);
        }
    }
    try {
        auto q = make_quadratic(g);
        if (count_bq_violations(rd, q) != 0) throw Error(ErrorKind::NotWeylInvariant, "derived form is not Weyl invariant");
        return q;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotWeylInvariant) throw;
        throw Error(ErrorKind::NotWeylInvariant, "no integral quadratic form on Y with these coroot values");
    }
}

// Smallest common short-coroot value v <= limit giving an integral form.
inline QuadraticForm minimal_q(const RootDatum& rd, std::int64_t limit = 256) {
    const std::size_t nc = dynkin_components(rd).size();
    for (std::int64_t v = 1; v <= limit; ++v) {
        try {
            return q_from_short_coroots(rd, std::vector<Int>(nc, Int(v)));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NotWeylInvariant) throw;
        }
    }
    throw Error(ErrorKind::NotWeylInvariant, "no integral form with short-coroot value up to " + std::to_string(limit));
}

struct Bisector {
    IntMatrix d;
    Int operator()(const IntVec& a, const IntVec& b) const { return dot(a, mat_vec(d, b)); }
};

inline void validate_bisector(const QuadraticForm& q, const Bisector& b) {
    const std::size_t n = q.rank();
    if (b.d.nrows() != n || b.d.cols != n) throw Error(ErrorKind::RankMismatch, "bisector has wrong size");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (b.d(i, j) + b.d(j, i) != q.gram(i, j))
                throw Error(ErrorKind::Validation, "D(e_i,e_j)+D(e_j,e_i) != B_Q(e_i,e_j)",
                            "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
}

// Triangular rule in the basis given by the rows of `basis` (unimodular),
// transported back to the standard Y-basis.
inline Bisector triangular_bisector(const QuadraticForm& q, const IntMatrix& basis) {
    const std::size_t n = q.rank();
    IntMatrix db(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i < j) continue;
            db(i, j) = (i == j) ? q.Q(basis.rows[i]) : q.B(basis.rows[i], basis.rows[j]);
        }
    IntMatrix inv = unimodular_inverse(basis);
    return {inv * db * inv.transpose()};
}

inline Bisector fair_bisector(const QuadraticForm& q, const std::vector<std::size_t>& order) {
    const std::size_t n = q.rank();
    IntMatrix p(0, n);
    for (auto k : order) p.rows.push_back(unit_vec(n, k));
    return triangular_bisector(q, p);
}

inline bool is_fair(const RootDatum& rd, const Bisector& b, const QuadraticForm& q) {
    for (std::size_t i = 0; i < rd.ss_rank; ++i) {
        if (q.Q(rd.coroots[i]) % 2 != 0) continue;
        IntVec row = row_times(rd.coroots[i], b.d);
        for (const auto& x : row)
            if (x % 2 != 0) return false;
    }
    return true;
}

struct FairResult {
    Bisector d;
    bool fair = false;
    std::string construction;
};

// Simple coroots first when they extend to a basis of Y; otherwise a search
// over orderings of the standard basis.
inline FairResult fair_bisector_auto(const RootDatum& rd, const QuadraticForm& q) {
    const std::size_t n = rd.rank_y, l = rd.ss_rank;
    IntMatrix c = IntMatrix::from_rows(std::vector<IntVec>(rd.coroots.begin(), rd.coroots.begin() + static_cast<long>(l)), n);
    auto s = smith(c);
    bool saturated = true;
    for (std::size_t i = 0; i < l; ++i) saturated &= (s.d(i, i) == 1);
    if (saturated) {
        IntMatrix basis = c;
        for (std::size_t i = l; i < n; ++i) basis.rows.push_back(s.v_inv.rows[i]);
        Bisector b = triangular_bisector(q, basis);
        return {b, is_fair(rd, b, q), "coroot-basis"};
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (n <= 7) {
        do {
            Bisector b = fair_bisector(q, order);
            if (is_fair(rd, b, q)) return {b, true, "basis-order"};
        } while (std::next_permutation(order.begin(), order.end()));
        std::iota(order.begin(), order.end(), 0);
    }
    Bisector b = fair_bisector(q, order);
    return {b, is_fair(rd, b, q), "basis-order"};
}

// Group homomorphism Y^sc -> F^x given on the simple coroots.
struct EtaMap {
    std::vector<FieldElement> values;

    static EtaMap trivial(std::size_t l) { return {std::vector<FieldElement>(l, FieldElement{})}; }
    bool is_trivial() const {
        for (const auto& v : values)
            if (!(v == FieldElement{})) return false;
        return true;
    }

    // y in Y-coordinates; must lie in the coroot lattice.
    FieldElement at(const RootDatum& rd, const TameField& f, const IntVec& y) const {
        IntMatrix c = IntMatrix::from_rows(std::vector<IntVec>(rd.coroots.begin(), rd.coroots.begin() + static_cast<long>(rd.ss_rank)), rd.rank_y);
        auto x = solve_coords(c, y);
        if (!x) throw Error(ErrorKind::Validation, "vector is not in the coroot lattice");
        FieldElement r = f.one();
        for (std::size_t i = 0; i < values.size(); ++i) r = f.mul(r, f.pow(values[i], to_i64((*x)[i])));
        return r;
    }
};

// H(sum c_i e_i) = (-1)^{sum_{i<j} c_i c_j Delta_ij}; stored as Delta.
struct IncarnationMorphism {
    IntMatrix delta;

    int sign_exp(const IntVec& c) const {
        Int s = 0;
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = i + 1; j < c.size(); ++j) s += c[i] * c[j] * delta(i, j);
        return static_cast<int>(mod_floor(s, 2));
    }
    int operator()(const IntVec& c) const { return sign_exp(c); }

    // Pointwise product of two morphisms.
    IncarnationMorphism compose(const IncarnationMorphism& o) const {
        IncarnationMorphism r{delta};
        for (std::size_t i = 0; i < delta.nrows(); ++i)
            for (std::size_t j = 0; j < delta.cols; ++j) r.delta(i, j) += o.delta(i, j);
        return r;
    }
};

struct Connection {
    IncarnationMorphism h;
    EtaMap eta2;
};

inline Connection connect_bisectors(const RootDatum& rd, const TameField& f, const Bisector& d1, const Bisector& d2,
                                    const EtaMap& eta1) {
    const std::size_t n = d1.d.nrows();
    if (d2.d.nrows() != n) throw Error(ErrorKind::NotSameQ, "bisectors have different sizes");
    IntMatrix delta(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) delta(i, j) = d2.d(i, j) - d1.d(i, j);
    for (std::size_t i = 0; i < n; ++i) {
        if (delta(i, i) != 0) throw Error(ErrorKind::NotSameQ, "bisectors disagree on the diagonal");
        for (std::size_t j = 0; j < n; ++j)
            if (delta(i, j) + delta(j, i) != 0) throw Error(ErrorKind::NotSameQ, "bisectors have different symmetrizations");
    }
    Connection c{{delta}, eta1};
    for (std::size_t i = 0; i < rd.ss_rank; ++i)
        if (c.h(rd.coroots[i]) == 1) c.eta2.values[i] = f.mul(c.eta2.values[i], f.minus_one());
    return c;
}

// Condition (i) on the given pairs and condition (ii) on the simple coroots.
inline bool verify_morphism(const RootDatum& rd, const TameField& f, const Bisector& d1, const EtaMap& eta1,
                            const Bisector& d2, const EtaMap& eta2, const IncarnationMorphism& h,
                            const std::vector<std::pair<IntVec, IntVec>>& pairs) {
    for (const auto& [y1, y2] : pairs) {
        Int lhs = mod_floor(d2(y1, y2) - d1(y1, y2), 2);
        int rhs = (h(add(y1, y2)) + h(y1) + h(y2)) % 2;
        if (lhs != rhs) return false;
    }
    for (std::size_t i = 0; i < rd.ss_rank; ++i) {
        FieldElement expect = eta1.values[i];
        if (h(rd.coroots[i]) == 1) expect = f.mul(expect, f.minus_one());
        if (!(expect == eta2.values[i])) return false;
    }
    return true;
}

// eta extends from Y^sc to Y (resp. modulo n-th powers) iff, in a basis e_i of Y
// with d_i e_i a basis of Y^sc, each eta(d_i e_i) is a d_i-th power
// (resp. a gcd(d_i, n)-th power).
inline bool eta_extendable_mod(const RootDatum& rd, const TameField& f, const EtaMap& eta, std::int64_t n) {
    IntMatrix c = IntMatrix::from_rows(std::vector<IntVec>(rd.coroots.begin(), rd.coroots.begin() + static_cast<long>(rd.ss_rank)), rd.rank_y);
    auto sm = smith_align(Sublattice::full(rd.rank_y), Sublattice(rd.rank_y, c));
    for (std::size_t i = 0; i < sm.divisors.size(); ++i) {
        std::int64_t d = to_i64(sm.divisors[i]);
        if (d == 0) continue;
        FieldElement v = eta.at(rd, f, scale(d, sm.aligned_basis.rows[i]));
        std::int64_t need = n > 0 ? std::gcd(d, n) : d;
        if (!f.is_power(v, need)) return false;
    }
    return true;
}

inline bool eta_extendable(const RootDatum& rd, const TameField& f, const EtaMap& eta) {
    return eta_extendable_mod(rd, f, eta, 0);
}

inline bool eta_n_extendable(const RootDatum& rd, const TameField& f, const EtaMap& eta) {
    return eta_extendable_mod(rd, f, eta, f.n());
}

// Is (d2, eta2) isomorphic to (d1, 1)? Morphisms satisfying (i) are H0 times a
// homomorphism Y -> F^x, so this reduces to extendability of eta2 * H0.
inline bool connectable_to_trivial_eta(const RootDatum& rd, const TameField& f, const Bisector& d1, const Bisector& d2,
                                       const EtaMap& eta2) {
    auto c = connect_bisectors(rd, f, d2, d1, eta2);
    return eta_extendable(rd, f, c.eta2);
}

}  // namespace bdcover
