#pragma once

#include "bdcover/covering_torus.hpp"
#include "bdcover/errors.hpp"
#include "bdcover/genuine_characters.hpp"
#include "bdcover/metaplectic_dual.hpp"
#include "bdcover/root_datum.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace bdcover {

// (1 - q^{-1} tau) / (1 - tau) at the positive root `root`.
struct GKFactor {
    Monomial tau;
    std::size_t root = 0;
    bool operator<(const GKFactor& o) const { return root != o.root ? root < o.root : tau < o.tau; }
    bool operator==(const GKFactor& o) const { return root == o.root && tau == o.tau; }
};

inline GKFactor gk_rank1(const CoveringTorus& t, const GenuineCharacter& chi, std::size_t simple) {
    if (simple >= t.datum().ss_rank) throw Error(ErrorKind::Validation, "simple root index out of range");
    return {chi.eval(t, t.phi_h(simple, t.field().pow(t.field().uniformizer(), to_i64(t.data().n_alpha[simple])))), simple};
}

// One factor per alpha > 0 with w alpha < 0.
inline std::vector<GKFactor> gk_coefficient(const CoveringTorus& t, const GenuineCharacter& chi, const WeylWord& w) {
    auto taus = tau_table(t, chi);
    std::vector<GKFactor> out;
    for (auto r : t.datum().inversion_set(w)) out.push_back({taus[r], r});
    return out;
}

// Rank-one factors against the successively conjugated character: step m
// conjugates Phi(h_{alpha_m}(pi^{n})) by alpha_{m-1}, ..., alpha_1 in T~.
inline std::vector<GKFactor> gk_via_cocycle(const CoveringTorus& t, const GenuineCharacter& chi, const WeylWord& w) {
    const auto& rd = t.datum();
    if (!rd.is_reduced(w)) throw Error(ErrorKind::NotReduced, "Weyl word is not reduced");
    const std::size_t k = w.size();
    const auto pi = t.field().uniformizer();
    std::vector<GKFactor> out;
    for (std::size_t m = 1; m <= k; ++m) {
        const int am = w[k - m];
        const auto ai = static_cast<std::size_t>(am - 1);
        TorusElement x = t.phi_h(ai, t.field().pow(pi, to_i64(t.data().n_alpha[ai])));
        IntVec root = rd.roots[ai];
        for (std::size_t j = m - 1; j >= 1; --j) {
            const int aj = w[k - j];
            x = t.weyl_conjugate_central(aj, x);
            root = rd.reflect_x(aj, root);
        }
        out.push_back({chi.eval(t, x), *rd.root_index(root)});
    }
    return out;
}

struct AdjointPiece {
    std::int64_t level = 0;
    std::vector<std::size_t> roots;
};

// Buckets Psi_w (w = unique_w) by i = <beta_P / n_beta, alpha^vee_[n]>.
inline std::vector<AdjointPiece> adjoint_decomposition(const ParabolicDatum& pd, const MetaplecticData& md) {
    const auto b = static_cast<std::size_t>(pd.omitted_simple - 1);
    const Int nb = md.n_alpha[b];
    std::map<std::int64_t, std::vector<std::size_t>> buckets;
    for (auto r : md.rd.inversion_set(pd.unique_w)) {
        Rat i = dot(pd.beta_p, md.modified_coroot(r)) / Rat(nb);
        if (!is_integral(i) || i <= 0)
            throw Error(ErrorKind::NonIntegralLevel, "level " + rat_str(i) + " at root " + std::to_string(r));
        buckets[to_i64(numerator(i))].push_back(r);
    }
    std::vector<AdjointPiece> out;
    for (auto& [i, rs] : buckets) out.push_back({i, rs});
    return out;
}

// L(s', Ad_i) = prod 1/(1 - tau) with s folded into each tau.
struct LPiece {
    std::int64_t level = 0;
    Rat argument;  // coefficient of s: n_beta * i
    std::vector<std::size_t> roots;
    std::vector<Monomial> eigenvalues;
};

struct PredictedPole {
    Rat s;
    std::int64_t level = 0;
    std::string condition = "predicted under triviality condition";
};

struct ConstantTermReport {
    bool self_associated = false;
    std::vector<LPiece> numerator, denominator;
    std::vector<PredictedPole> poles;
};

// prod_i L(n_beta i s, Ad_i) / L(1 + n_beta i s, Ad_i) for chi (x) delta^s.
inline ConstantTermReport constant_term(const CoveringTorus& t, const ParabolicDatum& pd, const GenuineCharacter& chi) {
    const auto& md = t.data();
    const auto b = static_cast<std::size_t>(pd.omitted_simple - 1);
    const Rat nb(md.n_alpha[b]);
    auto taus = tau_table(t, chi.twisted(t, pd.beta_p));
    ConstantTermReport rep;
    rep.self_associated = pd.self_associated;
    std::map<Rat, std::int64_t> poles;
    for (const auto& piece : adjoint_decomposition(pd, md)) {
        LPiece num{piece.level, nb * piece.level, piece.roots, {}};
        LPiece den = num;
        for (auto r : piece.roots) {
            const Monomial& tw = taus[r];
            if (tw.q_s != num.argument)
                throw Error(ErrorKind::AxiomViolation, "twisted eigenvalue has s-coefficient " + rat_str(tw.q_s) +
                                                           ", expected " + rat_str(num.argument));
            num.eigenvalues.push_back(tw);
            den.eigenvalues.push_back(tw * Monomial::q_power(-1));
            // Completed L of the trivial character has its pole at argument 1.
            if (tw.root_is_one()) {
                Rat s = (1 + tw.q_const) / tw.q_s;
                if (s > 0 && !poles.count(s)) poles[s] = piece.level;
            }
        }
        rep.numerator.push_back(num);
        rep.denominator.push_back(den);
    }
    for (auto& [s, lvl] : poles) rep.poles.push_back({s, lvl, "predicted under triviality condition"});
    return rep;
}

struct ChiScDescriptor {
    Monomial tau;  // chi(Phi(h_alpha(pi^{n_alpha})))
    Monomial unit_value;  // chi(Phi(h_alpha(g^{n_alpha})))
    bool trivial() const { return tau.is_one() && unit_value.is_one(); }
};

inline ChiScDescriptor chi_sc(const CoveringTorus& t, const GenuineCharacter& chi, std::size_t simple) {
    const auto& f = t.field();
    const std::int64_t na = to_i64(t.data().n_alpha.at(simple));
    return {chi.eval(t, t.phi_h(simple, f.pow(f.uniformizer(), na))), chi.eval(t, t.phi_h(simple, f.pow(f.unit(1), na)))};
}

inline std::complex<double> check_pole(std::complex<double> denom, std::complex<double> s) {
    if (std::abs(denom) < 1e-12)
        throw Error(ErrorKind::PoleAt, "pole at s = " + std::to_string(s.real()) + (s.imag() != 0 ? "+" + std::to_string(s.imag()) + "i" : ""));
    return denom;
}

inline std::complex<double> evaluate(const std::vector<GKFactor>& fs, std::complex<double> s, double q) {
    std::complex<double> v = 1.0;
    for (const auto& f : fs) {
        auto tau = f.tau.value(q, s);
        v *= (1.0 - tau / q) / check_pole(1.0 - tau, s);
    }
    return v;
}

inline std::complex<double> evaluate(const std::vector<LPiece>& pieces, std::complex<double> s, double q) {
    std::complex<double> v = 1.0;
    for (const auto& p : pieces)
        for (const auto& e : p.eigenvalues) v /= check_pole(1.0 - e.value(q, s), s);
    return v;
}

inline std::complex<double> evaluate(const ConstantTermReport& r, std::complex<double> s, double q) {
    return evaluate(r.numerator, s, q) / evaluate(r.denominator, s, q);
}

}  // namespace bdcover
