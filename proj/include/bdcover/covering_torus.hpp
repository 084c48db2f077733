#pragma once

#include "bdcover/errors.hpp"
#include "bdcover/metaplectic_dual.hpp"
#include "bdcover/quadratic.hpp"
#include "bdcover/tame_field.hpp"

#include <deque>
#include <string>
#include <vector>

namespace bdcover {

// (zeta, prod_i e_i (x) coords[i]) with zeta an exponent of the primitive M-th root.
struct TorusElement {
    RootOfUnity zeta;
    std::vector<FieldElement> coords;
    bool operator==(const TorusElement& o) const { return zeta == o.zeta && coords == o.coords; }
};

// mu_n x T with cocycle prod_{i,j} (a_i, b_j)_n^{D_ij}.
class CoveringTorus {
public:
    CoveringTorus(MetaplecticData md, TameField f, Bisector d, EtaMap eta)
        : md_(std::move(md)), f_(std::move(f)), d_(std::move(d)), eta_(std::move(eta)) {
        if (f_.n() != md_.n) throw Error(ErrorKind::Validation, "field and cover use different n");
        validate_bisector(md_.q, d_);
        if (eta_.values.size() != md_.rd.ss_rank) throw Error(ErrorKind::RankMismatch, "eta needs one value per simple coroot");
        dl_.assign(rank(), std::vector<std::int64_t>(rank(), 0));
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j) dl_[i][j] = to_i64(mod_floor(d_.d(i, j), Int(md_.n)));
    }

    const MetaplecticData& data() const { return md_; }
    const RootDatum& datum() const { return md_.rd; }
    const TameField& field() const { return f_; }
    const Bisector& bisector() const { return d_; }
    const EtaMap& eta() const { return eta_; }
    std::size_t rank() const { return md_.rd.rank_y; }

    TorusElement identity() const { return {{0}, std::vector<FieldElement>(rank(), f_.one())}; }

    RootOfUnity cocycle(const std::vector<FieldElement>& a, const std::vector<FieldElement>& b) const {
        RootOfUnity z{0};
        for (std::size_t i = 0; i < rank(); ++i)
            for (std::size_t j = 0; j < rank(); ++j)
                if (dl_[i][j] != 0) z = f_.rmul(z, f_.rpow(f_.hilbert(a[i], b[j]), dl_[i][j]));
        return z;
    }

    TorusElement mul(const TorusElement& a, const TorusElement& b) const {
        TorusElement r{f_.rmul(f_.rmul(a.zeta, b.zeta), cocycle(a.coords, b.coords)), {}};
        for (std::size_t i = 0; i < rank(); ++i) r.coords.push_back(f_.mul(a.coords[i], b.coords[i]));
        return r;
    }

    TorusElement inverse(const TorusElement& a) const {
        TorusElement r{f_.rmul(f_.rinv(a.zeta), cocycle(a.coords, a.coords)), {}};
        for (const auto& c : a.coords) r.coords.push_back(f_.inv(c));
        return r;
    }

    TorusElement pow(const TorusElement& a, std::int64_t k) const {
        TorusElement base = k < 0 ? inverse(a) : a;
        TorusElement r = identity();
        for (std::int64_t e = k < 0 ? -k : k; e > 0; e >>= 1) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
        }
        return r;
    }

    // (1, y (x) a).
    TorusElement pure(const IntVec& y, const FieldElement& a) const {
        if (y.size() != rank()) throw Error(ErrorKind::RankMismatch, "cocharacter has wrong length");
        TorusElement t = identity();
        for (std::size_t i = 0; i < rank(); ++i) t.coords[i] = f_.pow(a, to_i64(y[i]));
        return t;
    }

    RootOfUnity commutator(const TorusElement& a, const TorusElement& b) const {
        return mul(mul(a, b), inverse(mul(b, a))).zeta;
    }

    FieldElement character_value(const IntVec& x, const TorusElement& t) const {
        FieldElement r = f_.one();
        for (std::size_t i = 0; i < rank(); ++i) r = f_.mul(r, f_.pow(t.coords[i], to_i64(x[i])));
        return r;
    }

    // Phi(h_alpha^{[b]}(a)) = ((b^{Q(alpha^vee)} eta(alpha^vee), a)_n, alpha^vee (x) a);
    // r indexes rd.roots, eta is evaluated as a homomorphism on Y^sc.
    TorusElement phi_h(std::size_t r, const FieldElement& a, const FieldElement& b) const {
        const IntVec& c = md_.rd.coroots[r];
        TorusElement t = pure(c, a);
        FieldElement e = f_.mul(f_.pow(b, to_i64(md_.q.Q(c))), eta_.at(md_.rd, f_, c));
        t.zeta = f_.hilbert(e, a);
        return t;
    }
    TorusElement phi_h(std::size_t r, const FieldElement& a) const { return phi_h(r, a, f_.one()); }

    // Exponent c with (s_a b)^vee_[n] = b^vee_[n] - c a^vee_[n]: c = n_b <a, b^vee> / n_a.
    std::int64_t dual_pairing(std::size_t a, std::size_t b) const {
        const auto& rd = md_.rd;
        Int num = md_.n_alpha[b] * dot(rd.roots[a], rd.coroots[b]);
        if (num % md_.n_alpha[a] != 0) throw Error(ErrorKind::AxiomViolation, "modified pairing is not integral");
        return to_i64(num / md_.n_alpha[a]);
    }

    // Phi(h_gamma(x^{n_gamma})) for every root gamma, propagated from the
    // simple roots by Phi(h_{s_a b}) = Phi(h_b) Phi(h_a)^{-c}, c as above.
    std::vector<TorusElement> phi_table(const FieldElement& x) const {
        const auto& rd = md_.rd;
        std::vector<TorusElement> tab(rd.num_roots());
        std::vector<int> done(rd.num_roots(), 0);
        std::deque<std::size_t> dq;
        for (std::size_t i = 0; i < rd.ss_rank; ++i) {
            tab[i] = phi_h(i, f_.pow(x, to_i64(md_.n_alpha[i])));
            done[i] = 1;
            dq.push_back(i);
        }
        while (!dq.empty()) {
            auto b = dq.front();
            dq.pop_front();
            for (std::size_t i = 0; i < rd.ss_rank; ++i) {
                auto g = *rd.root_index(rd.reflect_x(static_cast<int>(i + 1), rd.roots[b]));
                if (done[g]) continue;
                tab[g] = mul(tab[b], pow(tab[i], -dual_pairing(i, b)));
                done[g] = 1;
                dq.push_back(g);
            }
        }
        return tab;
    }

    // Number of (root, simple reflection) pairs where the propagation rule
    // disagrees with the table.
    std::size_t phi_path_defects(const FieldElement& x) const {
        const auto& rd = md_.rd;
        auto tab = phi_table(x);
        std::size_t bad = 0;
        for (std::size_t b = 0; b < rd.num_roots(); ++b)
            for (std::size_t i = 0; i < rd.ss_rank; ++i) {
                auto g = *rd.root_index(rd.reflect_x(static_cast<int>(i + 1), rd.roots[b]));
                if (!(tab[g] == mul(tab[b], pow(tab[i], -dual_pairing(i, b))))) ++bad;
            }
        return bad;
    }

    bool is_central(const TorusElement& t) const {
        const Int n(md_.n);
        IntVec v(rank()), e(rank());
        for (std::size_t i = 0; i < rank(); ++i) v[i] = t.coords[i].val, e[i] = t.coords[i].unit_exp;
        IntVec bv = mat_vec(md_.q.gram, v);
        IntVec be = mat_vec(md_.q.gram, e);
        for (std::size_t j = 0; j < rank(); ++j)
            if (mod_floor(bv[j], n) != 0 || mod_floor(be[j], Int(std::gcd(md_.n, f_.q() - 1))) != 0) return false;
        return true;
    }

    // w_alpha^{-1} t w_alpha = t Phi(h_alpha(alpha(t)^{-1})) for central t;
    // alpha is a 1-based simple index.
    TorusElement weyl_conjugate_central(int alpha, const TorusElement& t) const {
        if (alpha < 1 || static_cast<std::size_t>(alpha) > md_.rd.ss_rank)
            throw Error(ErrorKind::Validation, "simple root index out of range");
        if (!is_central(t)) throw Error(ErrorKind::NotCentral, "element is not central in the covering torus");
        const auto i = static_cast<std::size_t>(alpha - 1);
        FieldElement a = f_.inv(character_value(md_.rd.roots[i], t));
        return mul(t, phi_h(i, a));
    }

    std::string str(const TorusElement& t) const {
        std::string s = "(zeta^" + std::to_string(t.zeta.exp) + "; ";
        for (std::size_t i = 0; i < t.coords.size(); ++i) s += (i ? ", " : "") + f_.str(t.coords[i]);
        return s + ")";
    }

private:
    MetaplecticData md_;
    TameField f_;
    Bisector d_;
    EtaMap eta_;
    std::vector<std::vector<std::int64_t>> dl_;
};

}  // namespace bdcover
