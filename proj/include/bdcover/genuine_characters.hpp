#pragma once

#include "bdcover/covering_torus.hpp"
#include "bdcover/errors.hpp"
#include "bdcover/lattice.hpp"
#include "bdcover/metaplectic_dual.hpp"
#include "bdcover/tame_field.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace bdcover {

// zeta^{k/m} * q^{q_const - q_s * s}, stored in lowest terms.
struct Monomial {
    std::int64_t k = 0;
    std::int64_t m = 1;
    Rat q_const = 0;
    Rat q_s = 0;

    static Monomial root(std::int64_t k, std::int64_t m) {
        Monomial r;
        r.k = mod64(k, m);
        r.m = m;
        r.normalize();
        return r;
    }
    static Monomial q_power(const Rat& c, const Rat& s = 0) {
        Monomial r;
        r.q_const = c;
        r.q_s = s;
        return r;
    }

    void normalize() {
        if (k == 0) {
            m = 1;
            return;
        }
        std::int64_t g = std::gcd(k, m);
        k /= g;
        m /= g;
    }
    Monomial operator*(const Monomial& o) const {
        std::int64_t l = std::lcm(m, o.m);
        Monomial r;
        r.m = l;
        r.k = mod64(checked_add(checked_mul(k, l / m), checked_mul(o.k, l / o.m)), l);
        r.q_const = q_const + o.q_const;
        r.q_s = q_s + o.q_s;
        r.normalize();
        return r;
    }
    Monomial pow(std::int64_t e) const {
        Monomial r;
        r.m = m;
        r.k = mod64(checked_mul(k, mod64(e, m)), m);
        r.q_const = q_const * e;
        r.q_s = q_s * e;
        r.normalize();
        return r;
    }
    Monomial inverse() const { return pow(-1); }
    bool is_one() const { return k == 0 && q_const == 0 && q_s == 0; }
    bool root_is_one() const { return k == 0; }
    bool operator==(const Monomial& o) const { return k == o.k && m == o.m && q_const == o.q_const && q_s == o.q_s; }
    bool operator<(const Monomial& o) const {
        if (m != o.m) return m < o.m;
        if (k != o.k) return k < o.k;
        if (q_const != o.q_const) return q_const < o.q_const;
        return q_s < o.q_s;
    }

    std::complex<double> value(double q, std::complex<double> s) const {
        const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
        std::complex<double> expo = static_cast<double>(q_const) - static_cast<double>(q_s) * s;
        return std::polar(1.0, ang) * std::exp(expo * std::log(q));
    }

    std::string str() const {
        std::string out;
        if (k != 0) out = "zeta^(" + std::to_string(k) + "/" + std::to_string(m) + ")";
        if (q_const != 0 || q_s != 0) {
            std::string e;
            if (q_const != 0) e = rat_str(q_const);
            if (q_s != 0) {
                Rat c = -q_s;
                std::string coef = (c == 1) ? "" : (c == -1) ? "-" : rat_str(c) + "*";
                if (!e.empty() && c > 0) e += "+";
                e += coef + "s";
            }
            out += (out.empty() ? "" : " * ") + std::string("q^(") + e + ")";
        }
        return out.empty() ? "1" : out;
    }
};

inline Monomial from_root(const TameField& f, RootOfUnity z) { return Monomial::root(z.exp, f.M()); }

// Genuine character of the pulled-back torus T~_{Q,n}, presented on a basis f_k
// of Y_{Q,n} by the values at (1, f_k (x) pi); trivial on (1, f_k (x) u) for units u.
class GenuineCharacter {
public:
    GenuineCharacter(const CoveringTorus& t, IntMatrix basis, std::vector<Monomial> base)
        : f_(t.field()), gram_(t.data().q.gram), d_(t.bisector().d), basis_(std::move(basis)), base_(std::move(base)) {
        const auto& md = t.data();
        if (basis_.nrows() != md.y_qn.rank() || base_.size() != basis_.nrows())
            throw Error(ErrorKind::RankMismatch, "character needs one value per basis vector of Y_{Q,n}");
        if (Sublattice(md.rd.rank_y, basis_).basis != md.y_qn.basis)
            throw Error(ErrorKind::NotInYQn, "basis does not span Y_{Q,n}");
        const std::size_t r = basis_.nrows();
        const Int n(f_.n());
        qv_.resize(r);
        dk_.assign(r, std::vector<std::int64_t>(r, 0));
        for (std::size_t k = 0; k < r; ++k) {
            qv_[k] = to_i64(mod_floor(md.q.Q(basis_.rows[k]), n));
            for (std::size_t l = 0; l < r; ++l)
                dk_[k][l] = to_i64(mod_floor(dot(basis_.rows[k], mat_vec(d_, basis_.rows[l])), n));
        }
    }

    const IntMatrix& basis() const { return basis_; }
    const std::vector<Monomial>& base_values() const { return base_; }
    const TameField& field() const { return f_; }

    // Value on the line (1, f_k (x) c).
    Monomial line(std::size_t k, const FieldElement& c) const {
        const std::int64_t m = c.val;
        auto pp = f_.hilbert(f_.uniformizer(), f_.uniformizer());
        auto pu = f_.hilbert(f_.pow(f_.uniformizer(), m), f_.unit(c.unit_exp));
        Int tri = Int(m) * Int(m - 1) / 2;
        RootOfUnity z = f_.rmul(f_.rpow(pp, -to_i64(mod_floor(tri * qv_[k], Int(f_.M())))), f_.rpow(pu, -qv_[k]));
        return base_[k].pow(m) * from_root(f_, z);
    }

    // Element (zeta, prod_k f_k (x) c_k) of T~_{Q,n}.
    Monomial eval_qn(RootOfUnity zeta, const std::vector<FieldElement>& c) const {
        RootOfUnity z = zeta;
        for (std::size_t k = 0; k < c.size(); ++k)
            for (std::size_t l = k + 1; l < c.size(); ++l)
                if (dk_[k][l] != 0) z = f_.rmul(z, f_.rpow(f_.hilbert(c[k], c[l]), -dk_[k][l]));
        Monomial v = from_root(f_, z);
        for (std::size_t k = 0; k < c.size(); ++k) v = v * line(k, c[k]);
        return v;
    }

    // (1, y (x) a) with y in Y_{Q,n}.
    Monomial eval_pure(const IntVec& y, const FieldElement& a) const {
        auto m = solve_coords(basis_, y);
        if (!m) throw Error(ErrorKind::NotInYQn, "cocharacter is not in Y_{Q,n}");
        std::vector<FieldElement> c;
        for (const auto& x : *m) c.push_back(f_.pow(a, to_i64(x)));
        return eval_qn({0}, c);
    }

    // Central element of T~, lifted through T~_{Q,n} -> Z(T~).
    Monomial eval(const CoveringTorus& t, const TorusElement& x) const {
        if (!t.is_central(x)) throw Error(ErrorKind::NotCentral, "element is not central: " + t.str(x));
        const std::size_t r = x.coords.size();
        IntVec v(r), e(r);
        for (std::size_t i = 0; i < r; ++i) v[i] = x.coords[i].val, e[i] = x.coords[i].unit_exp;
        auto cv = solve_coords(basis_, v);
        if (!cv) throw Error(ErrorKind::NotInYQn, "valuation vector is not in Y_{Q,n}");
        // Centrality puts the unit-exponent vector in Y_{Q,n} as well.
        auto ce = solve_coords(basis_, e);
        if (!ce) throw Error(ErrorKind::NotInYQn, "unit part is not in Y_{Q,n}");
        const Int h(f_.q() - 1);
        std::vector<FieldElement> c;
        for (std::size_t k = 0; k < cv->size(); ++k) c.push_back(f_.make(to_i64((*cv)[k]), to_i64(mod_floor((*ce)[k], h))));
        return eval_qn(x.zeta, c);
    }

    GenuineCharacter rebase(const CoveringTorus& t, const IntMatrix& new_basis) const {
        std::vector<Monomial> nb;
        for (const auto& row : new_basis.rows) nb.push_back(eval_pure(row, f_.uniformizer()));
        return GenuineCharacter(t, new_basis, nb);
    }

    // Product with the unramified linear character y (x) pi -> prod_i z_i^{y_i}.
    GenuineCharacter multiply_linear(const CoveringTorus& t, const std::vector<Monomial>& z) const {
        if (z.size() != basis_.cols) throw Error(ErrorKind::RankMismatch, "linear character needs one value per Y-basis vector");
        auto nb = base_;
        for (std::size_t k = 0; k < nb.size(); ++k)
            for (std::size_t i = 0; i < z.size(); ++i) nb[k] = nb[k] * z[i].pow(to_i64(basis_.rows[k][i]));
        return GenuineCharacter(t, basis_, nb);
    }

    // chi (x) delta^s with delta^s(y (x) pi) = q^{-s <beta_P, y>}.
    GenuineCharacter twisted(const CoveringTorus& t, const RatVec& beta_p) const {
        auto nb = base_;
        for (std::size_t k = 0; k < nb.size(); ++k) nb[k] = nb[k] * Monomial::q_power(0, dot(beta_p, basis_.rows[k]));
        return GenuineCharacter(t, basis_, nb);
    }

private:
    TameField f_;
    IntMatrix gram_, d_, basis_;
    std::vector<Monomial> base_;
    std::vector<std::int64_t> qv_;
    std::vector<std::vector<std::int64_t>> dk_;
};

// Base values on the HNF basis of Y_{Q,n}.
inline GenuineCharacter make_unramified(const CoveringTorus& t, const std::vector<Monomial>& base) {
    return GenuineCharacter(t, t.data().y_qn.basis, base);
}

inline GenuineCharacter trivial_unramified(const CoveringTorus& t) {
    return make_unramified(t, std::vector<Monomial>(t.data().y_qn.rank()));
}

struct FormulaCharacter {
    IntMatrix aligned;  // e_i, rows
    std::vector<Int> k;  // k_i e_i span J
    std::vector<Int> a;  // A_i = 2 Q(e_i) / n
    std::vector<Int> f;  // f_i = (k_i - 1) A_i
    RootOfUnity seed;
    GenuineCharacter chi;
};

inline FormulaCharacter construct_distinguished(const CoveringTorus& t, RootOfUnity seed) {
    const auto& md = t.data();
    const auto& fld = t.field();
    if (!t.eta().is_trivial()) throw Error(ErrorKind::WrongHypothesis, "the distinguished construction needs eta = 1");
    if (!is_fair(md.rd, t.bisector(), md.q)) throw Error(ErrorKind::WrongHypothesis, "the bisector is not fair");
    WeilIndex gamma(fld, seed);
    auto sm = smith_align(md.y_qn, md.j);
    const std::size_t r = sm.aligned_basis.nrows();
    std::vector<Int> ks, as, fs;
    std::vector<Monomial> base;
    for (std::size_t i = 0; i < r; ++i) {
        const IntVec& e = sm.aligned_basis.rows[i];
        Int ki = sm.divisors[i];
        Int twoq = 2 * md.q.Q(e);
        if (ki == 0) throw Error(ErrorKind::AxiomViolation, "J has lower rank than Y_{Q,n}");
        if (twoq % md.n != 0) throw Error(ErrorKind::AxiomViolation, "2Q(e_i) is not divisible by n");
        Int ai = twoq / md.n;
        Int fi = (ki - 1) * ai;
        if (mod_floor(fi - ai, Int(2)) != 0) throw Error(ErrorKind::AxiomViolation, "f_i and A_i differ in parity");
        if (mod_floor(ki * fi + ki * (ki - 1) * ai, Int(4)) != 0) throw Error(ErrorKind::AxiomViolation, "k_i f_i + k_i(k_i-1)A_i is not 0 mod 4");
        ks.push_back(ki);
        as.push_back(ai);
        fs.push_back(fi);
        base.push_back(from_root(fld, fld.rpow(gamma(fld.uniformizer()), to_i64(mod_floor(fi, Int(4))))));
    }
    GenuineCharacter chi(t, sm.aligned_basis, base);
    return {sm.aligned_basis, ks, as, fs, seed, chi};
}

// prod_i gamma(a^{n_i})^{f_i} * (a, a)_n^{sum_{j<j'} n_j n_j' D(e_j, e_j')} for y = sum n_i e_i.
inline RootOfUnity eval_formula(const CoveringTorus& t, const FormulaCharacter& fc, const IntVec& y, const FieldElement& a) {
    const auto& fld = t.field();
    WeilIndex gamma(fld, fc.seed);
    auto c = solve_coords(fc.aligned, y);
    if (!c) throw Error(ErrorKind::NotInYQn, "cocharacter is not in Y_{Q,n}");
    RootOfUnity z{0};
    for (std::size_t i = 0; i < c->size(); ++i)
        z = fld.rmul(z, fld.rpow(gamma(fld.pow(a, to_i64((*c)[i]))), to_i64(mod_floor(fc.f[i], Int(4)))));
    Int ex = 0;
    for (std::size_t j = 0; j < c->size(); ++j)
        for (std::size_t l = j + 1; l < c->size(); ++l) ex += (*c)[j] * (*c)[l] * t.bisector()(fc.aligned.rows[j], fc.aligned.rows[l]);
    return fld.rmul(z, fld.rpow(fld.hilbert(a, a), to_i64(mod_floor(ex, Int(fld.n())))));
}

struct PredicateReport {
    bool ok = true;
    std::vector<std::string> witnesses;
    void fail(std::string w) {
        ok = false;
        if (witnesses.size() < 16) witnesses.push_back(std::move(w));
    }
};

inline std::string vec_str(const IntVec& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + "]";
}

// pi and a generator of the residue units generate F^x modulo principal units.
inline std::vector<FieldElement> field_generators(const TameField& f) { return {f.uniformizer(), f.unit(1)}; }

// Generator of the d-torsion of the residue units, as a unit class.
inline FieldElement torsion_generator(const TameField& f, const Int& d) {
    std::int64_t g = std::gcd(to_i64(d), f.q() - 1);
    return f.unit((f.q() - 1) / g);
}

// (C0): chi(1, t) = 1 on generators of Ker(T_{Q,n} -> T).
inline PredicateReport check_c0(const CoveringTorus& t, const GenuineCharacter& chi) {
    PredicateReport rep;
    const auto& md = t.data();
    auto sm = smith_align(md.y, md.y_qn);
    for (std::size_t i = 0; i < sm.divisors.size(); ++i) {
        const Int& d = sm.divisors[i];
        if (d <= 1) continue;
        IntVec y = scale(d, sm.aligned_basis.rows[i]);
        FieldElement a = torsion_generator(t.field(), d);
        if (!chi.eval_pure(y, a).is_one()) rep.fail("y=" + vec_str(y) + " a=" + t.field().str(a));
    }
    return rep;
}

// (C0)_+: chi(1, (n y) (x) a) = 1 for y in Y.
inline PredicateReport check_c0_plus(const CoveringTorus& t, const GenuineCharacter& chi) {
    PredicateReport rep;
    const auto& md = t.data();
    for (std::size_t j = 0; j < md.rd.rank_y; ++j) {
        IntVec y = scale(md.n, unit_vec(md.rd.rank_y, j));
        for (const auto& a : field_generators(t.field()))
            if (!chi.eval_pure(y, a).is_one()) rep.fail("y=" + vec_str(y) + " a=" + t.field().str(a));
    }
    return rep;
}

// (C1): chi(1, alpha^vee_[n] (x) a) = (a, eta(alpha^vee_[n]))_n on simple roots.
inline PredicateReport check_c1(const CoveringTorus& t, const GenuineCharacter& chi) {
    PredicateReport rep;
    const auto& md = t.data();
    const auto& fld = t.field();
    for (std::size_t i = 0; i < md.rd.ss_rank; ++i) {
        IntVec y = md.modified_coroot(i);
        FieldElement e = t.eta().at(md.rd, fld, y);
        for (const auto& a : field_generators(fld))
            if (!(chi.eval_pure(y, a) == from_root(fld, fld.hilbert(a, e))))
                rep.fail("alpha" + std::to_string(i + 1) + " a=" + fld.str(a));
    }
    return rep;
}

inline bool is_qualified(const CoveringTorus& t, const GenuineCharacter& chi) {
    return check_c0(t, chi).ok && check_c1(t, chi).ok;
}
inline bool is_distinguished(const CoveringTorus& t, const GenuineCharacter& chi) {
    return check_c0_plus(t, chi).ok && check_c1(t, chi).ok;
}

struct ObstructionReport {
    PredicateReport obs1, obs2;
    bool ok() const { return obs1.ok && obs2.ok; }
};

inline ObstructionReport check_obstructions(const CoveringTorus& t) {
    ObstructionReport rep;
    const auto& md = t.data();
    const auto& fld = t.field();
    auto sm = smith_align(md.y_qn, md.y_qn_sc);
    for (std::size_t i = 0; i < sm.divisors.size(); ++i) {
        const Int& d = sm.divisors[i];
        if (d <= 1) continue;
        IntVec y = scale(d, sm.aligned_basis.rows[i]);
        FieldElement a = torsion_generator(fld, d);
        if (!(fld.hilbert(t.eta().at(md.rd, fld, y), a) == RootOfUnity{0}))
            rep.obs1.fail("y=" + vec_str(y) + " a=" + fld.str(a));
    }
    Sublattice inter = lattice_intersect(md.ny, md.y_qn_sc);
    for (const auto& y : inter.basis.rows)
        for (const auto& a : field_generators(fld))
            if (!(fld.hilbert(t.eta().at(md.rd, fld, y), a) == RootOfUnity{0}))
                rep.obs2.fail("y=" + vec_str(y) + " a=" + fld.str(a));
    return rep;
}

// Central generators (1, f_k (x) x) for x in {pi, g}.
inline std::vector<TorusElement> central_generators(const CoveringTorus& t) {
    std::vector<TorusElement> out;
    for (const auto& row : t.data().y_qn.basis.rows)
        for (const auto& a : field_generators(t.field())) out.push_back(t.pure(row, a));
    return out;
}

inline PredicateReport weyl_invariance_check(const CoveringTorus& t, const GenuineCharacter& chi) {
    PredicateReport rep;
    for (std::size_t i = 0; i < t.datum().ss_rank; ++i)
        for (const auto& x : central_generators(t)) {
            auto y = t.weyl_conjugate_central(static_cast<int>(i + 1), x);
            if (!(chi.eval(t, y) == chi.eval(t, x))) rep.fail("alpha" + std::to_string(i + 1) + " t=" + t.str(x));
        }
    return rep;
}

// tau_gamma = chi(Phi(h_gamma(pi^{n_gamma}))) for every root.
inline std::vector<Monomial> tau_table(const CoveringTorus& t, const GenuineCharacter& chi) {
    std::vector<Monomial> out;
    for (const auto& x : t.phi_table(t.field().uniformizer())) out.push_back(chi.eval(t, x));
    return out;
}

inline Monomial tau(const CoveringTorus& t, const GenuineCharacter& chi, std::size_t root) {
    return tau_table(t, chi).at(root);
}

}  // namespace bdcover
