#pragma once

#include "bdcover/covering_torus.hpp"
#include "bdcover/genuine_characters.hpp"
#include "bdcover/metaplectic_dual.hpp"
#include "bdcover/quadratic.hpp"
#include "bdcover/root_datum.hpp"
#include "bdcover/tame_field.hpp"

#include <random>
#include <type_traits>
#include <string>
#include <vector>

namespace bdcover {

struct SuiteResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::vector<std::string> examples;

    // `what` is a string or a callable returning one; called only on failure.
    template <class W>
    void record(bool ok, W&& what) {
        ++checks;
        if (ok) return;
        ++violations;
        if (examples.size() >= 5) return;
        if constexpr (std::is_invocable_v<W>) examples.push_back(what());
        else examples.push_back(std::string(what));
    }
    bool ok() const { return violations == 0; }
};

inline std::vector<FieldElement> element_box(const TameField& f, std::int64_t vmin, std::int64_t vmax) {
    std::vector<FieldElement> out;
    for (std::int64_t v = vmin; v <= vmax; ++v)
        for (std::int64_t e = 0; e < f.q() - 1; ++e) out.push_back(f.make(v, e));
    return out;
}

inline std::vector<std::int64_t> divisors_of(std::int64_t m) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 1; d <= m; ++d)
        if (m % d == 0) out.push_back(d);
    return out;
}

inline std::int64_t prime_of(std::int64_t q) {
    for (std::int64_t p = 2; p <= q; ++p)
        if (q % p == 0) return p;
    return q;
}

// Bilinearity, antisymmetry, (x,-x) = 1 and Steinberg on val in [-3, 3].
inline SuiteResult hilbert_suite(const std::vector<std::int64_t>& qs) {
    SuiteResult r{"hilbert symbol laws", 0, 0, {}};
    for (auto q : qs) {
        for (auto n : divisors_of(q - 1)) {
            TameField f(prime_of(q), q, n);
            auto box = element_box(f, -3, 3);
            auto tag = [&](const FieldElement& x, const FieldElement& y) {
                return "q=" + std::to_string(q) + " n=" + std::to_string(n) + " x=" + f.str(x) + " y=" + f.str(y);
            };
            for (const auto& x : box) {
                r.record(f.hilbert(x, f.neg(x)) == RootOfUnity{0}, [&] { return "(x,-x) " + tag(x, f.neg(x)); });
                if (auto om = f.one_minus(x)) r.record(f.hilbert(x, *om) == RootOfUnity{0}, [&] { return "Steinberg " + tag(x, *om); });
                for (const auto& y : box) {
                    auto xy = f.hilbert(x, y);
                    r.record(f.rmul(xy, f.hilbert(y, x)) == RootOfUnity{0}, [&] { return "antisymmetry " + tag(x, y); });
                    r.record(f.in_mu(xy, n), [&] { return "order " + tag(x, y); });
                }
            }
            // Bilinearity on generators suffices against a full second argument.
            std::vector<FieldElement> gens{f.uniformizer(), f.unit(1), f.minus_one()};
            for (const auto& x : box)
                for (const auto& x2 : gens)
                    for (const auto& y : box)
                        r.record(f.hilbert(f.mul(x, x2), y) == f.rmul(f.hilbert(x, y), f.hilbert(x2, y)), [&] { return "bilinearity " + tag(x, y); });
        }
    }
    return r;
}

struct CoverCase {
    char type;
    int rank;
    std::string isogeny;
};

// short_q = 0 picks the smallest integral short-coroot value.
inline CoveringTorus build_cover(const CoverCase& c, std::int64_t q, std::int64_t n, std::int64_t short_q = 0) {
    auto rd = RootDatum::build(c.type, c.rank, c.isogeny);
    auto qf = short_q == 0 ? minimal_q(rd) : q_from_short_coroots(rd, std::vector<Int>(dynkin_components(rd).size(), Int(short_q)));
    auto md = compute_metaplectic(rd, qf, n);
    auto fb = fair_bisector_auto(rd, qf);
    return CoveringTorus(md, TameField(prime_of(q), q, n), fb.d, EtaMap::trivial(rd.ss_rank));
}

// Ftlaw1-3 on basis vectors (and sums of two) over val in [-3, 3].
inline void torus_laws_on(const CoveringTorus& t, SuiteResult& r) {
    const auto& f = t.field();
    const auto& md = t.data();
    const std::int64_t n = f.n(), q = f.q();
    const std::size_t rk = t.rank();
    const std::string tag = md.rd.label + " q=" + std::to_string(q) + " n=" + std::to_string(n);
    auto box = element_box(f, -3, 3);
    std::vector<FieldElement> small;
    for (std::int64_t v = -3; v <= 3; ++v)
        for (std::int64_t e : {std::int64_t{0}, std::int64_t{1}, (q - 1) / 2}) small.push_back(f.make(v, e));
    auto modn = [&](const Int& x) { return to_i64(mod_floor(x, Int(n))); };
    for (std::size_t i = 0; i < rk; ++i)
        for (std::size_t j = 0; j < rk; ++j) {
            IntVec yi = unit_vec(rk, i), yj = unit_vec(rk, j);
            IntVec yij = add(yi, yj);
            const auto bij = modn(md.q.B(yi, yj));
            const auto dij = modn(t.bisector()(yi, yij));
            for (const auto& a : small)
                for (const auto& b : box)
                    r.record(t.commutator(t.pure(yi, a), t.pure(yj, b)) == f.rpow(f.hilbert(a, b), bij), [&] { return "Ftlaw1 " + tag; });
            for (const auto& a : box) {
                TorusElement expect = t.pure(add(yi, yij), a);
                expect.zeta = f.rpow(f.hilbert(a, a), dij);
                r.record(t.mul(t.pure(yi, a), t.pure(yij, a)) == expect, [&] { return "Ftlaw2 " + tag; });
            }
        }
    for (std::size_t i = 0; i < rk; ++i) {
        IntVec y = unit_vec(rk, i);
        if (i + 1 < rk) y[i + 1] = 1;
        const auto qy = modn(md.q.Q(y));
        for (const auto& a : small)
            for (const auto& b : box) {
                TorusElement expect = t.pure(y, f.mul(a, b));
                expect.zeta = f.rpow(f.hilbert(a, b), qy);
                r.record(t.mul(t.pure(y, a), t.pure(y, b)) == expect, [&] { return "Ftlaw3 " + tag; });
            }
    }
}

inline SuiteResult torus_law_suite(const std::vector<std::int64_t>& qs, const std::vector<CoverCase>& cases) {
    SuiteResult r{"torus group laws", 0, 0, {}};
    for (auto q : qs)
        for (auto n : divisors_of(q - 1))
            for (const auto& c : cases) torus_laws_on(build_cover(c, q, n), r);
    return r;
}

inline Monomial random_monomial(std::mt19937_64& rng, std::int64_t m) {
    std::uniform_int_distribution<std::int64_t> z(0, m - 1), c(-3, 3);
    return Monomial::root(z(rng), m) * Monomial::q_power(Rat(c(rng)));
}

inline GenuineCharacter random_unramified(const CoveringTorus& t, std::mt19937_64& rng) {
    std::vector<Monomial> base;
    for (std::size_t k = 0; k < t.data().y_qn.rank(); ++k) base.push_back(random_monomial(rng, t.field().M()));
    return make_unramified(t, base);
}

inline TorusElement random_central(const CoveringTorus& t, std::mt19937_64& rng) {
    const auto& f = t.field();
    std::uniform_int_distribution<std::int64_t> val(-3, 3), ue(0, f.q() - 2), zz(0, f.n() - 1);
    TorusElement x = t.identity();
    x.zeta = {zz(rng) * (f.M() / f.n())};
    for (const auto& row : t.data().y_qn.basis.rows) x = t.mul(x, t.pure(row, f.make(val(rng), ue(rng))));
    return x;
}

// chi(t1 t2) = chi(t1) chi(t2) for a random unramified chi and random central t1, t2.
inline void multiplicativity_on(const CoveringTorus& t, std::mt19937_64& rng, int samples, SuiteResult& r) {
    auto chi = random_unramified(t, rng);
    for (int s = 0; s < samples; ++s) {
        auto a = random_central(t, rng), b = random_central(t, rng);
        r.record(chi.eval(t, t.mul(a, b)) == chi.eval(t, a) * chi.eval(t, b), [&] { return t.str(a) + " " + t.str(b); });
    }
}

inline SuiteResult multiplicativity_suite(const std::vector<std::int64_t>& qs, const std::vector<CoverCase>& cases,
                                          std::uint64_t seed = 7, int samples = 60) {
    SuiteResult r{"unramified multiplicativity", 0, 0, {}};
    std::mt19937_64 rng(seed);
    for (auto q : qs)
        for (auto n : divisors_of(q - 1))
            for (const auto& c : cases) multiplicativity_on(build_cover(c, q, n), rng, samples, r);
    return r;
}

inline std::vector<CoverCase> all_builtin_cases(int max_rank = 8) {
    std::vector<CoverCase> out;
    for (int r = 1; r <= max_rank; ++r) out.push_back({'A', r, "sc"}), out.push_back({'A', r, "ad"});
    for (int r = 2; r <= max_rank; ++r) out.push_back({'B', r, "sc"}), out.push_back({'B', r, "ad"});
    for (int r = 2; r <= max_rank; ++r) out.push_back({'C', r, "sc"}), out.push_back({'C', r, "ad"});
    for (int r = 3; r <= max_rank; ++r) out.push_back({'D', r, "sc"}), out.push_back({'D', r, "ad"});
    for (int r : {6, 7, 8}) out.push_back({'E', r, "sc"}), out.push_back({'E', r, "ad"});
    out.push_back({'F', 4, "sc"});
    out.push_back({'G', 2, "sc"});
    return out;
}

// B_Q(alpha^vee, y) = Q(alpha^vee)<alpha, y> and the pairing identities, all roots.
inline SuiteResult root_identity_suite(const std::vector<CoverCase>& cases, const std::vector<std::int64_t>& ns) {
    SuiteResult r{"root datum identities", 0, 0, {}};
    for (const auto& c : cases) {
        auto rd = RootDatum::build(c.type, c.rank, c.isogeny);
        // Adjoint forms may need a larger short-coroot value for integrality.
        QuadraticForm qf = minimal_q(rd);
        const std::string tag = std::string(1, c.type) + std::to_string(c.rank) + c.isogeny;
        auto bq = count_bq_violations(rd, qf);
        r.checks += rd.num_roots() * rd.rank_y;
        r.violations += bq;
        if (bq) r.examples.push_back("B_Q " + tag);
        for (auto n : ns) {
            auto md = compute_metaplectic(rd, qf, n);
            const std::size_t pairs = rd.num_roots() * rd.num_roots();
            auto w = count_weighted_pairing_violations(md);
            r.checks += pairs;
            r.violations += w;
            if (w) r.examples.push_back("weighted pairing " + tag + " n=" + std::to_string(n));
            if (q_divides_n(md)) {
                auto p = count_n_pairing_violations(md);
                r.checks += pairs;
                r.violations += p;
                if (p) r.examples.push_back("pairing " + tag + " n=" + std::to_string(n));
            }
        }
    }
    return r;
}

}  // namespace bdcover
