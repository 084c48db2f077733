#pragma once

#include "bdcover/errors.hpp"
#include "bdcover/integer.hpp"

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace bdcover {

// Finite field F_q, q = p^k, elements coded as base-p digit strings of
// polynomials modulo a monic irreducible of degree k. Carries discrete log
// tables with respect to a fixed generator.
class ResidueField {
public:
    ResidueField(std::int64_t p, std::int64_t q, std::optional<std::int64_t> gen) : p_(p), q_(q) {
        k_ = 0;
        for (std::int64_t t = 1; t < q; t *= p) ++k_;
        if (k_ == 1) {
            modulus_ = {0, 1};
        } else {
            modulus_ = find_irreducible();
        }
        std::int64_t g = -1;
        if (gen) {
            if (*gen <= 0 || *gen >= q) throw Error(ErrorKind::Validation, "residue generator out of range");
            if (order(*gen) != q - 1)
                throw Error(ErrorKind::Validation, "g = " + std::to_string(*gen) + " does not generate the residue group");
            g = *gen;
        } else {
            for (std::int64_t c = 1; c < q; ++c)
                if (order(c) == q - 1) {
                    g = c;
                    break;
                }
        }
        gen_ = g;
        exp_.assign(static_cast<std::size_t>(q - 1), 0);
        log_.assign(static_cast<std::size_t>(q), -1);
        std::int64_t x = 1;
        for (std::int64_t e = 0; e < q - 1; ++e) {
            exp_[static_cast<std::size_t>(e)] = x;
            log_[static_cast<std::size_t>(x)] = e;
            x = mul(x, g);
        }
    }

    std::int64_t generator() const { return gen_; }
    std::int64_t pow_g(std::int64_t e) const { return exp_[static_cast<std::size_t>(mod64(e, q_ - 1))]; }
    std::int64_t log(std::int64_t x) const { return log_[static_cast<std::size_t>(x)]; }

    std::int64_t add(std::int64_t a, std::int64_t b) const {
        std::int64_t r = 0, w = 1;
        for (int i = 0; i < k_; ++i) {
            r += mod64(a % p_ + b % p_, p_) * w;
            a /= p_, b /= p_, w *= p_;
        }
        return r;
    }

    std::int64_t neg(std::int64_t a) const {
        std::int64_t r = 0, w = 1;
        for (int i = 0; i < k_; ++i) {
            r += mod64(-(a % p_), p_) * w;
            a /= p_, w *= p_;
        }
        return r;
    }

    std::int64_t mul(std::int64_t a, std::int64_t b) const {
        if (k_ == 1) return (a * b) % p_;
        auto x = digits(a), y = digits(b);
        std::vector<std::int64_t> prod(2 * static_cast<std::size_t>(k_), 0);
        for (int i = 0; i < k_; ++i)
            for (int j = 0; j < k_; ++j) prod[static_cast<std::size_t>(i + j)] = (prod[static_cast<std::size_t>(i + j)] + x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)]) % p_;
        for (int d = 2 * k_ - 1; d >= k_; --d) {
            std::int64_t c = prod[static_cast<std::size_t>(d)];
            if (c == 0) continue;
            for (int i = 0; i <= k_; ++i) {
                auto idx = static_cast<std::size_t>(d - k_ + i);
                prod[idx] = mod64(prod[idx] - c * modulus_[static_cast<std::size_t>(i)], p_);
            }
        }
        std::int64_t r = 0, w = 1;
        for (int i = 0; i < k_; ++i, w *= p_) r += prod[static_cast<std::size_t>(i)] * w;
        return r;
    }

private:
    std::vector<std::int64_t> digits(std::int64_t a) const {
        std::vector<std::int64_t> d(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i, a /= p_) d[static_cast<std::size_t>(i)] = a % p_;
        return d;
    }

    std::int64_t order(std::int64_t a) const {
        std::int64_t x = a;
        for (std::int64_t e = 1; e <= q_ - 1; ++e) {
            if (x == 1) return e;
            x = mul(x, a);
        }
        return 0;
    }

    // First monic irreducible of degree k in digit order; checked by root-free
    // and factor-free search over all lower-degree monic polynomials.
    std::vector<std::int64_t> find_irreducible() const {
        std::int64_t count = q_;  // p^k candidates for the low coefficients
        for (std::int64_t c = 0; c < count; ++c) {
            std::vector<std::int64_t> f(static_cast<std::size_t>(k_) + 1);
            std::int64_t t = c;
            for (int i = 0; i < k_; ++i, t /= p_) f[static_cast<std::size_t>(i)] = t % p_;
            f[static_cast<std::size_t>(k_)] = 1;
            if (f[0] == 0) continue;
            if (irreducible(f)) return f;
        }
        throw Error(ErrorKind::Validation, "no irreducible polynomial found");
    }

    bool irreducible(const std::vector<std::int64_t>& f) const {
        int deg = static_cast<int>(f.size()) - 1;
        for (int d = 1; d <= deg / 2; ++d) {
            std::int64_t cnt = 1;
            for (int i = 0; i < d; ++i) cnt *= p_;
            for (std::int64_t c = 0; c < cnt; ++c) {
                std::vector<std::int64_t> g(static_cast<std::size_t>(d) + 1);
                std::int64_t t = c;
                for (int i = 0; i < d; ++i, t /= p_) g[static_cast<std::size_t>(i)] = t % p_;
                g[static_cast<std::size_t>(d)] = 1;
                if (divides(g, f)) return false;
            }
        }
        return true;
    }

    bool divides(const std::vector<std::int64_t>& g, std::vector<std::int64_t> f) const {
        int dg = static_cast<int>(g.size()) - 1;
        for (int d = static_cast<int>(f.size()) - 1; d >= dg; --d) {
            std::int64_t c = f[static_cast<std::size_t>(d)];
            if (c == 0) continue;
            for (int i = 0; i <= dg; ++i) {
                auto idx = static_cast<std::size_t>(d - dg + i);
                f[idx] = mod64(f[idx] - c * g[static_cast<std::size_t>(i)], p_);
            }
        }
        for (int i = 0; i < dg; ++i)
            if (f[static_cast<std::size_t>(i)] != 0) return false;
        return true;
    }

    std::int64_t p_, q_;
    int k_ = 1;
    std::vector<std::int64_t> modulus_;
    std::int64_t gen_ = 1;
    std::vector<std::int64_t> exp_, log_;
};

// a = pi^val * u with u a unit whose residue is g^unit_exp. Principal units
// are not represented: every symbol used here factors through this pair.
struct FieldElement {
    std::int64_t val = 0;
    std::int64_t unit_exp = 0;
    bool operator==(const FieldElement& o) const { return val == o.val && unit_exp == o.unit_exp; }
    bool operator<(const FieldElement& o) const {
        return val != o.val ? val < o.val : unit_exp < o.unit_exp;
    }
};

// Exponent of a fixed primitive M-th root of unity.
struct RootOfUnity {
    std::int64_t exp = 0;
    bool operator==(const RootOfUnity& o) const { return exp == o.exp; }
};

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

class TameField {
public:
    TameField(std::int64_t p, std::int64_t q, std::int64_t n, std::optional<std::int64_t> g = std::nullopt)
        : p_(p), q_(q), n_(n) {
        if (!is_prime(p)) throw Error(ErrorKind::Validation, "p = " + std::to_string(p) + " is not prime");
        std::int64_t t = q;
        while (t % p == 0) t /= p;
        if (t != 1 || q < p) throw Error(ErrorKind::Validation, "q = " + std::to_string(q) + " is not a power of p");
        if (q % 2 == 0) throw Error(ErrorKind::Validation, "residue characteristic 2 is not supported");
        if (n < 1 || (q - 1) % n != 0)
            throw Error(ErrorKind::Validation, "n = " + std::to_string(n) + " does not divide q-1 = " + std::to_string(q - 1));
        if (std::gcd(n, p) != 1) throw Error(ErrorKind::Validation, "n is not prime to p");
        m_ = std::lcm(q - 1, std::int64_t{4});
        residue_ = std::make_shared<ResidueField>(p, q, g);
    }

    std::int64_t p() const { return p_; }
    std::int64_t q() const { return q_; }
    std::int64_t n() const { return n_; }
    std::int64_t g() const { return residue_->generator(); }
    std::int64_t M() const { return m_; }
    const ResidueField& residue() const { return *residue_; }

    FieldElement make(std::int64_t val, std::int64_t e) const { return {val, mod64(e, q_ - 1)}; }
    FieldElement one() const { return {0, 0}; }
    FieldElement uniformizer() const { return {1, 0}; }
    FieldElement unit(std::int64_t e) const { return make(0, e); }
    FieldElement minus_one() const { return unit((q_ - 1) / 2); }

    FieldElement mul(const FieldElement& a, const FieldElement& b) const {
        return make(checked_add(a.val, b.val), a.unit_exp + b.unit_exp);
    }
    FieldElement inv(const FieldElement& a) const { return make(-a.val, -a.unit_exp); }
    FieldElement pow(const FieldElement& a, std::int64_t k) const {
        return make(checked_mul(a.val, k), checked_mul(a.unit_exp, k % (q_ - 1)));
    }
    FieldElement neg(const FieldElement& a) const { return mul(a, minus_one()); }

    // Exponent in Z/(q-1) of (-1)^{v(x)v(y)} x^{v(y)} / y^{v(x)} mod p.
    std::int64_t tame_symbol(const FieldElement& x, const FieldElement& y) const {
        const std::int64_t h = q_ - 1;
        std::int64_t vv = mod64(checked_mul(mod64(x.val, h), mod64(y.val, h)), h);
        std::int64_t s = checked_mul((h / 2), vv);
        s = checked_add(s, checked_mul(x.unit_exp, mod64(y.val, h)));
        s = checked_add(s, -checked_mul(y.unit_exp, mod64(x.val, h)));
        return mod64(s, h);
    }

    // (x, y)_d as an exponent of the primitive M-th root; d | q-1.
    RootOfUnity hilbert(const FieldElement& x, const FieldElement& y, std::int64_t d) const {
        if ((q_ - 1) % d != 0) throw Error(ErrorKind::Validation, "symbol degree does not divide q-1");
        return {mod64(checked_mul(tame_symbol(x, y), m_ / d), m_)};
    }
    RootOfUnity hilbert(const FieldElement& x, const FieldElement& y) const { return hilbert(x, y, n_); }

    RootOfUnity rmul(RootOfUnity a, RootOfUnity b) const { return {mod64(a.exp + b.exp, m_)}; }
    RootOfUnity rpow(RootOfUnity a, std::int64_t k) const { return {mod64(checked_mul(a.exp, mod64(k, m_)), m_)}; }
    RootOfUnity rinv(RootOfUnity a) const { return {mod64(-a.exp, m_)}; }
    bool in_mu(RootOfUnity a, std::int64_t d) const { return (a.exp * d) % m_ == 0; }

    // x in (F^x)^d, judged on (valuation, residue): d | v and gcd(d, q-1) | e.
    bool is_power(const FieldElement& x, std::int64_t d) const {
        if (d == 0) return x == one();
        d = d < 0 ? -d : d;
        return x.val % d == 0 && x.unit_exp % std::gcd(d, q_ - 1) == 0;
    }

    // Residue of 1 - x for the cases where it is determined by (val, residue):
    // returns nothing when 1 - x is not a unit of known residue.
    std::optional<FieldElement> one_minus(const FieldElement& x) const {
        if (x.val > 0) return one();
        if (x.val < 0) return std::nullopt;
        std::int64_t r = residue_->pow_g(x.unit_exp);
        if (r == 1) return std::nullopt;
        std::int64_t s = residue_->add(1, residue_->neg(r));
        return unit(residue_->log(s));
    }

    std::string str(const FieldElement& a) const {
        std::string s;
        if (a.val != 0) s = a.val == 1 ? "pi" : "pi^" + std::to_string(a.val);
        if (a.unit_exp != 0) {
            std::string u = a.unit_exp == 1 ? "g" : "g^" + std::to_string(a.unit_exp);
            s = s.empty() ? u : s + " * " + u;
        }
        return s.empty() ? "1" : s;
    }

private:
    std::int64_t p_, q_, n_, m_;
    std::shared_ptr<const ResidueField> residue_;
};

// gamma_psi is pinned down by its value at pi (a fourth root of unity whose
// square is (pi, pi)_2) and triviality on units.
class WeilIndex {
public:
    WeilIndex(const TameField& f, RootOfUnity gamma_pi) : f_(f), gpi_(gamma_pi) {
        if (!f.in_mu(gamma_pi, 4)) throw Error(ErrorKind::InvalidPsiData, "seed is not a fourth root of unity");
        auto sq = f.rpow(gamma_pi, 2);
        auto pp = f.hilbert(f.uniformizer(), f.uniformizer(), 2);
        if (!(sq == pp)) throw Error(ErrorKind::InvalidPsiData, "seed squared differs from (pi, pi)_2");
    }

    static RootOfUnity seed(const TameField& f, const std::string& name) {
        const std::int64_t m = f.M();
        if (name == "+1" || name == "1") return {0};
        if (name == "-1") return {m / 2};
        if (name == "+i" || name == "i") return {m / 4};
        if (name == "-i") return {3 * m / 4};
        throw Error(ErrorKind::Parse, "unknown Weil-index seed '" + name + "' (expected +i, -i, +1, -1)");
    }

    static RootOfUnity default_seed(const TameField& f) {
        return f.q() % 4 == 3 ? RootOfUnity{f.M() / 4} : RootOfUnity{0};
    }

    RootOfUnity gamma_pi() const { return gpi_; }

    RootOfUnity operator()(const FieldElement& a) const {
        const std::int64_t k = a.val;
        auto pp = f_.hilbert(f_.uniformizer(), f_.uniformizer(), 2);
        auto pu = f_.hilbert(f_.uniformizer(), f_.unit(a.unit_exp), 2);
        std::int64_t tri = mod64(k * (k - 1) / 2, 2);
        return f_.rmul(f_.rmul(f_.rpow(gpi_, k), f_.rpow(pp, tri)), f_.rpow(pu, k));
    }

private:
    TameField f_;
    RootOfUnity gpi_;
};

}  // namespace bdcover
