#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdcover {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Representative in [0, |b|).
inline Int mod_floor(const Int& a, const Int& b) {
    Int m = abs(b);
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

inline std::int64_t mod64(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t to_i64(const Int& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
    return static_cast<std::int64_t>(v);
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("64-bit multiplication overflow");
    return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("64-bit addition overflow");
    return r;
}

// The two-argument cpp_rational constructor rejects negative denominators.
inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    return den < 0 ? Rat(-num) / Rat(-den) : Rat(num) / Rat(den);
}

inline bool is_integral(const Rat& r) { return denominator(r) == 1; }

inline std::string rat_str(const Rat& r) {
    if (is_integral(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Int dot(const IntVec& a, const IntVec& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const RatVec& a, const IntVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * Rat(b[i]);
    return s;
}

inline IntVec add(const IntVec& a, const IntVec& b) {
    IntVec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline IntVec sub(const IntVec& a, const IntVec& b) {
    IntVec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline IntVec scale(const Int& k, const IntVec& a) {
    IntVec r(a);
    for (auto& x : r) x *= k;
    return r;
}

inline bool is_zero(const IntVec& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

inline IntVec unit_vec(std::size_t n, std::size_t i) {
    IntVec v(n, 0);
    v[i] = 1;
    return v;
}

inline IntVec to_intvec(const std::vector<long long>& v) { return IntVec(v.begin(), v.end()); }

inline std::vector<long long> to_ll(const IntVec& v) {
    std::vector<long long> r;
    r.reserve(v.size());
    for (const auto& x : v) r.push_back(static_cast<long long>(to_i64(x)));
    return r;
}

}  // namespace bdcover
