#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vc2reg {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using i128 = __int128;

inline Rational make_rational(const BigInt& num, const BigInt& den = 1) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Rational(num, den);
}

inline BigInt to_bigint(i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    BigInt r = static_cast<std::uint64_t>(u >> 64);
    r <<= 64;
    r += static_cast<std::uint64_t>(u);
    return neg ? BigInt(-r) : r;
}

inline std::string to_string(const Rational& r) {
    return numerator(r).str() + (denominator(r) == 1 ? "" : "/" + denominator(r).str());
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// Parses "p", "p/q" or a plain decimal such as "0.05" into an exact rational.
// Decimal digits only; boost would read a leading 0 as octal and 0x as hex.
inline BigInt parse_decimal_int(std::string s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("malformed integer literal");
    const auto nz = s.find_first_not_of('0');
    BigInt v = nz == std::string::npos ? BigInt(0) : BigInt(s.substr(nz));
    return neg ? BigInt(-v) : v;
}

inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            const BigInt q = parse_decimal_int(s.substr(slash + 1));
            if (q == 0) throw std::invalid_argument("zero denominator");
            return make_rational(parse_decimal_int(s.substr(0, slash)), q);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rational(parse_decimal_int(s));
        std::string frac = s.substr(dot + 1);
        std::string whole = s.substr(0, dot);
        const bool neg = !whole.empty() && whole[0] == '-';
        if (neg || (!whole.empty() && whole[0] == '+')) whole.erase(0, 1);
        if (whole.empty() && frac.empty()) throw std::invalid_argument("bad decimal");
        if (frac.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument("bad decimal");
        const BigInt num = parse_decimal_int((whole.empty() ? "0" : whole) + frac);
        const BigInt den = pow(BigInt(10), static_cast<unsigned>(frac.size()));
        return make_rational(neg ? BigInt(-num) : num, den);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    }
}

inline BigInt floor_of(const Rational& r) {
    BigInt q = numerator(r) / denominator(r);
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) q -= 1;
    return q;
}

inline BigInt ceil_of(const Rational& r) {
    BigInt f = floor_of(r);
    return f * denominator(r) == numerator(r) ? f : BigInt(f + 1);
}

inline Rational rpow(const Rational& base, unsigned e) {
    return make_rational(pow(numerator(base), e), pow(denominator(base), e));
}

// x <= sqrt(y) for x, y >= 0, exact.
inline bool le_sqrt(const Rational& x, const Rational& y) { return x <= 0 || x * x <= y; }
inline bool ge_sqrt(const Rational& x, const Rational& y) { return x >= 0 && x * x >= y; }
// x <= y^(1/4) for x, y >= 0, exact.
inline bool le_fourth_root(const Rational& x, const Rational& y) {
    if (x <= 0) return true;
    Rational x2 = x * x;
    return x2 * x2 <= y;
}

// Rigorous rational enclosure [lo, hi] of y^(1/4) with |hi-lo| <= 2^-bits / den(y).
inline std::pair<Rational, Rational> fourth_root_bounds(const Rational& y, unsigned bits) {
    if (y < 0) throw std::domain_error("fourth root of negative rational");
    const BigInt& p = numerator(y);
    const BigInt& q = denominator(y);
    BigInt scaled = p * q * q * q;
    scaled <<= 4 * bits;
    BigInt r = sqrt(sqrt(scaled));
    BigInt den = q;
    den <<= bits;
    Rational lo = make_rational(r, den);
    BigInt r4 = r * r * r * r;
    Rational hi = r4 == scaled ? lo : make_rational(r + 1, den);
    return {lo, hi};
}

// Exact decision of x <= a^(1/4) + b^(1/4) for non-negative rationals.
inline bool le_sum_fourth_roots(const Rational& x, const Rational& a, const Rational& b) {
    if (x <= 0) return true;
    for (unsigned bits = 64; bits <= 1u << 14; bits *= 2) {
        auto [alo, ahi] = fourth_root_bounds(a, bits);
        auto [blo, bhi] = fourth_root_bounds(b, bits);
        if (x <= alo + blo) return true;
        if (x > ahi + bhi) return false;
        if (alo == ahi && blo == bhi) return x <= alo + blo;
    }
    // Unresolved only if x equals an irrational sum to 16k bits; treat the tie as satisfied.
    return true;
}

// Exact decision of x <= sum_i a_i^(1/4).
inline bool le_sum_fourth_roots(const Rational& x, const std::vector<Rational>& a) {
    if (x <= 0) return true;
    for (unsigned bits = 64; bits <= 1u << 14; bits *= 2) {
        Rational lo = 0, hi = 0;
        bool exact = true;
        for (const auto& v : a) {
            auto [l, h] = fourth_root_bounds(v, bits);
            lo += l;
            hi += h;
            exact = exact && l == h;
        }
        if (x <= lo) return true;
        if (x > hi) return false;
        if (exact) return x <= lo;
    }
    return true;
}

// Accumulates signed 128-bit terms exactly, spilling into a big integer on overflow.
class BigAccumulator {
public:
    void add(i128 v) {
        i128 out;
        if (__builtin_add_overflow(fast_, v, &out)) {
            big_ += to_bigint(fast_);
            fast_ = v;
        } else {
            fast_ = out;
        }
    }
    void add(const BigInt& v) { big_ += v; }
    void add(const BigAccumulator& o) {
        big_ += o.big_;
        add(o.fast_);
    }
    // Adds v*v where |v| may exceed the square-safe range.
    void add_square(i128 v) {
        constexpr i128 limit = static_cast<i128>(1) << 62;
        if (v < limit && v > -limit) {
            add(v * v);
        } else {
            BigInt b = to_bigint(v);
            big_ += b * b;
        }
    }
    BigInt value() const { return big_ + to_bigint(fast_); }

private:
    BigInt big_ = 0;
    i128 fast_ = 0;
};

}  // namespace vc2reg
