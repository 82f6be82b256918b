#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "bigint.hh"

namespace cpog {

// Exact numbers of the form a * 2^b * 5^c with arbitrary-precision a.
// Closed under +, -, *; every value prints as a finite decimal, and every
// finite decimal parses back exactly.  Canonical form: a == 0 implies
// b == c == 0, and a nonzero a is divisible by neither 2 nor 5, so equal
// values have identical triples.
class Q25 {
public:
    Q25() = default;

    static Q25 zero() { return Q25(); }
    static Q25 one() { return from_int(1); }
    static Q25 from_int(int64_t v) { return make(BigInt::from_int(v), 0, 0); }
    // Normalizing constructor.
    static Q25 make(BigInt a, int64_t b, int64_t c);
    // Convenience: a/2 and similar scalings.
    static Q25 half() { return make(BigInt::from_int(1), -1, 0); }

    // Finite decimal, optionally signed, optional fraction part and
    // optional e<k> decimal exponent: "-12.625", "0.1", "8e-3".
    static std::optional<Q25> parse_decimal(std::string_view text);

    const BigInt &mantissa() const { return a_; }
    int64_t pow2() const { return b_; }
    int64_t pow5() const { return c_; }

    bool is_zero() const { return a_.is_zero(); }
    bool is_negative() const { return a_.is_negative(); }
    bool operator==(const Q25 &o) const;
    bool operator!=(const Q25 &o) const { return !(*this == o); }

    Q25 operator+(const Q25 &o) const;
    Q25 operator-(const Q25 &o) const;
    Q25 operator*(const Q25 &o) const;
    Q25 operator-() const;

    // Multiply by 2^k (k may be negative).
    Q25 scale2(int64_t k) const;
    Q25 scale5(int64_t k) const;

    // Exact division; nullopt when the quotient leaves the ring
    // (the 2,5-free part of the divisor does not divide the dividend's).
    std::optional<Q25> exact_div(const Q25 &o) const;

    bool is_integer() const { return is_zero() || (b_ >= 0 && c_ >= 0); }
    // Requires is_integer().
    BigInt to_integer() const;

    std::string to_decimal() const;

private:
    BigInt a_;
    int64_t b_ = 0;
    int64_t c_ = 0;
};

} // namespace cpog
