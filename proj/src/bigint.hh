#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cpog {

// Sign-magnitude arbitrary-precision integer.  The magnitude is stored
// little-endian as base-10^9 digits, which makes conversion to and from
// decimal strings a per-limb operation.  Counts routinely run to hundreds
// of thousands of decimal digits, so all core loops are linear scans.
class BigInt {
public:
    static constexpr uint32_t kBase = 1000000000u;

    BigInt() = default;
    static BigInt from_int(int64_t v);
    // Digits only, no sign; returns nullopt on a non-digit.
    static std::optional<BigInt> parse_digits(std::string_view digits);

    bool is_zero() const { return sign_ == 0; }
    bool is_negative() const { return sign_ < 0; }
    int signum() const { return sign_; }

    // Total order; -1/0/+1.
    static int compare(const BigInt &x, const BigInt &y);
    bool operator==(const BigInt &o) const { return compare(*this, o) == 0; }
    bool operator!=(const BigInt &o) const { return compare(*this, o) != 0; }
    bool operator<(const BigInt &o) const { return compare(*this, o) < 0; }
    bool operator<=(const BigInt &o) const { return compare(*this, o) <= 0; }

    BigInt operator-() const;
    BigInt operator+(const BigInt &o) const;
    BigInt operator-(const BigInt &o) const;
    BigInt operator*(const BigInt &o) const;

    BigInt &operator+=(const BigInt &o) { *this = *this + o; return *this; }

    // Multiply in place by a small factor (must be < 2^32).
    void mul_small(uint32_t m);
    // Divide in place by a small divisor, returning the remainder.
    // Remainder carries the sign of the dividend.
    int64_t divmod_small(uint32_t d);
    // Multiply in place by base^k for base in {2, 5}; k >= 0.
    void mul_pow(uint32_t base, int64_t k);

    // Floor-free truncating division: q = trunc(x / y), r = x - q*y.
    // y must be nonzero.
    static void divmod(const BigInt &x, const BigInt &y, BigInt &q, BigInt &r);

    // Fits in int64_t?
    std::optional<int64_t> to_int64() const;

    std::string to_string() const;

private:
    int sign_ = 0;                  // -1, 0, +1
    std::vector<uint32_t> mag_;     // little-endian base 10^9; empty iff sign_ == 0

    void trim();
    static int compare_mag(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b);
    static std::vector<uint32_t> add_mag(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b);
    // Requires |a| >= |b|.
    static std::vector<uint32_t> sub_mag(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b);
};

} // namespace cpog
