#include "bigint.hh"

#include <algorithm>
#include <cassert>

namespace cpog {

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0)
        mag_.pop_back();
    if (mag_.empty())
        sign_ = 0;
}

BigInt BigInt::from_int(int64_t v) {
    BigInt r;
    if (v == 0)
        return r;
    r.sign_ = v < 0 ? -1 : 1;
    uint64_t m = v < 0 ? -(uint64_t)v : (uint64_t)v;
    while (m > 0) {
        r.mag_.push_back((uint32_t)(m % kBase));
        m /= kBase;
    }
    return r;
}

std::optional<BigInt> BigInt::parse_digits(std::string_view digits) {
    if (digits.empty())
        return std::nullopt;
    for (char ch : digits)
        if (ch < '0' || ch > '9')
            return std::nullopt;
    BigInt r;
    // Consume in 9-digit chunks from the front.
    size_t head = digits.size() % 9;
    size_t pos = 0;
    auto push_chunk = [&](std::string_view chunk) {
        uint32_t v = 0;
        for (char ch : chunk)
            v = v * 10 + (uint32_t)(ch - '0');
        r.mul_small(kBase);
        if (v) {
            if (r.sign_ == 0) {
                r.sign_ = 1;
                r.mag_.push_back(v);
            } else {
                // Adding a value < base to a base-aligned number never carries.
                r.mag_[0] += v;
            }
        }
    };
    if (head) {
        push_chunk(digits.substr(0, head));
        pos = head;
    }
    for (; pos < digits.size(); pos += 9)
        push_chunk(digits.substr(pos, 9));
    return r;
}

int BigInt::compare_mag(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
    if (a.size() != b.size())
        return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i])
            return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

int BigInt::compare(const BigInt &x, const BigInt &y) {
    if (x.sign_ != y.sign_)
        return x.sign_ < y.sign_ ? -1 : 1;
    int c = compare_mag(x.mag_, y.mag_);
    return x.sign_ >= 0 ? c : -c;
}

std::vector<uint32_t> BigInt::add_mag(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
    const std::vector<uint32_t> &lo = a.size() < b.size() ? a : b;
    const std::vector<uint32_t> &hi = a.size() < b.size() ? b : a;
    std::vector<uint32_t> out;
    out.reserve(hi.size() + 1);
    uint32_t carry = 0;
    for (size_t i = 0; i < hi.size(); i++) {
        uint32_t s = hi[i] + carry;
        if (i < lo.size())
            s += lo[i];
        if (s >= kBase) {
            s -= kBase;
            carry = 1;
        } else {
            carry = 0;
        }
        out.push_back(s);
    }
    if (carry)
        out.push_back(carry);
    return out;
}

std::vector<uint32_t> BigInt::sub_mag(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b) {
    std::vector<uint32_t> out;
    out.reserve(a.size());
    int32_t borrow = 0;
    for (size_t i = 0; i < a.size(); i++) {
        int64_t d = (int64_t)a[i] - borrow - (i < b.size() ? (int64_t)b[i] : 0);
        if (d < 0) {
            d += kBase;
            borrow = 1;
        } else {
            borrow = 0;
        }
        out.push_back((uint32_t)d);
    }
    assert(borrow == 0);
    while (!out.empty() && out.back() == 0)
        out.pop_back();
    return out;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::operator+(const BigInt &o) const {
    if (sign_ == 0)
        return o;
    if (o.sign_ == 0)
        return *this;
    BigInt r;
    if (sign_ == o.sign_) {
        r.sign_ = sign_;
        r.mag_ = add_mag(mag_, o.mag_);
        return r;
    }
    int c = compare_mag(mag_, o.mag_);
    if (c == 0)
        return r; // zero
    if (c > 0) {
        r.sign_ = sign_;
        r.mag_ = sub_mag(mag_, o.mag_);
    } else {
        r.sign_ = o.sign_;
        r.mag_ = sub_mag(o.mag_, mag_);
    }
    return r;
}

BigInt BigInt::operator-(const BigInt &o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt &o) const {
    BigInt r;
    if (sign_ == 0 || o.sign_ == 0)
        return r;
    r.sign_ = sign_ * o.sign_;
    r.mag_.assign(mag_.size() + o.mag_.size(), 0);
    for (size_t i = 0; i < mag_.size(); i++) {
        uint64_t carry = 0;
        uint64_t ai = mag_[i];
        for (size_t j = 0; j < o.mag_.size(); j++) {
            uint64_t cur = r.mag_[i + j] + ai * o.mag_[j] + carry;
            r.mag_[i + j] = (uint32_t)(cur % kBase);
            carry = cur / kBase;
        }
        size_t k = i + o.mag_.size();
        while (carry) {
            uint64_t cur = r.mag_[k] + carry;
            r.mag_[k] = (uint32_t)(cur % kBase);
            carry = cur / kBase;
            k++;
        }
    }
    r.trim();
    return r;
}

void BigInt::mul_small(uint32_t m) {
    if (sign_ == 0)
        return;
    if (m == 0) {
        sign_ = 0;
        mag_.clear();
        return;
    }
    uint64_t carry = 0;
    for (size_t i = 0; i < mag_.size(); i++) {
        uint64_t cur = (uint64_t)mag_[i] * m + carry;
        mag_[i] = (uint32_t)(cur % kBase);
        carry = cur / kBase;
    }
    while (carry) {
        mag_.push_back((uint32_t)(carry % kBase));
        carry /= kBase;
    }
}

int64_t BigInt::divmod_small(uint32_t d) {
    assert(d != 0);
    if (sign_ == 0)
        return 0;
    uint64_t rem = 0;
    for (size_t i = mag_.size(); i-- > 0;) {
        uint64_t cur = rem * kBase + mag_[i];
        mag_[i] = (uint32_t)(cur / d);
        rem = cur % d;
    }
    int64_t signed_rem = sign_ < 0 ? -(int64_t)rem : (int64_t)rem;
    trim();
    return signed_rem;
}

void BigInt::mul_pow(uint32_t base, int64_t k) {
    assert(base == 2 || base == 5);
    if (sign_ == 0 || k == 0)
        return;
    assert(k > 0);
    // Largest chunk whose multiplier stays below 2^32.
    int64_t chunk = base == 2 ? 31 : 13;
    uint32_t full = 1;
    for (int64_t i = 0; i < chunk; i++)
        full *= base;
    while (k >= chunk) {
        mul_small(full);
        k -= chunk;
    }
    uint32_t rest = 1;
    for (int64_t i = 0; i < k; i++)
        rest *= base;
    if (rest != 1)
        mul_small(rest);
}

void BigInt::divmod(const BigInt &x, const BigInt &y, BigInt &q, BigInt &r) {
    assert(y.sign_ != 0);
    if (x.sign_ == 0) {
        q = BigInt();
        r = BigInt();
        return;
    }
    int cmp = compare_mag(x.mag_, y.mag_);
    if (cmp < 0) {
        q = BigInt();
        r = x;
        return;
    }
    if (y.mag_.size() == 1) {
        q = x;
        int64_t rem = q.divmod_small(y.mag_[0]);
        if (y.sign_ < 0)
            q.sign_ = -q.sign_;
        q.trim();
        r = BigInt::from_int(rem);
        return;
    }
    // Schoolbook long division on magnitudes, one base-10^9 digit of the
    // quotient per position.  Normalizing the divisor so its top limb is
    // at least base/2 keeps the two-limb quotient estimate within 2 of the
    // true digit.
    uint32_t norm = (uint32_t)(((uint64_t)kBase / 2 + y.mag_.back()) / ((uint64_t)y.mag_.back() + 1));
    if (norm == 0)
        norm = 1;
    BigInt yn = y;
    yn.sign_ = 1;
    yn.mul_small(norm);
    std::vector<uint32_t> vm = yn.mag_;
    size_t n = vm.size();
    std::vector<uint32_t> rem(x.mag_);
    {
        BigInt xn;
        xn.sign_ = 1;
        xn.mag_ = rem;
        xn.mul_small(norm);
        rem = xn.mag_;
    }
    while (rem.size() < n)
        rem.push_back(0);
    size_t m = rem.size() - n;
    rem.push_back(0);
    std::vector<uint32_t> quo(m + 1, 0);

    // rem_at(j..j+n) >= v * t ?
    auto geq_shifted = [&](const std::vector<uint32_t> &rm, size_t j, uint64_t t) {
        // Compute v*t on the fly, compare against rm[j..j+n].
        uint64_t carry = 0;
        int borrow = 0;
        // First pass: check subtraction feasibility by simulating.
        for (size_t i = 0; i <= n; i++) {
            uint64_t prod = carry + (i < n ? (uint64_t)vm[i] * t : 0);
            uint64_t digit = prod % kBase;
            carry = prod / kBase;
            int64_t d = (int64_t)rm[j + i] - (int64_t)digit - borrow;
            borrow = d < 0 ? 1 : 0;
        }
        return borrow == 0 && carry == 0;
    };
    auto sub_shifted = [&](std::vector<uint32_t> &rm, size_t j, uint64_t t) {
        uint64_t carry = 0;
        int borrow = 0;
        for (size_t i = 0; i <= n; i++) {
            uint64_t prod = carry + (i < n ? (uint64_t)vm[i] * t : 0);
            uint64_t digit = prod % kBase;
            carry = prod / kBase;
            int64_t d = (int64_t)rm[j + i] - (int64_t)digit - borrow;
            if (d < 0) {
                d += kBase;
                borrow = 1;
            } else {
                borrow = 0;
            }
            rm[j + i] = (uint32_t)d;
        }
        assert(borrow == 0 && carry == 0);
    };

    for (size_t jj = m + 1; jj-- > 0;) {
        uint64_t top = (uint64_t)rem[jj + n] * kBase + rem[jj + n - 1];
        uint64_t est = top / vm[n - 1];
        if (est >= kBase)
            est = kBase - 1;
        // est may overshoot by at most 2; undershoot possible with the
        // cheap estimate, so settle it by search.
        uint64_t lo = est > 2 ? est - 2 : 0, hi = est;
        while (lo < hi) {
            uint64_t mid = (lo + hi + 1) / 2;
            if (geq_shifted(rem, jj, mid))
                lo = mid;
            else
                hi = mid - 1;
        }
        while (geq_shifted(rem, jj, lo + 1))
            lo++;
        if (lo)
            sub_shifted(rem, jj, lo);
        quo[jj] = (uint32_t)lo;
    }

    q = BigInt();
    q.mag_ = std::move(quo);
    q.sign_ = x.sign_ * y.sign_;
    q.trim();
    r = BigInt();
    r.mag_ = std::move(rem);
    r.sign_ = x.sign_;
    r.trim();
    if (!r.is_zero())
        r.divmod_small(norm);
}

std::optional<int64_t> BigInt::to_int64() const {
    if (sign_ == 0)
        return 0;
    if (mag_.size() > 3)
        return std::nullopt;
    uint64_t v = 0;
    const uint64_t limit = sign_ < 0 ? (uint64_t)INT64_MAX + 1 : (uint64_t)INT64_MAX;
    for (size_t i = mag_.size(); i-- > 0;) {
        if (v > (limit - mag_[i]) / kBase)
            return std::nullopt;
        v = v * kBase + mag_[i];
    }
    // Unsigned negation handles the INT64_MIN magnitude.
    return sign_ < 0 ? (int64_t)(0 - v) : (int64_t)v;
}

std::string BigInt::to_string() const {
    if (sign_ == 0)
        return "0";
    std::string out;
    if (sign_ < 0)
        out.push_back('-');
    char buf[16];
    snprintf(buf, sizeof(buf), "%u", mag_.back());
    out += buf;
    for (size_t i = mag_.size() - 1; i-- > 0;) {
        snprintf(buf, sizeof(buf), "%09u", mag_[i]);
        out += buf;
    }
    return out;
}

} // namespace cpog
