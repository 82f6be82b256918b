#include "q25.hh"

#include <algorithm>
#include <cassert>

namespace cpog {

Q25 Q25::make(BigInt a, int64_t b, int64_t c) {
    Q25 r;
    if (a.is_zero())
        return r;
    // Pull all factors of 2 and 5 out of the mantissa.
    for (;;) {
        BigInt t = a;
        if (t.divmod_small(2) != 0)
            break;
        a = std::move(t);
        b++;
    }
    for (;;) {
        BigInt t = a;
        if (t.divmod_small(5) != 0)
            break;
        a = std::move(t);
        c++;
    }
    r.a_ = std::move(a);
    r.b_ = b;
    r.c_ = c;
    return r;
}

bool Q25::operator==(const Q25 &o) const {
    return b_ == o.b_ && c_ == o.c_ && a_ == o.a_;
}

Q25 Q25::operator+(const Q25 &o) const {
    if (is_zero())
        return o;
    if (o.is_zero())
        return *this;
    int64_t b = std::min(b_, o.b_);
    int64_t c = std::min(c_, o.c_);
    BigInt x = a_;
    x.mul_pow(2, b_ - b);
    x.mul_pow(5, c_ - c);
    BigInt y = o.a_;
    y.mul_pow(2, o.b_ - b);
    y.mul_pow(5, o.c_ - c);
    return make(x + y, b, c);
}

Q25 Q25::operator-() const {
    Q25 r = *this;
    r.a_ = -r.a_;
    return r;
}

Q25 Q25::operator-(const Q25 &o) const { return *this + (-o); }

Q25 Q25::operator*(const Q25 &o) const {
    if (is_zero() || o.is_zero())
        return Q25();
    // Product of two 2,5-free mantissas is 2,5-free; no renormalization.
    Q25 r;
    r.a_ = a_ * o.a_;
    r.b_ = b_ + o.b_;
    r.c_ = c_ + o.c_;
    return r;
}

Q25 Q25::scale2(int64_t k) const {
    if (is_zero())
        return Q25();
    Q25 r = *this;
    r.b_ += k;
    return r;
}

Q25 Q25::scale5(int64_t k) const {
    if (is_zero())
        return Q25();
    Q25 r = *this;
    r.c_ += k;
    return r;
}

std::optional<Q25> Q25::exact_div(const Q25 &o) const {
    assert(!o.is_zero());
    if (is_zero())
        return Q25();
    BigInt q, rem;
    BigInt::divmod(a_, o.a_, q, rem);
    if (!rem.is_zero())
        return std::nullopt;
    Q25 r;
    r.a_ = std::move(q);
    r.b_ = b_ - o.b_;
    r.c_ = c_ - o.c_;
    return r;
}

BigInt Q25::to_integer() const {
    assert(is_integer());
    BigInt v = a_;
    v.mul_pow(2, b_);
    v.mul_pow(5, c_);
    return v;
}

std::optional<Q25> Q25::parse_decimal(std::string_view text) {
    if (text.empty())
        return std::nullopt;
    bool negative = false;
    size_t pos = 0;
    if (text[0] == '+' || text[0] == '-') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::string digits;
    int64_t frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; pos < text.size(); pos++) {
        char ch = text[pos];
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            seen_digit = true;
            if (seen_dot)
                frac_digits++;
        } else if (ch == '.') {
            if (seen_dot)
                return std::nullopt;
            seen_dot = true;
        } else if (ch == 'e' || ch == 'E') {
            break;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit)
        return std::nullopt;
    int64_t exp10 = 0;
    if (pos < text.size()) {
        // exponent part
        pos++; // past 'e'
        bool exp_neg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_neg = text[pos] == '-';
            pos++;
        }
        if (pos >= text.size())
            return std::nullopt;
        int64_t v = 0;
        for (; pos < text.size(); pos++) {
            char ch = text[pos];
            if (ch < '0' || ch > '9')
                return std::nullopt;
            if (v > 100000000)
                return std::nullopt;
            v = v * 10 + (ch - '0');
        }
        exp10 = exp_neg ? -v : v;
    }
    auto mant = BigInt::parse_digits(digits);
    if (!mant)
        return std::nullopt;
    BigInt a = negative ? -*mant : *mant;
    int64_t shift = exp10 - frac_digits;
    return make(std::move(a), shift, shift);
}

std::string Q25::to_decimal() const {
    if (is_zero())
        return "0";
    // Scale so the denominator becomes a power of ten: with
    // k = max(0, -b, -c), the value is (a * 2^(b+k) * 5^(c+k)) / 10^k.
    int64_t k = std::max<int64_t>(0, std::max(-b_, -c_));
    BigInt num = a_;
    num.mul_pow(2, b_ + k);
    num.mul_pow(5, c_ + k);
    std::string body = num.to_string();
    bool neg = false;
    if (body[0] == '-') {
        neg = true;
        body.erase(body.begin());
    }
    std::string out;
    if (k == 0) {
        out = body;
    } else if ((int64_t)body.size() <= k) {
        out = "0.";
        out.append((size_t)(k - (int64_t)body.size()), '0');
        out += body;
    } else {
        out = body.substr(0, body.size() - (size_t)k);
        out += '.';
        out += body.substr(body.size() - (size_t)k);
    }
    return neg ? "-" + out : out;
}

} // namespace cpog
