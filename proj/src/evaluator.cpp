#include "evaluator.hh"

#include <charconv>
#include <random>

namespace cpog {

bool is_prime_u64(uint64_t n) {
    if (n < 2)
        return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0)
            return n == p;
    }
    // Deterministic Miller-Rabin for 64-bit integers.
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        r++;
    }
    auto mulmod = [n](uint64_t a, uint64_t b) {
        return (uint64_t)((unsigned __int128)a * b % n);
    };
    auto powmod = [&](uint64_t a, uint64_t e) {
        uint64_t acc = 1;
        while (e) {
            if (e & 1)
                acc = mulmod(acc, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return acc;
    };
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a % n, d);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (int i = 1; i < r && witness; i++) {
            x = mulmod(x, x);
            if (x == n - 1)
                witness = false;
        }
        if (witness)
            return false;
    }
    return true;
}

Q25 density(const Pog &p) {
    Q25Ring ring;
    Q25 half = Q25::half();
    return ring_eval<Q25Ring>(p, p.root, [&half](Var) { return half; }, ring);
}

BigInt unweighted_count(const Pog &p, Var n) {
    Q25 count = density(p).scale2(n);
    if (!count.is_integer() || count.is_negative())
        throw InternalError("model count is not a nonnegative integer: " + count.to_decimal());
    return count.to_integer();
}

void WeightSet::set(Lit lit, const Q25 &w) {
    auto &entry = entries[var_of(lit)];
    if (is_pos(lit))
        entry.first = w;
    else
        entry.second = w;
}

WeightSet parse_weights_file(std::string_view text) {
    WeightSet ws;
    int line = 1;
    size_t pos = 0;
    auto skip_ws = [&]() {
        while (pos < text.size() && isspace((unsigned char)text[pos])) {
            if (text[pos] == '\n')
                line++;
            pos++;
        }
    };
    auto token = [&]() {
        skip_ws();
        size_t begin = pos;
        while (pos < text.size() && !isspace((unsigned char)text[pos]))
            pos++;
        return text.substr(begin, pos - begin);
    };
    for (;;) {
        skip_ws();
        if (pos >= text.size())
            break;
        if (text[pos] == 'c') {
            while (pos < text.size() && text[pos] != '\n')
                pos++;
            continue;
        }
        std::string_view lt = token();
        int64_t lit = 0;
        auto res = std::from_chars(lt.data(), lt.data() + lt.size(), lit);
        if (res.ec != std::errc() || res.ptr != lt.data() + lt.size() || lit == 0)
            throw ParseError(line, 0, "expected literal in weights file, found '" + std::string(lt) + "'");
        std::string_view wt = token();
        auto w = Q25::parse_decimal(wt);
        if (!w)
            throw ParseError(line, 0, "weight '" + std::string(wt) + "' is not a finite decimal");
        ws.set(lit, *w);
    }
    return ws;
}

WeightSet weights_from_annotations(const CnfFormula &f) {
    WeightSet ws;
    for (const auto &[lit, text] : f.weight_lines) {
        auto w = Q25::parse_decimal(text);
        if (!w)
            throw ParseError(0, 0, "weight annotation '" + text + "' is not a finite decimal");
        ws.set(lit, *w);
    }
    return ws;
}

WeightedOutcome weighted_count(const Pog &p, const WeightSet &weights, Var n) {
    WeightedOutcome out;
    // Per-variable evaluation weight w(x) = W(x)/r(x) and rescale factor
    // r(x) = W(x) + W(-x).  Unannotated variables contribute w = 1/2, r = 1.
    std::unordered_map<Var, Q25> eval_weight;
    eval_weight.reserve(weights.entries.size());
    Q25 rescale = Q25::one();
    for (const auto &[v, entry] : weights.entries) {
        if (v > n)
            continue;
        Q25 wp, wn;
        if (entry.first && entry.second) {
            wp = *entry.first;
            wn = *entry.second;
        } else if (entry.first) {
            wp = *entry.first;
            wn = Q25::one() - wp;
        } else {
            wn = *entry.second;
            wp = Q25::one() - wn;
        }
        Q25 r = wp + wn;
        if (r.is_zero()) {
            out.error = "weights of variable " + std::to_string(v) + " sum to zero";
            return out;
        }
        auto w = wp.exact_div(r);
        if (!w) {
            out.error = "normalized weight of variable " + std::to_string(v) +
                        " is not representable (rescale factor " + r.to_decimal() + ")";
            return out;
        }
        eval_weight.emplace(v, *w);
        rescale = rescale * r;
    }
    Q25Ring ring;
    Q25 half = Q25::half();
    Q25 val = ring_eval<Q25Ring>(
        p, p.root,
        [&](Var v) {
            auto it = eval_weight.find(v);
            return it == eval_weight.end() ? half : it->second;
        },
        ring);
    out.ok = true;
    out.value = val * rescale;
    return out;
}

uint64_t function_hash(const Pog &p, uint64_t seed, uint64_t modulus) {
    if (!is_prime_u64(modulus))
        throw std::invalid_argument("hash modulus " + std::to_string(modulus) + " is not prime");
    if (modulus >= ((uint64_t)1 << 63))
        throw std::invalid_argument("hash modulus too large");
    PrimeField field{modulus};
    std::mt19937_64 rng(seed);
    std::vector<uint64_t> w((size_t)p.input_count + 1, 0);
    for (Var v = 1; v <= p.input_count; v++)
        w[(size_t)v] = rng() % modulus;
    return ring_eval<PrimeField>(p, p.root, [&w](Var v) { return w[(size_t)v]; }, field);
}

} // namespace cpog
