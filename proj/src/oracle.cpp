#include "oracle.hh"

#include "evaluator.hh"

namespace cpog {

namespace {

// Clause as positive/negative masks for fast evaluation over packed
// assignments.  Only valid for var_count <= 64.
struct MaskClause {
    uint64_t pos = 0, neg = 0;
};

std::vector<MaskClause> to_masks(const CnfFormula &f) {
    std::vector<MaskClause> out;
    out.reserve(f.clauses.size());
    for (const auto &cl : f.clauses) {
        MaskClause m;
        for (Lit l : cl) {
            uint64_t bit = (uint64_t)1 << (var_of(l) - 1);
            if (is_pos(l))
                m.pos |= bit;
            else
                m.neg |= bit;
        }
        out.push_back(m);
    }
    return out;
}

} // namespace

bool cnf_satisfied(const CnfFormula &f, uint64_t bits) {
    for (const auto &cl : f.clauses) {
        bool sat = false;
        for (Lit l : cl) {
            bool v = (bits >> (var_of(l) - 1)) & 1;
            if (is_pos(l) ? v : !v) {
                sat = true;
                break;
            }
        }
        if (!sat)
            return false;
    }
    return true;
}

BigInt brute_count(const CnfFormula &f) {
    if (f.var_count > 24)
        throw OracleLimitError("brute_count limited to 24 variables, got " +
                               std::to_string(f.var_count));
    std::vector<MaskClause> masks = to_masks(f);
    uint64_t total = (uint64_t)1 << f.var_count;
    uint64_t count = 0;
    for (uint64_t a = 0; a < total; a++) {
        bool sat = true;
        for (const auto &m : masks) {
            if ((a & m.pos) == 0 && (~a & m.neg) == 0) {
                sat = false;
                break;
            }
        }
        count += sat;
    }
    return BigInt::from_int((int64_t)count);
}

Q25 brute_weighted(const CnfFormula &f, const std::function<Q25(Var)> &weight) {
    if (f.var_count > 20)
        throw OracleLimitError("brute_weighted limited to 20 variables, got " +
                               std::to_string(f.var_count));
    std::vector<MaskClause> masks = to_masks(f);
    std::vector<Q25> wpos, wneg;
    wpos.resize((size_t)f.var_count + 1);
    wneg.resize((size_t)f.var_count + 1);
    for (Var v = 1; v <= f.var_count; v++) {
        wpos[(size_t)v] = weight(v);
        wneg[(size_t)v] = Q25::one() - wpos[(size_t)v];
    }
    Q25 total = Q25::zero();
    uint64_t n = (uint64_t)1 << f.var_count;
    for (uint64_t a = 0; a < n; a++) {
        bool sat = true;
        for (const auto &m : masks) {
            if ((a & m.pos) == 0 && (~a & m.neg) == 0) {
                sat = false;
                break;
            }
        }
        if (!sat)
            continue;
        Q25 prod = Q25::one();
        for (Var v = 1; v <= f.var_count; v++)
            prod = prod * (((a >> (v - 1)) & 1) ? wpos[(size_t)v] : wneg[(size_t)v]);
        total = total + prod;
    }
    return total;
}

uint64_t brute_weighted_mod(const CnfFormula &f, const std::function<uint64_t(Var)> &weight,
                            uint64_t modulus) {
    if (f.var_count > 20)
        throw OracleLimitError("brute_weighted_mod limited to 20 variables");
    PrimeField field{modulus};
    std::vector<MaskClause> masks = to_masks(f);
    std::vector<uint64_t> wpos((size_t)f.var_count + 1), wneg((size_t)f.var_count + 1);
    for (Var v = 1; v <= f.var_count; v++) {
        wpos[(size_t)v] = weight(v) % modulus;
        wneg[(size_t)v] = field.sub(field.one(), wpos[(size_t)v]);
    }
    uint64_t total = 0;
    uint64_t n = (uint64_t)1 << f.var_count;
    for (uint64_t a = 0; a < n; a++) {
        bool sat = true;
        for (const auto &m : masks) {
            if ((a & m.pos) == 0 && (~a & m.neg) == 0) {
                sat = false;
                break;
            }
        }
        if (!sat)
            continue;
        uint64_t prod = field.one();
        for (Var v = 1; v <= f.var_count; v++)
            prod = field.mul(prod, ((a >> (v - 1)) & 1) ? wpos[(size_t)v] : wneg[(size_t)v]);
        total = field.add(total, prod);
    }
    return total;
}

std::vector<int8_t> extend_assignment(const Pog &p, const std::vector<int8_t> &alpha) {
    return p.evaluate_all(alpha);
}

bool equiv_over_x(const CnfFormula &f, const Pog &p) {
    if (f.var_count > 16)
        throw OracleLimitError("equiv_over_x limited to 16 variables, got " +
                               std::to_string(f.var_count));
    if (p.input_count != f.var_count)
        return false;
    uint64_t total = (uint64_t)1 << f.var_count;
    std::vector<int8_t> alpha((size_t)f.var_count + 1, 0);
    for (uint64_t a = 0; a < total; a++) {
        for (Var v = 1; v <= f.var_count; v++)
            alpha[(size_t)v] = (a >> (v - 1)) & 1;
        if (cnf_satisfied(f, a) != p.evaluate(p.root, alpha))
            return false;
    }
    return true;
}

} // namespace cpog
