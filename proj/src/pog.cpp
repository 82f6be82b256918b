#include "pog.hh"

#include <algorithm>
#include <cassert>

namespace cpog {

int64_t Pog::index_of(Var v) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), std::make_pair(v, (int64_t)-1));
    if (it != index_.end() && it->first == v)
        return it->second;
    return -1;
}

void Pog::add_node(PogKind kind, Var ext_var, std::vector<Lit> args, ClauseId def_id) {
    if (is_known_var(ext_var))
        throw InternalError("extension variable reused: " + std::to_string(ext_var));
    for (Lit a : args)
        if (!is_known_var(var_of(a)))
            throw InternalError("argument references unknown variable: " + std::to_string(a));
    if (kind == PogKind::Sum && args.size() != 2)
        throw InternalError("sum node must have exactly two arguments");
    PogNode n{kind, ext_var, std::move(args), def_id};
    nodes.push_back(std::move(n));
    std::pair<Var, int64_t> entry{ext_var, (int64_t)nodes.size() - 1};
    // Extension variables almost always arrive in increasing order.
    if (index_.empty() || index_.back() < entry)
        index_.push_back(entry);
    else
        index_.insert(std::lower_bound(index_.begin(), index_.end(), entry), entry);
}

int64_t Pog::size() const {
    int64_t total = 0;
    for (const auto &n : nodes)
        total += 1 + (int64_t)n.args.size();
    return total;
}

std::vector<Var> Pog::dependency_set(Lit lit) const {
    Var v = var_of(lit);
    if (is_input_var(v))
        return {v};
    int64_t idx = index_of(v);
    if (idx < 0)
        throw InternalError("dependency_set: undeclared variable " + std::to_string(v));
    // One bottom-up pass over the prefix that can reach idx.
    std::vector<std::vector<Var>> deps((size_t)idx + 1);
    for (int64_t i = 0; i <= idx; i++) {
        std::vector<Var> acc;
        for (Lit a : nodes[(size_t)i].args) {
            Var av = var_of(a);
            std::vector<Var> single;
            const std::vector<Var> *child;
            if (is_input_var(av)) {
                single.push_back(av);
                child = &single;
            } else {
                child = &deps[(size_t)index_of(av)];
            }
            std::vector<Var> merged;
            merged.reserve(acc.size() + child->size());
            std::set_union(acc.begin(), acc.end(), child->begin(), child->end(),
                           std::back_inserter(merged));
            acc = std::move(merged);
        }
        deps[(size_t)i] = std::move(acc);
    }
    return deps[(size_t)idx];
}

BigInt Pog::tree_size(Lit lit) const {
    Var v = var_of(lit);
    if (is_input_var(v))
        return BigInt();
    int64_t idx = index_of(v);
    if (idx < 0)
        throw InternalError("tree_size: undeclared variable " + std::to_string(v));
    std::vector<BigInt> sizes((size_t)idx + 1);
    for (int64_t i = 0; i <= idx; i++) {
        const PogNode &n = nodes[(size_t)i];
        BigInt t = BigInt::from_int((int64_t)n.args.size() + 1);
        for (Lit a : n.args) {
            Var av = var_of(a);
            if (!is_input_var(av))
                t += sizes[(size_t)index_of(av)];
        }
        sizes[(size_t)i] = std::move(t);
    }
    return sizes[(size_t)idx];
}

Pog::Ratio Pog::tree_ratio() const {
    int64_t sz = size();
    if (sz == 0)
        throw InternalError("tree_ratio: empty graph");
    return Ratio{tree_size(root), BigInt::from_int(sz)};
}

std::vector<int8_t> Pog::evaluate_all(const std::vector<int8_t> &alpha) const {
    std::vector<int8_t> val(nodes.size(), 0);
    auto lit_value = [&](Lit a, int64_t upto) -> bool {
        Var av = var_of(a);
        bool v;
        if (is_input_var(av)) {
            assert((size_t)av < alpha.size());
            v = alpha[(size_t)av] != 0;
        } else {
            int64_t j = index_of(av);
            assert(j >= 0 && j < upto);
            (void)upto;
            v = val[(size_t)j] != 0;
        }
        return is_pos(a) ? v : !v;
    };
    for (size_t i = 0; i < nodes.size(); i++) {
        const PogNode &n = nodes[i];
        bool v;
        if (n.kind == PogKind::Product) {
            v = true;
            for (Lit a : n.args)
                v = v && lit_value(a, (int64_t)i);
        } else {
            v = lit_value(n.args[0], (int64_t)i) || lit_value(n.args[1], (int64_t)i);
        }
        val[i] = v ? 1 : 0;
    }
    return val;
}

bool Pog::evaluate(Lit lit, const std::vector<int8_t> &alpha) const {
    Var v = var_of(lit);
    bool value;
    if (is_input_var(v)) {
        value = alpha[(size_t)v] != 0;
    } else {
        int64_t idx = index_of(v);
        if (idx < 0)
            throw InternalError("evaluate: undeclared variable " + std::to_string(v));
        value = evaluate_all(alpha)[(size_t)idx] != 0;
    }
    return is_pos(lit) ? value : !value;
}

PartitionReport Pog::check_partitioned(int semantic_limit) const {
    // Structural check on products.
    for (size_t i = 0; i < nodes.size(); i++) {
        const PogNode &n = nodes[i];
        if (n.kind != PogKind::Product)
            continue;
        std::vector<Var> acc;
        for (Lit a : n.args) {
            std::vector<Var> d = dependency_set(a);
            std::vector<Var> inter;
            std::set_intersection(acc.begin(), acc.end(), d.begin(), d.end(),
                                  std::back_inserter(inter));
            if (!inter.empty())
                return {false, (int64_t)i,
                        "product arguments share variable " + std::to_string(inter[0])};
            std::vector<Var> merged;
            std::set_union(acc.begin(), acc.end(), d.begin(), d.end(), std::back_inserter(merged));
            acc = std::move(merged);
        }
    }
    // Semantic check on sums by exhaustive evaluation.
    bool have_sum = false;
    for (const auto &n : nodes)
        have_sum |= n.kind == PogKind::Sum;
    if (have_sum) {
        if (input_count > semantic_limit)
            return {false, -1, "too many variables for exhaustive sum check"};
        std::vector<int8_t> alpha((size_t)input_count + 1, 0);
        auto lit_value = [&](Lit a, const std::vector<int8_t> &val) -> bool {
            Var av = var_of(a);
            bool v = is_input_var(av) ? alpha[(size_t)av] != 0
                                      : val[(size_t)index_of(av)] != 0;
            return is_pos(a) ? v : !v;
        };
        for (uint64_t m = 0; m < (uint64_t(1) << input_count); m++) {
            for (Var v = 1; v <= input_count; v++)
                alpha[(size_t)v] = (m >> (v - 1)) & 1;
            std::vector<int8_t> val = evaluate_all(alpha);
            for (size_t i = 0; i < nodes.size(); i++) {
                const PogNode &n = nodes[i];
                if (n.kind != PogKind::Sum)
                    continue;
                if (lit_value(n.args[0], val) && lit_value(n.args[1], val))
                    return {false, (int64_t)i, "sum arguments share a model"};
            }
        }
    }
    return {};
}

} // namespace cpog
