#include "checker.hh"

#include <algorithm>

namespace cpog {

namespace {
// Dense var-indexed scratch tables cap the variable range; IDs and literal
// values themselves are 64-bit throughout.
constexpr Var kMaxVarIndex = (Var)1 << 31;
} // namespace

ClauseId ClauseDb::add(std::span<const Lit> lits, Origin origin) {
    Entry e;
    e.offset = (int64_t)pool_.size();
    e.len = (int32_t)lits.size();
    e.origin = origin;
    e.active = true;
    pool_.insert(pool_.end(), lits.begin(), lits.end());
    entries_.push_back(e);
    return (ClauseId)entries_.size();
}

std::span<const Lit> ClauseDb::clause(ClauseId id) const {
    const Entry &e = entries_[(size_t)id - 1];
    return {pool_.data() + e.offset, (size_t)e.len};
}

void RupScratch::ensure(Var max_var) {
    if ((Var)marks_.size() <= max_var)
        marks_.resize((size_t)max_var + 1, 0);
}

void RupScratch::clear() {
    for (Var v : touched_)
        marks_[(size_t)v] = 0;
    touched_.clear();
}

Checker::Checker(const CnfFormula &cnf, CheckOptions opts) : one_sided_(opts.one_sided) {
    if (cnf.var_count > kMaxVarIndex)
        throw InternalError("variable count exceeds supported index range");
    pog_.input_count = cnf.var_count;
    scratch_.ensure(cnf.var_count);
    for (const auto &cl : cnf.clauses)
        db_.add(cl, Origin::Input);
}

std::optional<std::string> Checker::check_vars_known(std::span<const Lit> lits) {
    for (Lit l : lits) {
        Var v = var_of(l);
        if (v > kMaxVarIndex)
            return "variable index " + std::to_string(v) + " exceeds supported range";
        if (!pog_.is_known_var(v))
            return "unknown variable " + std::to_string(v);
    }
    return std::nullopt;
}

std::optional<std::string> Checker::run_rup(std::span<const Lit> target,
                                            std::span<const ClauseId> hints, bool defining_only) {
    if (defining_only) {
        for (ClauseId h : hints) {
            if (!db_.valid_id(h))
                return "hint cites unknown clause " + std::to_string(h);
            if (db_.origin(h) != Origin::Defining)
                return "sum hint cites non-defining clause " + std::to_string(h);
        }
    }
    auto get = [this](ClauseId id) -> std::optional<std::span<const Lit>> {
        if (!db_.valid_id(id) || !db_.active(id))
            return std::nullopt;
        return db_.clause(id);
    };
    return strict_rup_check(target, hints, get, scratch_);
}

std::optional<std::string> Checker::apply(const CpogStep &step) {
    if (const auto *a = std::get_if<AddStep>(&step))
        return apply_add(*a);
    if (const auto *d = std::get_if<DeleteStep>(&step))
        return apply_delete(*d);
    if (const auto *p = std::get_if<ProductStep>(&step))
        return apply_product(*p);
    if (const auto *s = std::get_if<SumStep>(&step))
        return apply_sum(*s);
    return apply_root(std::get<RootStep>(step));
}

std::optional<std::string> Checker::apply_add(const AddStep &st) {
    if (st.id != db_.next_id())
        return "clause id " + std::to_string(st.id) + " out of order (expected " +
               std::to_string(db_.next_id()) + ")";
    if (auto err = check_vars_known(st.lits))
        return err;
    if (st.hints.empty()) {
        // Only the one-sided assumption may be admitted without proof:
        // a unit clause of the already-declared root literal.
        bool root_unit = root_ != 0 && st.lits.size() == 1 && st.lits[0] == root_ &&
                         pog_.is_known_var(var_of(root_));
        if (!(one_sided_ && root_unit))
            return "clause addition with empty hint";
        ClauseId id = db_.add(st.lits, Origin::Asserted);
        assumptions_.insert(id);
        return std::nullopt;
    }
    if (auto err = run_rup(st.lits, st.hints, false))
        return err;
    db_.add(st.lits, Origin::Asserted);
    return std::nullopt;
}

std::optional<std::string> Checker::apply_delete(const DeleteStep &st) {
    if (!db_.valid_id(st.id))
        return "deletion of unknown clause " + std::to_string(st.id);
    if (!db_.active(st.id))
        return "deletion of inactive clause " + std::to_string(st.id);
    if (db_.origin(st.id) == Origin::Defining)
        return "deletion of defining clause " + std::to_string(st.id);
    // The clause must be implied by the remaining ones, so remove it first.
    db_.set_active(st.id, false);
    if (auto err = run_rup(db_.clause(st.id), st.hints, false)) {
        db_.set_active(st.id, true);
        return "deletion of clause " + std::to_string(st.id) + " failed: " + *err;
    }
    return std::nullopt;
}

std::optional<std::string> Checker::apply_product(const ProductStep &st) {
    if (st.id != db_.next_id())
        return "clause id " + std::to_string(st.id) + " out of order (expected " +
               std::to_string(db_.next_id()) + ")";
    if (st.ext_var > kMaxVarIndex)
        return "extension variable exceeds supported range";
    if (pog_.is_known_var(st.ext_var))
        return "extension variable " + std::to_string(st.ext_var) + " already in use";
    if (auto err = check_vars_known(st.args))
        return err;
    // Arguments must have pairwise disjoint dependency sets: gather all
    // child sets, sort once, and look for an adjacent duplicate.
    std::vector<Var> merged;
    {
        size_t total = 0;
        for (Lit a : st.args) {
            Var av = var_of(a);
            total += pog_.is_input_var(av) ? 1 : deps_[(size_t)pog_.index_of(av)].size();
        }
        merged.reserve(total);
        for (Lit a : st.args) {
            Var av = var_of(a);
            if (pog_.is_input_var(av)) {
                merged.push_back(av);
            } else {
                const auto &child = deps_[(size_t)pog_.index_of(av)];
                merged.insert(merged.end(), child.begin(), child.end());
            }
        }
        std::sort(merged.begin(), merged.end());
        for (size_t i = 0; i + 1 < merged.size(); i++)
            if (merged[i] == merged[i + 1])
                return "product arguments share variable " + std::to_string(merged[i]);
    }
    for (auto &[id, lits] : expand_defining(st))
        db_.add(lits, Origin::Defining);
    scratch_.ensure(st.ext_var);
    pog_.add_node(PogKind::Product, st.ext_var, st.args, st.id);
    deps_.push_back(std::move(merged));
    return std::nullopt;
}

std::optional<std::string> Checker::apply_sum(const SumStep &st) {
    if (st.id != db_.next_id())
        return "clause id " + std::to_string(st.id) + " out of order (expected " +
               std::to_string(db_.next_id()) + ")";
    if (st.ext_var > kMaxVarIndex)
        return "extension variable exceeds supported range";
    if (pog_.is_known_var(st.ext_var))
        return "extension variable " + std::to_string(st.ext_var) + " already in use";
    Lit args[2] = {st.left, st.right};
    if (auto err = check_vars_known(args))
        return err;
    // Mutual exclusion of the two arguments, provable from defining
    // clauses alone.
    Lit target[2] = {-st.left, -st.right};
    if (auto err = run_rup(target, st.hints, true))
        return "sum mutual-exclusion proof failed: " + *err;
    for (auto &[id, lits] : expand_defining(st))
        db_.add(lits, Origin::Defining);
    scratch_.ensure(st.ext_var);
    // Dependency set: union, overlap permitted.
    std::vector<Var> merged;
    for (Lit a : args) {
        Var av = var_of(a);
        std::vector<Var> single;
        std::span<const Var> child;
        if (pog_.is_input_var(av)) {
            single.push_back(av);
            child = single;
        } else {
            child = deps_[(size_t)pog_.index_of(av)];
        }
        std::vector<Var> next;
        next.reserve(merged.size() + child.size());
        std::set_union(merged.begin(), merged.end(), child.begin(), child.end(),
                       std::back_inserter(next));
        merged = std::move(next);
    }
    pog_.add_node(PogKind::Sum, st.ext_var, {st.left, st.right}, st.id);
    deps_.push_back(std::move(merged));
    return std::nullopt;
}

std::optional<std::string> Checker::apply_root(const RootStep &st) {
    if (root_ != 0)
        return "duplicate root declaration";
    root_ = st.lit;
    return std::nullopt;
}

CheckResult Checker::finish() {
    CheckResult res;
    res.clause_count = db_.count();
    if (root_ == 0) {
        res.reason = "no root declaration";
        return res;
    }
    if (!pog_.is_known_var(var_of(root_))) {
        res.reason = "root literal references undeclared variable " + std::to_string(var_of(root_));
        return res;
    }
    ClauseId root_unit = 0;
    for (ClauseId id = 1; id <= db_.count(); id++) {
        if (!db_.active(id))
            continue;
        switch (db_.origin(id)) {
        case Origin::Input:
            res.reason = "input clause " + std::to_string(id) + " still active";
            return res;
        case Origin::Defining:
            break;
        case Origin::Asserted: {
            auto cl = db_.clause(id);
            if (root_unit != 0) {
                res.reason = "more than one asserted clause active at end of proof";
                return res;
            }
            if (!(cl.size() == 1 && cl[0] == root_)) {
                res.reason = "active asserted clause " + std::to_string(id) +
                             " is not the root unit clause";
                return res;
            }
            root_unit = id;
            break;
        }
        }
    }
    if (root_unit == 0) {
        res.reason = "no asserted unit clause for the root literal";
        return res;
    }
    pog_.root = root_;
    res.verdict = assumptions_.count(root_unit) ? VerdictKind::ReverseOnly
                                                : VerdictKind::FullEquivalence;
    res.pog = std::move(pog_);
    return res;
}

CheckResult check_proof(const CnfFormula &cnf, std::span<const CpogStep> steps,
                        CheckOptions opts) {
    Checker chk(cnf, opts);
    for (size_t i = 0; i < steps.size(); i++) {
        if (auto err = chk.apply(steps[i])) {
            CheckResult res;
            res.verdict = VerdictKind::Rejected;
            res.failed_step = (int64_t)i + 1;
            res.reason = *err;
            res.clause_count = chk.db().count();
            return res;
        }
    }
    return chk.finish();
}

} // namespace cpog
