#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "basic.hh"
#include "cnf.hh"
#include "cpog_file.hh"
#include "pog.hh"

namespace cpog {

enum class Origin : uint8_t { Input, Defining, Asserted };

// Identified clauses with an active flag: the proof state.  Clause IDs are
// dense (the checker enforces sequential allocation), so storage is a flat
// pool plus an entry table indexed by id-1.
class ClauseDb {
public:
    ClauseId next_id() const { return (ClauseId)entries_.size() + 1; }
    ClauseId add(std::span<const Lit> lits, Origin origin);
    bool valid_id(ClauseId id) const { return id >= 1 && id <= (ClauseId)entries_.size(); }
    std::span<const Lit> clause(ClauseId id) const;
    Origin origin(ClauseId id) const { return entries_[(size_t)id - 1].origin; }
    bool active(ClauseId id) const { return entries_[(size_t)id - 1].active; }
    void set_active(ClauseId id, bool a) { entries_[(size_t)id - 1].active = a; }
    int64_t count() const { return (int64_t)entries_.size(); }

private:
    struct Entry {
        int64_t offset;
        int32_t len;
        Origin origin;
        bool active;
    };
    std::vector<Lit> pool_;
    std::vector<Entry> entries_;
};

// Reusable assignment scratch for unit propagation.  Two bits per variable
// so a contradictory seed set (tautological target) is representable.
class RupScratch {
public:
    void ensure(Var max_var);
    bool has(Lit l) const {
        uint8_t m = marks_[(size_t)var_of(l)];
        return is_pos(l) ? (m & 1) : (m & 2);
    }
    // Returns false if the opposite polarity was already present.
    bool assign(Lit l) {
        Var v = var_of(l);
        uint8_t bit = is_pos(l) ? 1 : 2;
        uint8_t m = marks_[(size_t)v];
        if (!(m & bit)) {
            marks_[(size_t)v] = m | bit;
            touched_.push_back(v);
        }
        return !(m & (3 ^ bit));
    }
    void clear();

private:
    std::vector<uint8_t> marks_;
    std::vector<Var> touched_;
};

// Strict RUP check in the LRAT style: every hint clause must either
// propagate a fresh unit or be the final, fully falsified conflict clause.
// A target whose negation is already contradictory (tautological target)
// is accepted exactly when the hint is empty.
// `get` maps a clause ID to its literals, or nullopt when the ID is
// unknown or inactive.  Returns an error description, or nullopt on success.
template <class GetClause>
std::optional<std::string> strict_rup_check(std::span<const Lit> target,
                                            std::span<const ClauseId> hints, GetClause get,
                                            RupScratch &scratch) {
    scratch.clear();
    bool seed_conflict = false;
    for (Lit l : target) {
        if (!scratch.assign(-l))
            seed_conflict = true;
    }
    if (hints.empty())
        return seed_conflict ? std::nullopt
                             : std::make_optional<std::string>("empty hint without conflict");
    for (size_t i = 0; i < hints.size(); i++) {
        auto cl = get(hints[i]);
        if (!cl)
            return "hint cites unknown or inactive clause " + std::to_string(hints[i]);
        int open = 0;
        Lit unit = 0;
        for (Lit l : *cl) {
            if (scratch.has(-l))
                continue; // falsified
            if (open == 1 && l == unit)
                continue; // duplicate occurrence
            unit = l;
            if (++open > 1)
                break;
        }
        if (open == 0) {
            if (i + 1 != hints.size())
                return "conflict before final hint clause " + std::to_string(hints[i]);
            return std::nullopt;
        }
        if (open > 1)
            return "hint clause " + std::to_string(hints[i]) + " neither propagates nor conflicts";
        if (scratch.has(unit))
            return "hint clause " + std::to_string(hints[i]) + " is already satisfied";
        scratch.assign(unit);
    }
    return "no conflict after final hint";
}

enum class VerdictKind : uint8_t { FullEquivalence, ReverseOnly, Rejected };

struct CheckResult {
    VerdictKind verdict = VerdictKind::Rejected;
    // 1-based index of the failing step; 0 means the final-state check.
    int64_t failed_step = 0;
    std::string reason;
    Pog pog;              // populated on FullEquivalence / ReverseOnly
    int64_t clause_count = 0;
};

struct CheckOptions {
    bool one_sided = false;
};

// Replays CPOG steps against the input formula.  Stops at the first
// invalid step.
class Checker {
public:
    Checker(const CnfFormula &cnf, CheckOptions opts);

    // Error description on failure; the checker must not be used further
    // after a failure.
    std::optional<std::string> apply(const CpogStep &step);
    CheckResult finish();

    const ClauseDb &db() const { return db_; }
    const Pog &pog() const { return pog_; }

private:
    std::optional<std::string> apply_add(const AddStep &);
    std::optional<std::string> apply_delete(const DeleteStep &);
    std::optional<std::string> apply_product(const ProductStep &);
    std::optional<std::string> apply_sum(const SumStep &);
    std::optional<std::string> apply_root(const RootStep &);

    std::optional<std::string> check_vars_known(std::span<const Lit> lits);
    std::optional<std::string> run_rup(std::span<const Lit> target,
                                       std::span<const ClauseId> hints, bool defining_only);

    ClauseDb db_;
    Pog pog_;
    std::vector<std::vector<Var>> deps_; // per node, sorted input vars
    RupScratch scratch_;
    Lit root_ = 0;
    bool one_sided_;
    std::unordered_set<ClauseId> assumptions_;
};

CheckResult check_proof(const CnfFormula &cnf, std::span<const CpogStep> steps,
                        CheckOptions opts = {});

} // namespace cpog
