#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "basic.hh"

namespace cpog {

// One step of a CPOG proof file.
//   <id> a <lits> 0 <hints> 0     clause addition with RUP hint
//   d <id> <hints> 0              clause deletion with RUP hint
//   <id> p <v> <lits> 0           product declaration
//   <id> s <v> <l1> <l2> <hints> 0  sum declaration with mutex hint
//   r <lit>                       root declaration
// Comment lines start with 'c'.  The parser performs no semantic checks;
// those belong to the checker.
struct AddStep {
    ClauseId id = 0;
    std::vector<Lit> lits;
    std::vector<ClauseId> hints;
    bool operator==(const AddStep &) const = default;
};
struct DeleteStep {
    ClauseId id = 0;
    std::vector<ClauseId> hints;
    bool operator==(const DeleteStep &) const = default;
};
struct ProductStep {
    ClauseId id = 0;
    Var ext_var = 0;
    std::vector<Lit> args;
    bool operator==(const ProductStep &) const = default;
};
struct SumStep {
    ClauseId id = 0;
    Var ext_var = 0;
    Lit left = 0, right = 0;
    std::vector<ClauseId> hints;
    bool operator==(const SumStep &) const = default;
};
struct RootStep {
    Lit lit = 0;
    bool operator==(const RootStep &) const = default;
};

using CpogStep = std::variant<AddStep, DeleteStep, ProductStep, SumStep, RootStep>;

// Throws ParseError.  Exactly one root declaration is required.
std::vector<CpogStep> parse_cpog(std::string_view text);

// Canonical text form, one step per line; parse_cpog(serialize_cpog(s)) == s.
std::string serialize_cpog(const std::vector<CpogStep> &steps);
std::string serialize_step(const CpogStep &step);

// The implicit clauses a declaration adds, with their IDs.
// Product of arity k: clause id   = ( v, -l1, ..., -lk )
//                     clause id+j = ( -v, lj )            for j = 1..k
// Sum:                clause id   = ( -v, l1, l2 )
//                     clause id+1 = ( v, -l1 )
//                     clause id+2 = ( v, -l2 )
std::vector<std::pair<ClauseId, std::vector<Lit>>> expand_defining(const ProductStep &step);
std::vector<std::pair<ClauseId, std::vector<Lit>>> expand_defining(const SumStep &step);

} // namespace cpog
