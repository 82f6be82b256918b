// Command-line front end for the certified knowledge-compilation toolkit.
// Subcommands: check, count, gen, oracle.  All reports are line-oriented
// key-value text; key names are part of the interface.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cpog.h"

namespace {

struct FormulaHandle {
    cpog_formula *f = nullptr;
    ~FormulaHandle() { cpog_formula_free(f); }
};
struct ProofHandle {
    cpog_proof *p = nullptr;
    ~ProofHandle() { cpog_proof_free(p); }
};
struct SessionHandle {
    cpog_session *s = nullptr;
    ~SessionHandle() { cpog_session_free(s); }
};

int fail(int rc) {
    std::cerr << "error: " << cpog_last_error() << "\n";
    return rc;
}

void print_owned(char *s) {
    std::cout << s;
    cpog_string_free(s);
}

bool read_file(const std::string &path, std::string &out) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return false;
    std::ostringstream ss;
    ss << is.rdbuf();
    out = ss.str();
    return true;
}

int report_verdict(cpog_session *s) {
    switch (cpog_session_verdict(s)) {
    case CPOG_VERDICT_FULL:
        std::cout << "VERIFIED FULL\n";
        return CPOG_OK;
    case CPOG_VERDICT_REVERSE_ONLY:
        std::cout << "VERIFIED REVERSE-ONLY\n";
        return CPOG_OK;
    default: {
        int64_t step = cpog_session_failed_step(s);
        std::cout << "REJECTED step=" << (step > 0 ? std::to_string(step) : "final")
                  << " reason=" << cpog_session_reason(s) << "\n";
        return CPOG_REJECTED;
    }
    }
}

int run_check(const std::string &cnf_path, const std::string &cpog_path, bool one_sided,
              bool print_cnf, bool print_cpog) {
    FormulaHandle f;
    if (int rc = cpog_formula_load(cnf_path.c_str(), &f.f))
        return fail(rc);
    ProofHandle p;
    if (int rc = cpog_proof_load(cpog_path.c_str(), &p.p))
        return fail(rc);
    if (print_cnf) {
        char *text = nullptr;
        if (int rc = cpog_formula_print(f.f, &text))
            return fail(rc);
        print_owned(text);
    }
    if (print_cpog) {
        char *text = nullptr;
        if (int rc = cpog_proof_print(p.p, &text))
            return fail(rc);
        print_owned(text);
    }
    SessionHandle s;
    if (int rc = cpog_check(f.f, p.p, one_sided ? CPOG_CHECK_ONE_SIDED : 0, &s.s))
        return fail(rc);
    return report_verdict(s.s);
}

int run_count(const std::string &cnf_path, const std::string &cpog_path,
              const std::string &weights_path, uint64_t modulus, uint64_t seed,
              bool one_sided) {
    FormulaHandle f;
    if (int rc = cpog_formula_load(cnf_path.c_str(), &f.f))
        return fail(rc);
    ProofHandle p;
    if (int rc = cpog_proof_load(cpog_path.c_str(), &p.p))
        return fail(rc);
    SessionHandle s;
    if (int rc = cpog_check(f.f, p.p, one_sided ? CPOG_CHECK_ONE_SIDED : 0, &s.s))
        return fail(rc);
    if (int rc = report_verdict(s.s))
        return rc; // never count on a rejected proof
    char *models = nullptr;
    if (int rc = cpog_count_models(s.s, &models))
        return fail(rc);
    std::cout << "models " << models << "\n";
    cpog_string_free(models);
    if (!weights_path.empty()) {
        std::string text;
        if (!read_file(weights_path, text)) {
            std::cerr << "error: cannot open " << weights_path << "\n";
            return CPOG_PARSE_ERROR;
        }
        char *value = nullptr;
        if (int rc = cpog_count_weighted(s.s, f.f, text.c_str(), &value))
            return fail(rc);
        std::cout << "weighted-count " << value << "\n";
        cpog_string_free(value);
    } else if (cpog_formula_weight_annotations(f.f) > 0) {
        char *value = nullptr;
        if (int rc = cpog_count_weighted(s.s, f.f, nullptr, &value))
            return fail(rc);
        std::cout << "weighted-count " << value << "\n";
        cpog_string_free(value);
    }
    if (modulus) {
        uint64_t hash = 0;
        if (int rc = cpog_function_hash(s.s, seed, modulus, &hash))
            return fail(rc);
        std::cout << "modulus " << modulus << "\n";
        std::cout << "seed " << seed << "\n";
        std::cout << "hash " << hash << "\n";
    }
    return CPOG_OK;
}

int run_gen(const std::string &cnf_path, const std::string &ddnnf_path,
            const std::string &out_path, const std::string &mode, bool no_lemmas,
            bool no_grouping, const std::string &solver, int64_t threshold) {
    FormulaHandle f;
    if (int rc = cpog_formula_load(cnf_path.c_str(), &f.f))
        return fail(rc);
    cpog_gen_options options{};
    options.mode = CPOG_GEN_HYBRID;
    if (mode == "structural")
        options.mode = CPOG_GEN_STRUCTURAL;
    else if (mode == "mono")
        options.mode = CPOG_GEN_MONOLITHIC;
    else if (mode == "one-sided")
        options.mode = CPOG_GEN_ONE_SIDED;
    options.use_lemmas = !no_lemmas;
    options.use_grouping = !no_grouping;
    options.tree_threshold = threshold;
    options.solver_command = solver.empty() ? nullptr : solver.c_str();
    char *text = nullptr;
    cpog_gen_stats stats{};
    if (int rc = cpog_generate_file(f.f, ddnnf_path.c_str(), &options, &text, &stats))
        return fail(rc);
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
        std::cerr << "error: cannot write " << out_path << "\n";
        cpog_string_free(text);
        return CPOG_GENERATION_ERROR;
    }
    os << text;
    cpog_string_free(text);
    std::cout << "mode " << stats.selected_mode << "\n";
    std::cout << "pog-nodes " << stats.pog_nodes << "\n";
    std::cout << "defining-clauses " << stats.defining_clauses << "\n";
    std::cout << "tree-ratio " << stats.tree_ratio << "\n";
    std::cout << "declarations " << stats.declarations << "\n";
    std::cout << "assertions " << stats.assertions << "\n";
    std::cout << "deletions " << stats.deletions << "\n";
    std::cout << "lemmas " << stats.lemmas << "\n";
    std::cout << "lemma-applications " << stats.lemma_applications << "\n";
    std::cout << "sat-calls " << stats.sat_calls << "\n";
    return CPOG_OK;
}

int run_oracle(const std::string &cnf_path, const std::string &weights_path) {
    FormulaHandle f;
    if (int rc = cpog_formula_load(cnf_path.c_str(), &f.f))
        return fail(rc);
    char *models = nullptr;
    if (int rc = cpog_oracle_count(f.f, &models))
        return fail(rc);
    std::cout << "models " << models << "\n";
    cpog_string_free(models);
    std::string text;
    const char *weights = nullptr;
    if (!weights_path.empty()) {
        if (!read_file(weights_path, text)) {
            std::cerr << "error: cannot open " << weights_path << "\n";
            return CPOG_PARSE_ERROR;
        }
        weights = text.c_str();
    }
    char *value = nullptr;
    if (int rc = cpog_oracle_weighted(f.f, weights, &value))
        return fail(rc);
    std::cout << "weighted-count " << value << "\n";
    cpog_string_free(value);
    return CPOG_OK;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"certified knowledge compilation and model counting"};
    app.require_subcommand(1);

    std::string cnf_path, cpog_path, ddnnf_path, out_path, weights_path;
    bool one_sided = false, print_cnf = false, print_cpog = false;
    bool no_lemmas = false, no_grouping = false;
    uint64_t modulus = 0, seed = 1;
    std::string mode = "hybrid";
    int64_t threshold = 1000000;
    const char *env_solver = std::getenv("CPOG_SOLVER");
    std::string solver = env_solver ? env_solver : "";

    auto *check = app.add_subcommand("check", "verify a CPOG proof against a CNF formula");
    check->add_option("cnf", cnf_path)->required();
    check->add_option("cpog", cpog_path)->required();
    check->add_flag("--one-sided", one_sided, "admit an unhinted root-unit assumption");
    check->add_flag("--print-cnf", print_cnf, "reprint the parsed formula for diffing");
    check->add_flag("--print-cpog", print_cpog, "reprint the parsed proof for diffing");

    auto *count = app.add_subcommand("count", "verify, then count models of the POG");
    count->add_option("cnf", cnf_path)->required();
    count->add_option("cpog", cpog_path)->required();
    count->add_option("--weights", weights_path, "weights file of '<lit> <decimal>' lines");
    count->add_option("--mod", modulus, "prime modulus for function hashing");
    count->add_option("--seed", seed, "seed for function hashing");
    count->add_flag("--one-sided", one_sided);

    auto *gen = app.add_subcommand("gen", "generate a CPOG proof from a decision-DNNF graph");
    gen->add_option("cnf", cnf_path)->required();
    gen->add_option("ddnnf", ddnnf_path)->required();
    gen->add_option("-o,--output", out_path)->required();
    gen->add_option("--mode", mode)->check(CLI::IsMember({"hybrid", "structural", "mono", "one-sided"}));
    gen->add_flag("--no-lemmas", no_lemmas);
    gen->add_flag("--no-grouping", no_grouping);
    gen->add_option("--solver", solver, "external solver command with {cnf} and {proof}");
    gen->add_option("--threshold", threshold, "hybrid tree-size switch threshold");

    auto *oracle = app.add_subcommand("oracle", "brute-force reference counts (small inputs)");
    oracle->add_option("cnf", cnf_path)->required();
    oracle->add_option("--weights", weights_path);

    CLI11_PARSE(app, argc, argv);

    if (check->parsed())
        return run_check(cnf_path, cpog_path, one_sided, print_cnf, print_cpog);
    if (count->parsed())
        return run_count(cnf_path, cpog_path, weights_path, modulus, seed, one_sided);
    if (gen->parsed())
        return run_gen(cnf_path, ddnnf_path, out_path, mode, no_lemmas, no_grouping, solver,
                       threshold);
    return run_oracle(cnf_path, weights_path);
}
