#include "cpog.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "checker.hh"
#include "cnf.hh"
#include "cpog_file.hh"
#include "ddnnf.hh"
#include "evaluator.hh"
#include "generator.hh"
#include "oracle.hh"

using namespace cpog;

struct cpog_formula {
    CnfFormula f;
};
struct cpog_proof {
    std::vector<CpogStep> steps;
};
struct cpog_session {
    CheckResult result;
    Var var_count = 0;
};

namespace {

thread_local std::string g_error;

char *dup_string(const std::string &s) {
    char *out = (char *)malloc(s.size() + 1);
    if (out)
        memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int set_error(int code, const std::string &msg) {
    g_error = msg;
    return code;
}

// Uniform exception-to-status mapping around each entry point.
template <class Fn>
int guarded(Fn &&fn) {
    try {
        return fn();
    } catch (const ParseError &e) {
        return set_error(CPOG_PARSE_ERROR, e.what());
    } catch (const GenError &e) {
        return set_error(CPOG_GENERATION_ERROR, e.what());
    } catch (const OracleLimitError &e) {
        return set_error(CPOG_PARSE_ERROR, e.what());
    } catch (const std::invalid_argument &e) {
        return set_error(CPOG_PARSE_ERROR, e.what());
    } catch (const std::exception &e) {
        return set_error(CPOG_INTERNAL_ERROR, e.what());
    }
}

int read_file(const char *path, std::string &out) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        return set_error(CPOG_PARSE_ERROR, std::string("cannot open ") + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    out = ss.str();
    return (int)CPOG_OK;
}

GenOptions convert_options(const cpog_gen_options *options) {
    GenOptions o;
    if (!options)
        return o;
    switch (options->mode) {
    case CPOG_GEN_STRUCTURAL: o.mode = GenMode::Structural; break;
    case CPOG_GEN_MONOLITHIC: o.mode = GenMode::Monolithic; break;
    case CPOG_GEN_ONE_SIDED: o.mode = GenMode::OneSided; break;
    default: o.mode = GenMode::Hybrid; break;
    }
    o.use_lemmas = options->use_lemmas != 0;
    o.use_grouping = options->use_grouping != 0;
    if (options->tree_threshold > 0)
        o.tree_threshold = options->tree_threshold;
    if (options->solver_command)
        o.solver_command = options->solver_command;
    return o;
}

int run_generate(const cpog_formula *f, const std::string &ddnnf_text,
                 const cpog_gen_options *options, char **cpog_text_out,
                 cpog_gen_stats *stats_out) {
    DdnnfGraph graph = parse_d4(ddnnf_text);
    GenResult res = generate(f->f, graph, convert_options(options));
    if (cpog_text_out)
        *cpog_text_out = dup_string(serialize_cpog(res.steps));
    if (stats_out) {
        memset(stats_out, 0, sizeof(*stats_out));
        snprintf(stats_out->selected_mode, sizeof(stats_out->selected_mode), "%s",
                 res.stats.selected_mode.c_str());
        stats_out->pog_nodes = res.stats.pog_nodes;
        stats_out->defining_clauses = res.stats.defining_clauses;
        stats_out->declarations = res.stats.declarations;
        stats_out->assertions = res.stats.assertions;
        stats_out->deletions = res.stats.deletions;
        stats_out->lemmas = res.stats.lemmas;
        stats_out->lemma_applications = res.stats.lemma_applications;
        stats_out->sat_calls = res.stats.sat_calls;
        snprintf(stats_out->tree_ratio, sizeof(stats_out->tree_ratio), "%s",
                 res.stats.tree_ratio.c_str());
    }
    return (int)CPOG_OK;
}

int session_weights(const cpog_session *s, const WeightSet &ws, char **out) {
    WeightedOutcome res = weighted_count(s->result.pog, ws, s->var_count);
    if (!res.ok)
        return set_error(CPOG_GENERATION_ERROR, res.error);
    *out = dup_string(res.value.to_decimal());
    return (int)CPOG_OK;
}

} // namespace

extern "C" {

const char *cpog_last_error(void) { return g_error.c_str(); }

void cpog_string_free(char *s) { free(s); }

int cpog_formula_parse(const char *text, size_t len, cpog_formula **out) {
    return guarded([&]() {
        auto *f = new cpog_formula{parse_dimacs(std::string_view(text, len))};
        *out = f;
        return (int)CPOG_OK;
    });
}

int cpog_formula_load(const char *path, cpog_formula **out) {
    return guarded([&]() {
        std::string text;
        if (int rc = read_file(path, text))
            return rc;
        auto *f = new cpog_formula{parse_dimacs(text)};
        *out = f;
        return (int)CPOG_OK;
    });
}

void cpog_formula_free(cpog_formula *f) { delete f; }

int64_t cpog_formula_vars(const cpog_formula *f) { return f->f.var_count; }

int64_t cpog_formula_clauses(const cpog_formula *f) { return f->f.clause_count(); }

int64_t cpog_formula_weight_annotations(const cpog_formula *f) {
    return (int64_t)f->f.weight_lines.size();
}

int cpog_formula_print(const cpog_formula *f, char **out) {
    return guarded([&]() {
        *out = dup_string(format_dimacs(f->f));
        return (int)CPOG_OK;
    });
}

int cpog_proof_parse(const char *text, size_t len, cpog_proof **out) {
    return guarded([&]() {
        auto *p = new cpog_proof{parse_cpog(std::string_view(text, len))};
        *out = p;
        return (int)CPOG_OK;
    });
}

int cpog_proof_load(const char *path, cpog_proof **out) {
    return guarded([&]() {
        std::string text;
        if (int rc = read_file(path, text))
            return rc;
        auto *p = new cpog_proof{parse_cpog(text)};
        *out = p;
        return (int)CPOG_OK;
    });
}

void cpog_proof_free(cpog_proof *p) { delete p; }

int64_t cpog_proof_steps(const cpog_proof *p) { return (int64_t)p->steps.size(); }

int cpog_proof_print(const cpog_proof *p, char **out) {
    return guarded([&]() {
        *out = dup_string(serialize_cpog(p->steps));
        return (int)CPOG_OK;
    });
}

int cpog_check(const cpog_formula *f, const cpog_proof *p, int flags, cpog_session **out) {
    return guarded([&]() {
        CheckOptions opts;
        opts.one_sided = (flags & CPOG_CHECK_ONE_SIDED) != 0;
        auto *s = new cpog_session;
        s->result = check_proof(f->f, p->steps, opts);
        s->var_count = f->f.var_count;
        *out = s;
        return (int)CPOG_OK;
    });
}

void cpog_session_free(cpog_session *s) { delete s; }

int cpog_session_verdict(const cpog_session *s) {
    switch (s->result.verdict) {
    case VerdictKind::FullEquivalence: return CPOG_VERDICT_FULL;
    case VerdictKind::ReverseOnly: return CPOG_VERDICT_REVERSE_ONLY;
    default: return CPOG_VERDICT_REJECTED;
    }
}

int64_t cpog_session_failed_step(const cpog_session *s) { return s->result.failed_step; }

const char *cpog_session_reason(const cpog_session *s) { return s->result.reason.c_str(); }

int64_t cpog_session_node_count(const cpog_session *s) {
    return (int64_t)s->result.pog.nodes.size();
}

int cpog_count_models(const cpog_session *s, char **decimal_out) {
    return guarded([&]() {
        if (s->result.verdict == VerdictKind::Rejected)
            return set_error(CPOG_REJECTED, "cannot count on a rejected proof");
        *decimal_out = dup_string(unweighted_count(s->result.pog, s->var_count).to_string());
        return (int)CPOG_OK;
    });
}

int cpog_count_weighted(const cpog_session *s, const cpog_formula *f, const char *weights_text,
                        char **decimal_out) {
    return guarded([&]() {
        if (s->result.verdict == VerdictKind::Rejected)
            return set_error(CPOG_REJECTED, "cannot count on a rejected proof");
        WeightSet ws = weights_text ? parse_weights_file(weights_text)
                                    : weights_from_annotations(f->f);
        return session_weights(s, ws, decimal_out);
    });
}

int cpog_function_hash(const cpog_session *s, uint64_t seed, uint64_t prime_modulus,
                       uint64_t *hash_out) {
    return guarded([&]() {
        if (s->result.verdict == VerdictKind::Rejected)
            return set_error(CPOG_REJECTED, "cannot evaluate a rejected proof");
        *hash_out = function_hash(s->result.pog, seed, prime_modulus);
        return (int)CPOG_OK;
    });
}

int cpog_generate(const cpog_formula *f, const char *ddnnf_text, size_t len,
                  const cpog_gen_options *options, char **cpog_text_out,
                  cpog_gen_stats *stats_out) {
    return guarded([&]() {
        return run_generate(f, std::string(ddnnf_text, len), options, cpog_text_out, stats_out);
    });
}

int cpog_generate_file(const cpog_formula *f, const char *ddnnf_path,
                       const cpog_gen_options *options, char **cpog_text_out,
                       cpog_gen_stats *stats_out) {
    return guarded([&]() {
        std::string text;
        if (int rc = read_file(ddnnf_path, text))
            return rc;
        return run_generate(f, text, options, cpog_text_out, stats_out);
    });
}

int cpog_oracle_count(const cpog_formula *f, char **decimal_out) {
    return guarded([&]() {
        *decimal_out = dup_string(brute_count(f->f).to_string());
        return (int)CPOG_OK;
    });
}

int cpog_oracle_weighted(const cpog_formula *f, const char *weights_text, char **decimal_out) {
    return guarded([&]() {
        WeightSet ws = weights_text ? parse_weights_file(weights_text)
                                    : weights_from_annotations(f->f);
        // Independent evaluation: the literal sum-over-models definition.
        std::unordered_map<Var, Q25> eval;
        Q25 rescale = Q25::one();
        for (const auto &[v, entry] : ws.entries) {
            if (v > f->f.var_count)
                continue;
            Q25 wp = entry.first ? *entry.first
                                 : (entry.second ? Q25::one() - *entry.second : Q25::half());
            Q25 wn = entry.second ? *entry.second : Q25::one() - wp;
            Q25 r = wp + wn;
            if (r.is_zero())
                return set_error(CPOG_GENERATION_ERROR,
                                 "weights of variable " + std::to_string(v) + " sum to zero");
            auto w = wp.exact_div(r);
            if (!w)
                return set_error(CPOG_GENERATION_ERROR,
                                 "normalized weight of variable " + std::to_string(v) +
                                     " is not representable");
            eval.emplace(v, *w);
            rescale = rescale * r;
        }
        Q25 half = Q25::half();
        Q25 val = brute_weighted(f->f, [&](Var v) {
            auto it = eval.find(v);
            return it == eval.end() ? half : it->second;
        });
        *decimal_out = dup_string((val * rescale).to_decimal());
        return (int)CPOG_OK;
    });
}

} // extern "C"
