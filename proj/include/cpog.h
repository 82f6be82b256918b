/* Certified knowledge-compilation toolkit: CPOG proof checking, proof
 * generation from decision-DNNF graphs, and exact model counting on
 * verified POGs.
 *
 * Every function that returns int yields one of the CPOG_* status codes;
 * on any nonzero status, cpog_last_error() describes the failure.  All
 * objects are opaque and must be released with their _free function.
 * Strings returned through char** are heap-allocated; release them with
 * cpog_string_free().
 */
#ifndef CPOG_H
#define CPOG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the command-line tool uses them as exit statuses. */
enum {
    CPOG_OK = 0,
    CPOG_REJECTED = 10,        /* proof rejected */
    CPOG_PARSE_ERROR = 20,     /* malformed input */
    CPOG_GENERATION_ERROR = 30,/* proof generation failed */
    CPOG_INTERNAL_ERROR = 40   /* internal invariant breach */
};

typedef struct cpog_formula cpog_formula; /* parsed CNF formula */
typedef struct cpog_proof cpog_proof;     /* parsed CPOG step sequence */
typedef struct cpog_session cpog_session; /* check outcome plus verified graph */

/* Description of the most recent failure in this thread. */
const char *cpog_last_error(void);

void cpog_string_free(char *s);

/* ---- CNF formulas ---- */

int cpog_formula_parse(const char *text, size_t len, cpog_formula **out);
int cpog_formula_load(const char *path, cpog_formula **out);
void cpog_formula_free(cpog_formula *f);
int64_t cpog_formula_vars(const cpog_formula *f);
int64_t cpog_formula_clauses(const cpog_formula *f);
/* Number of weight annotation lines carried by the formula. */
int64_t cpog_formula_weight_annotations(const cpog_formula *f);
/* Canonical DIMACS reprint of the parsed formula. */
int cpog_formula_print(const cpog_formula *f, char **out);

/* ---- CPOG proofs ---- */

int cpog_proof_parse(const char *text, size_t len, cpog_proof **out);
int cpog_proof_load(const char *path, cpog_proof **out);
void cpog_proof_free(cpog_proof *p);
int64_t cpog_proof_steps(const cpog_proof *p);
/* Canonical reserialization of the parsed steps. */
int cpog_proof_print(const cpog_proof *p, char **out);

/* ---- Checking ---- */

#define CPOG_CHECK_ONE_SIDED 1

enum {
    CPOG_VERDICT_FULL = 0,
    CPOG_VERDICT_REVERSE_ONLY = 1,
    CPOG_VERDICT_REJECTED = 2
};

/* Replays the proof against the formula.  Returns CPOG_OK whenever the
 * check ran to a verdict (including REJECTED); the verdict is read from
 * the session. */
int cpog_check(const cpog_formula *f, const cpog_proof *p, int flags, cpog_session **out);
void cpog_session_free(cpog_session *s);
int cpog_session_verdict(const cpog_session *s);
/* 1-based index of the failing step; 0 when the final-state conditions
 * failed.  Only meaningful for REJECTED. */
int64_t cpog_session_failed_step(const cpog_session *s);
const char *cpog_session_reason(const cpog_session *s);
int64_t cpog_session_node_count(const cpog_session *s);

/* ---- Counting on a verified session ---- */

/* Unweighted model count over the declared variables (exact integer,
 * decimal string).  Fails with CPOG_REJECTED when the session verdict is
 * REJECTED. */
int cpog_count_models(const cpog_session *s, char **decimal_out);

/* Weighted count.  weights_text holds "<lit> <decimal>" lines; pass NULL
 * to use the formula's weight annotations.  Variables without weights
 * default to 1/2 for both polarities. */
int cpog_count_weighted(const cpog_session *s, const cpog_formula *f, const char *weights_text,
                        char **decimal_out);

/* Randomized equivalence probe: ring evaluation over the prime field with
 * seeded pseudorandom weights. */
int cpog_function_hash(const cpog_session *s, uint64_t seed, uint64_t prime_modulus,
                       uint64_t *hash_out);

/* ---- Proof generation ---- */

enum {
    CPOG_GEN_HYBRID = 0,
    CPOG_GEN_STRUCTURAL = 1,
    CPOG_GEN_MONOLITHIC = 2,
    CPOG_GEN_ONE_SIDED = 3
};

typedef struct {
    int mode;                   /* CPOG_GEN_* */
    int use_lemmas;             /* nonzero to exploit shared subgraphs */
    int use_grouping;           /* nonzero to group solver-bound literals */
    int64_t tree_threshold;     /* <= 0 selects the default of 10^6 */
    const char *solver_command; /* "{cnf}"/"{proof}" template; NULL = built-in */
} cpog_gen_options;

typedef struct {
    char selected_mode[16]; /* mono | struct | struct-mono | one-sided */
    int64_t pog_nodes;
    int64_t defining_clauses;
    int64_t declarations;
    int64_t assertions;
    int64_t deletions;
    int64_t lemmas;
    int64_t lemma_applications;
    int64_t sat_calls;
    char tree_ratio[80];
} cpog_gen_stats;

/* Converts a decision-DNNF graph (interchange text) plus the formula it
 * was compiled from into a CPOG proof.  options and stats_out may be NULL. */
int cpog_generate(const cpog_formula *f, const char *ddnnf_text, size_t len,
                  const cpog_gen_options *options, char **cpog_text_out,
                  cpog_gen_stats *stats_out);
int cpog_generate_file(const cpog_formula *f, const char *ddnnf_path,
                       const cpog_gen_options *options, char **cpog_text_out,
                       cpog_gen_stats *stats_out);

/* ---- Brute-force oracle (small instances, guarded) ---- */

int cpog_oracle_count(const cpog_formula *f, char **decimal_out);
int cpog_oracle_weighted(const cpog_formula *f, const char *weights_text, char **decimal_out);

#ifdef __cplusplus
}
#endif

#endif /* CPOG_H */
