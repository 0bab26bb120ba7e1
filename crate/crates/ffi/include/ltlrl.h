#ifndef LTLRL_H
#define LTLRL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum LtlrlStatus {
  LTLRL_STATUS_OK = 0,
  LTLRL_STATUS_NULL_POINTER = 1,
  LTLRL_STATUS_INVALID_UTF8 = 2,
  LTLRL_STATUS_PARSE_ERROR = 3,
  LTLRL_STATUS_INVALID_ARGUMENT = 4,
  LTLRL_STATUS_COMPUTATION_ERROR = 5,
  LTLRL_STATUS_PANIC = 6,
} LtlrlStatus;

/**
 * A finite Markov chain with accepting states.
 */
typedef struct LtlrlChain LtlrlChain;

/**
 * A parsed LTL formula.
 */
typedef struct LtlrlFormula LtlrlFormula;

/**
 * A parsed automaton.
 */
typedef struct LtlrlLdba LtlrlLdba;

/**
 * Satisfaction probability, eventual value and failing visits of a chain,
 * with both sides of the sandwich check.
 */
typedef struct LtlrlBoundReport {
  double p_sat;
  double v_gamma;
  double o_pi;
  double gamma;
  double lhs;
  double mid;
  double rhs;
  bool pass;
} LtlrlBoundReport;

/**
 * Exact values of the two stationary choices `[A, B]` of the two-choice MDP.
 */
typedef struct LtlrlMyopiaReport {
  double alpha;
  double gamma;
  double eventual[2];
  double standard[2];
  double p_sat[2];
} LtlrlMyopiaReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message into `buf` (NUL
 * terminated, truncated to `len`) and returns the full message length.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t ltlrl_last_error(char *buf, size_t len);

/**
 * Parses an automaton in the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LtlrlStatus ltlrl_ldba_parse(const char *text, struct LtlrlLdba **out);

/**
 * # Safety
 * `aut` must be null or a handle from [`ltlrl_ldba_parse`] not yet freed.
 */
void ltlrl_ldba_free(struct LtlrlLdba *aut);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LtlrlStatus ltlrl_ldba_num_states(const struct LtlrlLdba *aut, size_t *out);

/**
 * Number of automaton states that have a jump.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LtlrlStatus ltlrl_ldba_min_horizon(const struct LtlrlLdba *aut, size_t *out);

/**
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LtlrlStatus ltlrl_formula_parse(const char *text, struct LtlrlFormula **out);

/**
 * # Safety
 * `phi` must be null or a handle from [`ltlrl_formula_parse`] not yet freed.
 */
void ltlrl_formula_free(struct LtlrlFormula *phi);

/**
 * Counts how many of `words` seeded random lasso words the automaton and
 * the formula classify alike.
 *
 * # Safety
 * Pointers must be valid.
 */
enum LtlrlStatus ltlrl_oracle_agreement(const struct LtlrlLdba *aut,
                                        const struct LtlrlFormula *phi,
                                        size_t words,
                                        uint64_t seed,
                                        size_t *agree);

/**
 * Builds a chain in compressed sparse rows: row `i` holds the entries
 * `row_offsets[i]..row_offsets[i+1]` of `cols`/`probs`. `accepting` has
 * one byte per state. The chain starts in state 0.
 *
 * # Safety
 * `row_offsets` must hold `n + 1` entries, `cols` and `probs`
 * `row_offsets[n]` entries, `accepting` `n` entries; `out` must be valid.
 */
enum LtlrlStatus ltlrl_chain_new(size_t n,
                                 const size_t *row_offsets,
                                 const size_t *cols,
                                 const double *probs,
                                 const uint8_t *accepting,
                                 struct LtlrlChain **out);

/**
 * # Safety
 * `chain` must be null or a handle from [`ltlrl_chain_new`] not yet freed.
 */
void ltlrl_chain_free(struct LtlrlChain *chain);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LtlrlStatus ltlrl_chain_satisfaction(const struct LtlrlChain *chain, double *out);

/**
 * # Safety
 * Pointers must be valid.
 */
enum LtlrlStatus ltlrl_chain_lemma1(const struct LtlrlChain *chain,
                                    double gamma,
                                    struct LtlrlBoundReport *out);

/**
 * # Safety
 * `out` must be valid.
 */
enum LtlrlStatus ltlrl_two_choice_report(double alpha, double gamma, struct LtlrlMyopiaReport *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LTLRL_H */
