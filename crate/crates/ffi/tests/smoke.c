#include <math.h>
#include <stdio.h>
#include "ltlrl.h"

static const char *FGY =
    "ap: y b r\nstates: 3\ninitial: 0\naccepting: 1\n"
    "0 [true] -> 0\n0 eps -> 1\n1 [y] -> 1\n1 [!y] -> 2\n2 [true] -> 2\n";

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed line %d\n", __LINE__); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    LtlrlLdba *aut = NULL;
    LtlrlFormula *phi = NULL;
    size_t n = 0, agree = 0;
    CHECK(ltlrl_ldba_parse(FGY, &aut) == LTLRL_STATUS_OK);
    CHECK(ltlrl_ldba_num_states(aut, &n) == LTLRL_STATUS_OK && n == 3);
    CHECK(ltlrl_formula_parse("F G y", &phi) == LTLRL_STATUS_OK);
    CHECK(ltlrl_oracle_agreement(aut, phi, 100, 1, &agree) == LTLRL_STATUS_OK && agree == 100);
    ltlrl_formula_free(phi);
    ltlrl_ldba_free(aut);

    CHECK(ltlrl_formula_parse("G (", &phi) == LTLRL_STATUS_PARSE_ERROR);
    char buf[256];
    CHECK(ltlrl_last_error(buf, sizeof buf) > 0 && buf[0] != 0);

    LtlrlMyopiaReport r;
    CHECK(ltlrl_two_choice_report(0.9, 0.99, &r) == LTLRL_STATUS_OK);
    CHECK(fabs(r.eventual[0] - 100.0) < 1e-6 && fabs(r.eventual[1] - 90.0) < 1e-6);

    size_t offsets[] = {0, 2, 3, 4};
    size_t cols[] = {1, 2, 1, 2};
    double probs[] = {0.5, 0.5, 1.0, 1.0};
    unsigned char acc[] = {0, 1, 0};
    LtlrlChain *chain = NULL;
    double p = 0.0;
    LtlrlBoundReport b;
    CHECK(ltlrl_chain_new(3, offsets, cols, probs, acc, &chain) == LTLRL_STATUS_OK);
    CHECK(ltlrl_chain_satisfaction(chain, &p) == LTLRL_STATUS_OK && fabs(p - 0.5) < 1e-12);
    CHECK(ltlrl_chain_lemma1(chain, 0.99, &b) == LTLRL_STATUS_OK && b.pass);
    ltlrl_chain_free(chain);
    puts("c smoke ok");
    return 0;
}
