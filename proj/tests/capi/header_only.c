/* Compiled as C99 to keep the public header free of C++ constructs. */
#include "lcsvd/lcsvd.h"

int c_decompose_rank(unsigned long long seed, size_t* n_modes) {
  lcsvd_synth_spec spec = {LCSVD_SYNTH_EXACT_RANK, 60, 0, 0, 20, 3, 0.0, 0.0, 0};
  lcsvd_rule rule = {LCSVD_RULE_TOLERANCE, 1e-8, 0};
  lcsvd_dataset* ds = NULL;
  lcsvd_factors* f = NULL;
  lcsvd_status st;
  spec.seed = seed;
  st = lcsvd_generate(&spec, &ds);
  if (st != LCSVD_OK) return (int)st;
  st = lcsvd_decompose(ds, rule, &f);
  if (st == LCSVD_OK) *n_modes = lcsvd_factors_count(f);
  lcsvd_factors_free(f);
  lcsvd_dataset_free(ds);
  return (int)st;
}
