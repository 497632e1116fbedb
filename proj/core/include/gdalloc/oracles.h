// Reference values used to judge policies: the optimal online policy's
// expected consumption (exact DP, small instances only), the coupon-collector
// upper bound on the Random policy, and the Wald identity check on episode
// batches.

#ifndef GDALLOC_ORACLES_H_
#define GDALLOC_ORACLES_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "gdalloc/instance.h"
#include "gdalloc/simulator.h"

namespace gdalloc {

inline constexpr int64_t kDpStateLimit = 1'000'000;

class StateSpaceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Number of residual-demand states, prod (W_i + 1), saturating at
// limit + 1.
int64_t DpStateCount(const Instance& instance, int64_t limit = kDpStateLimit);

// Expected consumption of the optimal online policy, solved bottom-up over
// residual demand vectors. A state where some arrival types can serve no
// unsatisfied campaign satisfies E = 1 + sum_useful p_j min_i E(i) +
// p_useless E, which is solved for E in closed form.
double DpOptimalExpected(const Instance& instance,
                         int64_t state_limit = kDpStateLimit);

// Integral over t >= 0 of 1 - prod_i (1 - exp(-t r_i))^{W_i} with
// r_i = sum_{j in Gamma(a_i)} p_j / W(u_j), an upper bound on the Random
// policy's expected consumption.
double RandomUpperBound(const Instance& instance);

// Integrand of RandomUpperBound, evaluated in log space.
double RandomBoundIntegrand(const Instance& instance, double t);

struct WaldDeviation {
  UserTypeId type = 0;
  double mean_count = 0.0;       // mean U_j
  double expected_count = 0.0;   // p_j * mean Y
  double deviation = 0.0;        // |mean U_j - p_j mean Y|
  double standard_error = 0.0;   // of mean(U_j - p_j Y)
  double z_score = 0.0;
};

// Per-type check of E(U_j) = p_j E(Y) over a batch of episodes.
std::vector<WaldDeviation> WaldCheck(std::span<const EpisodeRecord> records,
                                     std::span<const double> probs);

}  // namespace gdalloc

#endif  // GDALLOC_ORACLES_H_
