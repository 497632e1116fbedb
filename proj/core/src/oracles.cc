#include "gdalloc/oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gdalloc {

int64_t DpStateCount(const Instance& instance, int64_t limit) {
  int64_t count = 1;
  for (int64_t w : instance.demands()) {
    if (count > limit / (w + 1)) return limit + 1;
    count *= w + 1;
  }
  return count;
}

double DpOptimalExpected(const Instance& instance, int64_t state_limit) {
  const int64_t states = DpStateCount(instance, state_limit);
  if (states > state_limit) {
    throw StateSpaceError("DP needs more than " + std::to_string(state_limit) +
                          " residual-demand states");
  }
  const int m = instance.num_campaigns();
  const int n = instance.num_types();

  // Mixed-radix index; lowering any residual lowers the index, so a single
  // increasing sweep sees every successor first.
  std::vector<int64_t> stride(m);
  int64_t s = 1;
  for (CampaignId i = 0; i < m; ++i) {
    stride[i] = s;
    s *= instance.demand(i) + 1;
  }

  std::vector<double> expected(states, 0.0);
  std::vector<int64_t> residual(m, 0);
  for (int64_t index = 1; index < states; ++index) {
    for (CampaignId i = 0; i < m; ++i) {
      if (residual[i] < instance.demand(i)) {
        ++residual[i];
        break;
      }
      residual[i] = 0;
    }

    double useful = 0.0;
    double weighted = 0.0;
    for (UserTypeId j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (EdgeId e : instance.type_edges(j)) {
        const CampaignId i = instance.edge(e).campaign;
        if (residual[i] > 0) best = std::min(best, expected[index - stride[i]]);
      }
      if (best < std::numeric_limits<double>::infinity()) {
        useful += instance.prob(j);
        weighted += instance.prob(j) * best;
      }
    }
    if (useful <= 0.0) {
      throw std::invalid_argument("state with demand left but no useful type");
    }
    expected[index] = (1.0 + weighted) / useful;
  }
  return expected[states - 1];
}

namespace {

std::vector<double> CouponRates(const Instance& instance) {
  std::vector<double> rates(instance.num_campaigns(), 0.0);
  for (CampaignId i = 0; i < instance.num_campaigns(); ++i) {
    for (EdgeId e : instance.campaign_edges(i)) {
      const UserTypeId j = instance.edge(e).type;
      rates[i] +=
          instance.prob(j) / static_cast<double>(instance.type_demand(j));
    }
  }
  return rates;
}

double IntegrandFromRates(const Instance& instance,
                          const std::vector<double>& rates, double t) {
  if (t <= 0.0) return 1.0;
  double log_product = 0.0;
  for (CampaignId i = 0; i < instance.num_campaigns(); ++i) {
    log_product += static_cast<double>(instance.demand(i)) *
                   std::log1p(-std::exp(-t * rates[i]));
  }
  return -std::expm1(log_product);
}

}  // namespace

double RandomBoundIntegrand(const Instance& instance, double t) {
  return IntegrandFromRates(instance, CouponRates(instance), t);
}

double RandomUpperBound(const Instance& instance) {
  const std::vector<double> rates = CouponRates(instance);
  const double min_rate = *std::min_element(rates.begin(), rates.end());
  if (!(min_rate > 0.0)) {
    throw std::invalid_argument("campaign with zero delivery rate");
  }
  auto f = [&](double t) { return IntegrandFromRates(instance, rates, t); };

  // Truncate where the tail integrand is below 1e-12.
  double upper = 1.0 / min_rate;
  while (f(upper) >= 1e-12) upper *= 2.0;

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr int kSegments = 32;
  const double width = upper / kSegments;
  double total = 0.0;
  for (int k = 0; k < kSegments; ++k) {
    total += Quadrature::integrate(f, k * width, (k + 1) * width, 15, 1e-12);
  }
  return total;
}

std::vector<WaldDeviation> WaldCheck(std::span<const EpisodeRecord> records,
                                     std::span<const double> probs) {
  std::vector<WaldDeviation> report;
  if (records.empty()) return report;
  const auto count = static_cast<double>(records.size());
  double mean_y = 0.0;
  for (const EpisodeRecord& r : records) {
    mean_y += static_cast<double>(r.consumption);
  }
  mean_y /= count;

  for (UserTypeId j = 0; j < static_cast<int>(probs.size()); ++j) {
    WaldDeviation row;
    row.type = j;
    double mean_d = 0.0;
    for (const EpisodeRecord& r : records) {
      row.mean_count += static_cast<double>(r.type_counts[j]);
      mean_d += static_cast<double>(r.type_counts[j]) -
                probs[j] * static_cast<double>(r.consumption);
    }
    row.mean_count /= count;
    mean_d /= count;
    double variance = 0.0;
    for (const EpisodeRecord& r : records) {
      const double d = static_cast<double>(r.type_counts[j]) -
                       probs[j] * static_cast<double>(r.consumption) - mean_d;
      variance += d * d;
    }
    variance = records.size() > 1 ? variance / (count - 1.0) : 0.0;
    row.expected_count = probs[j] * mean_y;
    row.deviation = std::abs(row.mean_count - row.expected_count);
    row.standard_error = std::sqrt(variance / count);
    if (row.standard_error > 0.0) {
      row.z_score = mean_d / row.standard_error;
    } else {
      row.z_score = row.deviation > 0.0
                        ? std::numeric_limits<double>::infinity()
                        : 0.0;
    }
    report.push_back(row);
  }
  return report;
}

}  // namespace gdalloc
