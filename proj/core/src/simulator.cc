#include "gdalloc/simulator.h"

#include <algorithm>

#include "gdalloc/expected_network.h"

namespace gdalloc {

CapExceededError::CapExceededError(int64_t cap)
    : std::runtime_error("user stream cap of " + std::to_string(cap) +
                         " exceeded before all contracts were fulfilled"),
      cap_(cap) {}

UserStream::UserStream(std::span<const double> probs, uint64_t seed,
                       int64_t cap)
    : rng_(seed), types_(probs.begin(), probs.end()), cap_(cap) {
  if (cap < 1) throw std::invalid_argument("stream cap must be >= 1");
}

UserTypeId UserStream::Next() {
  if (drawn_ >= cap_) throw CapExceededError(cap_);
  ++drawn_;
  return types_(rng_);
}

int64_t DefaultEpisodeCap(const Instance& instance, int64_t z_hat) {
  return kDefaultCapMultiple *
         std::max<int64_t>({z_hat, instance.total_demand(), 1});
}

EpisodeRecord RunEpisode(const Instance& instance, DeliveryPolicy& policy,
                         uint64_t sequence_seed, uint64_t policy_seed,
                         int64_t cap) {
  EpisodeRecord record;
  record.seed = sequence_seed;
  record.type_counts.assign(instance.num_types(), 0);
  record.pair_counts.assign(instance.num_edges(), 0);

  UserStream stream(instance.probs(), sequence_seed, cap);
  Rng policy_rng(policy_seed);
  PolicyState state(instance);
  std::vector<CampaignId> delivered;
  while (!state.done()) {
    const UserTypeId type = stream.Next();
    ++record.type_counts[type];
    delivered.clear();
    policy.Serve(type, state, policy_rng, delivered);
    if (delivered.empty()) ++record.passthrough_count;
    for (CampaignId i : delivered) {
      const std::optional<EdgeId> e = instance.FindEdge(i, type);
      if (!e) throw std::logic_error("policy delivered along a non-edge");
      ++record.pair_counts[*e];
    }
  }
  record.consumption = stream.drawn();
  return record;
}

namespace {

// Shared driver: `next` yields the next user type or throws when exhausted.
template <typename NextUser>
int64_t OfflineOptimumImpl(const Instance& instance, NextUser&& next) {
  const int64_t total = instance.total_demand();
  // Every user serves at most one ad, so no prefix shorter than M works.
  // Route the first M users in bulk, then grow one user at a time.
  std::vector<int64_t> counts(instance.num_types(), 0);
  for (int64_t t = 0; t < total; ++t) ++counts[next()];
  ExpectedNetwork network(instance, counts);
  network.Solve();
  int64_t consumed = total;
  while (!network.saturated()) {
    const UserTypeId type = next();
    ++consumed;
    network.IncrementSupply(type);
  }
  return consumed;
}

}  // namespace

int64_t OfflineOptimum(const Instance& instance, uint64_t sequence_seed,
                       int64_t cap) {
  UserStream stream(instance.probs(), sequence_seed, cap);
  return OfflineOptimumImpl(instance, [&stream] { return stream.Next(); });
}

int64_t OfflineOptimum(const Instance& instance,
                       std::span<const UserTypeId> sequence) {
  size_t position = 0;
  return OfflineOptimumImpl(instance, [&]() -> UserTypeId {
    if (position >= sequence.size()) {
      throw CapExceededError(static_cast<int64_t>(sequence.size()));
    }
    return sequence[position++];
  });
}

int64_t OfflineOptimumMulti(const Instance& instance, uint64_t sequence_seed,
                            int64_t cap, int slots) {
  if (slots < 1) throw std::invalid_argument("slots must be >= 1");
  UserStream stream(instance.probs(), sequence_seed, cap);
  std::vector<UserTypeId> users;

  // Prefix feasibility: type j offers slots * U_j impressions and each
  // (campaign, type) pair can reach at most U_j distinct users.
  auto feasible = [&](int64_t length) {
    while (static_cast<int64_t>(users.size()) < length) {
      users.push_back(stream.Next());
    }
    std::vector<int64_t> counts(instance.num_types(), 0);
    for (int64_t t = 0; t < length; ++t) ++counts[users[t]];
    std::vector<int64_t> inner(instance.num_edges());
    std::vector<int64_t> supply(instance.num_types());
    for (EdgeId e = 0; e < instance.num_edges(); ++e) {
      inner[e] = counts[instance.edge(e).type];
    }
    for (UserTypeId j = 0; j < instance.num_types(); ++j) {
      supply[j] = counts[j] * slots;
    }
    ExpectedNetwork network(instance, supply,
                            InnerCapacity::PerEdge(std::move(inner)));
    network.Solve();
    return network.saturated();
  };

  const int64_t total = instance.total_demand();
  int64_t lo = (total + slots - 1) / slots - 1;  // infeasible
  int64_t hi = std::max<int64_t>(lo + 1, 1);
  while (!feasible(hi)) {
    lo = hi;
    hi = std::min(cap, hi * 2);
    if (lo >= cap) throw CapExceededError(cap);
  }
  while (hi - lo > 1) {
    const int64_t mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

void WriteEpisodeCsv(std::ostream& out, std::span<const EpisodeRow> rows) {
  out << "# schema: " << kEpisodeCsvSchema << "\n";
  out << "instance_id,policy,seed,consumption,t_star,passthrough\n";
  for (const EpisodeRow& row : rows) {
    out << row.instance_id << ',' << row.policy << ',' << row.seed << ',';
    if (row.failed) {
      out << "NA,";
    } else {
      out << row.consumption << ',';
    }
    out << row.t_star << ',';
    if (row.failed) {
      out << "NA\n";
    } else {
      out << row.passthrough << '\n';
    }
  }
}

}  // namespace gdalloc
