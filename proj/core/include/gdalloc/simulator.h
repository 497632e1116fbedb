// Runs delivery policies against i.i.d. user streams and computes the
// per-sequence offline optimum.

#ifndef GDALLOC_SIMULATOR_H_
#define GDALLOC_SIMULATOR_H_

#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdalloc/instance.h"
#include "gdalloc/policies.h"

namespace gdalloc {

class CapExceededError : public std::runtime_error {
 public:
  explicit CapExceededError(int64_t cap);
  int64_t cap() const { return cap_; }

 private:
  int64_t cap_;
};

// Lazy i.i.d. stream of user types. The same seed and distribution always
// yield the same stream. Drawing past `cap` users throws CapExceededError.
class UserStream {
 public:
  UserStream(std::span<const double> probs, uint64_t seed, int64_t cap);

  UserTypeId Next();
  int64_t drawn() const { return drawn_; }
  int64_t cap() const { return cap_; }

 private:
  Rng rng_;
  std::discrete_distribution<UserTypeId> types_;
  int64_t cap_;
  int64_t drawn_ = 0;
};

struct EpisodeRecord {
  // Users consumed until every contract was fulfilled.
  int64_t consumption = 0;
  // U_j: arrivals of each type, including passed-through users.
  std::vector<int64_t> type_counts;
  // U_{ij}: deliveries per EdgeId.
  std::vector<int64_t> pair_counts;
  int64_t passthrough_count = 0;
  uint64_t seed = 0;

  friend bool operator==(const EpisodeRecord&, const EpisodeRecord&) = default;
};

inline constexpr int64_t kDefaultCapMultiple = 1000;

// 1000 * max(z_hat, M). M only matters for multi-slot plans, whose z_hat
// can sit below M.
int64_t DefaultEpisodeCap(const Instance& instance, int64_t z_hat);

// Feeds users from the stream seeded with `sequence_seed` to the policy until
// all demand is met. `policy_seed` drives the policy's own randomness.
EpisodeRecord RunEpisode(const Instance& instance, DeliveryPolicy& policy,
                         uint64_t sequence_seed, uint64_t policy_seed,
                         int64_t cap);

// Fewest leading users of the sequence that admit a complete assignment of
// all demand (users may be reassigned in hindsight), via incremental
// augmentation on the expected network.
int64_t OfflineOptimum(const Instance& instance, uint64_t sequence_seed,
                       int64_t cap);
int64_t OfflineOptimum(const Instance& instance,
                       std::span<const UserTypeId> sequence);

// The same, when each user can be shown up to `slots` distinct ads.
int64_t OfflineOptimumMulti(const Instance& instance, uint64_t sequence_seed,
                            int64_t cap, int slots);

// Episode batch CSV: header comment with schema version, then
// instance_id,policy,seed,consumption,t_star,passthrough.
inline constexpr std::string_view kEpisodeCsvSchema = "gdalloc-episodes/1";

struct EpisodeRow {
  std::string instance_id;
  std::string policy;
  uint64_t seed = 0;
  int64_t consumption = 0;
  int64_t t_star = 0;
  int64_t passthrough = 0;
  bool failed = false;
};

void WriteEpisodeCsv(std::ostream& out, std::span<const EpisodeRow> rows);

}  // namespace gdalloc

#endif  // GDALLOC_SIMULATOR_H_
