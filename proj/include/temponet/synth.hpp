#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "temponet/calendar.hpp"
#include "temponet/error.hpp"
#include "temponet/labels.hpp"
#include "temponet/posts.hpp"
#include "temponet/rng.hpp"

namespace temponet {

/// Parameters of a planted-community post stream.
struct PlantedSpec {
  int n_communities = 4;
  int users_per_community = 25;
  int days = 14;
  int pool_size = 5;        // hashtags per community pool
  double post_rate = 1.0;   // probability a user posts on a given day
  double cross_talk = 0.0;  // probability a post swaps in another pool's tag
  std::uint64_t seed = 1;
  CivilDate start_date{2015, 5, 11};
};

struct PlantedData {
  std::vector<PostRecord> posts;   // ordered by (day, community, user)
  std::vector<NodeLabel> truth;    // one row per realized (user, day) node
};

namespace detail {

inline std::string planted_user(int community, int user) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%02du%03d", community, user);
  return buf;
}

inline std::string planted_tag(int community, int tag) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "c%02dtag%02d", community, tag);
  return buf;
}

}  // namespace detail

/// Generates a deterministic post stream with planted community structure.
/// Every post carries its community's anchor tag (pool[0]) plus up to two
/// more tags drawn from the rest of the pool, so same-day members are always
/// connected and each community forms a single block-tridiagonal component
/// while it stays active. cross_talk replaces one tag (possibly the anchor)
/// with a tag from another community's pool.
inline PlantedData generate_planted(const PlantedSpec& spec) {
  if (spec.n_communities < 1 || spec.users_per_community < 1 ||
      spec.days < 1 || spec.pool_size < 1) {
    throw ArgumentError("planted spec counts must be >= 1");
  }
  if (spec.post_rate < 0.0 || spec.post_rate > 1.0 || spec.cross_talk < 0.0 ||
      spec.cross_talk > 1.0) {
    throw ArgumentError("planted spec rates must lie in [0, 1]");
  }
  if (spec.cross_talk > 0.0 && spec.n_communities < 2) {
    throw ArgumentError("cross_talk needs at least two communities");
  }

  SplitMix64 rng(spec.seed);
  const std::int64_t t0 = days_from_civil(spec.start_date) * 86400;

  PlantedData out;
  for (int day = 0; day < spec.days; ++day) {
    for (int c = 0; c < spec.n_communities; ++c) {
      for (int u = 0; u < spec.users_per_community; ++u) {
        if (!rng.next_bernoulli(spec.post_rate)) continue;

        PostRecord rec;
        rec.user = detail::planted_user(c, u);
        // mid-day timestamps, staggered so records within a day stay distinct
        rec.time = t0 + static_cast<std::int64_t>(day) * 86400 + 36000 +
                   (static_cast<std::int64_t>(c) * spec.users_per_community + u) %
                       43200;
        rec.hashtags.push_back(detail::planted_tag(c, 0));
        const int extra = static_cast<int>(rng.next_below(3));  // 0..2 more
        for (int k = 0; k < extra && spec.pool_size > 1; ++k) {
          const int tag =
              1 + static_cast<int>(rng.next_below(
                      static_cast<std::uint64_t>(spec.pool_size - 1)));
          const std::string name = detail::planted_tag(c, tag);
          if (std::find(rec.hashtags.begin(), rec.hashtags.end(), name) ==
              rec.hashtags.end()) {
            rec.hashtags.push_back(name);
          }
        }
        if (spec.cross_talk > 0.0 && rng.next_bernoulli(spec.cross_talk)) {
          int other = static_cast<int>(rng.next_below(
              static_cast<std::uint64_t>(spec.n_communities - 1)));
          if (other >= c) ++other;
          const int tag = static_cast<int>(
              rng.next_below(static_cast<std::uint64_t>(spec.pool_size)));
          const std::size_t victim =
              static_cast<std::size_t>(rng.next_below(rec.hashtags.size()));
          rec.hashtags[victim] = detail::planted_tag(other, tag);
        }

        out.truth.push_back(NodeLabel{rec.user, day,
                                      static_cast<std::uint32_t>(c)});
        out.posts.push_back(std::move(rec));
      }
    }
  }
  std::sort(out.truth.begin(), out.truth.end(), label_key_less);
  return out;
}

}  // namespace temponet
