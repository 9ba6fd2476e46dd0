#pragma once

#include <optional>
#include <string>
#include <vector>

#include "distnet/net.hpp"
#include "distnet/reach.hpp"

namespace distnet {

// an assignment of every place and transition to a location
struct distribution {
  std::vector<std::uint32_t> place_loc;  // indexed by place_id
  std::vector<std::uint32_t> trans_loc;  // indexed by trans_id
  std::uint32_t n_locations = 0;

  bool co_located_pp(place_id a, place_id b) const {
    return place_loc[a] == place_loc[b];
  }
  bool co_located_tt(trans_id a, trans_id b) const {
    return trans_loc[a] == trans_loc[b];
  }
  bool co_located_tp(trans_id t, place_id p) const {
    return trans_loc[t] == place_loc[p];
  }

  // renumber locations in order of first appearance (places, then
  // transitions) so equal partitions compare equal
  void canonicalize();

  // every element alone
  static distribution finest(const labelled_net& n);

  bool operator==(const distribution&) const = default;
};

enum class dist_requirement { fd, sd, ad, effectual, distributed_net };

std::string to_string(dist_requirement r);
std::optional<dist_requirement> requirement_from_string(const std::string& s);

struct satisfies_result {
  bool ok = false;
  std::string reason;  // empty when ok; human-readable violation otherwise
};

// check a distribution against one of the requirement classes; the
// distributed-net requirement needs the concurrency relation, hence limits
satisfies_result satisfies(const labelled_net& n, const distribution& d,
                           dist_requirement r, const limits& lim = {});

// the candidate distributions searched when asking whether some distribution
// of a class admits a conflict-free asynchronous implementation:
//   fd: the finest partition (all such distributions are isomorphic)
//   sd: the single maximal-co-location candidate (each transition with a
//       singleton preset joins that place)
//   ad: per constrained transition, one preplace or alone; all combinations
// throws candidate_cap_exceeded when the ad enumeration passes lim.candidate_cap
std::vector<distribution> canonical_distributions(const labelled_net& n,
                                                  dist_requirement r,
                                                  const limits& lim = {});

// distribution from named location groups: the elements of each group share
// one location, and every element not mentioned gets a location of its own;
// throws net_error on unknown names or an element listed twice
distribution distribution_of_partition(
    const labelled_net& n, const std::vector<std::vector<std::string>>& groups);

struct distributed_result {
  verdict v = verdict::unknown;
  std::optional<distribution> witness;  // set when v == yes
  std::vector<std::string> chain;       // when v == no: t0,...,tn with t0 and
                                        // tn concurrent, neighbours sharing a
                                        // preplace
  std::string note;
};

// decide whether any distribution makes the net distributed: co-location is
// forced transitively by s in pre(t) => t with s, so it suffices to check the
// components of that graph for concurrent visible pairs; strict also lets
// internal transitions defeat the separation requirement
distributed_result is_distributed(const labelled_net& n, const limits& lim = {},
                                  bool strict = false);

}  // namespace distnet
