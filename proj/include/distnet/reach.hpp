// Firing rule, reachability exploration, and the relations derived from the
// state space (concurrency, enabled conflict). The simplified enabledness
// test (preset containment) and independence test (preset disjointness) are
// only sound on contact-free nets, so validate() - which checks the full
// conditions - must pass before anything else here is trusted.
#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "distnet/net.hpp"

namespace distnet {

// Exploration budget shared by all state-space sweeps. `cancel` is an
// optional cooperative cancellation flag (polled, never blocking).
struct limits {
  std::size_t state_bound = 1'000'000;
  std::size_t candidate_cap = 1'000'000;
  const std::atomic<bool>* cancel = nullptr;

  void check_cancel() const {
    if (cancel && cancel->load(std::memory_order_relaxed)) throw cancelled();
  }

  void poll(std::size_t seen) const {
    check_cancel();
    if (seen > state_bound) throw state_bound_exceeded(state_bound);
  }
};

enum class verdict { yes, no, unknown };

inline const char* to_string(verdict v) {
  switch (v) {
    case verdict::yes: return "yes";
    case verdict::no: return "no";
    default: return "unknown";
  }
}

// ---- firing rule ----------------------------------------------------------

// simplified enabledness; exact on contact-free nets
inline bool enabled(const labelled_net& n, const marking& m, trans_id t) {
  return n.pre[t].subset_of(m);
}

// true iff some internal transition is enabled at m
bool tau_enabled(const labelled_net& n, const marking& m);

// simplified step test: every member enabled, presets pairwise disjoint
bool step_enabled(const labelled_net& n, const marking& m,
                  std::span<const trans_id> g);

// full test per the definition: members enabled without contact
// ((m \ pre) disjoint from post) and pairwise independent on both presets
// and postsets; used by validate and available to test oracles
bool step_enabled_full(const labelled_net& n, const marking& m,
                       std::span<const trans_id> g);

// (m \ preset(g)) union postset(g); throws net_error unless step_enabled
marking fire(const labelled_net& n, const marking& m,
             std::span<const trans_id> g);

marking fire_unchecked(const labelled_net& n, const marking& m,
                       std::span<const trans_id> g);

// all nonempty steps enabled at m, each sorted ascending, in deterministic
// order; backtracking over enabled transitions with pairwise disjoint presets
std::vector<std::vector<trans_id>> enabled_steps(const labelled_net& n,
                                                 const marking& m);

// ---- reachability ---------------------------------------------------------

struct reach_graph {
  std::vector<marking> nodes;  // nodes[0] = m0, BFS order
  std::unordered_map<marking, std::uint32_t, idset_hash> index;
  // singleton-firing successors per node
  std::vector<std::vector<std::pair<trans_id, std::uint32_t>>> succ;
  std::vector<char> stable;  // no tau transition enabled

  bool contains(const marking& m) const { return index.count(m) != 0; }
  std::uint32_t node_of(const marking& m) const { return index.at(m); }
};

// BFS over singleton firings with the simplified rule
reach_graph explore(const labelled_net& n, const limits& lim = {});

// ---- validation -----------------------------------------------------------

struct model_violation {
  std::string kind;    // "empty-preset" | "contact"
  std::string detail;  // human-readable witness
};

struct validation_report {
  verdict ok = verdict::unknown;
  std::vector<model_violation> issues;
  std::size_t markings = 0;  // distinct markings visited
};

// Checks the model-class restrictions: every transition has a nonempty
// preset, and every reachable marking is contact-free. Exploration uses the
// full firing rule. A bound hit yields verdict unknown unless a violation
// was already found.
validation_report validate(const labelled_net& n, const limits& lim = {});

// ---- derived relations ----------------------------------------------------

// unordered pairs (t<u) jointly firable in one step from some reachable
// marking
std::vector<std::pair<trans_id, trans_id>> concurrency_relation(
    const labelled_net& n, const limits& lim = {});

// unordered pairs (t<u) with both singletons enabled but the joint step not,
// at some reachable marking
std::vector<std::pair<trans_id, trans_id>> enabled_conflict_relation(
    const labelled_net& n, const limits& lim = {});

// ---- weak reachability ----------------------------------------------------

// all markings reachable from m via tau-closure interleaved with singleton
// firings of the visible actions of sigma, in discovery order
std::vector<marking> weak_reach(const labelled_net& n, const marking& m,
                                const std::vector<std::string>& sigma,
                                const limits& lim = {});

}  // namespace distnet
