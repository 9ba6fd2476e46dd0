#pragma once

#include <optional>
#include <string>
#include <vector>

#include "distnet/distribution.hpp"
#include "distnet/net.hpp"
#include "distnet/reach.hpp"
#include "distnet/semantics.hpp"
#include "distnet/transform.hpp"

namespace distnet {

enum class pattern_kind {
  conflict,        // reachable shared-preplace conflict
  n_shape,         // conflict where the passive partner has another preplace
  m_shape,         // two overlapping conflicts, both ends reachable
  pure_visible_m,  // m with all three labels visible, covered by one marking
  distributed_conflict
};

std::string to_string(pattern_kind k);

// witness of one of the structural patterns; re-checkable against the
// defining condition
struct pattern_witness {
  pattern_kind kind;
  std::vector<std::string> transitions;
  std::vector<std::string> places;
  std::vector<std::vector<std::string>> markings;  // place-name lists
};

// a conflict the given distribution fails to confine to one location:
// transitions t != u sharing a preplace p not co-located with u, with the
// preset of t coverable from the initial marking
std::optional<pattern_witness> has_distributed_conflict(const labelled_net& n,
                                                        const distribution& d,
                                                        const limits& lim = {});

// same, on a precomputed reachability graph (for checks over many
// candidate distributions of one net)
std::optional<pattern_witness> has_distributed_conflict(const labelled_net& n,
                                                        const distribution& d,
                                                        const reach_graph& rg);

// detect conflict / n_shape / m_shape per their defining formulas
std::optional<pattern_witness> detect_pattern(const labelled_net& n,
                                              pattern_kind kind,
                                              const limits& lim = {});

// visible transitions t,u,v with pre(t) meeting pre(u), pre(u) meeting
// pre(v), pre(t) disjoint from pre(v), and one reachable marking covering
// all three presets
std::optional<pattern_witness> detect_pure_visible_m(const labelled_net& n,
                                                     const limits& lim = {});

struct async_check {
  verdict v = verdict::unknown;
  std::optional<distribution> dist;         // on yes: the distribution found
  std::optional<pattern_witness> pattern;   // on no: why the first candidate fails
  std::string note;
};

// does some candidate distribution of the class keep every conflict local?
// requires a plain net
async_check structural_async(const labelled_net& n, dist_requirement r,
                             const limits& lim = {});

// does some candidate distribution give a buffer-based implementation with
// the same step readiness behaviour? requires a plain net
async_check behavioural_async(const labelled_net& n, dist_requirement r,
                              const limits& lim = {});

struct distributable_result {
  verdict v = verdict::unknown;
  std::optional<tcc_net> witness;   // on yes: the constructed implementation
  std::vector<std::string> chain;   // on no: t0 #...# tn with t0, tn concurrent
  std::string note;
};

// a plain net admits a distributed implementation with the same step
// readiness behaviour iff no two transitions of a common conflict cluster
// can ever fire concurrently
distributable_result plain_distributable(const labelled_net& n,
                                         const limits& lim = {});

enum class sync_verdict { truly_synchronous, unknown };

std::string to_string(sync_verdict v);

// a plain net exhibiting the pure visible m pattern has no distributed
// implementation at all; absence of the pattern decides nothing here
sync_verdict truly_synchronous_upper(const labelled_net& n,
                                     const limits& lim = {});

struct m_pair {
  std::vector<std::string> trace;
  std::vector<std::vector<std::pair<std::string, std::uint32_t>>> menu;
  std::string a, b, c;
};

// search the ready pairs for a menu X and actions a != c with {b} in X,
// {a,c} in X, {a,b} not in X, {b,c} not in X
std::optional<m_pair> ready_m_pair(const labelled_net& n,
                                   const limits& lim = {});

struct class_report {
  std::string net_name;
  bool plain = false;
  verdict validated = verdict::unknown;
  async_check structural_fd, structural_sd, structural_ad;
  async_check behavioural_fd, behavioural_sd, behavioural_ad;
  distributed_result distributed;
  distributable_result distributable;
  sync_verdict sync_upper = sync_verdict::unknown;
  std::optional<pattern_witness> pure_m;
  std::string note;  // e.g. why the plain-only predicates were skipped
};

// run every membership predicate applicable to the net; plain-only
// predicates come back unknown (with a note) on labelled nets; bound or
// cap overruns come back unknown rather than raising
class_report classify(const labelled_net& n, const limits& lim = {});

}  // namespace distnet
