// Brute-force reference implementations used only by the tests. Everything
// here follows the definitions literally - full enabledness conditions, no
// contact-freeness shortcuts, exhaustive subset enumeration - trading speed
// for being obviously right. Deliberately independent of the library's
// reach/semantics code: only the net representation is shared.
#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "distnet/net.hpp"

namespace oracle {

// multiset of visible action names, sorted, with repeats spelled out
using label_multiset = std::vector<std::string>;
// the step labels on offer at one stable marking
using menu_set = std::set<label_multiset>;

struct ready_pair {
  std::vector<std::string> trace;
  menu_set x;

  bool operator==(const ready_pair&) const = default;
  bool operator<(const ready_pair& o) const {
    return std::tie(trace, x) < std::tie(o.trace, o.x);
  }
};

// full-definition step enabledness: members have marked presets and fire
// without contact, and are pairwise independent on presets and postsets
bool step_ok(const distnet::labelled_net& n, const distnet::marking& m,
             const std::vector<distnet::trans_id>& g);

distnet::marking fire_step(const distnet::labelled_net& n,
                           const distnet::marking& m,
                           const std::vector<distnet::trans_id>& g);

// every enabled step, found by trying all nonempty transition subsets
std::vector<std::vector<distnet::trans_id>> all_steps(
    const distnet::labelled_net& n, const distnet::marking& m);

// markings reachable from m0 by firing one transition at a time
std::set<distnet::marking> reachable(const distnet::labelled_net& n);

// no internal transition is enabled at m
bool stable(const distnet::labelled_net& n, const distnet::marking& m);

// label multisets of the all-visible steps enabled at m
menu_set menu_at(const distnet::labelled_net& n, const distnet::marking& m);

// every ready pair whose trace has length <= max_len: breadth-first search
// over (marking, trace) pairs, recording the menu wherever the marking is
// stable
std::set<ready_pair> ready_pairs(const distnet::labelled_net& n,
                                 std::size_t max_len);

}  // namespace oracle
