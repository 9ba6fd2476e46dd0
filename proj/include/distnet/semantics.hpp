// Step readiness semantics: menus of label multisets at stable markings, the
// deterministic annotated automaton capturing all step ready pairs, exact
// equivalence checking by product traversal, and action hiding.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "distnet/reach.hpp"

namespace distnet {

struct not_stable : net_error {
  using net_error::net_error;
};

// finite multiset of visible action ids; items sorted by action, counts > 0
struct step_label {
  std::vector<std::pair<action_id, std::uint32_t>> items;
  bool operator==(const step_label&) const = default;
  bool operator<(const step_label& o) const { return items < o.items; }
};

// a menu: the set of step labels fireable at one stable marking, sorted
using menu_t = std::vector<step_label>;

// label multiset of a step; requires every member visible
step_label step_label_of(const labelled_net& n, std::span<const trans_id> g);

// menu at a stable marking; throws not_stable otherwise
menu_t menu(const labelled_net& n, const marking& m);

// Deterministic automaton over visible actions. A state is the tau-closed
// set of markings reachable under one trace; its annotation is the set of
// menus of its stable members. The set of step ready pairs is exactly
// { (sigma, X) : X in annotation(delta*(sigma)) }.
struct ready_automaton {
  struct state {
    std::vector<std::uint32_t> markings;  // reach-graph node ids, sorted
    std::vector<menu_t> menus;            // sorted annotation
    std::vector<std::pair<action_id, std::uint32_t>> next;  // sorted by action
  };
  std::vector<std::string> actions;  // action id -> name (copied from the net)
  std::vector<state> states;         // states[0] = initial
  reach_graph rg;                    // underlying marking graph

  const state* step(const state& q, action_id a) const;
};

ready_automaton ready_semantics(const labelled_net& n, const limits& lim = {});

// ready pairs with traces up to max_len, enumerated from the automaton;
// menus/trace carry action names so results are net-independent
struct named_pair {
  std::vector<std::string> trace;
  std::vector<std::vector<std::pair<std::string, std::uint32_t>>> menu;
  bool operator==(const named_pair&) const = default;
  bool operator<(const named_pair& o) const;
};
std::vector<named_pair> ready_pairs_upto(const ready_automaton& ra,
                                         std::size_t max_len);

// ---- equivalence ----------------------------------------------------------

struct equiv_witness {
  std::vector<std::string> trace;
  // the menu in the symmetric difference: a set of [action, count] multisets
  std::vector<std::vector<std::pair<std::string, std::uint32_t>>> menu;
  enum class side_t { left, right } side;
};

struct equiv_result {
  verdict v = verdict::unknown;
  std::optional<equiv_witness> witness;
  std::string note;  // reason when unknown, mode label when bounded
};

// exact comparison of the two ready-pair sets via product traversal of the
// automata; action names are matched across nets. On "no" the witness trace
// has minimal length.
equiv_result readiness_equivalent(const labelled_net& a, const labelled_net& b,
                                  const limits& lim = {});

// same comparison on prebuilt automata, for callers checking one net against
// many candidates
equiv_result readiness_equivalent(const ready_automaton& a,
                                  const ready_automaton& b,
                                  const limits& lim = {});

// diagnostic only: compares ready pairs with traces up to max_len; a "yes"
// here is unsound (labelled as such in note) since longer traces may differ
equiv_result readiness_equivalent_bounded(const labelled_net& a,
                                          const labelled_net& b,
                                          std::size_t max_len,
                                          const limits& lim = {});

// copy of the net with every transition labelled `action` made internal
labelled_net hide_action(const labelled_net& n, const std::string& action);

}  // namespace distnet
