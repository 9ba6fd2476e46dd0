#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "distnet/distribution.hpp"
#include "distnet/net.hpp"
#include "distnet/reach.hpp"
#include "distnet/transform.hpp"

namespace distnet {

// outcome of one exhaustive certificate sweep
struct check_result {
  bool ok = true;
  std::string detail;  // counterexample description when !ok
};

// ---- buffer-implementation certificates ------------------------------------

// Everything needed to evaluate the invariant alpha that characterizes the
// reachable markings of a buffer-based implementation: the source net and
// its reachable markings, the implementation, and the shift-back table from
// implementation places to source places.
struct alpha_context {
  labelled_net source;
  distribution dist;
  async_net impl;
  reach_graph source_reach;

  std::vector<place_id> back;          // impl place -> source place
  std::vector<char> is_buffer_place;   // impl place
  std::vector<char> is_buffer_trans;   // impl transition
  std::vector<std::vector<place_id>> buffers_of;  // source place -> impl buffers
  idset counted;  // impl places: originals with at least one buffered out-arc

  limits lim;
};

alpha_context make_alpha_context(const labelled_net& source,
                                 const distribution& d, const limits& lim = {});

// image of an implementation marking with every buffer token shifted back to
// the place it came from
marking tau_back(const alpha_context& ctx, const marking& m);

// the characteristic invariant: the shifted-back marking is reachable in the
// source and no two tokens shift back to the same place
bool alpha(const alpha_context& ctx, const marking& m);

// number of marked source places with some buffered out-arc; strictly drops
// on every buffer move
std::size_t alpha_d(const alpha_context& ctx, const marking& m);

// reachable(implementation) equals { m : alpha(m) }, where the alpha side is
// enumerated as all buffer-shift images of reachable source markings
check_result check_alpha_characterization(const alpha_context& ctx);

// every buffer move from a reachable marking strictly decreases alpha_d,
// preserves the shifted-back marking, and preserves alpha
check_result check_d_descent(const alpha_context& ctx);

// every source step from a reachable source marking can be matched in the
// implementation by buffer moves followed by the same transitions, ending in
// the same marking
check_result check_step_simulation(const alpha_context& ctx);

// every visible step of the implementation projects to a source step with
// the same label between the shifted-back markings, preserving alpha
check_result check_visible_projection(const alpha_context& ctx);

// for every reachable implementation marking, some shortest weak trace
// leading to it is also weakly executable in the source, reaching the
// shifted-back marking
check_result check_weak_projection(const alpha_context& ctx);

// when the distribution admits no distributed conflict: from any reachable
// source marking, every maximal buffer-move descent ends in a marking
// offering exactly the source marking's steps
check_result check_stable_menus(const alpha_context& ctx);

// ---- transition-controlled-choice certificates -----------------------------

// Tables for the invariant beta over the construction's markings. The source
// must be free of internal transitions (use the tcc_net's prepared/raw pair)
// and every source place needs at least one posttransition, else the
// shift-back functions lose tokens.
struct beta_context {
  labelled_net source;  // internal-free source the construction was run on
  labelled_net impl;    // raw construction output
  reach_graph source_reach;

  std::vector<std::uint32_t> class_of;  // source transition -> class
  std::vector<std::string> class_rep;

  idset orig_mask;                      // impl places that are source places
  std::vector<place_id> orig_of;        // impl place -> source place (originals)
  std::vector<std::vector<std::uint32_t>> client_classes;  // per source place
  std::map<std::pair<place_id, std::uint32_t>, place_id> embassy;  // (s,c)
  std::vector<place_id> fired_place_of;  // source transition -> circ place
  std::vector<std::optional<trans_id>> fired_trans_of;  // impl place -> t
  std::map<std::tuple<place_id, trans_id, std::uint32_t>, place_id> request;
  std::map<std::tuple<place_id, trans_id, std::uint32_t>, place_id> ack;
  std::vector<std::size_t> weight;  // impl place -> its summand in beta_d

  limits lim;
};

beta_context make_beta_context(const tcc_net& t, const limits& lim = {});

// lower shift-back: a source place counts as marked only once its token is
// fully accounted for (all embassies present, or a consumer's fired place)
marking tau_back_all(const beta_context& ctx, const marking& m);

// upper shift-back: a source place counts as marked if any trace of its
// token remains (some embassy present, or a consumer fired from it)
marking tau_back_any(const beta_context& ctx, const marking& m);

// tokens still owed internal work: source places + fired places (weighted by
// postset) + request places
std::size_t beta_d(const beta_context& ctx, const marking& m);

// the marking invariant; returns the first violated clause (1..7), or
// nothing when all hold
std::optional<int> beta(const beta_context& ctx, const marking& m);

// every reachable marking of the construction satisfies beta
check_result check_beta_invariant(const beta_context& ctx);

// the five clauses tying the construction to its source: initial match,
// internal moves preserve the lower shift-back and decrease beta_d, visible
// steps project, d>0 guarantees an internal move, and at d=0 every source
// step is matched
check_result check_branching_clauses(const beta_context& ctx);

}  // namespace distnet
