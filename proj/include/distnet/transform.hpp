#pragma once

#include <map>
#include <string>
#include <vector>

#include "distnet/distribution.hpp"
#include "distnet/net.hpp"
#include "distnet/reach.hpp"

namespace distnet {

// what role a generated (or kept) element plays in a transformed net
enum class elem_kind {
  original_place,
  original_trans,
  buffer_place,   // holds a token in transit from a place to a transition
  buffer_trans,   // internal move of a token into a buffer place
  lock_trans,     // box_s: moves a place's token into its embassy places
  embassy_place,  // s_AT_c: s's token as visible to transition class c
  fired_place,    // circ_t: t has fired, cleanup pending
  done_trans,     // prime_t: cleanup finished, produces t's postset
  request_place,  // s_BY_t_AT_c: t asks class c to give up s's embassy token
  ack_place,      // bar_s_BY_t_AT_c: class c confirmed the withdrawal
  gc_trans        // t_BY_s_AT_c: class c's withdrawal action itself
};

std::string to_string(elem_kind k);

struct provenance_entry {
  elem_kind kind;
  std::string place;  // source place involved, if any
  std::string trans;  // source transition involved, if any
  std::string cls;    // class representative involved, if any
};

using provenance_map = std::map<std::string, provenance_entry>;

// a net where every choice between transitions happens on one location and
// cross-location token transport goes through buffer places
struct async_net {
  labelled_net net;
  distribution source_dist;  // the distribution the construction was fed
  provenance_map prov;       // element name -> role
};

// For every arc from place s into transition t whose locations differ,
// reroute the token through a fresh internal transition and buffer place
// (s -> t__s -> s__t -> t); co-located input arcs and all output arcs stay.
// Added transitions are internal.
async_net async_implementation(const labelled_net& n, const distribution& d);

// a net where each conflict class of transitions resolves its choices
// locally, with embassy tokens negotiated between classes
struct tcc_net {
  labelled_net net;       // final result (internal relabels hidden again)
  labelled_net raw;       // construction output before re-hiding
  labelled_net prepared;  // source with internal transitions made visible
  std::string fresh_action;  // the temporary visible name, empty if unused
  provenance_map prov;
  std::vector<std::vector<trans_id>> classes;  // conflict classes, prepared ids
  std::vector<std::uint32_t> class_of;         // prepared trans -> class index
  std::vector<std::string> class_rep;          // least member name per class
  std::vector<std::vector<std::string>> locations;  // the intended partition
};

// The transition-controlled-choice construction: group transitions into
// conflict classes (reflexive-transitive closure of enabled conflict), give
// every place an embassy place per client class fed by a lock transition,
// and let a firing transition collect its class's embassies, request the
// withdrawal of competing classes' embassies for its preset, and only then
// produce its postset. Sources with internal transitions are handled by
// temporarily renaming their labels to a fresh visible action.
tcc_net tcc_implementation(const labelled_net& n, const limits& lim = {});

// the partition under which the construction's output is meant to be run:
// one location per source place, one per conflict class
std::vector<std::vector<std::string>> locations_of_tcc(const labelled_net& n,
                                                       const limits& lim = {});

// helper shared with the oracle suite: a copy of n with every internal
// transition relabelled to the given visible action (added to the action
// table if needed)
labelled_net reveal_internal(const labelled_net& n, const std::string& action);

}  // namespace distnet
