// Core model: finite 1-safe labelled petri nets. Places, transitions and
// actions are interned to dense integer ids at construction time; markings
// are bitsets over place ids. Everything downstream (reachability, readiness
// semantics, distribution checks, the net transformations) works on this
// representation.
#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace distnet {

using place_id = std::uint32_t;
using trans_id = std::uint32_t;
using action_id = std::uint32_t;

// transitions carrying this action id are internal (unobservable)
inline constexpr action_id tau_action = 0xffffffffu;

// the reserved spelling of the internal label in the text format
inline constexpr const char* tau_name = "tau";

struct net_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// raised when a state-space sweep would visit more markings than allowed
struct state_bound_exceeded : net_error {
  explicit state_bound_exceeded(std::size_t bound)
      : net_error("state bound of " + std::to_string(bound) +
                  " markings exceeded"),
        bound(bound) {}
  std::size_t bound;
};

// raised when a distribution enumeration would exceed its candidate cap
struct candidate_cap_exceeded : net_error {
  explicit candidate_cap_exceeded(std::size_t cap)
      : net_error("candidate cap of " + std::to_string(cap) + " exceeded"),
        cap(cap) {}
  std::size_t cap;
};

// raised when a cooperative cancellation flag is set mid-analysis
struct cancelled : net_error {
  cancelled() : net_error("analysis cancelled") {}
};

// Dense bitset over small integer ids. Doubles as a marking (set of places)
// and as a transition set. Sets from different universes must not be mixed;
// all operations assume equal universe sizes.
class idset {
 public:
  idset() = default;
  explicit idset(std::size_t nbits)
      : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  std::size_t universe() const { return nbits_; }

  bool test(std::uint32_t i) const {
    return (w_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::uint32_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::uint32_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : w_) n += std::popcount(w);
    return n;
  }

  bool subset_of(const idset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const idset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  idset& operator|=(const idset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  idset& operator&=(const idset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  // set difference
  idset& operator-=(const idset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend idset operator|(idset a, const idset& b) { return a |= b; }
  friend idset operator&(idset a, const idset& b) { return a &= b; }
  friend idset operator-(idset a, const idset& b) { return a -= b; }

  bool operator==(const idset& o) const { return w_ == o.w_; }
  bool operator!=(const idset& o) const { return w_ != o.w_; }
  // deterministic total order used for canonical sorting of marking lists
  bool operator<(const idset& o) const { return w_ < o.w_; }

  std::vector<std::uint32_t> elems() const {
    std::vector<std::uint32_t> out;
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }

  template <class F>
  void for_each(F f) const {
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      std::uint64_t v = w_[wi];
      while (v) {
        f(static_cast<std::uint32_t>(wi * 64 + std::countr_zero(v)));
        v &= v - 1;
      }
    }
  }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325u;
    for (auto w : w_) {
      h ^= w;
      h *= 0x100000001b3u;
    }
    return h;
  }

 private:
  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> w_;
};

using marking = idset;

struct idset_hash {
  std::size_t operator()(const idset& s) const { return s.hash(); }
};

struct labelled_net {
  std::string name;
  std::vector<std::string> place_names;
  std::vector<std::string> trans_names;
  std::vector<std::string> action_names;  // interned visible action names
  std::vector<action_id> label;           // per transition; tau_action = internal
  std::vector<idset> pre;                 // per transition, over places
  std::vector<idset> post;                // per transition, over places
  std::vector<std::vector<trans_id>> place_post;  // s -> transitions with s in pre
  std::vector<std::vector<trans_id>> place_pre;   // s -> transitions with s in post
  marking m0;
  std::unordered_map<std::string, place_id> place_index;
  std::unordered_map<std::string, trans_id> trans_index;
  std::unordered_map<std::string, action_id> action_index;

  std::size_t n_places() const { return place_names.size(); }
  std::size_t n_transitions() const { return trans_names.size(); }

  bool is_tau(trans_id t) const { return label[t] == tau_action; }
  bool has_tau() const;
  // injectively labelled and without tau transitions
  bool is_plain() const;
  // action name, or "tau" for internal transitions
  const std::string& label_name(trans_id t) const;

  std::optional<place_id> find_place(const std::string& n) const;
  std::optional<trans_id> find_trans(const std::string& n) const;
  std::optional<action_id> find_action(const std::string& n) const;

  // true if any element (place or transition) uses this name
  bool has_element(const std::string& n) const {
    return place_index.count(n) || trans_index.count(n);
  }

  std::string marking_to_string(const marking& m) const;
};

// Incremental construction with name interning; arcs may reference elements
// in any order but both endpoints must exist when the arc is added.
class net_builder {
 public:
  explicit net_builder(std::string net_name = "net");

  place_id add_place(const std::string& name, bool marked = false);
  trans_id add_tau(const std::string& name);
  trans_id add_transition(const std::string& name, const std::string& action);
  // resolves which endpoint is the place; rejects place->place etc.
  void add_arc(const std::string& from, const std::string& to);
  void arc_pt(place_id s, trans_id t);
  void arc_tp(trans_id t, place_id s);
  void mark(place_id s);

  bool has_place(const std::string& name) const {
    return place_index_.count(name) != 0;
  }
  bool has_trans(const std::string& name) const {
    return trans_index_.count(name) != 0;
  }
  bool has_element(const std::string& name) const {
    return has_place(name) || has_trans(name);
  }

  labelled_net build() const;

 private:
  trans_id add_trans_impl(const std::string& name, action_id a);

  std::string name_;
  std::vector<std::string> place_names_, trans_names_, action_names_;
  std::vector<action_id> label_;
  std::vector<char> marked_;
  std::vector<std::pair<place_id, trans_id>> arcs_pt_;
  std::vector<std::pair<trans_id, place_id>> arcs_tp_;
  std::unordered_map<std::string, place_id> place_index_;
  std::unordered_map<std::string, trans_id> trans_index_;
  std::unordered_map<std::string, action_id> action_index_;
};

// Structural isomorphism: a bijection on places and transitions preserving
// arcs, the initial marking, and transition labels (by action name).
bool isomorphic(const labelled_net& a, const labelled_net& b);

// marking from place names; throws net_error on an unknown place
marking marking_of(const labelled_net& n, const std::vector<std::string>& places);

}  // namespace distnet
