#include "distnet/net.hpp"

#include <algorithm>

namespace distnet {

bool labelled_net::has_tau() const {
  for (auto a : label)
    if (a == tau_action) return true;
  return false;
}

bool labelled_net::is_plain() const {
  if (has_tau()) return false;
  std::vector<char> seen(action_names.size(), 0);
  for (auto a : label) {
    if (seen[a]) return false;
    seen[a] = 1;
  }
  return true;
}

const std::string& labelled_net::label_name(trans_id t) const {
  static const std::string tau = tau_name;
  return is_tau(t) ? tau : action_names[label[t]];
}

std::optional<place_id> labelled_net::find_place(const std::string& n) const {
  auto it = place_index.find(n);
  if (it == place_index.end()) return std::nullopt;
  return it->second;
}

std::optional<trans_id> labelled_net::find_trans(const std::string& n) const {
  auto it = trans_index.find(n);
  if (it == trans_index.end()) return std::nullopt;
  return it->second;
}

std::optional<action_id> labelled_net::find_action(const std::string& n) const {
  auto it = action_index.find(n);
  if (it == action_index.end()) return std::nullopt;
  return it->second;
}

std::string labelled_net::marking_to_string(const marking& m) const {
  std::string out = "{";
  bool first = true;
  m.for_each([&](std::uint32_t s) {
    if (!first) out += ",";
    out += place_names[s];
    first = false;
  });
  out += "}";
  return out;
}

net_builder::net_builder(std::string net_name) : name_(std::move(net_name)) {}

place_id net_builder::add_place(const std::string& name, bool marked) {
  if (name.empty()) throw net_error("empty place name");
  if (has_element(name))
    throw net_error("duplicate element name '" + name + "'");
  place_id id = static_cast<place_id>(place_names_.size());
  place_names_.push_back(name);
  marked_.push_back(marked ? 1 : 0);
  place_index_.emplace(name, id);
  return id;
}

trans_id net_builder::add_trans_impl(const std::string& name, action_id a) {
  if (name.empty()) throw net_error("empty transition name");
  if (has_element(name))
    throw net_error("duplicate element name '" + name + "'");
  trans_id id = static_cast<trans_id>(trans_names_.size());
  trans_names_.push_back(name);
  label_.push_back(a);
  trans_index_.emplace(name, id);
  return id;
}

trans_id net_builder::add_tau(const std::string& name) {
  return add_trans_impl(name, tau_action);
}

trans_id net_builder::add_transition(const std::string& name,
                                     const std::string& action) {
  if (action.empty()) throw net_error("empty action name");
  if (action == tau_name) return add_tau(name);
  action_id a;
  auto it = action_index_.find(action);
  if (it != action_index_.end()) {
    a = it->second;
  } else {
    a = static_cast<action_id>(action_names_.size());
    action_names_.push_back(action);
    action_index_.emplace(action, a);
  }
  return add_trans_impl(name, a);
}

void net_builder::add_arc(const std::string& from, const std::string& to) {
  auto fp = place_index_.find(from);
  auto tp = place_index_.find(to);
  auto ft = trans_index_.find(from);
  auto tt = trans_index_.find(to);
  if (fp != place_index_.end() && tt != trans_index_.end()) {
    arc_pt(fp->second, tt->second);
  } else if (ft != trans_index_.end() && tp != place_index_.end()) {
    arc_tp(ft->second, tp->second);
  } else if (fp == place_index_.end() && ft == trans_index_.end()) {
    throw net_error("unknown arc endpoint '" + from + "'");
  } else if (tp == place_index_.end() && tt == trans_index_.end()) {
    throw net_error("unknown arc endpoint '" + to + "'");
  } else {
    throw net_error("arc '" + from + " -> " + to +
                    "' must connect a place and a transition");
  }
}

void net_builder::arc_pt(place_id s, trans_id t) { arcs_pt_.emplace_back(s, t); }

void net_builder::arc_tp(trans_id t, place_id s) { arcs_tp_.emplace_back(t, s); }

void net_builder::mark(place_id s) { marked_[s] = 1; }

labelled_net net_builder::build() const {
  labelled_net n;
  n.name = name_;
  n.place_names = place_names_;
  n.trans_names = trans_names_;
  n.action_names = action_names_;
  n.label = label_;
  n.place_index = place_index_;
  n.trans_index = trans_index_;
  n.action_index = action_index_;
  std::size_t np = place_names_.size(), nt = trans_names_.size();
  n.pre.assign(nt, idset(np));
  n.post.assign(nt, idset(np));
  n.place_post.assign(np, {});
  n.place_pre.assign(np, {});
  for (auto [s, t] : arcs_pt_) {
    if (!n.pre[t].test(s)) n.place_post[s].push_back(t);
    n.pre[t].set(s);
  }
  for (auto [t, s] : arcs_tp_) {
    if (!n.post[t].test(s)) n.place_pre[s].push_back(t);
    n.post[t].set(s);
  }
  n.m0 = marking(np);
  for (std::size_t s = 0; s < np; ++s)
    if (marked_[s]) n.m0.set(static_cast<std::uint32_t>(s));
  return n;
}

namespace {

// Per-place signature used to prune the isomorphism search: initial marking
// plus the sorted multisets of labels of consuming/producing transitions.
std::vector<std::string> place_signature(const labelled_net& n, place_id s) {
  std::vector<std::string> sig;
  sig.push_back(n.m0.test(s) ? "1" : "0");
  std::vector<std::string> in, out;
  for (auto t : n.place_post[s]) out.push_back(n.label_name(t));
  for (auto t : n.place_pre[s]) in.push_back(n.label_name(t));
  std::sort(in.begin(), in.end());
  std::sort(out.begin(), out.end());
  sig.push_back("<");
  sig.insert(sig.end(), in.begin(), in.end());
  sig.push_back(">");
  sig.insert(sig.end(), out.begin(), out.end());
  return sig;
}

struct iso_state {
  const labelled_net *a, *b;
  std::vector<std::uint32_t> pmap;   // a-place -> b-place or ~0
  std::vector<char> ptaken;          // b-place used
  std::vector<place_id> order;       // a-places in search order

  bool compatible(place_id sa, place_id sb) const {
    return place_signature(*a, sa) == place_signature(*b, sb);
  }

  bool match_transitions() const {
    // With places fully mapped, each a-transition must map to a unique
    // b-transition with the same label and translated pre/post sets.
    std::size_t nt = a->n_transitions();
    std::vector<char> used(nt, 0);
    for (trans_id t = 0; t < nt; ++t) {
      idset pre_b(b->n_places()), post_b(b->n_places());
      a->pre[t].for_each([&](std::uint32_t s) { pre_b.set(pmap[s]); });
      a->post[t].for_each([&](std::uint32_t s) { post_b.set(pmap[s]); });
      bool found = false;
      for (trans_id u = 0; u < nt; ++u) {
        if (used[u]) continue;
        if (a->label_name(t) != b->label_name(u)) continue;
        if (b->pre[u] == pre_b && b->post[u] == post_b) {
          used[u] = 1;
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  bool assign(std::size_t k) {
    if (k == order.size()) return match_transitions();
    place_id sa = order[k];
    for (place_id sb = 0; sb < b->n_places(); ++sb) {
      if (ptaken[sb] || !compatible(sa, sb)) continue;
      pmap[sa] = sb;
      ptaken[sb] = 1;
      if (assign(k + 1)) return true;
      ptaken[sb] = 0;
    }
    pmap[sa] = ~0u;
    return false;
  }
};

}  // namespace

marking marking_of(const labelled_net& n, const std::vector<std::string>& places) {
  marking m(n.n_places());
  for (const auto& name : places) {
    auto p = n.find_place(name);
    if (!p) throw net_error("unknown place '" + name + "'");
    m.set(*p);
  }
  return m;
}

bool isomorphic(const labelled_net& a, const labelled_net& b) {
  if (a.n_places() != b.n_places() || a.n_transitions() != b.n_transitions())
    return false;
  if (a.m0.count() != b.m0.count()) return false;
  std::vector<std::string> la, lb;
  for (trans_id t = 0; t < a.n_transitions(); ++t)
    la.push_back(a.label_name(t));
  for (trans_id t = 0; t < b.n_transitions(); ++t)
    lb.push_back(b.label_name(t));
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  if (la != lb) return false;

  iso_state st;
  st.a = &a;
  st.b = &b;
  st.pmap.assign(a.n_places(), ~0u);
  st.ptaken.assign(b.n_places(), 0);
  st.order.resize(a.n_places());
  for (place_id s = 0; s < a.n_places(); ++s) st.order[s] = s;
  // search rarest signatures first to cut branching
  std::unordered_map<std::string, int> freq;
  auto sigkey = [&](place_id s) {
    std::string k;
    for (auto& part : place_signature(a, s)) {
      k += part;
      k += '\x1f';
    }
    return k;
  };
  for (place_id s = 0; s < a.n_places(); ++s) freq[sigkey(s)]++;
  std::stable_sort(st.order.begin(), st.order.end(),
                   [&](place_id x, place_id y) {
                     return freq[sigkey(x)] < freq[sigkey(y)];
                   });
  return st.assign(0);
}

}  // namespace distnet
