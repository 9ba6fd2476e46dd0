#include "distnet/transform.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "distnet/semantics.hpp"

namespace distnet {

std::string to_string(elem_kind k) {
  switch (k) {
    case elem_kind::original_place: return "place";
    case elem_kind::original_trans: return "transition";
    case elem_kind::buffer_place: return "buffer-place";
    case elem_kind::buffer_trans: return "buffer-transition";
    case elem_kind::lock_trans: return "lock";
    case elem_kind::embassy_place: return "embassy";
    case elem_kind::fired_place: return "fired";
    case elem_kind::done_trans: return "done";
    case elem_kind::request_place: return "request";
    case elem_kind::ack_place: return "acknowledge";
    case elem_kind::gc_trans: return "withdraw";
  }
  return "?";
}

namespace {

// hands out names, appending __2, __3, ... on collision
class namer {
 public:
  explicit namer(const labelled_net& n) {
    used_.insert(n.place_names.begin(), n.place_names.end());
    used_.insert(n.trans_names.begin(), n.trans_names.end());
  }
  std::string fresh(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (std::size_t i = 2;; ++i) {
      std::string cand = base + "__" + std::to_string(i);
      if (used_.insert(cand).second) return cand;
    }
  }

 private:
  std::set<std::string> used_;
};

}  // namespace

async_net async_implementation(const labelled_net& n, const distribution& d) {
  if (d.place_loc.size() != n.n_places() ||
      d.trans_loc.size() != n.n_transitions())
    throw net_error("distribution is not total over the net's elements");

  async_net out;
  out.source_dist = d;
  namer names(n);
  net_builder b(n.name + "_async");

  for (place_id s = 0; s < n.n_places(); ++s) {
    b.add_place(n.place_names[s], n.m0.test(s));
    out.prov[n.place_names[s]] = {elem_kind::original_place, n.place_names[s], "", ""};
  }
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    b.add_transition(n.trans_names[t], n.label_name(t));
    out.prov[n.trans_names[t]] = {elem_kind::original_trans, "", n.trans_names[t], ""};
  }
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    const auto& tn = n.trans_names[t];
    for (auto s : n.pre[t].elems()) {
      const auto& sn = n.place_names[s];
      if (d.co_located_tp(t, s)) {
        b.add_arc(sn, tn);
      } else {
        std::string buf = names.fresh(sn + "__" + tn);
        std::string mover = names.fresh(tn + "__" + sn);
        b.add_place(buf);
        b.add_tau(mover);
        b.add_arc(sn, mover);
        b.add_arc(mover, buf);
        b.add_arc(buf, tn);
        out.prov[buf] = {elem_kind::buffer_place, sn, tn, ""};
        out.prov[mover] = {elem_kind::buffer_trans, sn, tn, ""};
      }
    }
    for (auto s : n.post[t].elems()) b.add_arc(tn, n.place_names[s]);
  }
  out.net = b.build();
  return out;
}

labelled_net reveal_internal(const labelled_net& n, const std::string& action) {
  if (action == tau_name || action.empty())
    throw net_error("reveal_internal needs a visible action name");
  labelled_net out = n;
  action_id a;
  if (auto existing = out.find_action(action)) {
    a = *existing;
  } else {
    a = static_cast<action_id>(out.action_names.size());
    out.action_names.push_back(action);
    out.action_index.emplace(action, a);
  }
  for (trans_id t = 0; t < out.n_transitions(); ++t)
    if (out.label[t] == tau_action) out.label[t] = a;
  return out;
}

namespace {

struct union_find {
  std::vector<std::uint32_t> parent;
  explicit union_find(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0u);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

}  // namespace

tcc_net tcc_implementation(const labelled_net& n, const limits& lim) {
  tcc_net out;

  out.prepared = n;
  if (n.has_tau()) {
    for (std::size_t i = 0;; ++i) {
      std::string cand = "__i" + std::to_string(i);
      if (!n.find_action(cand)) {
        out.fresh_action = cand;
        break;
      }
    }
    out.prepared = reveal_internal(n, out.fresh_action);
  }
  const labelled_net& src = out.prepared;

  // conflict classes: closure of "enabled together somewhere but not jointly"
  union_find uf(src.n_transitions());
  for (auto [t, u] : enabled_conflict_relation(src, lim)) uf.unite(t, u);

  std::map<std::uint32_t, std::vector<trans_id>> groups;
  for (trans_id t = 0; t < src.n_transitions(); ++t)
    groups[uf.find(t)].push_back(t);
  // class order: by least member name, for stable output
  std::vector<std::vector<trans_id>> classes;
  for (auto& [root, members] : groups) classes.push_back(members);
  auto least_name = [&](const std::vector<trans_id>& ms) {
    std::string best = src.trans_names[ms[0]];
    for (auto t : ms) best = std::min(best, src.trans_names[t]);
    return best;
  };
  std::sort(classes.begin(), classes.end(),
            [&](const auto& a, const auto& c) { return least_name(a) < least_name(c); });
  out.classes = classes;
  out.class_of.resize(src.n_transitions());
  for (std::uint32_t c = 0; c < classes.size(); ++c) {
    out.class_rep.push_back(least_name(classes[c]));
    for (auto t : classes[c]) out.class_of[t] = c;
  }

  namer names(src);
  net_builder b(n.name + "_tcc");
  auto& prov = out.prov;

  // location contents: one per source place, then one per class
  std::vector<std::vector<std::string>> place_locs(src.n_places());
  std::vector<std::vector<std::string>> class_locs(classes.size());

  // originals
  for (place_id s = 0; s < src.n_places(); ++s) {
    b.add_place(src.place_names[s], src.m0.test(s));
    prov[src.place_names[s]] = {elem_kind::original_place, src.place_names[s], "", ""};
    place_locs[s].push_back(src.place_names[s]);
  }
  for (trans_id t = 0; t < src.n_transitions(); ++t) {
    b.add_transition(src.trans_names[t], src.label_name(t));
    prov[src.trans_names[t]] = {elem_kind::original_trans, "", src.trans_names[t], ""};
    class_locs[out.class_of[t]].push_back(src.trans_names[t]);
  }

  // per place: a lock transition, and one embassy place per client class
  std::vector<std::string> lock(src.n_places());
  std::map<std::pair<place_id, std::uint32_t>, std::string> embassy;
  for (place_id s = 0; s < src.n_places(); ++s) {
    const auto& sn = src.place_names[s];
    lock[s] = names.fresh("box_" + sn);
    b.add_tau(lock[s]);
    b.add_arc(sn, lock[s]);
    prov[lock[s]] = {elem_kind::lock_trans, sn, "", ""};
    place_locs[s].push_back(lock[s]);

    std::set<std::uint32_t> client_classes;
    for (auto t : src.place_post[s]) client_classes.insert(out.class_of[t]);
    for (auto c : client_classes) {
      std::string en = names.fresh(sn + "_AT_" + out.class_rep[c]);
      b.add_place(en);
      b.add_arc(lock[s], en);
      embassy[{s, c}] = en;
      prov[en] = {elem_kind::embassy_place, sn, "", out.class_rep[c]};
      class_locs[c].push_back(en);
    }
  }

  // per transition: embassy inputs, a fired place, and a done transition
  // that releases the postset
  std::vector<std::string> fired(src.n_transitions()), done(src.n_transitions());
  for (trans_id t = 0; t < src.n_transitions(); ++t) {
    const auto& tn = src.trans_names[t];
    for (auto s : src.pre[t].elems())
      b.add_arc(embassy.at({s, out.class_of[t]}), tn);
    fired[t] = names.fresh("circ_" + tn);
    done[t] = names.fresh("prime_" + tn);
    b.add_place(fired[t]);
    b.add_tau(done[t]);
    b.add_arc(tn, fired[t]);
    b.add_arc(fired[t], done[t]);
    for (auto s : src.post[t].elems()) b.add_arc(done[t], src.place_names[s]);
    prov[fired[t]] = {elem_kind::fired_place, "", tn, ""};
    prov[done[t]] = {elem_kind::done_trans, "", tn, ""};
    class_locs[out.class_of[t]].push_back(fired[t]);
    class_locs[out.class_of[t]].push_back(done[t]);
  }

  // per (place s, firing transition t, competing class c != [t]) with both
  // classes clients of s: t requests c's embassy token back before finishing
  for (place_id s = 0; s < src.n_places(); ++s) {
    const auto& sn = src.place_names[s];
    std::set<std::uint32_t> client_classes;
    for (auto t : src.place_post[s]) client_classes.insert(out.class_of[t]);
    for (auto t : src.place_post[s]) {
      const auto& tn = src.trans_names[t];
      for (auto c : client_classes) {
        if (c == out.class_of[t]) continue;
        const auto& cn = out.class_rep[c];
        std::string req = names.fresh(sn + "_BY_" + tn + "_AT_" + cn);
        std::string ack = names.fresh("bar_" + sn + "_BY_" + tn + "_AT_" + cn);
        std::string gc = names.fresh(tn + "_BY_" + sn + "_AT_" + cn);
        b.add_place(req);
        b.add_place(ack);
        b.add_tau(gc);
        b.add_arc(tn, req);
        b.add_arc(req, gc);
        b.add_arc(embassy.at({s, c}), gc);
        b.add_arc(gc, ack);
        b.add_arc(ack, done[t]);
        prov[req] = {elem_kind::request_place, sn, tn, cn};
        prov[ack] = {elem_kind::ack_place, sn, tn, cn};
        prov[gc] = {elem_kind::gc_trans, sn, tn, cn};
        class_locs[c].push_back(req);
        class_locs[c].push_back(gc);
        class_locs[out.class_of[t]].push_back(ack);
      }
    }
  }

  out.raw = b.build();
  out.net = out.fresh_action.empty() ? out.raw
                                     : hide_action(out.raw, out.fresh_action);

  for (auto& loc : place_locs) {
    std::sort(loc.begin(), loc.end());
    out.locations.push_back(std::move(loc));
  }
  for (auto& loc : class_locs) {
    std::sort(loc.begin(), loc.end());
    out.locations.push_back(std::move(loc));
  }
  std::sort(out.locations.begin(), out.locations.end());
  return out;
}

std::vector<std::vector<std::string>> locations_of_tcc(const labelled_net& n,
                                                       const limits& lim) {
  return tcc_implementation(n, lim).locations;
}

}  // namespace distnet
