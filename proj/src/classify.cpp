#include "distnet/classify.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace distnet {

std::string to_string(pattern_kind k) {
  switch (k) {
    case pattern_kind::conflict: return "conflict";
    case pattern_kind::n_shape: return "n";
    case pattern_kind::m_shape: return "m";
    case pattern_kind::pure_visible_m: return "pure-visible-m";
    case pattern_kind::distributed_conflict: return "distributed-conflict";
  }
  return "?";
}

std::string to_string(sync_verdict v) {
  return v == sync_verdict::truly_synchronous ? "truly-synchronous" : "unknown";
}

namespace {

std::vector<std::string> marking_names(const labelled_net& n, const marking& m) {
  std::vector<std::string> out;
  m.for_each([&](std::uint32_t p) { out.push_back(n.place_names[p]); });
  return out;
}

// first reachable marking covering the given place set, if any
std::optional<marking> covering_marking(const reach_graph& rg, const idset& need) {
  for (const auto& m : rg.nodes)
    if (need.subset_of(m)) return m;
  return std::nullopt;
}

}  // namespace

std::optional<pattern_witness> has_distributed_conflict(const labelled_net& n,
                                                        const distribution& d,
                                                        const limits& lim) {
  return has_distributed_conflict(n, d, explore(n, lim));
}

std::optional<pattern_witness> has_distributed_conflict(const labelled_net& n,
                                                        const distribution& d,
                                                        const reach_graph& rg) {
  if (d.place_loc.size() != n.n_places() ||
      d.trans_loc.size() != n.n_transitions())
    throw net_error("distribution is not total over the net's elements");
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    std::optional<marking> cover;  // computed lazily, shared across u and p
    bool cover_known = false;
    for (trans_id u = 0; u < n.n_transitions(); ++u) {
      if (t == u || !n.pre[t].intersects(n.pre[u])) continue;
      for (auto p : (n.pre[t] & n.pre[u]).elems()) {
        if (d.place_loc[p] == d.trans_loc[u]) continue;
        if (!cover_known) {
          cover = covering_marking(rg, n.pre[t]);
          cover_known = true;
        }
        if (!cover) break;
        pattern_witness w;
        w.kind = pattern_kind::distributed_conflict;
        w.transitions = {n.trans_names[t], n.trans_names[u]};
        w.places = {n.place_names[p]};
        w.markings = {marking_names(n, *cover)};
        return w;
      }
      if (cover_known && !cover) break;
    }
  }
  return std::nullopt;
}

std::optional<pattern_witness> detect_pattern(const labelled_net& n,
                                              pattern_kind kind,
                                              const limits& lim) {
  reach_graph rg = explore(n, lim);

  if (kind == pattern_kind::conflict || kind == pattern_kind::n_shape) {
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      std::optional<marking> cover;
      bool cover_known = false;
      for (trans_id u = 0; u < n.n_transitions(); ++u) {
        if (t == u || !n.pre[t].intersects(n.pre[u])) continue;
        if (kind == pattern_kind::n_shape && n.pre[u].count() <= 1) continue;
        if (!cover_known) {
          cover = covering_marking(rg, n.pre[t]);
          cover_known = true;
        }
        if (!cover) break;
        pattern_witness w;
        w.kind = kind;
        w.transitions = {n.trans_names[t], n.trans_names[u]};
        w.places = {n.place_names[(n.pre[t] & n.pre[u]).elems().front()]};
        w.markings = {marking_names(n, *cover)};
        return w;
      }
    }
    return std::nullopt;
  }

  if (kind != pattern_kind::m_shape)
    throw net_error("detect_pattern handles conflict, n and m only");

  // two overlapping conflicts (t,u) and (u,v) on distinct places, the outer
  // presets each coverable; t = v is allowed
  std::vector<std::optional<marking>> cover(n.n_transitions());
  std::vector<char> cover_known(n.n_transitions(), 0);
  auto cover_of = [&](trans_id t) -> const std::optional<marking>& {
    if (!cover_known[t]) {
      cover[t] = covering_marking(rg, n.pre[t]);
      cover_known[t] = 1;
    }
    return cover[t];
  };
  for (trans_id u = 0; u < n.n_transitions(); ++u)
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      if (t == u || !n.pre[t].intersects(n.pre[u])) continue;
      for (trans_id v = 0; v < n.n_transitions(); ++v) {
        if (v == u || !n.pre[u].intersects(n.pre[v])) continue;
        for (auto p : (n.pre[t] & n.pre[u]).elems())
          for (auto q : (n.pre[u] & n.pre[v]).elems()) {
            if (p == q) continue;
            if (!cover_of(t) || !cover_of(v)) continue;
            pattern_witness w;
            w.kind = kind;
            w.transitions = {n.trans_names[t], n.trans_names[u], n.trans_names[v]};
            w.places = {n.place_names[p], n.place_names[q]};
            w.markings = {marking_names(n, *cover_of(t)),
                          marking_names(n, *cover_of(v))};
            return w;
          }
      }
    }
  return std::nullopt;
}

std::optional<pattern_witness> detect_pure_visible_m(const labelled_net& n,
                                                     const limits& lim) {
  reach_graph rg = explore(n, lim);
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    if (n.is_tau(t)) continue;
    for (trans_id u = 0; u < n.n_transitions(); ++u) {
      if (n.is_tau(u) || !n.pre[t].intersects(n.pre[u])) continue;
      for (trans_id v = 0; v < n.n_transitions(); ++v) {
        if (n.is_tau(v) || !n.pre[u].intersects(n.pre[v])) continue;
        if (n.pre[t].intersects(n.pre[v])) continue;  // also rules out t=u, u=v
        auto cover = covering_marking(rg, n.pre[t] | n.pre[u] | n.pre[v]);
        if (!cover) continue;
        pattern_witness w;
        w.kind = pattern_kind::pure_visible_m;
        w.transitions = {n.trans_names[t], n.trans_names[u], n.trans_names[v]};
        w.places = {n.place_names[(n.pre[t] & n.pre[u]).elems().front()],
                    n.place_names[(n.pre[u] & n.pre[v]).elems().front()]};
        w.markings = {marking_names(n, *cover)};
        return w;
      }
    }
  }
  return std::nullopt;
}

namespace {

void require_plain(const labelled_net& n, const char* what) {
  if (!n.is_plain())
    throw net_error(std::string(what) +
                    " is defined for plain nets (injective visible labels) only");
}

}  // namespace

async_check structural_async(const labelled_net& n, dist_requirement r,
                             const limits& lim) {
  require_plain(n, "structural asynchrony");
  async_check res;
  std::vector<distribution> cands;
  try {
    reach_graph rg = explore(n, lim);
    cands = canonical_distributions(n, r, lim);
    for (const auto& d : cands) {
      if (!has_distributed_conflict(n, d, rg)) {
        res.v = verdict::yes;
        res.dist = d;
        return res;
      }
    }
    res.v = verdict::no;
    res.pattern = has_distributed_conflict(n, cands.front(), rg);
  } catch (const candidate_cap_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
  } catch (const state_bound_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
  }
  return res;
}

async_check behavioural_async(const labelled_net& n, dist_requirement r,
                              const limits& lim) {
  require_plain(n, "behavioural asynchrony");
  async_check res;
  bool saw_unknown = false;
  try {
    ready_automaton source_ra = ready_semantics(n, lim);
    for (const auto& d : canonical_distributions(n, r, lim)) {
      equiv_result eq;
      try {
        eq = readiness_equivalent(
            source_ra, ready_semantics(async_implementation(n, d).net, lim),
            lim);
      } catch (const state_bound_exceeded& e) {
        eq.v = verdict::unknown;
        eq.note = e.what();
      }
      if (eq.v == verdict::yes) {
        res.v = verdict::yes;
        res.dist = d;
        return res;
      }
      if (eq.v == verdict::unknown) {
        saw_unknown = true;
        res.note = eq.note;
      }
    }
    res.v = saw_unknown ? verdict::unknown : verdict::no;
  } catch (const candidate_cap_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
  } catch (const state_bound_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
  }
  return res;
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

distributable_result plain_distributable(const labelled_net& n,
                                         const limits& lim) {
  require_plain(n, "plain distributability");
  distributable_result res;
  std::vector<std::pair<trans_id, trans_id>> conflicts, conc;
  try {
    conflicts = enabled_conflict_relation(n, lim);
    conc = concurrency_relation(n, lim);
  } catch (const state_bound_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
    return res;
  }
  union_find uf(n.n_transitions());
  for (auto [t, u] : conflicts) uf.unite(t, u);

  std::optional<std::pair<trans_id, trans_id>> bad;
  for (auto [t, u] : conc)
    if (uf.find(t) == uf.find(u)) {
      bad = {t, u};
      break;
    }

  if (!bad) {
    res.v = verdict::yes;
    res.witness = tcc_implementation(n, lim);
    return res;
  }

  // shortest conflict chain from t to u
  auto [from, to] = *bad;
  std::vector<std::vector<trans_id>> adj(n.n_transitions());
  for (auto [t, u] : conflicts) {
    adj[t].push_back(u);
    adj[u].push_back(t);
  }
  std::vector<trans_id> prev(n.n_transitions(), 0xffffffffu);
  std::deque<trans_id> work{from};
  prev[from] = from;
  while (!work.empty()) {
    auto x = work.front();
    work.pop_front();
    if (x == to) break;
    for (auto y : adj[x])
      if (prev[y] == 0xffffffffu) {
        prev[y] = x;
        work.push_back(y);
      }
  }
  std::vector<std::string> chain;
  for (trans_id cur = to;; cur = prev[cur]) {
    chain.push_back(n.trans_names[cur]);
    if (cur == from) break;
  }
  std::reverse(chain.begin(), chain.end());
  res.v = verdict::no;
  res.chain = std::move(chain);
  return res;
}

sync_verdict truly_synchronous_upper(const labelled_net& n, const limits& lim) {
  require_plain(n, "the synchrony upper bound");
  return detect_pure_visible_m(n, lim) ? sync_verdict::truly_synchronous
                                       : sync_verdict::unknown;
}

std::optional<m_pair> ready_m_pair(const labelled_net& n, const limits& lim) {
  ready_automaton ra = ready_semantics(n, lim);

  // shortest trace to each automaton state
  std::vector<std::optional<std::pair<std::uint32_t, action_id>>> parent(
      ra.states.size());
  std::vector<std::uint32_t> order{0};
  std::vector<char> seen(ra.states.size(), 0);
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto [a, target] : ra.states[order[i]].next)
      if (!seen[target]) {
        seen[target] = 1;
        parent[target] = {order[i], a};
        order.push_back(target);
      }
  auto trace_to = [&](std::uint32_t q) {
    std::vector<std::string> rev;
    for (std::uint32_t cur = q; parent[cur]; cur = parent[cur]->first)
      rev.push_back(ra.actions[parent[cur]->second]);
    return std::vector<std::string>(rev.rbegin(), rev.rend());
  };

  auto multiset_of = [](action_id x, action_id y) {
    step_label l;
    if (x == y) {
      l.items = {{x, 2}};
    } else {
      l.items = {{std::min(x, y), 1}, {std::max(x, y), 1}};
    }
    return l;
  };

  for (auto q : order) {
    for (const auto& menu : ra.states[q].menus) {
      auto in_menu = [&](const step_label& l) {
        return std::binary_search(menu.begin(), menu.end(), l);
      };
      // candidate pairs {a,c}, a != c, and singletons {b}
      for (const auto& pair_entry : menu) {
        if (pair_entry.items.size() != 2 || pair_entry.items[0].second != 1 ||
            pair_entry.items[1].second != 1)
          continue;
        action_id a = pair_entry.items[0].first;
        action_id c = pair_entry.items[1].first;
        for (const auto& single : menu) {
          if (single.items.size() != 1 || single.items[0].second != 1) continue;
          action_id b = single.items[0].first;
          if (in_menu(multiset_of(a, b)) || in_menu(multiset_of(b, c))) continue;
          m_pair res;
          res.trace = trace_to(q);
          for (const auto& l : menu) {
            std::vector<std::pair<std::string, std::uint32_t>> ms;
            for (auto [act, cnt] : l.items) ms.emplace_back(ra.actions[act], cnt);
            res.menu.push_back(std::move(ms));
          }
          res.a = ra.actions[a];
          res.b = ra.actions[b];
          res.c = ra.actions[c];
          return res;
        }
      }
    }
  }
  return std::nullopt;
}

class_report classify(const labelled_net& n, const limits& lim) {
  class_report rep;
  rep.net_name = n.name;
  rep.plain = n.is_plain();

  rep.validated = validate(n, lim).ok;
  if (rep.validated == verdict::no) {
    rep.note = "net violates the model restrictions; no classes computed";
    return rep;
  }

  auto guard = [&](auto f, auto& slot) {
    try {
      slot = f();
    } catch (const state_bound_exceeded& e) {
      slot.v = verdict::unknown;
      slot.note = e.what();
    } catch (const cancelled& e) {
      slot.v = verdict::unknown;
      slot.note = e.what();
    }
  };

  if (rep.plain) {
    guard([&] { return structural_async(n, dist_requirement::fd, lim); },
          rep.structural_fd);
    guard([&] { return structural_async(n, dist_requirement::sd, lim); },
          rep.structural_sd);
    guard([&] { return structural_async(n, dist_requirement::ad, lim); },
          rep.structural_ad);
    guard([&] { return behavioural_async(n, dist_requirement::fd, lim); },
          rep.behavioural_fd);
    guard([&] { return behavioural_async(n, dist_requirement::sd, lim); },
          rep.behavioural_sd);
    guard([&] { return behavioural_async(n, dist_requirement::ad, lim); },
          rep.behavioural_ad);
    guard([&] { return plain_distributable(n, lim); }, rep.distributable);
    try {
      rep.sync_upper = truly_synchronous_upper(n, lim);
    } catch (const state_bound_exceeded&) {
      rep.sync_upper = sync_verdict::unknown;
    } catch (const cancelled&) {
      rep.sync_upper = sync_verdict::unknown;
    }
  } else {
    rep.note = "asynchrony and distributability classes apply to plain nets only";
  }

  try {
    rep.distributed = is_distributed(n, lim);
  } catch (const cancelled& e) {
    rep.distributed.v = verdict::unknown;
    rep.distributed.note = e.what();
  }
  try {
    rep.pure_m = detect_pure_visible_m(n, lim);
  } catch (const state_bound_exceeded&) {
  } catch (const cancelled&) {
  }
  return rep;
}

}  // namespace distnet
