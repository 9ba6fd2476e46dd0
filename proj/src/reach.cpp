#include "distnet/reach.hpp"

#include <algorithm>
#include <deque>

namespace distnet {

bool tau_enabled(const labelled_net& n, const marking& m) {
  for (trans_id t = 0; t < n.n_transitions(); ++t)
    if (n.is_tau(t) && enabled(n, m, t)) return true;
  return false;
}

bool step_enabled(const labelled_net& n, const marking& m,
                  std::span<const trans_id> g) {
  if (g.empty()) return false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!enabled(n, m, g[i])) return false;
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (g[i] == g[j] || n.pre[g[i]].intersects(n.pre[g[j]])) return false;
  }
  return true;
}

bool step_enabled_full(const labelled_net& n, const marking& m,
                       std::span<const trans_id> g) {
  if (g.empty()) return false;
  for (std::size_t i = 0; i < g.size(); ++i) {
    trans_id t = g[i];
    if (!n.pre[t].subset_of(m)) return false;
    if ((m - n.pre[t]).intersects(n.post[t])) return false;  // contact
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      trans_id u = g[j];
      if (t == u) return false;
      if (n.pre[t].intersects(n.pre[u])) return false;
      if (n.post[t].intersects(n.post[u])) return false;
    }
  }
  return true;
}

marking fire_unchecked(const labelled_net& n, const marking& m,
                       std::span<const trans_id> g) {
  marking out = m;
  for (auto t : g) out -= n.pre[t];
  for (auto t : g) out |= n.post[t];
  return out;
}

marking fire(const labelled_net& n, const marking& m,
             std::span<const trans_id> g) {
  if (!step_enabled(n, m, g)) {
    std::string names;
    for (auto t : g) {
      if (!names.empty()) names += ",";
      names += n.trans_names[t];
    }
    throw net_error("step {" + names + "} not enabled at " +
                    n.marking_to_string(m));
  }
  return fire_unchecked(n, m, g);
}

std::vector<std::vector<trans_id>> enabled_steps(const labelled_net& n,
                                                 const marking& m) {
  std::vector<trans_id> en;
  for (trans_id t = 0; t < n.n_transitions(); ++t)
    if (enabled(n, m, t)) en.push_back(t);

  std::vector<std::vector<trans_id>> out;
  std::vector<trans_id> cur;
  // backtracking over the enabled list; the running union of presets prunes
  // non-independent extensions early
  auto rec = [&](auto&& self, std::size_t i, marking used) -> void {
    for (std::size_t j = i; j < en.size(); ++j) {
      trans_id t = en[j];
      if (n.pre[t].intersects(used)) continue;
      cur.push_back(t);
      out.push_back(cur);
      self(self, j + 1, used | n.pre[t]);
      cur.pop_back();
    }
  };
  rec(rec, 0, marking(n.n_places()));
  return out;
}

reach_graph explore(const labelled_net& n, const limits& lim) {
  reach_graph g;
  g.nodes.push_back(n.m0);
  g.index.emplace(n.m0, 0);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    lim.poll(g.nodes.size());
    marking m = g.nodes[i];
    g.succ.emplace_back();
    bool stab = true;
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      if (!enabled(n, m, t)) continue;
      if (n.is_tau(t)) stab = false;
      trans_id step[1] = {t};
      marking m2 = fire_unchecked(n, m, step);
      auto [it, fresh] = g.index.emplace(m2, g.nodes.size());
      if (fresh) {
        g.nodes.push_back(m2);
        lim.poll(g.nodes.size());
      }
      g.succ[i].emplace_back(t, it->second);
    }
    g.stable.push_back(stab ? 1 : 0);
  }
  return g;
}

validation_report validate(const labelled_net& n, const limits& lim) {
  validation_report rep;
  for (trans_id t = 0; t < n.n_transitions(); ++t)
    if (n.pre[t].none())
      rep.issues.push_back(
          {"empty-preset", "transition " + n.trans_names[t] + " has an empty preset"});

  // BFS with the full firing rule; contact failures are recorded (first few)
  // and the offending firings skipped so exploration can continue
  std::vector<marking> nodes{n.m0};
  std::unordered_map<marking, std::uint32_t, idset_hash> index{{n.m0, 0}};
  bool bounded = false;
  try {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      lim.poll(nodes.size());
      marking m = nodes[i];
      for (trans_id t = 0; t < n.n_transitions(); ++t) {
        if (!n.pre[t].subset_of(m)) continue;
        if ((m - n.pre[t]).intersects(n.post[t])) {
          if (rep.issues.size() < 16)
            rep.issues.push_back(
                {"contact", "transition " + n.trans_names[t] +
                                " violates contact-freeness at reachable marking " +
                                n.marking_to_string(m)});
          continue;
        }
        trans_id step[1] = {t};
        marking m2 = fire_unchecked(n, m, step);
        if (index.emplace(m2, nodes.size()).second) {
          nodes.push_back(m2);
          lim.poll(nodes.size());
        }
      }
    }
  } catch (const state_bound_exceeded&) {
    bounded = true;
  }
  rep.markings = nodes.size();
  if (!rep.issues.empty())
    rep.ok = verdict::no;
  else
    rep.ok = bounded ? verdict::unknown : verdict::yes;
  return rep;
}

namespace {

// shared scaffold: iterate pairs of enabled transitions per reachable marking
template <class F>
void per_enabled_pair(const labelled_net& n, const limits& lim, F f) {
  reach_graph g = explore(n, lim);
  std::vector<trans_id> en;
  for (const auto& m : g.nodes) {
    en.clear();
    for (trans_id t = 0; t < n.n_transitions(); ++t)
      if (enabled(n, m, t)) en.push_back(t);
    for (std::size_t i = 0; i < en.size(); ++i)
      for (std::size_t j = i + 1; j < en.size(); ++j) f(en[i], en[j]);
  }
}

std::vector<std::pair<trans_id, trans_id>> collect_pairs(
    const labelled_net& n, const std::vector<char>& mat) {
  std::vector<std::pair<trans_id, trans_id>> out;
  std::size_t nt = n.n_transitions();
  for (trans_id t = 0; t < nt; ++t)
    for (trans_id u = t + 1; u < nt; ++u)
      if (mat[t * nt + u]) out.emplace_back(t, u);
  return out;
}

}  // namespace

std::vector<std::pair<trans_id, trans_id>> concurrency_relation(
    const labelled_net& n, const limits& lim) {
  std::vector<char> mat(n.n_transitions() * n.n_transitions(), 0);
  per_enabled_pair(n, lim, [&](trans_id t, trans_id u) {
    if (!n.pre[t].intersects(n.pre[u])) mat[t * n.n_transitions() + u] = 1;
  });
  return collect_pairs(n, mat);
}

std::vector<std::pair<trans_id, trans_id>> enabled_conflict_relation(
    const labelled_net& n, const limits& lim) {
  std::vector<char> mat(n.n_transitions() * n.n_transitions(), 0);
  per_enabled_pair(n, lim, [&](trans_id t, trans_id u) {
    if (n.pre[t].intersects(n.pre[u])) mat[t * n.n_transitions() + u] = 1;
  });
  return collect_pairs(n, mat);
}

namespace {

// tau-closure of a set of markings; appends newly found markings in BFS order
void tau_close(const labelled_net& n, std::vector<marking>& ms,
               const limits& lim) {
  std::unordered_map<marking, char, idset_hash> seen;
  for (const auto& m : ms) seen.emplace(m, 1);
  std::deque<marking> work(ms.begin(), ms.end());
  while (!work.empty()) {
    lim.poll(seen.size());
    marking m = work.front();
    work.pop_front();
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      if (!n.is_tau(t) || !enabled(n, m, t)) continue;
      trans_id step[1] = {t};
      marking m2 = fire_unchecked(n, m, step);
      if (seen.emplace(m2, 1).second) {
        ms.push_back(m2);
        work.push_back(m2);
      }
    }
  }
}

}  // namespace

std::vector<marking> weak_reach(const labelled_net& n, const marking& m,
                                const std::vector<std::string>& sigma,
                                const limits& lim) {
  std::vector<marking> cur{m};
  tau_close(n, cur, lim);
  for (const auto& act : sigma) {
    auto a = n.find_action(act);
    std::vector<marking> next;
    std::unordered_map<marking, char, idset_hash> seen;
    if (a) {
      for (const auto& mm : cur) {
        for (trans_id t = 0; t < n.n_transitions(); ++t) {
          if (n.label[t] != *a || !enabled(n, mm, t)) continue;
          trans_id step[1] = {t};
          marking m2 = fire_unchecked(n, mm, step);
          if (seen.emplace(m2, 1).second) next.push_back(m2);
        }
      }
    }
    tau_close(n, next, lim);
    cur = std::move(next);
    if (cur.empty()) break;
  }
  return cur;
}

}  // namespace distnet
