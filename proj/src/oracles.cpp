#include "distnet/oracles.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "distnet/semantics.hpp"

namespace distnet {

namespace {

std::string show(const labelled_net& n, const marking& m) {
  return n.marking_to_string(m);
}

// action ids are interned per net, so label multisets from two different
// nets only compare soundly through the action names
using named_label = std::vector<std::pair<std::string, std::uint32_t>>;

named_label names_of(const labelled_net& n, const step_label& l) {
  named_label out;
  for (auto [a, k] : l.items) out.emplace_back(n.action_names[a], k);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<named_label> names_of(const labelled_net& n, const menu_t& m) {
  std::vector<named_label> out;
  out.reserve(m.size());
  for (const auto& l : m) out.push_back(names_of(n, l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---- buffer-implementation certificates ------------------------------------

alpha_context make_alpha_context(const labelled_net& source,
                                 const distribution& d, const limits& lim) {
  alpha_context ctx;
  ctx.source = source;
  ctx.dist = d;
  ctx.impl = async_implementation(source, d);
  ctx.lim = lim;
  ctx.source_reach = explore(source, lim);

  const labelled_net& in = ctx.impl.net;
  ctx.back.assign(in.n_places(), 0);
  ctx.is_buffer_place.assign(in.n_places(), 0);
  ctx.is_buffer_trans.assign(in.n_transitions(), 0);
  ctx.buffers_of.assign(source.n_places(), {});
  for (place_id ip = 0; ip < in.n_places(); ++ip) {
    const auto& e = ctx.impl.prov.at(in.place_names[ip]);
    ctx.back[ip] = *source.find_place(e.place);
    if (e.kind == elem_kind::buffer_place) {
      ctx.is_buffer_place[ip] = 1;
      ctx.buffers_of[ctx.back[ip]].push_back(ip);
    }
  }
  for (trans_id t = 0; t < in.n_transitions(); ++t)
    if (ctx.impl.prov.at(in.trans_names[t]).kind == elem_kind::buffer_trans)
      ctx.is_buffer_trans[t] = 1;
  ctx.counted = idset(in.n_places());
  for (place_id s = 0; s < source.n_places(); ++s)
    if (!ctx.buffers_of[s].empty())
      ctx.counted.set(*in.find_place(source.place_names[s]));
  return ctx;
}

namespace {

// original places keep their names, so the source marking embeds one-to-one
marking embed(const alpha_context& ctx, const marking& src_m) {
  marking m(ctx.impl.net.n_places());
  src_m.for_each([&](std::uint32_t s) {
    m.set(*ctx.impl.net.find_place(ctx.source.place_names[s]));
  });
  return m;
}

}  // namespace

marking tau_back(const alpha_context& ctx, const marking& m) {
  marking out(ctx.source.n_places());
  m.for_each([&](std::uint32_t ip) { out.set(ctx.back[ip]); });
  return out;
}

bool alpha(const alpha_context& ctx, const marking& m) {
  marking tb = tau_back(ctx, m);
  return tb.count() == m.count() && ctx.source_reach.contains(tb);
}

std::size_t alpha_d(const alpha_context& ctx, const marking& m) {
  return (m & ctx.counted).count();
}

check_result check_alpha_characterization(const alpha_context& ctx) {
  const labelled_net& in = ctx.impl.net;

  // all buffer-shift images of all reachable source markings
  std::set<marking> invariant_set;
  for (const auto& src_m : ctx.source_reach.nodes) {
    auto marked = src_m.elems();
    marking cur(in.n_places());
    auto rec = [&](auto&& self, std::size_t k) -> void {
      if (k == marked.size()) {
        invariant_set.insert(cur);
        ctx.lim.poll(invariant_set.size());
        return;
      }
      place_id s = marked[k];
      std::vector<place_id> options{*in.find_place(ctx.source.place_names[s])};
      options.insert(options.end(), ctx.buffers_of[s].begin(),
                     ctx.buffers_of[s].end());
      for (auto ip : options) {
        cur.set(ip);
        self(self, k + 1);
        cur.reset(ip);
      }
    };
    rec(rec, 0);
  }

  reach_graph rg = explore(in, ctx.lim);
  for (const auto& m : rg.nodes)
    if (!invariant_set.count(m))
      return {false, "reachable marking " + show(in, m) +
                         " is not a shift image of a reachable source marking"};
  for (const auto& m : invariant_set)
    if (!rg.contains(m))
      return {false, "invariant-satisfying marking " + show(in, m) +
                         " is not reachable in the implementation"};
  return {};
}

check_result check_d_descent(const alpha_context& ctx) {
  const labelled_net& in = ctx.impl.net;
  reach_graph rg = explore(in, ctx.lim);
  for (std::uint32_t i = 0; i < rg.nodes.size(); ++i) {
    const marking& m = rg.nodes[i];
    if (!alpha(ctx, m)) continue;
    for (auto [t, j] : rg.succ[i]) {
      if (!ctx.is_buffer_trans[t]) continue;
      const marking& m2 = rg.nodes[j];
      if (alpha_d(ctx, m) <= alpha_d(ctx, m2))
        return {false, "buffer move " + in.trans_names[t] + " from " +
                           show(in, m) + " does not decrease d"};
      if (tau_back(ctx, m) != tau_back(ctx, m2))
        return {false, "buffer move " + in.trans_names[t] + " from " +
                           show(in, m) + " changes the shifted-back marking"};
      if (!alpha(ctx, m2))
        return {false, "buffer move " + in.trans_names[t] + " from " +
                           show(in, m) + " leaves the invariant"};
    }
  }
  return {};
}

namespace {

// all markings reachable from m using only the given transitions (by flag)
std::vector<marking> closure_under(const labelled_net& n, const marking& m,
                                   const std::vector<char>& allowed,
                                   const limits& lim) {
  std::vector<marking> out{m};
  std::unordered_set<marking, idset_hash> seen{m};
  for (std::size_t i = 0; i < out.size(); ++i) {
    lim.poll(seen.size());
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      if (!allowed[t] || !enabled(n, out[i], t)) continue;
      marking next = fire_unchecked(n, out[i], std::vector<trans_id>{t});
      if (seen.insert(next).second) out.push_back(next);
    }
  }
  return out;
}

}  // namespace

check_result check_step_simulation(const alpha_context& ctx) {
  const labelled_net& in = ctx.impl.net;
  for (const auto& m1 : ctx.source_reach.nodes) {
    marking start = embed(ctx, m1);
    std::vector<marking> shifted =
        closure_under(in, start, ctx.is_buffer_trans, ctx.lim);
    for (const auto& g : enabled_steps(ctx.source, m1)) {
      marking m2 = embed(ctx, fire_unchecked(ctx.source, m1, g));
      bool matched = false;
      for (const auto& m : shifted) {
        if (!step_enabled(in, m, g)) continue;
        if (fire_unchecked(in, m, g) == m2) {
          matched = true;
          break;
        }
      }
      if (!matched) {
        std::string names;
        for (auto t : g) names += (names.empty() ? "" : ",") + in.trans_names[t];
        return {false, "source step {" + names + "} from " +
                           show(ctx.source, m1) +
                           " has no buffer-move match in the implementation"};
      }
    }
  }
  return {};
}

namespace {

// does some step with this label lead from m1 to m2 in n?
bool has_matching_step(const labelled_net& n, const marking& m1,
                       const named_label& a, const marking& m2) {
  for (const auto& h : enabled_steps(n, m1)) {
    bool visible = std::none_of(h.begin(), h.end(),
                                [&](trans_id t) { return n.is_tau(t); });
    if (!visible) continue;
    if (names_of(n, step_label_of(n, h)) == a &&
        fire_unchecked(n, m1, h) == m2)
      return true;
  }
  return false;
}

}  // namespace

check_result check_visible_projection(const alpha_context& ctx) {
  const labelled_net& in = ctx.impl.net;
  reach_graph rg = explore(in, ctx.lim);
  for (const auto& m : rg.nodes) {
    if (!alpha(ctx, m)) continue;
    for (const auto& g : enabled_steps(in, m)) {
      if (std::any_of(g.begin(), g.end(),
                      [&](trans_id t) { return in.is_tau(t); }))
        continue;
      marking m2 = fire_unchecked(in, m, g);
      if (!alpha(ctx, m2))
        return {false, "visible step from " + show(in, m) +
                           " leaves the invariant"};
      if (!has_matching_step(ctx.source, tau_back(ctx, m),
                             names_of(in, step_label_of(in, g)),
                             tau_back(ctx, m2)))
        return {false, "visible step from " + show(in, m) +
                           " does not project to a source step"};
    }
  }
  return {};
}

check_result check_weak_projection(const alpha_context& ctx) {
  const labelled_net& in = ctx.impl.net;
  reach_graph rg = explore(in, ctx.lim);
  // one shortest visible trace per reachable marking
  std::vector<std::optional<std::pair<std::uint32_t, trans_id>>> parent(
      rg.nodes.size());
  std::vector<char> seen(rg.nodes.size(), 0);
  std::vector<std::uint32_t> order{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (auto [t, j] : rg.succ[order[i]])
      if (!seen[j]) {
        seen[j] = 1;
        parent[j] = {order[i], t};
        order.push_back(j);
      }
  for (auto i : order) {
    std::vector<std::string> sigma;
    for (std::uint32_t cur = i; parent[cur]; cur = parent[cur]->first)
      if (!in.is_tau(parent[cur]->second))
        sigma.push_back(in.label_name(parent[cur]->second));
    std::reverse(sigma.begin(), sigma.end());
    auto reached = weak_reach(ctx.source, ctx.source.m0, sigma, ctx.lim);
    marking want = tau_back(ctx, rg.nodes[i]);
    if (std::find(reached.begin(), reached.end(), want) == reached.end())
      return {false, "marking " + show(in, rg.nodes[i]) +
                         " shifts back outside the source's weak reach of its trace"};
  }
  return {};
}

check_result check_stable_menus(const alpha_context& ctx) {
  if (ctx.source.has_tau())
    throw net_error(
        "the stable-menu check needs a source without internal transitions");
  const labelled_net& in = ctx.impl.net;
  std::vector<char> all_tau(in.n_transitions(), 0);
  for (trans_id t = 0; t < in.n_transitions(); ++t)
    if (in.is_tau(t)) all_tau[t] = 1;
  for (const auto& m1 : ctx.source_reach.nodes) {
    auto src_menu = names_of(ctx.source, menu(ctx.source, m1));
    for (const auto& m : closure_under(in, embed(ctx, m1), all_tau, ctx.lim)) {
      if (tau_enabled(in, m)) continue;
      if (names_of(in, menu(in, m)) != src_menu)
        return {false, "stable descent of " + show(ctx.source, m1) +
                           " reaches " + show(in, m) +
                           " with a different step menu"};
    }
  }
  return {};
}

// ---- transition-controlled-choice certificates -----------------------------

beta_context make_beta_context(const tcc_net& t, const limits& lim) {
  beta_context ctx;
  ctx.source = t.prepared;
  ctx.impl = t.raw;
  ctx.lim = lim;
  for (place_id s = 0; s < ctx.source.n_places(); ++s)
    if (ctx.source.place_post[s].empty())
      throw net_error("place '" + ctx.source.place_names[s] +
                      "' has no posttransitions; the shift-back functions "
                      "would lose its token");
  ctx.source_reach = explore(ctx.source, lim);
  ctx.class_of = t.class_of;
  ctx.class_rep = t.class_rep;

  std::map<std::string, std::uint32_t> rep_index;
  for (std::uint32_t c = 0; c < t.class_rep.size(); ++c)
    rep_index[t.class_rep[c]] = c;

  const labelled_net& in = ctx.impl;
  ctx.orig_mask = idset(in.n_places());
  ctx.orig_of.assign(in.n_places(), 0);
  ctx.fired_place_of.assign(ctx.source.n_transitions(), 0);
  ctx.fired_trans_of.assign(in.n_places(), std::nullopt);
  ctx.weight.assign(in.n_places(), 0);
  for (place_id ip = 0; ip < in.n_places(); ++ip) {
    const auto& e = t.prov.at(in.place_names[ip]);
    switch (e.kind) {
      case elem_kind::original_place: {
        place_id s = *ctx.source.find_place(e.place);
        ctx.orig_mask.set(ip);
        ctx.orig_of[ip] = s;
        ctx.weight[ip] = 1;
        break;
      }
      case elem_kind::embassy_place: {
        place_id s = *ctx.source.find_place(e.place);
        ctx.embassy[{s, rep_index.at(e.cls)}] = ip;
        break;
      }
      case elem_kind::fired_place: {
        trans_id tr = *ctx.source.find_trans(e.trans);
        ctx.fired_place_of[tr] = ip;
        ctx.fired_trans_of[ip] = tr;
        ctx.weight[ip] = 1 + ctx.source.post[tr].count();
        break;
      }
      case elem_kind::request_place: {
        place_id s = *ctx.source.find_place(e.place);
        trans_id tr = *ctx.source.find_trans(e.trans);
        ctx.request[{s, tr, rep_index.at(e.cls)}] = ip;
        ctx.weight[ip] = 1;
        break;
      }
      case elem_kind::ack_place: {
        place_id s = *ctx.source.find_place(e.place);
        trans_id tr = *ctx.source.find_trans(e.trans);
        ctx.ack[{s, tr, rep_index.at(e.cls)}] = ip;
        break;
      }
      default:
        break;
    }
  }
  ctx.client_classes.assign(ctx.source.n_places(), {});
  for (place_id s = 0; s < ctx.source.n_places(); ++s) {
    std::set<std::uint32_t> cs;
    for (auto tr : ctx.source.place_post[s]) cs.insert(ctx.class_of[tr]);
    ctx.client_classes[s].assign(cs.begin(), cs.end());
  }
  return ctx;
}

namespace {

// impl id of a source place: originals keep their names
place_id orig_impl(const beta_context& ctx, place_id s) {
  return *ctx.impl.find_place(ctx.source.place_names[s]);
}

}  // namespace

marking tau_back_all(const beta_context& ctx, const marking& m) {
  marking out(ctx.source.n_places());
  (m & ctx.orig_mask).for_each([&](std::uint32_t ip) { out.set(ctx.orig_of[ip]); });
  for (place_id s = 0; s < ctx.source.n_places(); ++s) {
    bool all = true;
    for (auto c : ctx.client_classes[s])
      if (!m.test(ctx.embassy.at({s, c}))) {
        all = false;
        break;
      }
    if (all) out.set(s);
  }
  for (trans_id t = 0; t < ctx.source.n_transitions(); ++t)
    if (m.test(ctx.fired_place_of[t]))
      out |= ctx.source.post[t];
  return out;
}

marking tau_back_any(const beta_context& ctx, const marking& m) {
  marking out(ctx.source.n_places());
  (m & ctx.orig_mask).for_each([&](std::uint32_t ip) { out.set(ctx.orig_of[ip]); });
  for (place_id s = 0; s < ctx.source.n_places(); ++s)
    for (auto c : ctx.client_classes[s])
      if (m.test(ctx.embassy.at({s, c}))) {
        out.set(s);
        break;
      }
  for (trans_id t = 0; t < ctx.source.n_transitions(); ++t)
    if (m.test(ctx.fired_place_of[t]))
      out |= ctx.source.pre[t];
  return out;
}

std::size_t beta_d(const beta_context& ctx, const marking& m) {
  std::size_t d = 0;
  m.for_each([&](std::uint32_t ip) { d += ctx.weight[ip]; });
  return d;
}

std::optional<int> beta(const beta_context& ctx, const marking& m) {
  // 1: the upper shift-back is a reachable source marking
  if (!ctx.source_reach.contains(tau_back_any(ctx, m))) return 1;
  // 2: an embassy token excludes the source token
  for (const auto& [key, ip] : ctx.embassy)
    if (m.test(ip) && m.test(orig_impl(ctx, key.first))) return 2;
  // 3: a partially distributed source token is explained by a request
  for (place_id s = 0; s < ctx.source.n_places(); ++s) {
    for (auto c2 : ctx.client_classes[s]) {
      if (!m.test(ctx.embassy.at({s, c2}))) continue;
      for (auto c1 : ctx.client_classes[s]) {
        if (c1 == c2 || m.test(ctx.embassy.at({s, c1}))) continue;
        bool explained = false;
        for (auto v : ctx.source.place_post[s]) {
          if (ctx.class_of[v] == c2) continue;
          auto it = ctx.request.find({s, v, c2});
          if (it != ctx.request.end() && m.test(it->second)) {
            explained = true;
            break;
          }
        }
        if (!explained) return 3;
      }
    }
  }
  // 4: transitions in their cleanup phase have disjoint presets
  for (trans_id t = 0; t < ctx.source.n_transitions(); ++t) {
    if (!m.test(ctx.fired_place_of[t])) continue;
    for (trans_id u = t + 1; u < ctx.source.n_transitions(); ++u)
      if (m.test(ctx.fired_place_of[u]) &&
          ctx.source.pre[t].intersects(ctx.source.pre[u]))
        return 4;
  }
  // 5: a pending request implies no ack yet, the requested embassy token
  //    still there, and the requester in cleanup
  for (const auto& [key, ip] : ctx.request) {
    if (!m.test(ip)) continue;
    auto [s, t, c] = key;
    if (m.test(ctx.ack.at(key))) return 5;
    if (!m.test(ctx.embassy.at({s, c}))) return 5;
    if (!m.test(ctx.fired_place_of[t])) return 5;
  }
  // 6: an ack implies its requester is in cleanup
  for (const auto& [key, ip] : ctx.ack)
    if (m.test(ip) && !m.test(ctx.fired_place_of[std::get<1>(key)])) return 6;
  // 7: a transition in cleanup has fully consumed its preset and holds a
  //    request or ack towards every competing class
  for (trans_id t = 0; t < ctx.source.n_transitions(); ++t) {
    if (!m.test(ctx.fired_place_of[t])) continue;
    std::optional<int> bad;
    ctx.source.pre[t].for_each([&](std::uint32_t s) {
      if (bad) return;
      if (m.test(orig_impl(ctx, s))) {
        bad = 7;
        return;
      }
      if (m.test(ctx.embassy.at({s, ctx.class_of[t]}))) {
        bad = 7;
        return;
      }
      for (auto c : ctx.client_classes[s]) {
        if (c == ctx.class_of[t]) continue;
        if (!m.test(ctx.request.at({s, t, c})) && !m.test(ctx.ack.at({s, t, c}))) {
          bad = 7;
          return;
        }
      }
    });
    if (bad) return bad;
  }
  return std::nullopt;
}

check_result check_beta_invariant(const beta_context& ctx) {
  reach_graph rg = explore(ctx.impl, ctx.lim);
  for (const auto& m : rg.nodes)
    if (auto clause = beta(ctx, m))
      return {false, "reachable marking " + show(ctx.impl, m) +
                         " violates invariant clause " + std::to_string(*clause)};
  return {};
}

check_result check_branching_clauses(const beta_context& ctx) {
  const labelled_net& in = ctx.impl;
  reach_graph rg = explore(in, ctx.lim);

  // (1) start-up: invariant at the start, shifting back to the source start
  if (beta(ctx, in.m0))
    return {false, "initial marking violates the invariant"};
  if (tau_back_all(ctx, in.m0) != ctx.source.m0)
    return {false, "initial marking does not shift back to the source's"};

  // steps of the source, cached per source marking
  std::map<marking, std::vector<std::vector<trans_id>>> source_steps;
  auto steps_of = [&](const marking& m) -> const std::vector<std::vector<trans_id>>& {
    auto it = source_steps.find(m);
    if (it == source_steps.end())
      it = source_steps.emplace(m, enabled_steps(ctx.source, m)).first;
    return it->second;
  };

  for (std::uint32_t i = 0; i < rg.nodes.size(); ++i) {
    ctx.lim.check_cancel();
    const marking& m1 = rg.nodes[i];
    if (beta(ctx, m1)) continue;  // conditional clauses; invariant checked apart
    marking tb1 = tau_back_all(ctx, m1);
    std::size_t d1 = beta_d(ctx, m1);

    // (2) internal moves are silent on the shift-back and decrease d
    bool has_tau_move = false;
    for (auto [t, j] : rg.succ[i]) {
      if (!in.is_tau(t)) continue;
      has_tau_move = true;
      const marking& m2 = rg.nodes[j];
      if (beta(ctx, m2))
        return {false, "internal move from " + show(in, m1) +
                           " breaks the invariant"};
      if (tau_back_all(ctx, m2) != tb1)
        return {false, "internal move from " + show(in, m1) +
                           " changes the shift-back"};
      if (beta_d(ctx, m2) >= d1)
        return {false, "internal move from " + show(in, m1) +
                           " does not decrease d"};
    }

    // (4) work left implies an internal move is available
    if (d1 > 0 && !has_tau_move)
      return {false, "d > 0 but no internal move at " + show(in, m1)};

    // (3) visible steps project to source steps between the shift-backs
    for (const auto& g : enabled_steps(in, m1)) {
      if (std::any_of(g.begin(), g.end(),
                      [&](trans_id t) { return in.is_tau(t); }))
        continue;
      marking m2 = fire_unchecked(in, m1, g);
      if (beta(ctx, m2))
        return {false, "visible step from " + show(in, m1) +
                           " breaks the invariant"};
      named_label a = names_of(in, step_label_of(in, g));
      marking tb2 = tau_back_all(ctx, m2);
      bool matched = false;
      for (const auto& h : steps_of(tb1))
        if (names_of(ctx.source, step_label_of(ctx.source, h)) == a &&
            fire_unchecked(ctx.source, tb1, h) == tb2) {
          matched = true;
          break;
        }
      if (!matched)
        return {false, "visible step from " + show(in, m1) +
                           " does not project to a source step"};
    }

    // (5) once settled, every source step is offered
    if (d1 == 0) {
      for (const auto& h : steps_of(tb1)) {
        named_label a = names_of(ctx.source, step_label_of(ctx.source, h));
        marking want = fire_unchecked(ctx.source, tb1, h);
        bool matched = false;
        for (const auto& g : enabled_steps(in, m1)) {
          if (std::any_of(g.begin(), g.end(),
                          [&](trans_id t) { return in.is_tau(t); }))
            continue;
          if (names_of(in, step_label_of(in, g)) == a &&
              tau_back_all(ctx, fire_unchecked(in, m1, g)) == want) {
            matched = true;
            break;
          }
        }
        if (!matched)
          return {false, "settled marking " + show(in, m1) +
                             " does not offer a source step"};
      }
    }
  }
  return {};
}

}  // namespace distnet
