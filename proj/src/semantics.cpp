#include "distnet/semantics.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace distnet {

step_label step_label_of(const labelled_net& n, std::span<const trans_id> g) {
  std::map<action_id, std::uint32_t> counts;
  for (auto t : g) {
    if (n.is_tau(t))
      throw net_error("step label of a step containing an internal transition");
    counts[n.label[t]]++;
  }
  step_label out;
  out.items.assign(counts.begin(), counts.end());
  return out;
}

menu_t menu(const labelled_net& n, const marking& m) {
  if (tau_enabled(n, m))
    throw not_stable("menu requested at an unstable marking " +
                     n.marking_to_string(m));
  std::set<step_label> labels;
  for (const auto& g : enabled_steps(n, m)) labels.insert(step_label_of(n, g));
  return menu_t(labels.begin(), labels.end());
}

namespace {

// tau-closure over reach-graph node ids, returned sorted
std::vector<std::uint32_t> tau_close_nodes(const labelled_net& n,
                                           const reach_graph& rg,
                                           std::vector<std::uint32_t> seed) {
  std::set<std::uint32_t> seen(seed.begin(), seed.end());
  std::deque<std::uint32_t> work(seed.begin(), seed.end());
  while (!work.empty()) {
    auto i = work.front();
    work.pop_front();
    for (auto [t, j] : rg.succ[i])
      if (n.is_tau(t) && seen.insert(j).second) work.push_back(j);
  }
  return std::vector<std::uint32_t>(seen.begin(), seen.end());
}

}  // namespace

const ready_automaton::state* ready_automaton::step(const state& q,
                                                    action_id a) const {
  auto it = std::lower_bound(q.next.begin(), q.next.end(), a,
                             [](const auto& e, action_id x) { return e.first < x; });
  if (it == q.next.end() || it->first != a) return nullptr;
  return &states[it->second];
}

ready_automaton ready_semantics(const labelled_net& n, const limits& lim) {
  ready_automaton ra;
  ra.actions = n.action_names;
  ra.rg = explore(n, lim);
  const reach_graph& rg = ra.rg;

  // menus of stable nodes, computed on demand
  std::vector<std::optional<menu_t>> node_menu(rg.nodes.size());
  auto menu_of = [&](std::uint32_t i) -> const menu_t& {
    if (!node_menu[i]) node_menu[i] = menu(n, rg.nodes[i]);
    return *node_menu[i];
  };

  std::map<std::vector<std::uint32_t>, std::uint32_t> key_to_state;
  auto intern = [&](std::vector<std::uint32_t> key) {
    auto [it, fresh] = key_to_state.emplace(std::move(key),
                                            static_cast<std::uint32_t>(ra.states.size()));
    if (fresh) {
      ready_automaton::state st;
      st.markings = it->first;
      std::set<menu_t> menus;
      for (auto i : st.markings)
        if (rg.stable[i]) menus.insert(menu_of(i));
      st.menus.assign(menus.begin(), menus.end());
      ra.states.push_back(std::move(st));
      lim.poll(ra.states.size());
    }
    return it->second;
  };

  intern(tau_close_nodes(n, rg, {0}));
  for (std::size_t qi = 0; qi < ra.states.size(); ++qi) {
    // bucket visible singleton successors of all member markings by action
    std::map<action_id, std::vector<std::uint32_t>> buckets;
    for (auto i : ra.states[qi].markings)
      for (auto [t, j] : rg.succ[i])
        if (!n.is_tau(t)) buckets[n.label[t]].push_back(j);
    for (auto& [a, seed] : buckets) {
      auto key = tau_close_nodes(n, rg, std::move(seed));
      auto target = intern(std::move(key));
      ra.states[qi].next.emplace_back(a, target);
    }
  }
  return ra;
}

bool named_pair::operator<(const named_pair& o) const {
  if (trace != o.trace) return trace < o.trace;
  return menu < o.menu;
}

namespace {

std::vector<std::vector<std::pair<std::string, std::uint32_t>>> name_menu(
    const std::vector<std::string>& actions, const menu_t& x) {
  std::vector<std::vector<std::pair<std::string, std::uint32_t>>> out;
  for (const auto& a : x) {
    std::vector<std::pair<std::string, std::uint32_t>> ms;
    for (auto [act, cnt] : a.items) ms.emplace_back(actions[act], cnt);
    out.push_back(std::move(ms));
  }
  return out;
}

}  // namespace

std::vector<named_pair> ready_pairs_upto(const ready_automaton& ra,
                                         std::size_t max_len) {
  std::vector<named_pair> out;
  // DFS over traces; the automaton is deterministic so each trace visits
  // exactly one state
  std::vector<std::string> trace;
  auto rec = [&](auto&& self, std::uint32_t qi) -> void {
    for (const auto& x : ra.states[qi].menus)
      out.push_back({trace, name_menu(ra.actions, x)});
    if (trace.size() == max_len) return;
    for (auto [a, target] : ra.states[qi].next) {
      trace.push_back(ra.actions[a]);
      self(self, target);
      trace.pop_back();
    }
  };
  if (!ra.states.empty()) rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// menus re-encoded against a joint action table so that annotations of two
// different nets compare by action name
using joint_menu = std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>;

struct joint_side {
  const ready_automaton* ra;
  std::vector<std::uint32_t> to_joint;         // local action id -> joint id
  std::vector<std::vector<joint_menu>> menus;  // per state, sorted
  // per state: sorted (joint action, target) edges
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> edges;
};

joint_menu encode_menu(const joint_side& side, const menu_t& x) {
  joint_menu out;
  for (const auto& a : x) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ms;
    for (auto [act, cnt] : a.items) ms.emplace_back(side.to_joint[act], cnt);
    std::sort(ms.begin(), ms.end());
    out.push_back(std::move(ms));
  }
  std::sort(out.begin(), out.end());
  return out;
}

joint_side make_side(const ready_automaton& ra,
                     const std::map<std::string, std::uint32_t>& joint) {
  joint_side side;
  side.ra = &ra;
  side.to_joint.resize(ra.actions.size());
  for (std::size_t a = 0; a < ra.actions.size(); ++a)
    side.to_joint[a] = joint.at(ra.actions[a]);
  side.menus.resize(ra.states.size());
  side.edges.resize(ra.states.size());
  for (std::size_t q = 0; q < ra.states.size(); ++q) {
    for (const auto& x : ra.states[q].menus)
      side.menus[q].push_back(encode_menu(side, x));
    std::sort(side.menus[q].begin(), side.menus[q].end());
    for (auto [a, target] : ra.states[q].next)
      side.edges[q].emplace_back(side.to_joint[a], target);
    std::sort(side.edges[q].begin(), side.edges[q].end());
  }
  return side;
}

constexpr std::uint32_t sink = 0xffffffffu;

const std::vector<joint_menu>& menus_at(const joint_side& s, std::uint32_t q) {
  static const std::vector<joint_menu> empty;
  return q == sink ? empty : s.menus[q];
}

std::uint32_t edge_at(const joint_side& s, std::uint32_t q, std::uint32_t a) {
  if (q == sink) return sink;
  const auto& es = s.edges[q];
  auto it = std::lower_bound(es.begin(), es.end(), a,
                             [](const auto& e, std::uint32_t x) { return e.first < x; });
  return (it != es.end() && it->first == a) ? it->second : sink;
}

std::vector<std::pair<std::string, std::uint32_t>> decode_multiset(
    const std::vector<std::string>& joint_names,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& ms) {
  std::vector<std::pair<std::string, std::uint32_t>> out;
  for (auto [a, c] : ms) out.emplace_back(joint_names[a], c);
  return out;
}

}  // namespace

equiv_result readiness_equivalent(const labelled_net& a, const labelled_net& b,
                                  const limits& lim) {
  ready_automaton raa, rab;
  try {
    raa = ready_semantics(a, lim);
    rab = ready_semantics(b, lim);
  } catch (const state_bound_exceeded& e) {
    equiv_result res;
    res.v = verdict::unknown;
    res.note = e.what();
    return res;
  }
  return readiness_equivalent(raa, rab, lim);
}

equiv_result readiness_equivalent(const ready_automaton& raa,
                                  const ready_automaton& rab,
                                  const limits& lim) {
  equiv_result res;

  // joint action table sorted by name, for deterministic traversal order
  std::map<std::string, std::uint32_t> joint;
  for (const auto& nm : raa.actions) joint.emplace(nm, 0);
  for (const auto& nm : rab.actions) joint.emplace(nm, 0);
  std::vector<std::string> joint_names;
  for (auto& [nm, id] : joint) {
    id = static_cast<std::uint32_t>(joint_names.size());
    joint_names.push_back(nm);
  }

  joint_side sa = make_side(raa, joint);
  joint_side sb = make_side(rab, joint);

  // product BFS with an implicit sink for missing edges; a difference in the
  // annotation sets at any product node is a distinguishing trace of minimal
  // length (BFS order)
  struct pnode {
    std::uint32_t qa, qb;
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> seen;
  std::vector<pnode> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> parent;  // node, action

  auto report = [&](std::uint32_t id) {
    const auto& ma = menus_at(sa, nodes[id].qa);
    const auto& mb = menus_at(sb, nodes[id].qb);
    std::vector<joint_menu> only_a, only_b;
    std::set_difference(ma.begin(), ma.end(), mb.begin(), mb.end(),
                        std::back_inserter(only_a));
    std::set_difference(mb.begin(), mb.end(), ma.begin(), ma.end(),
                        std::back_inserter(only_b));
    equiv_witness w;
    const joint_menu* pick;
    if (!only_b.empty()) {
      pick = &*std::min_element(only_b.begin(), only_b.end());
      w.side = equiv_witness::side_t::right;
    } else {
      pick = &*std::min_element(only_a.begin(), only_a.end());
      w.side = equiv_witness::side_t::left;
    }
    for (const auto& ms : *pick)
      w.menu.push_back(decode_multiset(joint_names, ms));
    // reconstruct the trace through parent pointers
    std::vector<std::string> rev;
    for (std::uint32_t cur = id; cur != 0; cur = parent[cur].first)
      rev.push_back(joint_names[parent[cur].second]);
    w.trace.assign(rev.rbegin(), rev.rend());
    res.v = verdict::no;
    res.witness = std::move(w);
  };

  auto differs = [&](std::uint32_t id) {
    return menus_at(sa, nodes[id].qa) != menus_at(sb, nodes[id].qb);
  };

  nodes.push_back({0, 0});
  parent.push_back({0, 0});
  seen.emplace(std::make_pair(0u, 0u), 0u);
  if (differs(0)) {
    report(0);
    return res;
  }
  try {
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      lim.poll(nodes.size());
      auto [qa, qb] = nodes[i];
      // actions to follow: union of both sides' outgoing edges
      std::set<std::uint32_t> acts;
      if (qa != sink)
        for (auto [x, _] : sa.edges[qa]) acts.insert(x);
      if (qb != sink)
        for (auto [x, _] : sb.edges[qb]) acts.insert(x);
      for (auto x : acts) {
        std::uint32_t na = edge_at(sa, qa, x), nb = edge_at(sb, qb, x);
        if (na == sink && nb == sink) continue;
        auto key = std::make_pair(na, nb);
        if (seen.count(key)) continue;
        std::uint32_t id = static_cast<std::uint32_t>(nodes.size());
        seen.emplace(key, id);
        nodes.push_back({na, nb});
        parent.push_back({i, x});
        if (differs(id)) {
          report(id);
          return res;
        }
      }
    }
  } catch (const state_bound_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
    return res;
  }
  res.v = verdict::yes;
  return res;
}

equiv_result readiness_equivalent_bounded(const labelled_net& a,
                                          const labelled_net& b,
                                          std::size_t max_len,
                                          const limits& lim) {
  equiv_result res;
  std::vector<named_pair> pa, pb;
  try {
    pa = ready_pairs_upto(ready_semantics(a, lim), max_len);
    pb = ready_pairs_upto(ready_semantics(b, lim), max_len);
  } catch (const state_bound_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
    return res;
  }
  std::vector<named_pair> only_a, only_b;
  std::set_difference(pa.begin(), pa.end(), pb.begin(), pb.end(),
                      std::back_inserter(only_a));
  std::set_difference(pb.begin(), pb.end(), pa.begin(), pa.end(),
                      std::back_inserter(only_b));
  if (only_a.empty() && only_b.empty()) {
    res.v = verdict::yes;
    res.note = "no difference up to trace length " + std::to_string(max_len) +
               " (bounded mode: unsound)";
    return res;
  }
  auto shorter = [](const named_pair& x, const named_pair& y) {
    if (x.trace.size() != y.trace.size())
      return x.trace.size() < y.trace.size();
    return x < y;
  };
  const named_pair* pick = nullptr;
  equiv_witness w;
  if (!only_b.empty()) {
    pick = &*std::min_element(only_b.begin(), only_b.end(), shorter);
    w.side = equiv_witness::side_t::right;
  }
  if (!only_a.empty()) {
    const auto* ca = &*std::min_element(only_a.begin(), only_a.end(), shorter);
    if (!pick || shorter(*ca, *pick)) {
      // prefer the right side unless the left difference is strictly shorter
      if (!pick || ca->trace.size() < pick->trace.size()) {
        pick = ca;
        w.side = equiv_witness::side_t::left;
      }
    }
  }
  w.trace = pick->trace;
  w.menu = pick->menu;
  res.v = verdict::no;
  res.witness = std::move(w);
  res.note = "bounded to trace length " + std::to_string(max_len);
  return res;
}

labelled_net hide_action(const labelled_net& n, const std::string& action) {
  labelled_net out = n;
  auto a = n.find_action(action);
  if (!a) return out;
  for (trans_id t = 0; t < out.n_transitions(); ++t)
    if (out.label[t] == *a) out.label[t] = tau_action;
  // drop the orphaned name so the alphabet keeps matching the labels in use
  out.action_names.erase(out.action_names.begin() + *a);
  for (auto& l : out.label)
    if (l != tau_action && l > *a) --l;
  out.action_index.clear();
  for (action_id i = 0; i < out.action_names.size(); ++i)
    out.action_index.emplace(out.action_names[i], i);
  return out;
}

}  // namespace distnet
