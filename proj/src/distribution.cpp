#include "distnet/distribution.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace distnet {

void distribution::canonicalize() {
  std::map<std::uint32_t, std::uint32_t> renum;
  auto visit = [&](std::uint32_t& loc) {
    auto [it, fresh] = renum.emplace(loc, static_cast<std::uint32_t>(renum.size()));
    (void)fresh;
    loc = it->second;
  };
  for (auto& l : place_loc) visit(l);
  for (auto& l : trans_loc) visit(l);
  n_locations = static_cast<std::uint32_t>(renum.size());
}

distribution distribution::finest(const labelled_net& n) {
  distribution d;
  d.place_loc.resize(n.n_places());
  d.trans_loc.resize(n.n_transitions());
  std::iota(d.place_loc.begin(), d.place_loc.end(), 0u);
  std::iota(d.trans_loc.begin(), d.trans_loc.end(),
            static_cast<std::uint32_t>(n.n_places()));
  d.n_locations = static_cast<std::uint32_t>(n.n_places() + n.n_transitions());
  return d;
}

std::string to_string(dist_requirement r) {
  switch (r) {
    case dist_requirement::fd: return "fd";
    case dist_requirement::sd: return "sd";
    case dist_requirement::ad: return "ad";
    case dist_requirement::effectual: return "effectual";
    case dist_requirement::distributed_net: return "distributed-net";
  }
  return "?";
}

std::optional<dist_requirement> requirement_from_string(const std::string& s) {
  if (s == "fd") return dist_requirement::fd;
  if (s == "sd") return dist_requirement::sd;
  if (s == "ad") return dist_requirement::ad;
  if (s == "effectual") return dist_requirement::effectual;
  if (s == "distributed-net") return dist_requirement::distributed_net;
  return std::nullopt;
}

namespace {

void require_total(const labelled_net& n, const distribution& d) {
  if (d.place_loc.size() != n.n_places() ||
      d.trans_loc.size() != n.n_transitions())
    throw net_error("distribution is not total over the net's elements");
}

// places pairwise separated
std::optional<std::string> check_places_separated(const labelled_net& n,
                                                  const distribution& d) {
  std::map<std::uint32_t, place_id> seen;
  for (place_id p = 0; p < n.n_places(); ++p) {
    auto [it, fresh] = seen.emplace(d.place_loc[p], p);
    if (!fresh)
      return "places " + n.place_names[it->second] + " and " +
             n.place_names[p] + " share a location";
  }
  return std::nullopt;
}

satisfies_result fail(std::string reason) { return {false, std::move(reason)}; }

}  // namespace

satisfies_result satisfies(const labelled_net& n, const distribution& d,
                           dist_requirement r, const limits& lim) {
  require_total(n, d);

  if (r == dist_requirement::fd) {
    if (auto bad = check_places_separated(n, d)) return fail(*bad);
    std::map<std::uint32_t, std::string> owner;
    for (place_id p = 0; p < n.n_places(); ++p)
      owner.emplace(d.place_loc[p], n.place_names[p]);
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      auto [it, fresh] = owner.emplace(d.trans_loc[t], n.trans_names[t]);
      if (!fresh)
        return fail("elements " + it->second + " and " + n.trans_names[t] +
                    " share a location");
    }
    return {true, {}};
  }

  if (r == dist_requirement::sd || r == dist_requirement::ad) {
    if (auto bad = check_places_separated(n, d)) return fail(*bad);
    // location -> its unique place, if any
    std::map<std::uint32_t, place_id> place_at;
    for (place_id p = 0; p < n.n_places(); ++p) place_at.emplace(d.place_loc[p], p);
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      auto it = place_at.find(d.trans_loc[t]);
      if (it != place_at.end()) {
        place_id p = it->second;
        if (r == dist_requirement::sd) {
          if (!(n.pre[t].test(p) && n.pre[t].count() == 1))
            return fail("transition " + n.trans_names[t] +
                        " shares a location with place " + n.place_names[p] +
                        " which is not its only preplace");
        } else {
          if (!n.pre[t].test(p))
            return fail("transition " + n.trans_names[t] +
                        " shares a location with place " + n.place_names[p] +
                        " which is not one of its preplaces");
        }
      }
    }
    // transitions may share a location only through a co-located place
    std::map<std::uint32_t, trans_id> trans_at;
    for (trans_id t = 0; t < n.n_transitions(); ++t) {
      auto [it, fresh] = trans_at.emplace(d.trans_loc[t], t);
      if (!fresh && place_at.find(d.trans_loc[t]) == place_at.end())
        return fail("transitions " + n.trans_names[it->second] + " and " +
                    n.trans_names[t] +
                    " share a location that contains no place");
    }
    return {true, {}};
  }

  // effectual / distributed-net
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    std::optional<std::string> bad;
    n.pre[t].for_each([&](std::uint32_t p) {
      if (!bad && !d.co_located_tp(t, p))
        bad = "transition " + n.trans_names[t] +
              " is not co-located with its preplace " + n.place_names[p];
    });
    if (bad) return fail(*bad);
  }
  if (r == dist_requirement::effectual) return {true, {}};

  for (auto [t, u] : concurrency_relation(n, lim)) {
    if (n.is_tau(t) || n.is_tau(u)) continue;
    if (d.co_located_tt(t, u))
      return fail("concurrent visible transitions " + n.trans_names[t] +
                  " and " + n.trans_names[u] + " share a location");
  }
  return {true, {}};
}

std::vector<distribution> canonical_distributions(const labelled_net& n,
                                                  dist_requirement r,
                                                  const limits& lim) {
  std::vector<distribution> out;
  if (r == dist_requirement::fd) {
    auto d = distribution::finest(n);
    d.canonicalize();
    out.push_back(std::move(d));
    return out;
  }
  if (r == dist_requirement::sd) {
    auto d = distribution::finest(n);
    for (trans_id t = 0; t < n.n_transitions(); ++t)
      if (n.pre[t].count() == 1)
        d.trans_loc[t] = d.place_loc[*n.pre[t].elems().begin()];
    d.canonicalize();
    out.push_back(std::move(d));
    return out;
  }
  if (r != dist_requirement::ad)
    throw net_error("canonical distributions exist only for fd, sd and ad");

  // transitions competing for some preplace are the only ones whose placement
  // matters; each picks one preplace to join, or stays alone
  std::vector<trans_id> constrained;
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    bool shares = false;
    for (trans_id u = 0; u < n.n_transitions() && !shares; ++u)
      shares = t != u && n.pre[t].intersects(n.pre[u]);
    if (shares) constrained.push_back(t);
  }
  std::vector<std::vector<std::optional<place_id>>> choices(constrained.size());
  for (std::size_t i = 0; i < constrained.size(); ++i) {
    for (auto p : n.pre[constrained[i]].elems()) choices[i].push_back(p);
    choices[i].push_back(std::nullopt);  // alone
  }

  std::size_t total = 1;
  for (const auto& c : choices) {
    if (total > lim.candidate_cap / c.size())
      throw candidate_cap_exceeded(lim.candidate_cap);
    total *= c.size();
  }

  distribution base = distribution::finest(n);
  std::vector<std::size_t> idx(constrained.size(), 0);
  while (true) {
    distribution d = base;
    for (std::size_t i = 0; i < constrained.size(); ++i)
      if (auto p = choices[i][idx[i]]) d.trans_loc[constrained[i]] = d.place_loc[*p];
    d.canonicalize();
    out.push_back(std::move(d));
    lim.check_cancel();
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < choices[i].size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
  return out;
}

distribution distribution_of_partition(
    const labelled_net& n, const std::vector<std::vector<std::string>>& groups) {
  constexpr std::uint32_t unassigned = 0xffffffffu;
  distribution d;
  d.place_loc.assign(n.n_places(), unassigned);
  d.trans_loc.assign(n.n_transitions(), unassigned);

  std::uint32_t loc = 0;
  for (const auto& group : groups) {
    for (const auto& name : group) {
      std::uint32_t* slot = nullptr;
      if (auto p = n.find_place(name)) slot = &d.place_loc[*p];
      else if (auto t = n.find_trans(name)) slot = &d.trans_loc[*t];
      else throw net_error("partition names unknown element '" + name + "'");
      if (*slot != unassigned)
        throw net_error("partition lists element '" + name + "' twice");
      *slot = loc;
    }
    ++loc;
  }
  for (auto& l : d.place_loc)
    if (l == unassigned) l = loc++;
  for (auto& l : d.trans_loc)
    if (l == unassigned) l = loc++;
  d.n_locations = loc;
  d.canonicalize();
  return d;
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

distributed_result is_distributed(const labelled_net& n, const limits& lim,
                                  bool strict) {
  distributed_result res;

  // components of the graph forced by co-locating each place with all its
  // posttransitions; node ids: places, then transitions
  auto tnode = [&](trans_id t) {
    return static_cast<std::uint32_t>(n.n_places() + t);
  };
  union_find uf(n.n_places() + n.n_transitions());
  for (place_id s = 0; s < n.n_places(); ++s)
    for (auto t : n.place_post[s]) uf.unite(s, tnode(t));

  std::vector<std::pair<trans_id, trans_id>> conc;
  try {
    conc = concurrency_relation(n, lim);
  } catch (const state_bound_exceeded& e) {
    res.v = verdict::unknown;
    res.note = e.what();
    return res;
  }

  std::optional<std::pair<trans_id, trans_id>> defeated;
  for (auto [t, u] : conc) {
    if (!strict && (n.is_tau(t) || n.is_tau(u))) continue;
    if (uf.find(tnode(t)) == uf.find(tnode(u))) {
      defeated = {t, u};
      break;
    }
  }

  if (!defeated) {
    distribution d;
    d.place_loc.resize(n.n_places());
    d.trans_loc.resize(n.n_transitions());
    for (place_id p = 0; p < n.n_places(); ++p) d.place_loc[p] = uf.find(p);
    for (trans_id t = 0; t < n.n_transitions(); ++t)
      d.trans_loc[t] = uf.find(tnode(t));
    d.canonicalize();
    res.v = verdict::yes;
    res.witness = std::move(d);
    return res;
  }

  // shortest chain t0,...,tn alternating through shared preplaces
  auto [from, to] = *defeated;
  std::size_t nn = n.n_places() + n.n_transitions();
  std::vector<std::uint32_t> prev(nn, 0xffffffffu);
  std::deque<std::uint32_t> work{tnode(from)};
  prev[tnode(from)] = tnode(from);
  while (!work.empty()) {
    auto x = work.front();
    work.pop_front();
    if (x == tnode(to)) break;
    auto push = [&](std::uint32_t y) {
      if (prev[y] == 0xffffffffu) {
        prev[y] = x;
        work.push_back(y);
      }
    };
    if (x < n.n_places()) {
      for (auto t : n.place_post[static_cast<place_id>(x)]) push(tnode(t));
    } else {
      for (auto p : n.pre[x - n.n_places()].elems()) push(p);
    }
  }
  std::vector<std::string> chain;
  for (std::uint32_t cur = tnode(to);; cur = prev[cur]) {
    if (cur >= n.n_places())
      chain.push_back(n.trans_names[cur - n.n_places()]);
    if (cur == tnode(from)) break;
  }
  std::reverse(chain.begin(), chain.end());
  res.v = verdict::no;
  res.chain = std::move(chain);
  return res;
}

}  // namespace distnet
