#include "distnet/gen.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "distnet/reach.hpp"

namespace distnet {

std::optional<labelled_net> random_net(std::mt19937_64& rng,
                                       const gen_params& p) {
  auto uniform = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto chance = [&](double prob) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob;
  };

  std::size_t np = uniform(1, p.max_places);
  std::size_t nt = uniform(1, p.max_transitions);

  std::vector<char> marked(np, 0);
  for (std::size_t s = 0; s < np; ++s) marked[s] = chance(0.5);

  struct tspec {
    bool tau;
    std::vector<std::size_t> pre, post;
  };
  std::vector<tspec> trans(nt);
  std::size_t arcs = 0;
  for (auto& t : trans) {
    t.tau = !p.plain && chance(p.tau_prob);
    std::set<std::size_t> pre, post;
    std::size_t npre = uniform(1, std::min(p.max_preset, np));
    while (pre.size() < npre) pre.insert(uniform(0, np - 1));
    std::size_t npost = uniform(0, std::min<std::size_t>(2, np));
    while (post.size() < npost) post.insert(uniform(0, np - 1));
    t.pre.assign(pre.begin(), pre.end());
    t.post.assign(post.begin(), post.end());
    arcs += t.pre.size() + t.post.size();
  }
  if (arcs > p.max_arcs) return std::nullopt;

  // drop places nothing consumes; they are never in a preset, so only
  // postsets shrink
  std::vector<char> consumed(np, 0);
  for (const auto& t : trans)
    for (auto s : t.pre) consumed[s] = 1;
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < np; ++s)
    if (consumed[s]) keep.push_back(s);
  if (keep.empty()) return std::nullopt;

  if (std::none_of(keep.begin(), keep.end(),
                   [&](std::size_t s) { return marked[s]; }))
    marked[keep[uniform(0, keep.size() - 1)]] = 1;

  net_builder b("corpus");
  std::vector<std::string> pname(np);
  for (auto s : keep) {
    pname[s] = "p" + std::to_string(s);
    b.add_place(pname[s], marked[s]);
  }
  for (std::size_t i = 0; i < nt; ++i) {
    std::string tn = "t" + std::to_string(i);
    if (trans[i].tau)
      b.add_tau(tn);
    else
      b.add_transition(tn, "a" + std::to_string(i));
    for (auto s : trans[i].pre) b.add_arc(pname[s], tn);
    for (auto s : trans[i].post)
      if (consumed[s]) b.add_arc(tn, pname[s]);
  }
  labelled_net n = b.build();

  if (validate(n).ok != verdict::yes) return std::nullopt;
  return n;
}

labelled_net corpus_net(std::uint64_t seed, std::size_t index,
                        const gen_params& p) {
  for (std::size_t attempt = 0; attempt < 10000; ++attempt) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (index * 10000 + attempt + 1));
    if (auto n = random_net(rng, p)) {
      n->name = "corpus_" + std::to_string(index);
      return *n;
    }
  }
  throw net_error("could not draw a valid corpus net");
}

}  // namespace distnet
