#include "distnet/jsonio.hpp"

#include <algorithm>

namespace distnet {

using nlohmann::json;

namespace {

json json_of_menu(
    const std::vector<std::vector<std::pair<std::string, std::uint32_t>>>& menu) {
  json out = json::array();
  for (const auto& ms : menu) {
    json jms = json::array();
    for (const auto& [a, c] : ms) jms.push_back(json::array({a, c}));
    out.push_back(std::move(jms));
  }
  return out;
}

json json_of_menu_ids(const std::vector<std::string>& actions, const menu_t& x) {
  json out = json::array();
  for (const auto& l : x) {
    json jms = json::array();
    for (auto [a, c] : l.items) jms.push_back(json::array({actions[a], c}));
    out.push_back(std::move(jms));
  }
  return out;
}

}  // namespace

json json_of_validation(const validation_report& r) {
  json issues = json::array();
  for (const auto& i : r.issues)
    issues.push_back({{"kind", i.kind}, {"detail", i.detail}});
  return {{"ok", to_string(r.ok)},
          {"issues", std::move(issues)},
          {"markings", r.markings}};
}

json json_of_distribution(const labelled_net& n, const distribution& d) {
  json out = json::object();
  for (place_id s = 0; s < n.n_places(); ++s)
    out[n.place_names[s]] = d.place_loc[s];
  for (trans_id t = 0; t < n.n_transitions(); ++t)
    out[n.trans_names[t]] = d.trans_loc[t];
  return out;
}

json json_of_witness(const equiv_witness& w) {
  return {{"trace", w.trace},
          {"menu", json_of_menu(w.menu)},
          {"side", w.side == equiv_witness::side_t::left ? "left" : "right"}};
}

json json_of_equiv(const equiv_result& r) {
  json out{{"equivalent", to_string(r.v)}};
  if (r.witness) out["witness"] = json_of_witness(*r.witness);
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

json json_of_pattern(const pattern_witness& w) {
  return {{"kind", to_string(w.kind)},
          {"transitions", w.transitions},
          {"places", w.places},
          {"markings", w.markings}};
}

json json_of_semantics(const labelled_net& n, const ready_automaton& ra) {
  json states = json::array();
  for (std::size_t q = 0; q < ra.states.size(); ++q) {
    const auto& st = ra.states[q];
    json markings = json::array();
    for (auto i : st.markings) {
      json names = json::array();
      ra.rg.nodes[i].for_each(
          [&](std::uint32_t s) { names.push_back(n.place_names[s]); });
      markings.push_back(std::move(names));
    }
    json menus = json::array();
    for (const auto& x : st.menus)
      menus.push_back(json_of_menu_ids(ra.actions, x));
    json next = json::object();
    for (auto [a, target] : st.next) next[ra.actions[a]] = target;
    states.push_back({{"id", q},
                      {"markings", std::move(markings)},
                      {"menus", std::move(menus)},
                      {"next", std::move(next)}});
  }
  return {{"net", n.name}, {"initial", 0}, {"states", std::move(states)}};
}

namespace {

json json_of_async_check(const labelled_net& n, const async_check& c) {
  json out{{"verdict", to_string(c.v)}};
  if (c.dist) out["distribution"] = json_of_distribution(n, *c.dist);
  if (c.pattern) out["pattern"] = json_of_pattern(*c.pattern);
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

}  // namespace

json json_of_report(const labelled_net& n, const class_report& rep) {
  json out;
  out["net"] = rep.net_name;
  out["plain"] = rep.plain;
  out["valid"] = to_string(rep.validated);
  if (!rep.note.empty()) out["note"] = rep.note;
  out["fully-asynchronous"] = {
      {"structural", json_of_async_check(n, rep.structural_fd)},
      {"behavioural", json_of_async_check(n, rep.behavioural_fd)}};
  out["symmetrically-asynchronous"] = {
      {"structural", json_of_async_check(n, rep.structural_sd)},
      {"behavioural", json_of_async_check(n, rep.behavioural_sd)}};
  out["asymmetrically-asynchronous"] = {
      {"structural", json_of_async_check(n, rep.structural_ad)},
      {"behavioural", json_of_async_check(n, rep.behavioural_ad)}};
  json dist{{"verdict", to_string(rep.distributed.v)}};
  if (rep.distributed.witness)
    dist["distribution"] = json_of_distribution(n, *rep.distributed.witness);
  if (!rep.distributed.chain.empty()) dist["chain"] = rep.distributed.chain;
  if (!rep.distributed.note.empty()) dist["note"] = rep.distributed.note;
  out["distributed"] = std::move(dist);
  json dble{{"verdict", to_string(rep.distributable.v)}};
  if (!rep.distributable.chain.empty()) dble["chain"] = rep.distributable.chain;
  if (!rep.distributable.note.empty()) dble["note"] = rep.distributable.note;
  out["distributable"] = std::move(dble);
  out["synchrony-upper-bound"] = to_string(rep.sync_upper);
  if (rep.pure_m) out["pure-visible-m"] = json_of_pattern(*rep.pure_m);
  return out;
}

json json_of_provenance(const provenance_map& prov) {
  json out = json::object();
  for (const auto& [name, e] : prov) {
    json entry{{"kind", to_string(e.kind)}};
    if (!e.place.empty()) entry["place"] = e.place;
    if (!e.trans.empty()) entry["transition"] = e.trans;
    if (!e.cls.empty()) entry["class"] = e.cls;
    out[name] = std::move(entry);
  }
  return out;
}

json json_of_locations(const std::vector<std::vector<std::string>>& locs) {
  json out = json::array();
  for (const auto& loc : locs) out.push_back(loc);
  return out;
}

json json_of_check(const std::string& name, const check_result& r) {
  json out{{"check", name}, {"verdict", r.ok ? "pass" : "fail"}};
  if (!r.detail.empty()) out["detail"] = r.detail;
  return out;
}

}  // namespace distnet
