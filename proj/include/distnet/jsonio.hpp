#pragma once

#include <json.hpp>

#include "distnet/classify.hpp"
#include "distnet/distribution.hpp"
#include "distnet/net.hpp"
#include "distnet/oracles.hpp"
#include "distnet/reach.hpp"
#include "distnet/semantics.hpp"
#include "distnet/transform.hpp"

// JSON views of the analysis results. Schemas are stable:
//   multiset: [[action, count], ...] sorted by action
//   menu:     array of multisets
//   verdicts: "yes" | "no" | "unknown"
namespace distnet {

nlohmann::json json_of_validation(const validation_report& r);

nlohmann::json json_of_distribution(const labelled_net& n,
                                    const distribution& d);

nlohmann::json json_of_witness(const equiv_witness& w);
nlohmann::json json_of_equiv(const equiv_result& r);

nlohmann::json json_of_pattern(const pattern_witness& w);

// the automaton with per-state markings, menus and transitions
nlohmann::json json_of_semantics(const labelled_net& n,
                                 const ready_automaton& ra);

nlohmann::json json_of_report(const labelled_net& n, const class_report& rep);

nlohmann::json json_of_provenance(const provenance_map& prov);

nlohmann::json json_of_locations(const std::vector<std::vector<std::string>>& locs);

// outcome of one certificate check for the verify command; verdict is
// "pass" or "fail" (the CLI adds "unknown" entries for skipped checks)
nlohmann::json json_of_check(const std::string& name, const check_result& r);

}  // namespace distnet
