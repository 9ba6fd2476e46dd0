// Text format parsing/emission and DOT export.
//
// Grammar (line oriented, '#' starts a comment, blank lines ignored):
//   net <name>                      optional header, at most once
//   place <id> [marked]
//   trans <id> [label <action>]     omitted label or "tau" means internal
//   arc <id> -> <id>                place->transition or transition->place
#pragma once

#include <string>
#include <unordered_set>

#include "distnet/net.hpp"

namespace distnet {

struct parse_error : net_error {
  parse_error(const std::string& origin, int line, const std::string& what)
      : net_error(origin + ":" + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

labelled_net parse_net(const std::string& text,
                       const std::string& origin = "<input>");
labelled_net parse_net_file(const std::string& path);

// canonical emission: header, places, transitions, then arcs grouped by
// transition (inputs before outputs); parse(emit(n)) reproduces n exactly
std::string emit_net(const labelled_net& n);

// GraphViz export: places as circles (marked ones double-bordered),
// transitions as boxes (internal ones filled); element names found in
// `generated` are drawn dashed
std::string to_dot(const labelled_net& n,
                   const std::unordered_set<std::string>& generated = {});

}  // namespace distnet
