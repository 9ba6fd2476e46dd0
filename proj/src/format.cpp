#include "distnet/format.hpp"

#include <fstream>
#include <sstream>

namespace distnet {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : line) {
    if (c == '#') break;
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) toks.push_back(std::move(cur)), cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) toks.push_back(std::move(cur));
  return toks;
}

}  // namespace

labelled_net parse_net(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool named = false;
  net_builder b;
  std::vector<std::pair<std::pair<std::string, std::string>, int>> arcs;

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    try {
      if (kw == "net") {
        if (toks.size() != 2)
          throw parse_error(origin, lineno, "expected: net <name>");
        if (named) throw parse_error(origin, lineno, "duplicate net header");
        b = net_builder(toks[1]);
        named = true;
      } else if (kw == "place") {
        if (toks.size() == 2)
          b.add_place(toks[1]);
        else if (toks.size() == 3 && toks[2] == "marked")
          b.add_place(toks[1], true);
        else
          throw parse_error(origin, lineno, "expected: place <id> [marked]");
      } else if (kw == "trans") {
        if (toks.size() == 2)
          b.add_tau(toks[1]);
        else if (toks.size() == 4 && toks[2] == "label")
          b.add_transition(toks[1], toks[3]);
        else
          throw parse_error(origin, lineno,
                            "expected: trans <id> [label <action>]");
      } else if (kw == "arc") {
        if (toks.size() != 4 || toks[2] != "->")
          throw parse_error(origin, lineno, "expected: arc <id> -> <id>");
        arcs.push_back({{toks[1], toks[3]}, lineno});
      } else {
        throw parse_error(origin, lineno, "unknown directive '" + kw + "'");
      }
    } catch (const parse_error&) {
      throw;
    } catch (const net_error& e) {
      throw parse_error(origin, lineno, e.what());
    }
  }

  for (const auto& [arc, ln] : arcs) {
    try {
      b.add_arc(arc.first, arc.second);
    } catch (const net_error& e) {
      throw parse_error(origin, ln, e.what());
    }
  }
  return b.build();
}

labelled_net parse_net_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw net_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_net(buf.str(), path);
}

std::string emit_net(const labelled_net& n) {
  std::ostringstream out;
  out << "net " << n.name << "\n";
  for (place_id s = 0; s < n.n_places(); ++s) {
    out << "place " << n.place_names[s];
    if (n.m0.test(s)) out << " marked";
    out << "\n";
  }
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    out << "trans " << n.trans_names[t];
    if (!n.is_tau(t)) out << " label " << n.label_name(t);
    out << "\n";
  }
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    n.pre[t].for_each([&](std::uint32_t s) {
      out << "arc " << n.place_names[s] << " -> " << n.trans_names[t] << "\n";
    });
    n.post[t].for_each([&](std::uint32_t s) {
      out << "arc " << n.trans_names[t] << " -> " << n.place_names[s] << "\n";
    });
  }
  return out.str();
}

std::string to_dot(const labelled_net& n,
                   const std::unordered_set<std::string>& generated) {
  std::ostringstream out;
  out << "digraph \"" << n.name << "\" {\n  rankdir=LR;\n";
  for (place_id s = 0; s < n.n_places(); ++s) {
    const std::string& name = n.place_names[s];
    out << "  \"" << name << "\" [shape=circle";
    if (n.m0.test(s)) out << ", peripheries=2";
    if (generated.count(name)) out << ", style=dashed";
    out << "];\n";
  }
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    const std::string& name = n.trans_names[t];
    out << "  \"" << name << "\" [shape=box, label=\"" << name;
    if (!n.is_tau(t)) out << ":" << n.label_name(t);
    out << "\"";
    std::string style;
    if (n.is_tau(t)) style = "filled";
    if (generated.count(name)) style += style.empty() ? "dashed" : ",dashed";
    if (!style.empty()) out << ", style=\"" << style << "\"";
    if (n.is_tau(t)) out << ", fillcolor=gray85";
    out << "];\n";
  }
  for (trans_id t = 0; t < n.n_transitions(); ++t) {
    n.pre[t].for_each([&](std::uint32_t s) {
      out << "  \"" << n.place_names[s] << "\" -> \"" << n.trans_names[t]
          << "\";\n";
    });
    n.post[t].for_each([&](std::uint32_t s) {
      out << "  \"" << n.trans_names[t] << "\" -> \"" << n.place_names[s]
          << "\";\n";
    });
  }
  out << "}\n";
  return out.str();
}

}  // namespace distnet
