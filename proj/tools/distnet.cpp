// Command-line front end: parse nets from the line-oriented text format, run
// the analyses, and print reports.
//
// Exit codes:
//   0  success (equivalent / valid / all checks pass)
//   1  negative verdict (inequivalent, invalid net, failed check)
//   2  input error (net or sidecar parse failure, bad arguments)
//   3  undecided (state bound or candidate cap hit, cancelled by SIGINT)
//   4  internal error
// Argument errors reported by the option parser itself use its own codes
// (>= 100), so they never collide with the analysis outcomes.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <csignal>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "distnet/classify.hpp"
#include "distnet/distribution.hpp"
#include "distnet/format.hpp"
#include "distnet/gen.hpp"
#include "distnet/jsonio.hpp"
#include "distnet/net.hpp"
#include "distnet/oracles.hpp"
#include "distnet/reach.hpp"
#include "distnet/semantics.hpp"
#include "distnet/transform.hpp"

namespace {

using nlohmann::json;
using namespace distnet;

std::atomic<bool> g_interrupted{false};

void on_sigint(int) { g_interrupted.store(true); }

// options every subcommand accepts
struct common_opts {
  std::size_t bound = 1'000'000;
  std::size_t cap = 1'000'000;
  std::string out;  // output path; empty = stdout
  bool json_out = false;
  bool pretty = false;
};

void add_common(CLI::App* cmd, common_opts& o) {
  cmd->add_option("--bound", o.bound,
                  "stop exploration beyond this many markings");
  cmd->add_option("--cap", o.cap,
                  "stop distribution enumeration beyond this many candidates");
  cmd->add_option("-o,--output", o.out, "write the result here, not stdout");
  cmd->add_flag("--json", o.json_out, "machine-readable output");
  cmd->add_flag("--pretty", o.pretty, "human-oriented rendering");
}

limits make_limits(const common_opts& o) {
  limits lim;
  lim.state_bound = o.bound;
  lim.candidate_cap = o.cap;
  lim.cancel = &g_interrupted;
  return lim;
}

int write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(path);
  if (!f) {
    std::cerr << "cannot open " << path << " for writing\n";
    return 4;
  }
  f << text;
  return 0;
}

std::string dump(const json& j, bool pretty) {
  return (pretty ? j.dump(2) : j.dump()) + "\n";
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

// ---- validate ---------------------------------------------------------------

int cmd_validate(const std::string& path, const common_opts& o) {
  labelled_net n = parse_net_file(path);
  validation_report r = validate(n, make_limits(o));
  std::string text;
  if (o.json_out) {
    text = dump(json_of_validation(r), o.pretty);
  } else {
    text = n.name + ": " + to_string(r.ok) + " (" +
           std::to_string(r.markings) + " markings visited)\n";
    for (const auto& v : r.issues) text += "  " + v.kind + ": " + v.detail + "\n";
  }
  if (int rc = write_out(o.out, text)) return rc;
  if (r.ok == verdict::yes) return 0;
  return r.ok == verdict::no ? 1 : 3;
}

// ---- classify ---------------------------------------------------------------

std::string show_check(const async_check& c) {
  std::string s = to_string(c.v);
  if (c.pattern)
    s += " (" + to_string(c.pattern->kind) + ": " +
         join(c.pattern->transitions, ",") + ")";
  return s;
}

std::string render_report(const class_report& rep) {
  auto row = [](const std::string& k, const std::string& v) {
    std::string s = k;
    s.resize(30, ' ');
    return s + v + "\n";
  };
  std::string s;
  s += row("net", rep.net_name);
  s += row("valid", to_string(rep.validated));
  s += row("plain", rep.plain ? "yes" : "no");
  s += row("fully asynchronous", "structural " + show_check(rep.structural_fd) +
                                     ", behavioural " +
                                     to_string(rep.behavioural_fd.v));
  s += row("symmetrically asynchronous",
           "structural " + show_check(rep.structural_sd) + ", behavioural " +
               to_string(rep.behavioural_sd.v));
  s += row("asymmetrically asynchronous",
           "structural " + show_check(rep.structural_ad) + ", behavioural " +
               to_string(rep.behavioural_ad.v));
  std::string d = to_string(rep.distributed.v);
  if (!rep.distributed.chain.empty())
    d += " (chain " + join(rep.distributed.chain, ",") + ")";
  s += row("distributed", d);
  std::string pd = to_string(rep.distributable.v);
  if (!rep.distributable.chain.empty())
    pd += " (chain " + join(rep.distributable.chain, ",") + ")";
  s += row("plain-distributable", pd);
  s += row("truly synchronous", to_string(rep.sync_upper));
  s += row("pure visible m",
           rep.pure_m ? join(rep.pure_m->transitions, ",") : "none");
  if (!rep.note.empty()) s += row("note", rep.note);
  return s;
}

int cmd_classify(const std::string& path, const common_opts& o) {
  labelled_net n = parse_net_file(path);
  class_report rep = classify(n, make_limits(o));
  std::string text =
      o.pretty ? render_report(rep) : dump(json_of_report(n, rep), false);
  if (int rc = write_out(o.out, text)) return rc;
  if (rep.validated == verdict::no) return 1;
  // on plain nets every unknown stems from a budget overrun or cancellation
  bool undecided = rep.validated == verdict::unknown;
  if (rep.plain) {
    for (const async_check* c :
         {&rep.structural_fd, &rep.structural_sd, &rep.structural_ad,
          &rep.behavioural_fd, &rep.behavioural_sd, &rep.behavioural_ad})
      undecided = undecided || c->v == verdict::unknown;
    undecided = undecided || rep.distributable.v == verdict::unknown;
  }
  undecided = undecided || rep.distributed.v == verdict::unknown;
  return undecided ? 3 : 0;
}

// ---- semantics --------------------------------------------------------------

int cmd_semantics(const std::string& path, const common_opts& o) {
  labelled_net n = parse_net_file(path);
  ready_automaton ra = ready_semantics(n, make_limits(o));
  return write_out(o.out, dump(json_of_semantics(n, ra), o.pretty));
}

// ---- equiv ------------------------------------------------------------------

std::string render_menu(
    const std::vector<std::vector<std::pair<std::string, std::uint32_t>>>&
        menu) {
  std::string s = "{";
  for (std::size_t i = 0; i < menu.size(); ++i) {
    if (i) s += ", ";
    s += "{";
    for (std::size_t j = 0; j < menu[i].size(); ++j) {
      if (j) s += " ";
      s += menu[i][j].first;
      if (menu[i][j].second > 1)
        s += "*" + std::to_string(menu[i][j].second);
    }
    s += "}";
  }
  return s + "}";
}

std::string render_equiv(const equiv_result& r) {
  std::string head = r.v == verdict::yes   ? "equivalent"
                     : r.v == verdict::no  ? "inequivalent"
                                           : "unknown";
  if (!r.note.empty()) head += " (" + r.note + ")";
  head += "\n";
  if (r.witness) {
    const auto& w = *r.witness;
    head += "  ready pair only in the ";
    head += w.side == equiv_witness::side_t::left ? "left" : "right";
    head += " net\n";
    head += "  trace: " + (w.trace.empty() ? "(empty)" : join(w.trace, " ")) +
            "\n";
    head += "  menu:  " + render_menu(w.menu) + "\n";
  }
  return head;
}

int cmd_equiv(const std::string& pa, const std::string& pb, bool use_bounded,
              std::size_t bounded_len, const common_opts& o) {
  labelled_net a = parse_net_file(pa);
  labelled_net b = parse_net_file(pb);
  equiv_result r;
  try {
    r = use_bounded
            ? readiness_equivalent_bounded(a, b, bounded_len, make_limits(o))
            : readiness_equivalent(a, b, make_limits(o));
  } catch (const cancelled& e) {
    r.v = verdict::unknown;
    r.note = e.what();
  }
  std::string text = o.json_out ? dump(json_of_equiv(r), o.pretty)
                                : render_equiv(r);
  if (int rc = write_out(o.out, text)) return rc;
  if (r.v == verdict::yes) return 0;
  return r.v == verdict::no ? 1 : 3;
}

// ---- transform --------------------------------------------------------------

int write_sidecar(const std::string& prov_path, const std::string& out_path,
                  const provenance_map& prov, bool pretty) {
  std::string path = prov_path;
  if (path.empty() && !out_path.empty()) path = out_path + ".prov.json";
  if (path.empty()) return 0;  // net went to stdout; sidecar only on request
  return write_out(path, dump(json_of_provenance(prov), pretty));
}

// the candidate used for the construction: the first conflict-free one if
// any candidate confines all conflicts, otherwise the first overall
distribution pick_candidate(const labelled_net& n, dist_requirement req,
                            const limits& lim) {
  std::vector<distribution> cands = canonical_distributions(n, req, lim);
  if (cands.empty()) throw net_error("no candidate distribution");
  reach_graph rg = explore(n, lim);
  for (const auto& d : cands)
    if (!has_distributed_conflict(n, d, rg)) return d;
  return cands.front();
}

int cmd_transform_async(const std::string& path, const std::string& req_str,
                        const std::string& prov_path, const common_opts& o) {
  auto req = requirement_from_string(req_str);
  if (!req || (*req != dist_requirement::fd && *req != dist_requirement::sd &&
               *req != dist_requirement::ad)) {
    std::cerr << "--req must be fd, sd or ad\n";
    return 2;
  }
  labelled_net n = parse_net_file(path);
  async_net impl = async_implementation(n, pick_candidate(n, *req, make_limits(o)));
  if (int rc = write_out(o.out, emit_net(impl.net))) return rc;
  return write_sidecar(prov_path, o.out, impl.prov, o.pretty);
}

int cmd_transform_tcc(const std::string& path, const std::string& prov_path,
                      const common_opts& o) {
  labelled_net n = parse_net_file(path);
  tcc_net t = tcc_implementation(n, make_limits(o));
  if (int rc = write_out(o.out, emit_net(t.net))) return rc;
  return write_sidecar(prov_path, o.out, t.prov, o.pretty);
}

int cmd_transform_hide(const std::string& path, const std::string& action,
                       const common_opts& o) {
  labelled_net n = parse_net_file(path);
  return write_out(o.out, emit_net(hide_action(n, action)));
}

// ---- verify -----------------------------------------------------------------

// run both certificate suites on one net, appending one entry per check
json run_suites(const labelled_net& n, dist_requirement req,
                const limits& lim, bool& any_fail, bool& any_unknown) {
  json checks = json::array();
  bool stop = false;  // set on cancellation; remaining checks become unknown

  auto push_unknown = [&](const std::string& name, const std::string& why) {
    json e{{"check", name}, {"verdict", "unknown"}};
    if (!why.empty()) e["detail"] = why;
    checks.push_back(std::move(e));
    any_unknown = true;
  };
  auto run = [&](const std::string& name, auto fn) {
    if (stop) {
      push_unknown(name, "analysis cancelled");
      return;
    }
    try {
      check_result r = fn();
      if (!r.ok) any_fail = true;
      checks.push_back(json_of_check(name, r));
    } catch (const cancelled& e) {
      stop = true;
      push_unknown(name, e.what());
    } catch (const net_error& e) {  // bound, cap, unmet preconditions
      push_unknown(name, e.what());
    }
  };

  // buffer implementation, over the chosen candidate distribution
  std::optional<alpha_context> actx;
  std::optional<pattern_witness> remote_conflict;
  std::string askip;
  try {
    distribution d = pick_candidate(n, req, lim);
    actx = make_alpha_context(n, d, lim);
    remote_conflict = has_distributed_conflict(n, d, actx->source_reach);
  } catch (const cancelled& e) {
    stop = true;
    askip = e.what();
  } catch (const net_error& e) {
    askip = e.what();
  }

  if (actx) {
    run("alpha-characterization",
        [&] { return check_alpha_characterization(*actx); });
    run("alpha-descent", [&] { return check_d_descent(*actx); });
    run("alpha-step-simulation", [&] { return check_step_simulation(*actx); });
    run("alpha-visible-projection",
        [&] { return check_visible_projection(*actx); });
    run("alpha-weak-projection", [&] { return check_weak_projection(*actx); });
    if (n.has_tau()) {
      push_unknown("alpha-stable-menus",
                   "source has internal transitions; menu preservation is "
                   "not claimed");
    } else if (remote_conflict) {
      push_unknown("alpha-stable-menus",
                   "every candidate leaves a conflict spanning locations (" +
                       join(remote_conflict->transitions, ",") +
                       "); menu preservation is not claimed");
    } else {
      run("alpha-stable-menus", [&] { return check_stable_menus(*actx); });
    }
  } else {
    for (const char* nm :
         {"alpha-characterization", "alpha-descent", "alpha-step-simulation",
          "alpha-visible-projection", "alpha-weak-projection",
          "alpha-stable-menus"})
      push_unknown(nm, askip);
  }

  // choice construction
  std::optional<beta_context> bctx;
  std::string bskip = stop ? "analysis cancelled" : "";
  if (!stop) {
    try {
      tcc_net t = tcc_implementation(n, lim);
      bctx = make_beta_context(t, lim);
    } catch (const cancelled& e) {
      stop = true;
      bskip = e.what();
    } catch (const net_error& e) {
      bskip = e.what();
    }
  }
  if (bctx) {
    run("beta-invariant", [&] { return check_beta_invariant(*bctx); });
    run("beta-branching", [&] { return check_branching_clauses(*bctx); });
  } else {
    push_unknown("beta-invariant", bskip);
    push_unknown("beta-branching", bskip);
  }

  return checks;
}

int cmd_verify(const std::string& path, const std::string& req_str,
               std::size_t random_count, std::uint64_t seed,
               const common_opts& o) {
  auto req = requirement_from_string(req_str);
  if (!req || (*req != dist_requirement::fd && *req != dist_requirement::sd &&
               *req != dist_requirement::ad)) {
    std::cerr << "--req must be fd, sd or ad\n";
    return 2;
  }
  if (path.empty() == (random_count == 0)) {
    std::cerr << "verify needs a net file or --random N (not both)\n";
    return 2;
  }
  limits lim = make_limits(o);
  bool any_fail = false, any_unknown = false;
  json out;
  if (random_count > 0) {
    out = json{{"seed", seed}, {"count", random_count}};
    json results = json::array();
    for (std::size_t i = 0; i < random_count; ++i) {
      if (g_interrupted.load()) {
        any_unknown = true;
        break;
      }
      labelled_net n = corpus_net(seed, i);
      results.push_back(
          json{{"index", i},
               {"net", n.name},
               {"checks", run_suites(n, *req, lim, any_fail, any_unknown)}});
    }
    out["results"] = std::move(results);
  } else {
    labelled_net n = parse_net_file(path);
    out = json{{"net", n.name},
               {"requirement", to_string(*req)},
               {"checks", run_suites(n, *req, lim, any_fail, any_unknown)}};
  }
  if (int rc = write_out(o.out, dump(out, o.pretty))) return rc;
  if (any_fail) return 1;
  return any_unknown ? 3 : 0;
}

// ---- dot --------------------------------------------------------------------

int cmd_dot(const std::string& path, const std::string& prov_path,
            const common_opts& o) {
  labelled_net n = parse_net_file(path);
  std::unordered_set<std::string> generated;
  if (!prov_path.empty()) {
    std::ifstream f(prov_path);
    if (!f) {
      std::cerr << "cannot read " << prov_path << "\n";
      return 2;
    }
    json j;
    try {
      j = json::parse(f);
    } catch (const json::exception& e) {
      std::cerr << prov_path << ": " << e.what() << "\n";
      return 2;
    }
    for (const auto& [name, entry] : j.items()) {
      std::string kind = entry.value("kind", "");
      if (kind != "place" && kind != "transition") generated.insert(name);
    }
  }
  return write_out(o.out, to_dot(n, generated));
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_sigint);

  CLI::App app{"step readiness analyses for finite one-safe labelled nets"};
  app.require_subcommand(1);

  std::string v_file;
  common_opts v_o;
  auto* v = app.add_subcommand(
      "validate", "check the model restrictions on a net");
  v->add_option("file", v_file, "net in the text format")->required();
  add_common(v, v_o);

  std::string c_file;
  common_opts c_o;
  auto* c = app.add_subcommand(
      "classify", "membership in the asynchrony and distributability classes");
  c->add_option("file", c_file, "net in the text format")->required();
  add_common(c, c_o);

  std::string s_file;
  common_opts s_o;
  auto* s = app.add_subcommand(
      "semantics", "the deterministic automaton of step ready pairs");
  s->add_option("file", s_file, "net in the text format")->required();
  add_common(s, s_o);

  std::string e_a, e_b;
  std::size_t e_len = 0;
  common_opts e_o;
  auto* e = app.add_subcommand("equiv",
                               "decide step readiness equivalence of two nets");
  e->add_option("left", e_a, "first net")->required();
  e->add_option("right", e_b, "second net")->required();
  auto* e_bounded = e->add_option(
      "--bounded", e_len,
      "compare only traces up to this length (a yes is then unsound)");
  add_common(e, e_o);

  auto* tr = app.add_subcommand("transform", "construct an implementation net");
  tr->require_subcommand(1);

  std::string ta_file, ta_req = "fd", ta_prov;
  common_opts ta_o;
  auto* ta = tr->add_subcommand(
      "async", "reroute cross-location arcs through buffer places");
  ta->add_option("file", ta_file, "net in the text format")->required();
  ta->add_option("--req", ta_req, "distribution class: fd, sd or ad")
      ->capture_default_str();
  ta->add_option("--prov", ta_prov, "write the provenance sidecar here");
  add_common(ta, ta_o);

  std::string tt_file, tt_prov;
  common_opts tt_o;
  auto* tt = tr->add_subcommand(
      "tcc", "resolve choices locally per conflict class of transitions");
  tt->add_option("file", tt_file, "net in the text format")->required();
  tt->add_option("--prov", tt_prov, "write the provenance sidecar here");
  add_common(tt, tt_o);

  std::string th_file, th_action;
  common_opts th_o;
  auto* th = tr->add_subcommand("hide", "make one visible action internal");
  th->add_option("file", th_file, "net in the text format")->required();
  th->add_option("action", th_action, "label to hide")->required();
  add_common(th, th_o);

  std::string vf_file, vf_req = "fd";
  std::size_t vf_random = 0;
  std::uint64_t vf_seed = 1;
  common_opts vf_o;
  auto* vf = app.add_subcommand(
      "verify", "run the implementation certificates on a net");
  vf->add_option("file", vf_file, "net in the text format");
  vf->add_option("--req", vf_req, "distribution class for the buffer suite")
      ->capture_default_str();
  vf->add_option("--random", vf_random,
                 "run on this many sampled nets instead of a file");
  vf->add_option("--seed", vf_seed, "seed for --random")->capture_default_str();
  add_common(vf, vf_o);

  std::string d_file, d_prov;
  common_opts d_o;
  auto* d = app.add_subcommand("dot", "GraphViz rendering of a net");
  d->add_option("file", d_file, "net in the text format")->required();
  d->add_option("--prov", d_prov,
                "provenance sidecar; listed generated elements draw dashed");
  add_common(d, d_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (v->parsed()) return cmd_validate(v_file, v_o);
    if (c->parsed()) return cmd_classify(c_file, c_o);
    if (s->parsed()) return cmd_semantics(s_file, s_o);
    if (e->parsed())
      return cmd_equiv(e_a, e_b, e_bounded->count() > 0, e_len, e_o);
    if (ta->parsed()) return cmd_transform_async(ta_file, ta_req, ta_prov, ta_o);
    if (tt->parsed()) return cmd_transform_tcc(tt_file, tt_prov, tt_o);
    if (th->parsed()) return cmd_transform_hide(th_file, th_action, th_o);
    if (vf->parsed()) return cmd_verify(vf_file, vf_req, vf_random, vf_seed, vf_o);
    if (d->parsed()) return cmd_dot(d_file, d_prov, d_o);
  } catch (const parse_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const state_bound_exceeded& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const candidate_cap_exceeded& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const cancelled& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const net_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 4;  // unreachable: a subcommand is required
}
