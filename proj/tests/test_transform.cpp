#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "distnet/distribution.hpp"
#include "distnet/format.hpp"
#include "distnet/net.hpp"
#include "distnet/reach.hpp"
#include "distnet/semantics.hpp"
#include "distnet/transform.hpp"
#include "testutil.hpp"

using namespace distnet;

TEST_SUITE_BEGIN("transform");

TEST_CASE("buffering every arc of fig1") {
  labelled_net n = load_fixture("fig1.net");
  async_net impl = async_implementation(n, distribution::finest(n));
  const labelled_net& m = impl.net;

  // originals keep their ids, buffers follow
  CHECK(m.n_places() == 5);
  CHECK(m.n_transitions() == 5);
  CHECK(m.place_names[0] == n.place_names[0]);
  CHECK(m.place_names[1] == n.place_names[1]);
  CHECK(m.trans_names[0] == n.trans_names[0]);
  CHECK(m.m0 == marking_of(m, {"p"}));

  for (const char* name : {"p__t", "p__u", "q__u"})
    CHECK(m.find_place(name).has_value());
  for (const char* name : {"t__p", "u__p", "u__q"})
    CHECK(m.find_trans(name).has_value());

  trans_id t = *m.find_trans("t"), u = *m.find_trans("u");
  CHECK(m.label_name(t) == "a");
  CHECK(m.pre[t] == marking_of(m, {"p__t"}));
  CHECK(m.pre[u] == marking_of(m, {"p__u", "q__u"}));
  trans_id mv = *m.find_trans("t__p");
  CHECK(m.is_tau(mv));
  CHECK(m.pre[mv] == marking_of(m, {"p"}));
  CHECK(m.post[mv] == marking_of(m, {"p__t"}));

  // the four reachable markings of the fully buffered net
  reach_graph rg = explore(m);
  std::set<marking> got(rg.nodes.begin(), rg.nodes.end());
  std::set<marking> want{marking_of(m, {"p"}), marking_of(m, {"p__t"}),
                         marking_of(m, {"p__u"}), marking_of(m, {})};
  CHECK(got == want);

  // provenance covers every element
  CHECK(impl.prov.size() == m.n_places() + m.n_transitions());
  CHECK(impl.prov.at("p").kind == elem_kind::original_place);
  CHECK(impl.prov.at("p__t").kind == elem_kind::buffer_place);
  CHECK(impl.prov.at("p__t").place == "p");
  CHECK(impl.prov.at("p__t").trans == "t");
  CHECK(impl.prov.at("u__q").kind == elem_kind::buffer_trans);
  CHECK(impl.prov.at("u__q").place == "q");
  CHECK(impl.prov.at("u__q").trans == "u");
}

TEST_CASE("co-located arcs stay direct") {
  labelled_net n = load_fixture("fig1.net");
  distribution d = distribution_of_partition(n, {{"p", "t"}});
  async_net impl = async_implementation(n, d);
  const labelled_net& m = impl.net;

  CHECK(m.n_places() == 4);  // only p->u and q->u are rerouted
  CHECK(m.n_transitions() == 4);
  trans_id t = *m.find_trans("t");
  CHECK(m.pre[t] == marking_of(m, {"p"}));
  CHECK(!m.find_place("p__t").has_value());
  CHECK(m.find_place("p__u").has_value());
  CHECK(m.find_place("q__u").has_value());

  // the net it was built for is remembered
  CHECK(impl.source_dist == d);
}

TEST_CASE("generated names step aside on collision") {
  labelled_net n = parse_net(
      "net clash\n"
      "place p marked\n"
      "place p__t\n"
      "trans t label a\n"
      "trans z label b\n"
      "arc p -> t\n"
      "arc p__t -> z\n");
  async_net impl = async_implementation(n, distribution::finest(n));
  CHECK(impl.net.find_place("p__t__2").has_value());
  CHECK(impl.prov.at("p__t__2").kind == elem_kind::buffer_place);
  CHECK(impl.prov.at("p__t").kind == elem_kind::original_place);
  CHECK(validate(impl.net).ok == verdict::yes);
}

TEST_CASE("the choice construction on fig4 reproduces the reference net") {
  labelled_net f4 = load_fixture("fig4.net");
  tcc_net t = tcc_implementation(f4);

  CHECK(t.fresh_action.empty());
  CHECK(t.net.n_places() == 14);
  CHECK(t.net.n_transitions() == 11);
  CHECK(isomorphic(t.net, load_fixture("fig5.net")));

  // conflict classes {a} and {b,c}
  REQUIRE(t.classes.size() == 2);
  CHECK(t.class_rep == std::vector<std::string>{"a", "b"});
  CHECK(t.classes[0] == std::vector<trans_id>{*f4.find_trans("a")});
  CHECK(t.classes[1] == std::vector<trans_id>{*f4.find_trans("b"),
                                              *f4.find_trans("c")});
  CHECK(t.class_of[*f4.find_trans("c")] == 1);
}

TEST_CASE("the intended locations of the fig4 construction") {
  labelled_net f4 = load_fixture("fig4.net");
  tcc_net t = tcc_implementation(f4);

  std::vector<std::vector<std::string>> want{
      {"a", "b_BY_p_AT_a", "bar_p_BY_a_AT_b", "circ_a", "p_AT_a",
       "p_BY_b_AT_a", "prime_a", "r_AT_a"},
      {"a_BY_p_AT_b", "b", "bar_p_BY_b_AT_a", "c", "circ_b", "circ_c",
       "p_AT_b", "p_BY_a_AT_b", "prime_b", "prime_c", "q_AT_b"},
      {"box_p", "p"},
      {"box_q", "q"},
      {"box_r", "r"}};
  CHECK(t.locations == want);
  CHECK(locations_of_tcc(f4) == want);

  // the partition covers every element of the result exactly once
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto& group : t.locations)
    for (const auto& name : group) {
      CHECK(seen.insert(name).second);
      CHECK((t.net.find_place(name) || t.net.find_trans(name)));
      ++total;
    }
  CHECK(total == t.net.n_places() + t.net.n_transitions());
}

TEST_CASE("construction output stays inside the model class") {
  for (const char* f : {"fig1.net", "fig2.net", "fig4.net", "fig6-spec.net",
                        "fig7-spec.net"}) {
    CAPTURE(f);
    labelled_net n = load_fixture(f);
    CHECK(validate(async_implementation(n, distribution::finest(n)).net).ok ==
          verdict::yes);
    tcc_net t = tcc_implementation(n);
    CHECK(validate(t.net).ok == verdict::yes);

    // the initial marking carries over by name
    std::vector<std::string> marked;
    n.m0.for_each([&](std::uint32_t s) { marked.push_back(n.place_names[s]); });
    CHECK(t.net.m0 == marking_of(t.net, marked));
  }
}

TEST_CASE("internal transitions are detoured through a fresh action") {
  labelled_net f3 = load_fixture("fig3.net");
  tcc_net t = tcc_implementation(f3);
  CHECK(t.fresh_action == "__i0");
  CHECK(!t.prepared.has_tau());
  CHECK(t.prepared.find_action("__i0").has_value());
  CHECK(!t.net.find_action("__i0").has_value());  // hidden again
  CHECK(t.raw.find_action("__i0").has_value());
  CHECK(t.net.has_tau());

  // construction elements are internal, source labels survive
  for (trans_id tr = 0; tr < t.net.n_transitions(); ++tr) {
    const auto& entry = t.prov.at(t.net.trans_names[tr]);
    if (entry.kind == elem_kind::lock_trans ||
        entry.kind == elem_kind::done_trans ||
        entry.kind == elem_kind::gc_trans)
      CHECK(t.net.is_tau(tr));
  }

  // the detour is behaviour-preserving
  CHECK(readiness_equivalent(f3, t.net).v == verdict::yes);
}

TEST_CASE("reveal and hide are inverse on the internal label") {
  labelled_net f3 = load_fixture("fig3.net");
  labelled_net shown = reveal_internal(f3, "x");
  CHECK(!shown.has_tau());
  CHECK(shown.label_name(*shown.find_trans("ptau1")) == "x");
  CHECK(emit_net(hide_action(shown, "x")) == emit_net(f3));
}

TEST_CASE("provenance of the choice construction is total and injective") {
  tcc_net t = tcc_implementation(load_fixture("fig4.net"));
  CHECK(t.prov.size() == t.net.n_places() + t.net.n_transitions());
  for (const auto& name : t.net.place_names) CHECK(t.prov.count(name) == 1);
  for (const auto& name : t.net.trans_names) CHECK(t.prov.count(name) == 1);

  std::set<std::tuple<elem_kind, std::string, std::string, std::string>> keys;
  for (const auto& [name, e] : t.prov)
    CHECK(keys.insert({e.kind, e.place, e.trans, e.cls}).second);
}

TEST_SUITE_END();
