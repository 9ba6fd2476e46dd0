#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "distnet/classify.hpp"
#include "distnet/distribution.hpp"
#include "distnet/net.hpp"
#include "distnet/semantics.hpp"
#include "distnet/transform.hpp"
#include "testutil.hpp"

using namespace distnet;

namespace {

using names = std::vector<std::string>;

}  // namespace

TEST_SUITE_BEGIN("classify");

TEST_CASE("a reachable shared-preplace conflict is found with its marking") {
  labelled_net n = load_fixture("fig1.net");

  auto w = detect_pattern(n, pattern_kind::conflict);
  REQUIRE(w.has_value());
  CHECK(w->kind == pattern_kind::conflict);
  CHECK(w->transitions == names{"t", "u"});
  CHECK(w->places == names{"p"});
  REQUIRE(w->markings.size() == 1);
  CHECK(w->markings[0] == names{"p"});

  // the n variant additionally needs the passive partner to have a second
  // preplace; u qualifies
  auto wn = detect_pattern(n, pattern_kind::n_shape);
  REQUIRE(wn.has_value());
  CHECK(wn->transitions == names{"t", "u"});

  // two transitions cannot overlap on two distinct places here
  CHECK(!detect_pattern(n, pattern_kind::m_shape).has_value());

  CHECK_THROWS_AS(detect_pattern(n, pattern_kind::pure_visible_m), net_error);
}

TEST_CASE("overlapping conflicts form the m pattern") {
  labelled_net n = load_fixture("fig2.net");
  auto w = detect_pattern(n, pattern_kind::m_shape);
  REQUIRE(w.has_value());
  CHECK(w->transitions == names{"t", "u", "v"});
  CHECK(w->places == names{"p", "q"});
  REQUIRE(w->markings.size() == 2);
  CHECK(w->markings[0] == names{"p", "q"});
  CHECK(w->markings[1] == names{"p", "q"});
}

TEST_CASE("the two outer arms of an m may be the same transition") {
  net_builder b("twice");
  b.add_place("p", true);
  b.add_place("q", true);
  b.add_transition("t", "x");
  b.add_transition("u", "y");
  b.add_arc("p", "t");
  b.add_arc("q", "t");
  b.add_arc("p", "u");
  b.add_arc("q", "u");
  labelled_net n = b.build();

  auto w = detect_pattern(n, pattern_kind::m_shape);
  REQUIRE(w.has_value());
  REQUIRE(w->transitions.size() == 3);
  CHECK(w->transitions[0] == w->transitions[2]);
  CHECK(w->places.size() == 2);
  CHECK(w->places[0] != w->places[1]);
}

TEST_CASE("the m in fig4 is real but its arms never covered together") {
  labelled_net n = load_fixture("fig4.net");

  auto w = detect_pattern(n, pattern_kind::m_shape);
  REQUIRE(w.has_value());
  CHECK(w->transitions == names{"a", "b", "c"});
  CHECK(w->places == names{"p", "q"});
  REQUIRE(w->markings.size() == 2);
  CHECK(w->markings[0] == names{"r", "p"});  // covers the preset of a
  CHECK(w->markings[1] == names{"p", "q"});  // covers the preset of c

  // ...so the all-visible jointly-covered variant is absent
  CHECK(!detect_pure_visible_m(n).has_value());
}

TEST_CASE("pure visible m detection across the corpus") {
  auto w2 = detect_pure_visible_m(load_fixture("fig2.net"));
  REQUIRE(w2.has_value());
  CHECK(w2->kind == pattern_kind::pure_visible_m);
  CHECK(w2->transitions == names{"t", "u", "v"});
  CHECK(w2->places == names{"p", "q"});
  REQUIRE(w2->markings.size() == 1);
  CHECK(w2->markings[0] == names{"p", "q"});  // one marking covers all three

  auto w6 = detect_pure_visible_m(load_fixture("fig6-spec.net"));
  REQUIRE(w6.has_value());
  CHECK(w6->transitions == names{"a", "b", "c"});

  CHECK(!detect_pure_visible_m(load_fixture("fig1.net")).has_value());
  // every pair of transitions shares a preplace, so no disjoint outer arms
  CHECK(!detect_pure_visible_m(load_fixture("fig7-spec.net")).has_value());
  // the overlaps in fig3 run through internal transitions only
  CHECK(!detect_pure_visible_m(load_fixture("fig3.net")).has_value());
}

TEST_CASE("a conflict counts as distributed only across locations") {
  labelled_net n = load_fixture("fig1.net");

  auto w = has_distributed_conflict(n, distribution::finest(n));
  REQUIRE(w.has_value());
  CHECK(w->kind == pattern_kind::distributed_conflict);
  CHECK(w->transitions == names{"t", "u"});
  CHECK(w->places == names{"p"});

  // co-locating both competitors with the shared place removes it
  distribution d = distribution_of_partition(n, {{"p", "t", "u"}});
  CHECK(!has_distributed_conflict(n, d).has_value());

  // a distribution for a different net is rejected
  labelled_net other = load_fixture("fig2.net");
  CHECK_THROWS_AS(
      has_distributed_conflict(other, distribution::finest(n)), net_error);
}

TEST_CASE("structural asynchrony of fig1 per requirement class") {
  labelled_net n = load_fixture("fig1.net");

  async_check fd = structural_async(n, dist_requirement::fd);
  CHECK(fd.v == verdict::no);
  REQUIRE(fd.pattern.has_value());
  CHECK(fd.pattern->kind == pattern_kind::distributed_conflict);

  CHECK(structural_async(n, dist_requirement::sd).v == verdict::no);

  async_check ad = structural_async(n, dist_requirement::ad);
  CHECK(ad.v == verdict::yes);
  REQUIRE(ad.dist.has_value());
  CHECK(satisfies(n, *ad.dist, dist_requirement::ad).ok);
  CHECK(!has_distributed_conflict(n, *ad.dist).has_value());
}

TEST_CASE("behavioural asynchrony of fig1 agrees and returns a witness") {
  labelled_net n = load_fixture("fig1.net");

  CHECK(behavioural_async(n, dist_requirement::fd).v == verdict::no);
  CHECK(behavioural_async(n, dist_requirement::sd).v == verdict::no);

  async_check ad = behavioural_async(n, dist_requirement::ad);
  CHECK(ad.v == verdict::yes);
  REQUIRE(ad.dist.has_value());
  labelled_net impl = async_implementation(n, *ad.dist).net;
  CHECK(readiness_equivalent(n, impl).v == verdict::yes);
}

TEST_CASE("structural and behavioural asynchrony agree on the corpus") {
  for (const char* f : {"fig1.net", "fig2.net", "fig4.net", "fig6-spec.net",
                        "fig6-impl.net", "fig7-spec.net", "fig7-impl.net"}) {
    labelled_net n = load_fixture(f);
    for (auto r :
         {dist_requirement::fd, dist_requirement::sd, dist_requirement::ad}) {
      CAPTURE(f);
      CAPTURE(to_string(r));
      CHECK(structural_async(n, r).v == behavioural_async(n, r).v);
    }
  }
}

TEST_CASE("structural asynchrony is the absence of the matching pattern") {
  for (const char* f : {"fig1.net", "fig2.net", "fig4.net", "fig6-spec.net",
                        "fig6-impl.net", "fig7-spec.net", "fig7-impl.net"}) {
    labelled_net n = load_fixture(f);
    CAPTURE(f);
    CHECK((structural_async(n, dist_requirement::fd).v == verdict::yes) ==
          !detect_pattern(n, pattern_kind::conflict).has_value());
    CHECK((structural_async(n, dist_requirement::sd).v == verdict::yes) ==
          !detect_pattern(n, pattern_kind::n_shape).has_value());
    CHECK((structural_async(n, dist_requirement::ad).v == verdict::yes) ==
          !detect_pattern(n, pattern_kind::m_shape).has_value());
  }
}

TEST_CASE("distributability verdicts and their evidence") {
  SUBCASE("fig1 is distributable and the witness checks out") {
    labelled_net n = load_fixture("fig1.net");
    distributable_result r = plain_distributable(n);
    CHECK(r.v == verdict::yes);
    REQUIRE(r.witness.has_value());
    CHECK(readiness_equivalent(n, r.witness->net).v == verdict::yes);
    distribution d =
        distribution_of_partition(r.witness->net, r.witness->locations);
    CHECK(satisfies(r.witness->net, d, dist_requirement::distributed_net).ok);
  }

  SUBCASE("fig2 is not: t # u # v with t and v concurrent") {
    distributable_result r = plain_distributable(load_fixture("fig2.net"));
    CHECK(r.v == verdict::no);
    CHECK(!r.witness.has_value());
    CHECK(r.chain == names{"t", "u", "v"});
  }

  SUBCASE("fig6-spec fails through the same shape") {
    distributable_result r = plain_distributable(load_fixture("fig6-spec.net"));
    CHECK(r.v == verdict::no);
    CHECK(r.chain == names{"a", "b", "c"});
  }

  SUBCASE("pervasive conflict without concurrency is fine") {
    CHECK(plain_distributable(load_fixture("fig4.net")).v == verdict::yes);
    CHECK(plain_distributable(load_fixture("fig7-spec.net")).v == verdict::yes);
    CHECK(plain_distributable(load_fixture("fig6-impl.net")).v == verdict::yes);
    CHECK(plain_distributable(load_fixture("fig7-impl.net")).v == verdict::yes);
  }
}

TEST_CASE("the pure visible m bounds a net away from distributability") {
  CHECK(truly_synchronous_upper(load_fixture("fig2.net")) ==
        sync_verdict::truly_synchronous);
  CHECK(truly_synchronous_upper(load_fixture("fig6-spec.net")) ==
        sync_verdict::truly_synchronous);
  CHECK(truly_synchronous_upper(load_fixture("fig1.net")) ==
        sync_verdict::unknown);
  CHECK(truly_synchronous_upper(load_fixture("fig4.net")) ==
        sync_verdict::unknown);
  CHECK(truly_synchronous_upper(load_fixture("fig7-spec.net")) ==
        sync_verdict::unknown);
}

TEST_CASE("the ready pairs of fig2 exhibit the m pair") {
  auto mp = ready_m_pair(load_fixture("fig2.net"));
  REQUIRE(mp.has_value());
  CHECK(mp->trace.empty());
  CHECK(mp->a == "a");
  CHECK(mp->b == "b");
  CHECK(mp->c == "c");

  using entry = std::vector<std::pair<std::string, std::uint32_t>>;
  std::set<entry> menu(mp->menu.begin(), mp->menu.end());
  std::set<entry> expect{{{"a", 1}},
                         {{"b", 1}},
                         {{"c", 1}},
                         {{"a", 1}, {"c", 1}}};
  CHECK(menu == expect);
}

TEST_CASE("nets without the menu shape have no m pair") {
  CHECK(!ready_m_pair(load_fixture("fig1.net")).has_value());
  CHECK(!ready_m_pair(load_fixture("fig4.net")).has_value());
  CHECK(!ready_m_pair(load_fixture("fig7-spec.net")).has_value());
  CHECK(!ready_m_pair(load_fixture("fig7-impl.net")).has_value());
  CHECK(!ready_m_pair(load_fixture("fig3.net")).has_value());
  CHECK(ready_m_pair(load_fixture("fig6-spec.net")).has_value());
}

TEST_CASE("plain-only predicates reject labelled nets") {
  labelled_net n = load_fixture("fig3.net");
  CHECK_THROWS_AS(structural_async(n, dist_requirement::fd), net_error);
  CHECK_THROWS_AS(behavioural_async(n, dist_requirement::ad), net_error);
  CHECK_THROWS_AS(plain_distributable(n), net_error);
  CHECK_THROWS_AS(truly_synchronous_upper(n), net_error);
}

TEST_CASE("the full report on fig1") {
  class_report rep = classify(load_fixture("fig1.net"));
  CHECK(rep.net_name == "fig1");
  CHECK(rep.plain);
  CHECK(rep.validated == verdict::yes);
  CHECK(rep.structural_fd.v == verdict::no);
  CHECK(rep.structural_sd.v == verdict::no);
  CHECK(rep.structural_ad.v == verdict::yes);
  CHECK(rep.behavioural_fd.v == verdict::no);
  CHECK(rep.behavioural_sd.v == verdict::no);
  CHECK(rep.behavioural_ad.v == verdict::yes);
  CHECK(rep.distributable.v == verdict::yes);
  CHECK(rep.sync_upper == sync_verdict::unknown);
  CHECK(rep.distributed.v == verdict::yes);
  CHECK(!rep.pure_m.has_value());
  CHECK(rep.note.empty());
}

TEST_CASE("the report on a labelled net skips the plain-only classes") {
  labelled_net n = load_fixture("fig3.net");
  class_report rep = classify(n);
  CHECK(!rep.plain);
  CHECK(rep.validated == verdict::yes);
  CHECK(rep.note ==
        "asynchrony and distributability classes apply to plain nets only");
  CHECK(rep.structural_fd.v == verdict::unknown);
  CHECK(rep.behavioural_ad.v == verdict::unknown);
  CHECK(rep.distributable.v == verdict::unknown);
  CHECK(rep.sync_upper == sync_verdict::unknown);

  // location separation still applies: the forced components split fig3's
  // concurrent visible pair across locations
  CHECK(rep.distributed.v == verdict::yes);
  REQUIRE(rep.distributed.witness.has_value());
  CHECK(satisfies(n, *rep.distributed.witness,
                  dist_requirement::distributed_net)
            .ok);
  CHECK(!rep.pure_m.has_value());
}

TEST_CASE("an invalid net yields no class verdicts") {
  net_builder b("contact");
  b.add_place("p", true);
  b.add_place("q", true);
  b.add_transition("t", "a");
  b.add_arc("p", "t");
  b.add_arc("t", "q");
  class_report rep = classify(b.build());
  CHECK(rep.validated == verdict::no);
  CHECK(rep.note == "net violates the model restrictions; no classes computed");
  CHECK(rep.structural_fd.v == verdict::unknown);
  CHECK(rep.distributed.v == verdict::unknown);
}

TEST_CASE("exhausted exploration budgets degrade to unknown") {
  limits lim;
  lim.state_bound = 1;
  class_report rep = classify(load_fixture("fig1.net"), lim);
  CHECK(rep.validated == verdict::unknown);
  CHECK(rep.structural_fd.v == verdict::unknown);
  CHECK(!rep.structural_fd.note.empty());
  CHECK(rep.behavioural_ad.v == verdict::unknown);
  CHECK(rep.distributable.v == verdict::unknown);
  CHECK(rep.sync_upper == sync_verdict::unknown);
  CHECK(rep.distributed.v == verdict::unknown);
  CHECK(!rep.distributed.note.empty());
  CHECK(!rep.pure_m.has_value());
}

TEST_SUITE_END();
