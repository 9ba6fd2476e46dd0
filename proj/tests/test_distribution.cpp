#include <doctest.h>

#include <algorithm>
#include <vector>

#include "distnet/distribution.hpp"
#include "distnet/net.hpp"
#include "distnet/semantics.hpp"
#include "distnet/transform.hpp"
#include "testutil.hpp"

using namespace distnet;

TEST_SUITE_BEGIN("distribution");

TEST_CASE("finest distribution separates everything") {
  labelled_net n = load_fixture("fig1.net");
  distribution d = distribution::finest(n);
  CHECK(d.n_locations == n.n_places() + n.n_transitions());
  CHECK(satisfies(n, d, dist_requirement::fd).ok);
  CHECK(satisfies(n, d, dist_requirement::sd).ok);
  CHECK(satisfies(n, d, dist_requirement::ad).ok);
  CHECK(!satisfies(n, d, dist_requirement::effectual).ok);
}

TEST_CASE("canonicalize makes equal partitions compare equal") {
  labelled_net n = load_fixture("fig1.net");
  distribution a, b;
  a.place_loc = {7, 3};
  a.trans_loc = {7, 3};
  a.n_locations = 8;
  b.place_loc = {0, 5};
  b.trans_loc = {0, 5};
  b.n_locations = 6;
  a.canonicalize();
  b.canonicalize();
  CHECK(a == b);
  CHECK(a.n_locations == 2);
  CHECK(a.co_located_tp(0, 0));
  CHECK(!a.co_located_pp(0, 1));
  (void)n;
}

TEST_CASE("partitions by name") {
  labelled_net n = load_fixture("fig1.net");
  distribution d = distribution_of_partition(n, {{"p", "t", "u"}});
  CHECK(d.co_located_tp(*n.find_trans("t"), *n.find_place("p")));
  CHECK(d.co_located_tt(*n.find_trans("t"), *n.find_trans("u")));
  CHECK(!d.co_located_pp(*n.find_place("p"), *n.find_place("q")));
  CHECK(d.n_locations == 2);

  CHECK(satisfies(n, d, dist_requirement::ad).ok);
  CHECK(!satisfies(n, d, dist_requirement::sd).ok);  // u has two preplaces
  CHECK(!satisfies(n, d, dist_requirement::fd).ok);

  CHECK_THROWS_AS(distribution_of_partition(n, {{"nope"}}), net_error);
  CHECK_THROWS_AS(distribution_of_partition(n, {{"p"}, {"p"}}), net_error);
}

TEST_CASE("requirement checks name their violations") {
  labelled_net n = load_fixture("fig1.net");
  distribution two_places = distribution_of_partition(n, {{"p", "q"}});
  satisfies_result r = satisfies(n, two_places, dist_requirement::fd);
  CHECK(!r.ok);
  CHECK(!r.reason.empty());
  CHECK(!satisfies(n, two_places, dist_requirement::sd).ok);
  CHECK(!satisfies(n, two_places, dist_requirement::ad).ok);

  // a transition may join a place of its preset under sd only if the preset
  // is that single place
  distribution t_at_p = distribution_of_partition(n, {{"p", "t"}});
  CHECK(satisfies(n, t_at_p, dist_requirement::sd).ok);
  distribution u_at_p = distribution_of_partition(n, {{"p", "u"}});
  CHECK(!satisfies(n, u_at_p, dist_requirement::sd).ok);
  CHECK(satisfies(n, u_at_p, dist_requirement::ad).ok);

  // two transitions sharing a location without a mediating place
  distribution tu = distribution_of_partition(n, {{"t", "u"}});
  CHECK(!satisfies(n, tu, dist_requirement::sd).ok);
  CHECK(!satisfies(n, tu, dist_requirement::ad).ok);
}

TEST_CASE("the intended partition of the choice construction is distributed") {
  labelled_net f5 = load_fixture("fig5.net");
  auto locs = locations_of_tcc(load_fixture("fig4.net"));
  CHECK(locs.size() == 5);
  distribution d = distribution_of_partition(f5, locs);
  CHECK(satisfies(f5, d, dist_requirement::effectual).ok);
  CHECK(satisfies(f5, d, dist_requirement::distributed_net).ok);
}

TEST_CASE("canonical candidates for fig1") {
  labelled_net n = load_fixture("fig1.net");

  auto fd = canonical_distributions(n, dist_requirement::fd);
  REQUIRE(fd.size() == 1);
  CHECK(fd[0] == distribution::finest(n));

  auto sd = canonical_distributions(n, dist_requirement::sd);
  REQUIRE(sd.size() == 1);
  CHECK(sd[0].co_located_tp(*n.find_trans("t"), *n.find_place("p")));
  CHECK(!sd[0].co_located_tp(*n.find_trans("u"), *n.find_place("p")));
  CHECK(satisfies(n, sd[0], dist_requirement::sd).ok);

  // t chooses p or stays alone; u chooses p, q or stays alone
  auto ad = canonical_distributions(n, dist_requirement::ad);
  CHECK(ad.size() == 6);
  for (const auto& d : ad) {
    CAPTURE(&d - ad.data());
    CHECK(satisfies(n, d, dist_requirement::ad).ok);
  }
  // all candidates are distinct
  for (std::size_t i = 0; i < ad.size(); ++i)
    for (std::size_t j = i + 1; j < ad.size(); ++j) CHECK(!(ad[i] == ad[j]));

  limits tiny;
  tiny.candidate_cap = 3;
  CHECK_THROWS_AS(canonical_distributions(n, dist_requirement::ad, tiny),
                  candidate_cap_exceeded);
}

TEST_CASE("distributedness of the figure nets") {
  distributed_result f1 = is_distributed(load_fixture("fig1.net"));
  CHECK(f1.v == verdict::yes);
  REQUIRE(f1.witness.has_value());
  CHECK(satisfies(load_fixture("fig1.net"), *f1.witness,
                  dist_requirement::distributed_net)
            .ok);

  distributed_result f2 = is_distributed(load_fixture("fig2.net"));
  CHECK(f2.v == verdict::no);
  CHECK(f2.chain == std::vector<std::string>{"t", "u", "v"});
  CHECK(!f2.witness.has_value());

  CHECK(is_distributed(load_fixture("fig7-impl.net")).v == verdict::yes);
  CHECK(is_distributed(load_fixture("fig6-impl.net")).v == verdict::yes);
  CHECK(is_distributed(load_fixture("fig6-spec.net")).v == verdict::no);
}

TEST_CASE("the forced components of fig5 refine the intended locations") {
  labelled_net f5 = load_fixture("fig5.net");
  distributed_result r = is_distributed(f5);
  CHECK(r.v == verdict::yes);
  REQUIRE(r.witness.has_value());
  const distribution& got = *r.witness;
  CHECK(satisfies(f5, got, dist_requirement::distributed_net).ok);

  // the witness separates as much as the forced co-location graph allows; the
  // construction's intended per-class locations additionally pull each class's
  // bookkeeping places (produced, never shared) onto the class location, a
  // coarsening that stays valid
  distribution intended =
      distribution_of_partition(f5, locations_of_tcc(load_fixture("fig4.net")));
  CHECK(satisfies(f5, intended, dist_requirement::distributed_net).ok);
  for (place_id s = 0; s < f5.n_places(); ++s) {
    for (place_id s2 = 0; s2 < s; ++s2)
      if (got.co_located_pp(s, s2)) CHECK(intended.co_located_pp(s, s2));
    for (trans_id t = 0; t < f5.n_transitions(); ++t)
      if (got.co_located_tp(t, s)) CHECK(intended.co_located_tp(t, s));
  }
  for (trans_id t = 0; t < f5.n_transitions(); ++t)
    for (trans_id t2 = 0; t2 < t; ++t2)
      if (got.co_located_tt(t, t2)) CHECK(intended.co_located_tt(t, t2));
  CHECK(got.n_locations > intended.n_locations);
}

TEST_CASE("internal transitions defeat separation only in strict mode") {
  labelled_net n = hide_action(load_fixture("fig2.net"), "a");
  CHECK(is_distributed(n).v == verdict::yes);
  CHECK(is_distributed(n, {}, /*strict=*/true).v == verdict::no);
}

TEST_SUITE_END();
