#include <algorithm>

#include "doctest.h"
#include "idnc/clique.hpp"
#include "idnc/probability.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace idnc;
using testutil::make_graph;
using testutil::random_graph;

TEST_CASE("greedy clique on simple shapes") {
  // complete graph over user-disjoint vertices: everything is selected
  CodingGraph complete =
      make_graph({0.5, 0.6, 0.7}, {{0, 1}, {0, 2}, {1, 2}});
  Clique all = greedy_max_weight_clique(complete);
  CHECK(all.members == std::vector<int>{0, 1, 2});

  // two isolated vertices: the heavier one wins
  CodingGraph isolated = make_graph({0.3, 0.7}, {});
  Clique one = greedy_max_weight_clique(isolated);
  CHECK(one.members == std::vector<int>{1});

  // empty graph: empty clique
  CodingGraph empty = make_graph({}, {});
  CHECK(greedy_max_weight_clique(empty).empty());
}

TEST_CASE("greedy cliques are valid, maximal, and never beat the oracle") {
  RngStream rng(1234);
  double ratio_sum = 0.0;
  int counted = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    CodingGraph g = random_graph(rng, 12, rng.uniform(0.1, 0.9));
    Clique greedy = greedy_max_weight_clique(g);
    CHECK(is_valid_clique(g, greedy));
    CHECK(is_maximal_clique(g, greedy));

    Clique exact = exact_max_weight_clique(g);
    double gw = clique_weight(g, greedy);
    double ew = clique_weight(g, exact);
    CHECK(gw <= ew + 1e-12);
    if (ew > 0.0) {
      ratio_sum += gw / ew;
      ++counted;
    }
  }
  // regression guard on heuristic quality
  CHECK(ratio_sum / counted >= 0.85);
}

TEST_CASE("exact clique solver") {
  CodingGraph single = make_graph({0.4}, {});
  CHECK(exact_max_weight_clique(single).members == std::vector<int>{0});

  // a light triangle beats a heavy isolated vertex
  CodingGraph tri = make_graph({1.0, 1.0, 1.0, 2.5}, {{0, 1}, {0, 2}, {1, 2}});
  Clique best = exact_max_weight_clique(tri);
  CHECK(best.members == std::vector<int>{0, 1, 2});
  CHECK(clique_weight(tri, best) == doctest::Approx(3.0));
}

TEST_CASE("exact solver equals subset enumeration") {
  RngStream rng(4321);
  for (int trial = 0; trial < 500; ++trial) {
    CodingGraph g = random_graph(rng, 10, rng.uniform(0.1, 0.9));
    Clique exact = exact_max_weight_clique(g);
    Clique brute = oracles::brute_force_max_clique(g);
    CHECK(exact.members == brute.members);
    CHECK(clique_weight(g, exact) == clique_weight(g, brute));
  }
}

TEST_CASE("exact solver refuses oversized graphs") {
  RngStream rng(5);
  CodingGraph g = random_graph(rng, 12, 0.3);
  if (g.size() > 4)
    CHECK_THROWS_AS(exact_max_weight_clique(g, 4), std::runtime_error);
}

TEST_CASE("deterministic selection") {
  RngStream rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    CodingGraph g = random_graph(rng, 10, 0.5);
    Clique a = greedy_max_weight_clique(g);
    Clique b = greedy_max_weight_clique(g);
    CHECK(a.members == b.members);
    CHECK(exact_max_weight_clique(g).members ==
          exact_max_weight_clique(g).members);
  }
}

TEST_CASE("implicit greedy matches the materialized-graph greedy") {
  RngStream rng(777);
  for (int trial = 0; trial < 500; ++trial) {
    int m = 2 + static_cast<int>(rng.uniform01() * 5);
    int n = 2 + static_cast<int>(rng.uniform01() * 5);
    FeedbackMatrix F = testutil::random_matrix(rng, m, n, true);
    ChannelParams params = testutil::random_params(rng, m);
    for (GraphMode mode : {GraphMode::GIDNC, GraphMode::LGIDNC}) {
      CodingGraph g = build_graph(mode, F, params);
      Clique explicit_pick = greedy_max_weight_clique(g);
      BeliefTables tables(F, params);
      Clique implicit_pick = greedy_max_weight_clique(
          mode, tables, F, enumerate_vertices(F, tables));
      CHECK(explicit_pick.members == implicit_pick.members);
    }
  }
}

TEST_CASE("clique to transmission") {
  // shared packet collapses to one operand
  std::vector<Vertex> verts{Vertex{0, 3, 0.5, 1.0}, Vertex{1, 3, 0.5, 1.0}};
  Clique c1;
  c1.members = {0, 1};
  Transmission tx = clique_to_transmission(c1, verts);
  CHECK(tx.packets == std::vector<PacketId>{3});
  CHECK(tx.targets ==
        std::vector<std::pair<UserId, PacketId>>{{0, 3}, {1, 3}});

  // cross pair keeps both operands
  std::vector<Vertex> cross{Vertex{0, 1, 0.5, 1.0}, Vertex{1, 4, 0.5, 1.0}};
  Transmission tx2 = clique_to_transmission(c1, cross);
  CHECK(tx2.packets == std::vector<PacketId>{1, 4});
  CHECK(tx2.targets ==
        std::vector<std::pair<UserId, PacketId>>{{0, 1}, {1, 4}});

  Clique empty;
  CHECK_THROWS_AS(clique_to_transmission(empty, verts),
                  std::invalid_argument);
}

TEST_CASE("exhaustive combination search on a single want") {
  ChannelParams params = ChannelParams::uniform(1, 0.3, 0.3);
  FeedbackMatrix F(1, 3);
  F.set_entry(0, 0, EntryState::Has);
  F.set_entry(0, 1, EntryState::WantsCertain);
  F.set_entry(0, 2, EntryState::Has);
  Transmission tx = exhaustive_best_combination(F, params);
  CHECK(tx.packets == std::vector<PacketId>{1});
  CHECK(tx.targets ==
        std::vector<std::pair<UserId, PacketId>>{{0, 1}});
}

TEST_CASE("exhaustive combination search beats both doubtless cliques in the"
          " motivating fixture") {
  ChannelParams params = ChannelParams::uniform(2, 0.5, 0.5);
  FeedbackMatrix F(2, 3);
  F.set_entry(0, 0, EntryState::WantsCertain);
  F.set_entry(0, 1, EntryState::Uncertain, 2);
  F.set_entry(0, 2, EntryState::Has);
  F.set_entry(1, 0, EntryState::Has);
  F.set_entry(1, 1, EntryState::WantsCertain);
  F.set_entry(1, 2, EntryState::Has);

  Transmission tx = exhaustive_best_combination(F, params);
  CHECK(tx.packets == std::vector<PacketId>{0, 1});

  double pi = innovative_probability(0.5, 0.5, 2);
  std::vector<PacketId> chosen = tx.packets;
  double best = total_expected_combination_delay(F, params, chosen);
  CHECK(best == doctest::Approx(0.5 * pi).epsilon(1e-12));

  // the full-frame XOR achieves the same minimum and beats both doubtless
  // maximal cliques, which send packet 0 alone or packet 1 alone
  std::vector<PacketId> triple{0, 1, 2}, only0{0}, only1{1};
  CHECK(total_expected_combination_delay(F, params, triple) ==
        doctest::Approx(best).epsilon(1e-12));
  CHECK(best < total_expected_combination_delay(F, params, only0));
  CHECK(best < total_expected_combination_delay(F, params, only1));

  // its targets pick each user's most-likely-innovative operand
  CHECK(tx.targets ==
        std::vector<std::pair<UserId, PacketId>>{{0, 0}, {1, 1}});
}

TEST_CASE("exhaustive combination search refuses oversized frames") {
  ChannelParams params = ChannelParams::uniform(1, 0.3, 0.3);
  FeedbackMatrix F(1, 13);
  CHECK_THROWS_AS(exhaustive_best_combination(F, params, 12),
                  std::runtime_error);
}

TEST_CASE("exhaustive minimum never exceeds the exact-clique delay on"
          " certain matrices") {
  RngStream rng(2468);
  int agreements = 0;
  int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    FeedbackMatrix F = testutil::random_matrix(rng, 3, 4, false);
    if (F.non_has_count() == 0) {
      ++agreements;
      continue;
    }
    ChannelParams params = testutil::random_params(rng, 3);
    Transmission exhaustive = exhaustive_best_combination(F, params);
    double d_exhaustive =
        total_expected_combination_delay(F, params, exhaustive.packets);

    CodingGraph g = build_gidnc_graph(F, params);
    Clique best = exact_max_weight_clique(g);
    Transmission via_clique = clique_to_transmission(best, g);
    double d_clique =
        total_expected_combination_delay(F, params, via_clique.packets);

    CHECK(d_exhaustive <= d_clique + 1e-9);
    if (std::abs(d_exhaustive - d_clique) <= 1e-9) ++agreements;
  }
  // The two criteria usually coincide on certain matrices but are not
  // proven equivalent; divergence is recorded, not failed.
  MESSAGE("exhaustive vs exact-clique delay agreement: ", agreements, "/",
          trials);
}
