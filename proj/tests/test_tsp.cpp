#include "qtsp/tsp.hpp"

#include "gtest/gtest.h"

#include <algorithm>
#include <numeric>
#include <random>

using namespace qtsp;

namespace {

TspInstance equal_distance(std::size_t n, double d) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, d));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  return TspInstance(m, "equal");
}

Tour random_tour(std::size_t n, std::mt19937_64& rng) {
  Tour t;
  t.order.resize(n);
  std::iota(t.order.begin(), t.order.end(), 0);
  std::shuffle(t.order.begin() + 1, t.order.end(), rng);
  return t;
}

} // namespace

TEST(TspInstance, GeneratedShapeAndInvariants) {
  const auto inst = generate_instance(3, 0, 1.0);
  ASSERT_EQ(inst.n(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(inst(i, i), 0.0);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(inst(i, j), inst(j, i));
      if (i != j) EXPECT_GT(inst(i, j), 0.0);
    }
  }
  EXPECT_EQ(inst.seed(), std::optional<std::uint64_t>(0));
}

TEST(TspInstance, GenerationIsDeterministic) {
  EXPECT_EQ(generate_instance(5, 7, 1000.0), generate_instance(5, 7, 1000.0));
  EXPECT_NE(generate_instance(5, 7, 1000.0).matrix(), generate_instance(5, 8, 1000.0).matrix());
}

TEST(TspInstance, ScaleMultipliesDistances) {
  const auto a = generate_instance(6, 3, 1.0);
  const auto b = generate_instance(6, 3, 1000.0);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(b(i, j), 1000.0 * a(i, j), 1e-9);
  }
}

TEST(TspInstance, TriangleInequality) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_instance(8, seed, 10.0);
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j)
        for (std::size_t k = 0; k < 8; ++k) EXPECT_LE(inst(i, k), inst(i, j) + inst(j, k) + 1e-12);
  }
}

TEST(TspInstance, RejectsBadInput) {
  EXPECT_THROW(generate_instance(2, 0, 1.0), InvalidInstance);
  EXPECT_THROW(generate_instance(4, 0, 0.0), InvalidInstance);
  EXPECT_THROW(TspInstance({{0, 1, 2}, {1, 0, 1}, {2, 3, 0}}), InvalidInstance); // asymmetric
  EXPECT_THROW(TspInstance({{1, 1, 2}, {1, 0, 1}, {2, 1, 0}}), InvalidInstance); // diagonal
  EXPECT_THROW(TspInstance({{0, 0, 2}, {0, 0, 1}, {2, 1, 0}}), InvalidInstance); // zero distance
  EXPECT_THROW(TspInstance({{0, 1}, {1, 0, 1}, {2, 1, 0}}), InvalidInstance);    // ragged
}

TEST(TourCost, EqualDistanceTriangle) {
  const auto inst = equal_distance(3, 2.5);
  EXPECT_DOUBLE_EQ(tour_cost(inst, Tour{{0, 1, 2}}), 7.5);
  EXPECT_DOUBLE_EQ(tour_cost(inst, Tour{{0, 2, 1}}), 7.5);
}

TEST(TourCost, DirectSummation) {
  const auto inst = generate_instance(4, 1, 1.0);
  const double expected = inst(0, 1) + inst(1, 2) + inst(2, 3) + inst(3, 0);
  EXPECT_DOUBLE_EQ(tour_cost(inst, Tour{{0, 1, 2, 3}}), expected);
}

TEST(TourCost, RejectsInvalidTours) {
  const auto inst = generate_instance(4, 1, 1.0);
  EXPECT_THROW(tour_cost(inst, Tour{{0, 1, 2}}), InvalidTour);
  EXPECT_THROW(tour_cost(inst, Tour{{0, 1, 1, 3}}), InvalidTour);
  EXPECT_THROW(tour_cost(inst, Tour{{1, 0, 2, 3}}), InvalidTour);
  EXPECT_THROW(tour_cost(inst, Tour{{0, 1, 2, 4}}), InvalidTour);
}

TEST(TourCost, InvariantUnderRotationAndReversal) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = generate_instance(7, seed, 3.0);
    const Tour t = random_tour(7, rng);
    const double base = tour_cost(inst, t);
    for (std::size_t r = 0; r < 7; ++r) {
      std::vector<int> rot = t.order;
      std::rotate(rot.begin(), rot.begin() + r, rot.end());
      // Re-anchor at city 0 by rotating; evaluate the raw cyclic sum.
      double c = 0.0;
      for (std::size_t j = 0; j < 7; ++j) c += inst(rot[j], rot[(j + 1) % 7]);
      EXPECT_NEAR(c, base, 1e-12);
    }
    Tour rev{{0}};
    for (std::size_t j = 6; j >= 1; --j) rev.order.push_back(t.order[j]);
    EXPECT_NEAR(tour_cost(inst, rev), base, 1e-12);
  }
}

TEST(BruteForce, FrozenFourCityOptimum) {
  // Frozen from an explicit listing of the six tours of this instance.
  const auto inst = generate_instance(4, 1, 1.0);
  const auto opt = brute_force_optimum(inst);
  EXPECT_EQ(opt.best, (Tour{{0, 1, 3, 2}}));
  EXPECT_NEAR(opt.min_cost, 2.4203927707195114, 1e-12);
  EXPECT_NEAR(opt.max_cost, 3.0070564564015543, 1e-12);
  EXPECT_EQ(opt.tours_enumerated, 6u);
}

TEST(BruteForce, EqualDistanceEverythingOptimal) {
  const auto inst = equal_distance(4, 1.5);
  const auto opt = brute_force_optimum(inst);
  EXPECT_DOUBLE_EQ(opt.min_cost, 6.0);
  EXPECT_DOUBLE_EQ(opt.max_cost, 6.0);
  EXPECT_EQ(opt.best, (Tour{{0, 1, 2, 3}})); // lexicographic tie-break
}

TEST(BruteForce, ThreeCitiesTwoTours) {
  const auto inst = generate_instance(3, 4, 1.0);
  const auto opt = brute_force_optimum(inst);
  EXPECT_EQ(opt.tours_enumerated, 2u);
  EXPECT_DOUBLE_EQ(opt.min_cost, opt.max_cost);
}

TEST(BruteForce, SixCitiesAgainstNestedLoops) {
  const auto inst = generate_instance(6, 42, 1.0);
  double best = 1e300;
  int count = 0;
  for (int a = 1; a < 6; ++a)
    for (int b = 1; b < 6; ++b)
      for (int c = 1; c < 6; ++c)
        for (int d = 1; d < 6; ++d)
          for (int e = 1; e < 6; ++e) {
            const int t[6] = {0, a, b, c, d, e};
            bool distinct = true;
            for (int x = 1; x < 6; ++x)
              for (int y = x + 1; y < 6; ++y) distinct &= t[x] != t[y];
            if (!distinct) continue;
            ++count;
            double cost = 0.0;
            for (int j = 0; j < 6; ++j) cost += inst(t[j], t[(j + 1) % 6]);
            best = std::min(best, cost);
          }
  ASSERT_EQ(count, 120);
  const auto opt = brute_force_optimum(inst);
  EXPECT_EQ(opt.tours_enumerated, 120u);
  EXPECT_DOUBLE_EQ(opt.min_cost, best);
}

TEST(BruteForce, MinimumBoundsRandomTours) {
  std::mt19937_64 rng(5);
  const auto inst = generate_instance(8, 9, 1.0);
  const auto opt = brute_force_optimum(inst);
  for (int i = 0; i < 1000; ++i) {
    const double c = tour_cost(inst, random_tour(8, rng));
    EXPECT_LE(opt.min_cost, c + 1e-12);
    EXPECT_GE(opt.max_cost, c - 1e-12);
  }
}

TEST(BruteForce, RefusesLargeInstances) {
  const auto inst = generate_instance(13, 0, 1.0);
  try {
    brute_force_optimum(inst);
    FAIL() << "expected CapacityExceeded";
  } catch (const CapacityExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("n <= 12"), std::string::npos);
  }
}

TEST(InstanceJson, RoundTripAndLoader) {
  const auto inst = generate_instance(5, 3, 10.0);
  const auto j = to_json(inst);
  EXPECT_EQ(j.at("n"), 5);
  EXPECT_EQ(j.at("seed"), 3);
  EXPECT_EQ(instance_from_json(j), inst);

  const auto loaded = instance_from_json(nlohmann::json::parse(R"({"D": [[0,1,2],[1,0,3],[2,3,0]], "label": "x", "seed": null})"));
  EXPECT_EQ(loaded.n(), 3u);
  EXPECT_FALSE(loaded.seed().has_value());
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"n": 4, "D": [[0,1,2],[1,0,3],[2,3,0]]})")), InvalidInstance);
  EXPECT_THROW(instance_from_json(nlohmann::json::parse(R"({"D": "nope"})")), InvalidInstance);
}
