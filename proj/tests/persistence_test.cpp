#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lattice_tda/error.hpp"
#include "lattice_tda/oracle.hpp"
#include "lattice_tda/persistence.hpp"
#include "support/test_support.hpp"

namespace ltda {
namespace {

using testing::random_cloud;

const PointCloud kUnitSquare({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, Unit::normalized);

PointCloud equilateral() {
  return PointCloud({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}},
                    Unit::normalized);
}

TEST(PairwiseDistances, ThreeFourFive) {
  const DistanceMatrix d = pairwise_distances(PointCloud({{0, 0}, {3, 4}}, Unit::pixels));
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d(0, 1), 5.0);
  EXPECT_EQ(d(1, 0), 5.0);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(PairwiseDistances, UnitSquare) {
  const DistanceMatrix d = pairwise_distances(kUnitSquare);
  std::vector<double> all;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) all.push_back(d(i, j));
  std::sort(all.begin(), all.end());
  const double r2 = std::sqrt(2.0);
  EXPECT_EQ(all, (std::vector<double>{1, 1, 1, 1, r2, r2}));
}

TEST(PairwiseDistances, FiveByFiveMinimumIsHalf) {
  const DistanceMatrix d = pairwise_distances(gen_square({LatticeKind::square, 5}));
  double lo = kInfinity;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) lo = std::min(lo, d(i, j));
  EXPECT_EQ(lo, 0.5);
  EXPECT_EQ(d.max_distance(), std::sqrt(8.0));
}

TEST(EnclosingRadius, Basics) {
  EXPECT_EQ(enclosing_radius(pairwise_distances(PointCloud({{3, 3}}, Unit::pixels))), 0.0);
  EXPECT_EQ(enclosing_radius(pairwise_distances(kUnitSquare)), std::sqrt(2.0));
}

TEST(EnclosingRadius, FiveByFiveIsCenterToCorner) {
  const PointCloud c = gen_square({LatticeKind::square, 5});
  // Scan every point's farthest distance by hand.
  double best = kInfinity;
  for (const auto& p : c.points()) {
    double far = 0.0;
    for (const auto& q : c.points()) far = std::max(far, std::hypot(p.x - q.x, p.y - q.y));
    best = std::min(best, far);
  }
  EXPECT_EQ(best, std::sqrt(2.0));
  EXPECT_EQ(enclosing_radius(pairwise_distances(c)), std::sqrt(2.0));
}

TEST(ComputeH0, FiveByFive) {
  const H0Result h0 = compute_h0(pairwise_distances(gen_square({LatticeKind::square, 5})));
  ASSERT_EQ(h0.pairs.size(), 24u);
  for (const auto& p : h0.pairs) {
    EXPECT_EQ(p.birth, 0.0);
    EXPECT_EQ(p.death, 0.5);
  }
  EXPECT_EQ(h0.infinite, 1);
}

TEST(ComputeH0, TwoPoints) {
  const H0Result h0 = compute_h0(pairwise_distances(PointCloud({{0, 0}, {1, 0}}, Unit::normalized)));
  ASSERT_EQ(h0.pairs.size(), 1u);
  EXPECT_EQ(h0.pairs[0], (PersistencePair{0, 0.0, 1.0}));
  EXPECT_EQ(h0.infinite, 1);
}

TEST(ComputeH0, MatchesPrimOracle) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const PointCloud c = random_cloud(10 + seed % 7, seed);
    const H0Result h0 = compute_h0(pairwise_distances(c));
    std::vector<double> deaths;
    for (const auto& p : h0.pairs) deaths.push_back(p.death);
    EXPECT_EQ(deaths, testing::prim_mst_weights(c)) << "seed " << seed;
  }
}

TEST(ComputeH0, TruncationLeavesComponents) {
  const H0Result h0 =
      compute_h0(pairwise_distances(gen_square({LatticeKind::square, 5})), 0.4);
  EXPECT_TRUE(h0.pairs.empty());
  EXPECT_EQ(h0.infinite, 25);
}

TEST(BuildRipsFiltration, EquilateralTriangle) {
  const DistanceMatrix d = pairwise_distances(equilateral());
  const RipsFiltration f = build_rips_filtration(d, 1.0);
  ASSERT_EQ(f.simplices.size(), 7u);
  int count[3] = {0, 0, 0};
  for (const auto& s : f.simplices) ++count[s.dim];
  EXPECT_EQ(count[0], 3);
  EXPECT_EQ(count[1], 3);
  EXPECT_EQ(count[2], 1);
  EXPECT_NEAR(f.simplices.back().value, 1.0, 1e-15);
  EXPECT_EQ(f.simplices.back().dim, 2);
}

TEST(BuildRipsFiltration, UnitSquareAtDiagonal) {
  const RipsFiltration f =
      build_rips_filtration(pairwise_distances(kUnitSquare), std::sqrt(2.0));
  int count[3] = {0, 0, 0};
  for (const auto& s : f.simplices) ++count[s.dim];
  EXPECT_EQ(count[0], 4);
  EXPECT_EQ(count[1], 6);
  EXPECT_EQ(count[2], 4);  // each diagonal closes two triangles
  for (const auto& s : f.simplices) {
    if (s.dim == 2) {
      EXPECT_EQ(s.value, std::sqrt(2.0));
    }
  }
}

TEST(BuildRipsFiltration, ZeroThresholdKeepsVertices) {
  const RipsFiltration f = build_rips_filtration(pairwise_distances(kUnitSquare), 0.0);
  ASSERT_EQ(f.simplices.size(), 4u);
  for (const auto& s : f.simplices) EXPECT_EQ(s.dim, 0);
}

TEST(BuildRipsFiltration, NegativeThreshold) {
  try {
    build_rips_filtration(pairwise_distances(kUnitSquare), -0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_threshold);
  }
}

TEST(BuildRipsFiltration, FacesPrecedeCofaces) {
  const PointCloud c = random_cloud(12, 99);
  const DistanceMatrix d = pairwise_distances(c);
  const RipsFiltration f = build_rips_filtration(d, 1.2);
  std::map<std::array<std::uint32_t, 3>, std::size_t> position;
  for (std::size_t k = 0; k < f.simplices.size(); ++k) {
    const auto& s = f.simplices[k];
    position[s.vertices] = k;
    if (k > 0) {
      const auto& prev = f.simplices[k - 1];
      EXPECT_TRUE(std::tie(prev.value, prev.dim, prev.vertices) <
                  std::tie(s.value, s.dim, s.vertices));
    }
  }
  for (std::size_t k = 0; k < f.simplices.size(); ++k) {
    const auto& s = f.simplices[k];
    const auto [a, b, c3] = s.vertices;
    if (s.dim == 1) {
      EXPECT_LT(position.at({a, 0, 0}), k);
      EXPECT_LT(position.at({b, 0, 0}), k);
      EXPECT_EQ(s.value, d(a, b));
    }
    if (s.dim == 2) {
      EXPECT_LT(position.at({a, b, 0}), k);
      EXPECT_LT(position.at({a, c3, 0}), k);
      EXPECT_LT(position.at({b, c3, 0}), k);
      EXPECT_EQ(s.value, std::max({d(a, b), d(a, c3), d(b, c3)}));
    }
  }
}

TEST(ComputeH1, UnitSquareLoop) {
  const DistanceMatrix d = pairwise_distances(kUnitSquare);
  const H1Result h1 = compute_h1(build_rips_filtration(d, enclosing_radius(d)));
  ASSERT_EQ(h1.pairs.size(), 1u);
  EXPECT_EQ(h1.pairs[0], (PersistencePair{1, 1.0, std::sqrt(2.0)}));
  EXPECT_EQ(h1.unpaired, 0);
  EXPECT_EQ(compute_h1_cohomology(d, enclosing_radius(d)).pairs, h1.pairs);
}

TEST(ComputeH1, FiveByFive) {
  const DistanceMatrix d = pairwise_distances(gen_square({LatticeKind::square, 5}));
  const double t = enclosing_radius(d);
  for (const H1Result& h1 : {compute_h1(build_rips_filtration(d, t)),
                             compute_h1_cohomology(d, t)}) {
    ASSERT_EQ(h1.pairs.size(), 16u);
    for (const auto& p : h1.pairs) {
      EXPECT_EQ(p.birth, 0.5);
      EXPECT_NEAR(p.death, 0.5 * std::numbers::sqrt2, 1e-15);
    }
  }
}

TEST(ComputeH1, EquilateralTriangleHasNoLoop) {
  const DistanceMatrix d = pairwise_distances(equilateral());
  EXPECT_TRUE(compute_h1(build_rips_filtration(d, d.max_distance())).pairs.empty());
  EXPECT_TRUE(compute_h1_cohomology(d, d.max_distance()).pairs.empty());
}

TEST(ComputeH1, TruncatedThresholdReportsOpenCycles) {
  const DistanceMatrix d = pairwise_distances(kUnitSquare);
  const H1Result explicit_h1 = compute_h1(build_rips_filtration(d, 1.0));
  EXPECT_TRUE(explicit_h1.pairs.empty());
  EXPECT_EQ(explicit_h1.unpaired, 1);
  const H1Result implicit_h1 = compute_h1_cohomology(d, 1.0);
  EXPECT_TRUE(implicit_h1.pairs.empty());
  EXPECT_EQ(implicit_h1.unpaired, 1);
}

TEST(ComputeH1, OpenCycleAboveEnclosingRadiusIsAnError) {
  // A hand-made filtration that claims to reach the enclosing radius but
  // lacks the triangles that would fill the square.
  RipsFiltration f;
  f.vertex_count = 4;
  f.threshold = 2.0;
  f.enclosing_radius = 1.5;
  for (std::uint32_t v = 0; v < 4; ++v) f.simplices.push_back({0.0, 0, {v, 0, 0}});
  f.simplices.push_back({1.0, 1, {0, 1, 0}});
  f.simplices.push_back({1.0, 1, {0, 2, 0}});
  f.simplices.push_back({1.0, 1, {1, 3, 0}});
  f.simplices.push_back({1.0, 1, {2, 3, 0}});
  try {
    compute_h1(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::internal_consistency);
  }
}

TEST(ComputeH1, ExplicitAndCoboundaryRoutesAgree) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const PointCloud c = random_cloud(20 + seed % 15, seed * 7919);
    const DistanceMatrix d = pairwise_distances(c);
    for (double t : {enclosing_radius(d), 0.6, 0.35}) {
      const H1Result a = compute_h1(build_rips_filtration(d, t));
      const H1Result b = compute_h1_cohomology(d, t);
      EXPECT_EQ(a.pairs, b.pairs) << "seed " << seed << " t " << t;
      EXPECT_EQ(a.unpaired, b.unpaired) << "seed " << seed << " t " << t;
    }
  }
}

TEST(ComputeH1, ExplicitAndCoboundaryAgreeOnPerturbedGrids) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const PointCloud c = perturb(gen_square({LatticeKind::square, 7}), {0.02, seed});
    const DistanceMatrix d = pairwise_distances(c);
    const double t = enclosing_radius(d);
    EXPECT_EQ(compute_h1(build_rips_filtration(d, t)).pairs,
              compute_h1_cohomology(d, t).pairs);
  }
}

TEST(ComputePersistence, FiveByFiveMatchesTheTheoreticalDiagram) {
  const PersistenceDiagram dg = compute_persistence(gen_square({LatticeKind::square, 5}));
  EXPECT_EQ(dg.threshold, std::sqrt(2.0));
  ASSERT_EQ(dg.h0.size(), 24u);
  for (const auto& p : dg.h0) EXPECT_EQ(p, (PersistencePair{0, 0.0, 0.5}));
  EXPECT_EQ(dg.h0_infinite, 1);
  ASSERT_EQ(dg.h1.size(), 16u);
  for (const auto& p : dg.h1) {
    EXPECT_EQ(p.birth, 0.5);
    EXPECT_NEAR(p.death, std::sqrt(2.0) / 2.0, 1e-15);
  }
}

TEST(ComputePersistence, SinglePoint) {
  const PersistenceDiagram dg = compute_persistence(PointCloud({{0.3, 0.2}}, Unit::normalized));
  EXPECT_TRUE(dg.h0.empty());
  EXPECT_EQ(dg.h0_infinite, 1);
  EXPECT_TRUE(dg.h1.empty());
  EXPECT_EQ(dg.threshold, 0.0);
}

TEST(ComputePersistence, RejectsDuplicates) {
  try {
    compute_persistence(PointCloud({{0, 0}, {1, 0}, {0, 0}}, Unit::normalized));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::duplicate_point);
  }
}

TEST(ComputePersistence, TruncatedBelowSpacing) {
  const PersistenceDiagram dg =
      compute_persistence(gen_square({LatticeKind::square, 5}), 0.4);
  EXPECT_TRUE(dg.h0.empty());
  EXPECT_EQ(dg.h0_infinite, 25);
  EXPECT_TRUE(dg.h1.empty());
  EXPECT_EQ(dg.threshold, 0.4);
}

TEST(ComputePersistence, TwelveRandomPointsMatchTheOracle) {
  for (std::uint64_t seed = 11; seed <= 20; ++seed) {
    const PointCloud c = random_cloud(12, seed);
    EXPECT_TRUE(testing::same_pairs(compute_persistence(c), oracle::naive_persistence(c)))
        << "seed " << seed;
  }
}

TEST(PersistenceProperties, H1BirthsAreEdgesAndDeathsAreTriangles) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PointCloud c = random_cloud(25, seed + 500);
    const DistanceMatrix d = pairwise_distances(c);
    std::set<double> edges;
    std::set<double> triangles;
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) {
        edges.insert(d(i, j));
        for (std::size_t k = j + 1; k < d.size(); ++k)
          triangles.insert(std::max({d(i, j), d(i, k), d(j, k)}));
      }
    for (const auto& p : compute_persistence(c).h1) {
      EXPECT_TRUE(edges.contains(p.birth));
      EXPECT_TRUE(triangles.contains(p.death));
      EXPECT_GT(p.death, p.birth);
    }
  }
}

TEST(PersistenceProperties, TruncationSoundness) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const PointCloud c = random_cloud(15 + seed % 10, seed + 1000);
    const DistanceMatrix d = pairwise_distances(c);
    const PersistenceDiagram at_radius = compute_persistence(c);
    EXPECT_TRUE(testing::same_pairs(at_radius, compute_persistence(c, d.max_distance())));
    const double mid = 0.5 * (enclosing_radius(d) + d.max_distance());
    EXPECT_TRUE(testing::same_pairs(at_radius, compute_persistence(c, mid)));
  }
}

TEST(PersistenceProperties, IsometryInvariance) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PointCloud c = random_cloud(20, seed + 2000);
    const PersistenceDiagram a = compute_persistence(c);
    const PersistenceDiagram b =
        compute_persistence(testing::rigid_motion(c, 0.1 * seed, {3.0, -2.0}));
    ASSERT_EQ(a.h0.size(), b.h0.size());
    ASSERT_EQ(a.h1.size(), b.h1.size());
    EXPECT_EQ(a.h0_infinite, b.h0_infinite);
    for (std::size_t i = 0; i < a.h0.size(); ++i) EXPECT_NEAR(a.h0[i].death, b.h0[i].death, 1e-9);
    for (std::size_t i = 0; i < a.h1.size(); ++i) {
      EXPECT_NEAR(a.h1[i].birth, b.h1[i].birth, 1e-9);
      EXPECT_NEAR(a.h1[i].death, b.h1[i].death, 1e-9);
    }
  }
}

TEST(PersistenceProperties, ScaleEquivariance) {
  for (double lambda : {0.25, 3.0, 1000.0}) {
    const PointCloud c = random_cloud(18, 77);
    const PersistenceDiagram a = compute_persistence(c);
    const PersistenceDiagram b = compute_persistence(testing::scaled(c, lambda));
    ASSERT_EQ(a.h0.size(), b.h0.size());
    ASSERT_EQ(a.h1.size(), b.h1.size());
    for (std::size_t i = 0; i < a.h0.size(); ++i)
      EXPECT_NEAR(lambda * a.h0[i].death, b.h0[i].death, 1e-9 * lambda);
    for (std::size_t i = 0; i < a.h1.size(); ++i) {
      EXPECT_NEAR(lambda * a.h1[i].birth, b.h1[i].birth, 1e-9 * lambda);
      EXPECT_NEAR(lambda * a.h1[i].death, b.h1[i].death, 1e-9 * lambda);
    }
  }
}

TEST(PersistenceProperties, StabilityUnderSmallPerturbations) {
  for (double eps : {1e-4, 1e-3}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const PointCloud c = random_cloud(20, seed + 3000);
      const PointCloud moved = testing::jitter(c, eps, seed + 4000);
      const double t = 3.0;  // covers every pair in [-1,1]^2 after jitter
      const PersistenceDiagram a = compute_persistence(c, t);
      const PersistenceDiagram b = compute_persistence(moved, t);
      EXPECT_LE(testing::bottleneck_distance(a.h0, b.h0), 2 * eps + 1e-12);
      EXPECT_LE(testing::bottleneck_distance(a.h1, b.h1), 2 * eps + 1e-12);
    }
  }
}

TEST(H0AliveAt, CountsComponents) {
  const PersistenceDiagram dg = compute_persistence(gen_square({LatticeKind::square, 5}));
  EXPECT_EQ(h0_alive_at(dg, 0.49), 25);
  EXPECT_EQ(h0_alive_at(dg, 0.5), 1);
}

}  // namespace
}  // namespace ltda
