#include <gtest/gtest.h>

#include <filesystem>
#include <numbers>
#include <random>

#include "hamrep/convex_geometry.hpp"
#include "hamrep/error.hpp"
#include "oracles.hpp"

using hamrep::Point;
using namespace hamrep::geometry;

namespace {

std::vector<Point> to_points(const std::vector<oracle::P2>& v) {
  std::vector<Point> out;
  for (const auto& p : v) out.push_back(Point{p[0], p[1]});
  return out;
}

std::vector<oracle::P2> to_p2(const std::vector<Point>& v) {
  std::vector<oracle::P2> out;
  for (const auto& p : v) out.push_back({p[0], p[1]});
  return out;
}

ConvexBody disc(double cx, double cy, double r, int n) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    pts.push_back(Point{cx + r * std::cos(th), cy + r * std::sin(th)});
  }
  return ConvexBody::hull(pts);
}

}  // namespace

TEST(ConvexBody, CanonicalOrderAndIdempotence) {
  const std::vector<Point> pts{{1, 1}, {0, 0}, {0.5, 0.5}, {1, 0}, {0, 1}, {0.2, 0.7}};
  const auto K = ConvexBody::hull(pts);
  ASSERT_EQ(K.size(), 4u);
  EXPECT_EQ(K.vertices()[0], (Point{0, 0}));
  EXPECT_EQ(K.vertices()[1], (Point{1, 0}));
  EXPECT_EQ(K.vertices()[2], (Point{1, 1}));
  EXPECT_EQ(K.vertices()[3], (Point{0, 1}));
  EXPECT_EQ(ConvexBody::hull(K.vertices()), K);
}

TEST(ConvexBody, DegenerateBodies) {
  const std::vector<Point> seg{{0, 0}, {2, 2}, {1, 1}, {0.5, 0.5}};
  EXPECT_EQ(ConvexBody::hull(seg).size(), 2u);
  const std::vector<Point> same{{3, 4}, {3, 4}};
  EXPECT_EQ(ConvexBody::hull(same).size(), 1u);
  const std::vector<Point> line3{{0, 0, 0}, {1, 1, 1}, {0.5, 0.5, 0.5}};
  EXPECT_EQ(ConvexBody::hull(line3).size(), 2u);
  const std::vector<Point> flat3{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}};
  EXPECT_EQ(ConvexBody::hull(flat3).size(), 4u);
  const std::vector<Point> iv{{3.0}, {-1.0}, {0.5}};
  const auto I = ConvexBody::hull(iv);
  ASSERT_EQ(I.size(), 2u);
  EXPECT_EQ(I.vertices()[0][0], -1.0);
}

TEST(ConvexBody, RejectsBadInput) {
  EXPECT_THROW(ConvexBody::hull(std::vector<Point>{}), hamrep::InputError);
  const std::vector<Point> mixed{{0, 0}, {1.0}};
  EXPECT_THROW(ConvexBody::hull(mixed), hamrep::InputError);
}

TEST(ConvexBody, Cube3dKeepsOnlyCorners) {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(Point{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  pts.push_back(Point{0.5, 0.5, 0.5});
  pts.push_back(Point{0.5, 0.5, 1.0});
  const auto K = ConvexBody::hull(pts);
  EXPECT_EQ(K.size(), 8u);
  EXPECT_TRUE(std::is_sorted(K.vertices().begin(), K.vertices().end(), hamrep::lex_less));
}

TEST(Support, UnitSquareAndDisc) {
  const std::vector<Point> sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(support(ConvexBody::hull(sq), Point{1, 1}), 2.0);
  const auto D = disc(0, 0, 1, 64);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0, 2 * std::numbers::pi);
  for (int i = 0; i < 50; ++i) {
    const double th = U(rng);
    EXPECT_NEAR(support(D, Point{std::cos(th), std::sin(th)}), 1.0, 1e-2);
  }
}

TEST(Support, MatchesBruteForceOnRandomPolygons) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Point> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(Point{N(rng), N(rng)});
    const auto K = ConvexBody::hull(pts);
    const Point p{N(rng), N(rng)};
    double brute = -1e300;
    for (const auto& q : pts) brute = std::max(brute, dot(p, q));
    EXPECT_NEAR(support(K, p), brute, 1e-14 * (1 + std::abs(brute)));
  }
}

TEST(Support, TieBreakIsLexicographic) {
  const std::vector<Point> sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const auto K = ConvexBody::hull(sq);
  EXPECT_EQ(support_vertex(K, Point{1, 0}), (Point{1, 0}));
  EXPECT_EQ(support_vertex(K, Point{0, 1}), (Point{0, 1}));
  EXPECT_THROW(support(K, Point{1, 0, 0}), hamrep::InputError);
}

TEST(Support, Subadditive) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> N(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto K = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 12)));
    const Point p{N(rng), N(rng)}, q{N(rng), N(rng)};
    // Maximizers of p and q bound the value at p + q from above.
    EXPECT_LE(support(K, p + q), support(K, p) + support(K, q) + 1e-15 * (1 + norm(p) + norm(q)));
  }
}

TEST(Quadrature, NormalizationAndUnitNodes) {
  for (int m : {1, 2, 3}) {
    const auto Q = SphereQuadrature::default_for(m);
    double tot = 0.0;
    for (std::size_t j = 0; j < Q.size(); ++j) {
      tot += Q.weights()[j];
      EXPECT_NEAR(norm(Q.nodes()[j]), 1.0, 1e-12);
    }
    EXPECT_NEAR(tot, 1.0, 1e-13);
  }
  EXPECT_EQ(SphereQuadrature::default_for(2).size(), 512u);
  EXPECT_THROW(SphereQuadrature::from_nodes({}, {}), hamrep::InputError);
  EXPECT_THROW(SphereQuadrature::from_nodes({Point{2.0, 0.0}}, {1.0}), hamrep::InputError);
}

TEST(Steiner, SingletonIsExact) {
  for (int m : {1, 2, 3}) {
    Point z(m);
    for (int i = 0; i < m; ++i) z[i] = 0.3 * (i + 1) - 0.7;
    const auto s = steiner_point(ConvexBody::singleton(z), SphereQuadrature::default_for(m));
    EXPECT_EQ(s, z);
  }
}

TEST(Steiner, SegmentAndIntervalAreMidpoints) {
  const std::vector<Point> iv{{-1.0}, {3.0}};
  EXPECT_DOUBLE_EQ(steiner_point(ConvexBody::hull(iv), SphereQuadrature::default_for(1))[0], 1.0);
  const std::vector<Point> seg{{0, 0}, {2, 1}};
  const auto s = steiner_point(ConvexBody::hull(seg), SphereQuadrature::default_for(2));
  EXPECT_NEAR(s[0], 1.0, 1e-12);
  EXPECT_NEAR(s[1], 0.5, 1e-12);
}

TEST(Steiner, DiscCenter) {
  const auto s = steiner_point(disc(0.3, -0.2, 2.0, 720), SphereQuadrature::default_for(2));
  EXPECT_NEAR(s[0], 0.3, 1e-6);
  EXPECT_NEAR(s[1], -0.2, 1e-6);
}

TEST(Steiner, TriangleAgainstDenseOracles) {
  const std::vector<oracle::P2> tri{{0, 0}, {1, 0}, {0, 1}};
  const auto dense = oracle::dense_steiner(tri, 200000);
  const auto exact = oracle::exterior_angle_steiner(tri);
  EXPECT_NEAR(dense[0], exact[0], 1e-9);
  EXPECT_NEAR(dense[1], exact[1], 1e-9);
  const auto K = ConvexBody::hull(to_points(tri));
  const auto s = steiner_point(K, SphereQuadrature::uniform(2, 8192));
  EXPECT_NEAR(s[0], dense[0], 1e-6);
  EXPECT_NEAR(s[1], dense[1], 1e-6);
  // The default rule trades accuracy on kinks for speed.
  const auto s512 = steiner_point(K, SphereQuadrature::default_for(2));
  EXPECT_NEAR(s512[0], dense[0], 1e-4);
}

TEST(Steiner, ExactFormulaAgainstDenseQuadrature) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto poly = oracle::random_convex_polygon(rng, 3 + trial * 7, 2.0);
    const auto K = ConvexBody::hull(to_points(poly));
    const auto dense = oracle::dense_steiner(to_p2(K.vertices()), 400000);
    const auto s = steiner_point_exact(K);
    EXPECT_NEAR(s[0], dense[0], 1e-8);
    EXPECT_NEAR(s[1], dense[1], 1e-8);
  }
  EXPECT_EQ(steiner_point_exact(ConvexBody::singleton(Point{1, 2})), (Point{1, 2}));
  const Point seg[2] = {Point{0, 0}, Point{2, 4}};
  EXPECT_EQ(steiner_point_exact(ConvexBody::hull(seg)), (Point{1, 2}));
  const Point box[2] = {Point{0, 0, 0}, Point{1, 1, 1}};
  EXPECT_THROW(steiner_point_exact(ConvexBody::hull(box)), hamrep::InputError);
}

TEST(Steiner, RotatingPointerMatchesGenericLoop) {
  std::mt19937_64 rng(3);
  const auto Q = SphereQuadrature::default_for(2);
  // Same nodes without the angular-order flag take the generic path.
  const auto Qg = SphereQuadrature::from_nodes(Q.nodes(), Q.weights());
  for (int trial = 0; trial < 100; ++trial) {
    const auto K = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 40)));
    const auto a = steiner_point(K, Q), b = steiner_point(K, Qg);
    EXPECT_NEAR(a[0], b[0], 1e-13);
    EXPECT_NEAR(a[1], b[1], 1e-13);
  }
}

TEST(Steiner, SelectionAndLipschitz) {
  std::mt19937_64 rng(21);
  const auto Q = SphereQuadrature::default_for(2);
  for (int trial = 0; trial < 300; ++trial) {
    const auto K = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 62)));
    const auto D = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 17)));
    const auto sK = steiner_point(K, Q);
    EXPECT_LE(project(sK, K).distance, 1e-6);
    EXPECT_LE(distance(sK, steiner_point(D, Q)), 2.0 * hausdorff(K, D) * (1 + 1e-6));
  }
}

TEST(Steiner, ThreeDimensionalBox) {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(Point{double(i & 1) * 2, double((i >> 1) & 1), double((i >> 2) & 1) * 3});
  const auto s = steiner_point(ConvexBody::hull(pts), SphereQuadrature::default_for(3));
  EXPECT_NEAR(s[0], 1.0, 1e-12);
  EXPECT_NEAR(s[1], 0.5, 1e-12);
  EXPECT_NEAR(s[2], 1.5, 1e-12);
}

TEST(Hausdorff, ClosedForms) {
  EXPECT_NEAR(hausdorff(disc(0, 0, 1, 256), disc(0, 0, 2, 256)), 1.0, 2e-2);
  EXPECT_DOUBLE_EQ(hausdorff(ConvexBody::singleton(Point{0, 0}), ConvexBody::singleton(Point{3, 4})), 5.0);
  const auto K = disc(0, 0, 1, 32);
  EXPECT_EQ(hausdorff(K, K), 0.0);
}

TEST(Hausdorff, DenseSamplingOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = oracle::random_convex_polygon(rng, 8);
    const auto b = oracle::random_convex_polygon(rng, 6);
    const auto K = ConvexBody::hull(to_points(a)), D = ConvexBody::hull(to_points(b));
    const auto pa = to_p2(K.vertices()), pb = to_p2(D.vertices());
    double h = 0.0;
    for (const auto& q : oracle::boundary_samples(pa, 400)) h = std::max(h, oracle::sampled_distance(pb, q, 400));
    for (const auto& q : oracle::boundary_samples(pb, 400)) h = std::max(h, oracle::sampled_distance(pa, q, 400));
    EXPECT_NEAR(hausdorff(K, D), h, 1e-3);
  }
}

TEST(Hausdorff, MetricAxioms) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto A = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 7)));
    const auto B = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 9)));
    const auto C = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 5)));
    EXPECT_EQ(hausdorff(A, B), hausdorff(B, A));
    EXPECT_LE(hausdorff(A, C), hausdorff(A, B) + hausdorff(B, C) + 1e-9);
  }
}

TEST(Project, ClosedForms) {
  const std::vector<Point> sq{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const auto K = ConvexBody::hull(sq);
  const auto in = project(Point{0.25, 0.5}, K);
  EXPECT_EQ(in.distance, 0.0);
  EXPECT_EQ(in.point, (Point{0.25, 0.5}));
  const std::vector<Point> seg{{0, 0}, {1, 0}};
  const auto pr = project(Point{2, 1}, ConvexBody::hull(seg));
  EXPECT_EQ(pr.point, (Point{1, 0}));
  EXPECT_DOUBLE_EQ(pr.distance, std::sqrt(2.0));
}

TEST(Project, DenseSamplingOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto K = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 12)));
    const Point y{U(rng), U(rng)};
    const auto pr = project(y, K);
    // Exact edge distances for the oracle avoid sampling error at 1e-6.
    const auto v = to_p2(K.vertices());
    double d = oracle::inside_ccw(v, {y[0], y[1]}) ? 0.0 : 1e300;
    if (d > 0.0) {
      for (std::size_t i = 0; i < v.size(); ++i) d = std::min(d, oracle::seg_dist({y[0], y[1]}, v[i], v[(i + 1) % v.size()]));
    }
    EXPECT_NEAR(pr.distance, d, 1e-6);
    EXPECT_NEAR(pr.distance, oracle::sampled_distance(v, {y[0], y[1]}, 20000), 1e-3);
    EXPECT_NEAR(distance(pr.point, y), pr.distance, 1e-12);
  }
}

TEST(Project, ThreeDimensionalAgreesWithCoordinateClamp) {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(Point{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  const auto K = ConvexBody::hull(pts);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-2, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const Point y{U(rng), U(rng), U(rng)};
    const Point c{std::clamp(y[0], 0.0, 1.0), std::clamp(y[1], 0.0, 1.0), std::clamp(y[2], 0.0, 1.0)};
    const auto pr = project(y, K);
    EXPECT_NEAR(pr.distance, distance(y, c), 1e-9);
  }
}

TEST(POperator, InsidePointGivesSingleton) {
  const auto K = disc(0, 0, 1, 64);
  const auto P = ball_intersect_P(Point{0.1, 0.2}, K);
  ASSERT_EQ(P.size(), 1u);
  EXPECT_EQ(P.vertices()[0], (Point{0.1, 0.2}));
}

TEST(POperator, FarDiscIsWhollyInside) {
  const auto K = disc(3, 0, 1, 128);
  // d = 2 up to hull error, radius 4 reaches the far point (4,0).
  for (const auto& v : K.vertices()) EXPECT_LE(distance(v, Point{0, 0}), 4.0 + 1e-9);
  const auto P = ball_intersect_P(Point{0, 0}, K);
  EXPECT_LE(hausdorff(P, K), 1e-3);
}

TEST(POperator, SubsetOfKAndContainsProjection) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> U(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto K = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 30)));
    const Point y{U(rng), U(rng)};
    const auto P = ball_intersect_P(y, K);
    const auto pr = project(y, K);
    for (const auto& v : P.vertices()) {
      EXPECT_LE(project(v, K).distance, 1e-12);
      EXPECT_LE(distance(v, y), 2.0 * pr.distance * (1 + 1e-12) + 1e-12);
    }
    EXPECT_LE(project(pr.point, P).distance, 1e-12);
  }
}

TEST(POperator, FiveLipschitz) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> U(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto K = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 20)));
    const auto D = ConvexBody::hull(to_points(oracle::random_convex_polygon(rng, 3 + trial % 13)));
    const Point x{U(rng), U(rng)}, y{U(rng), U(rng)};
    const double lhs = hausdorff(ball_intersect_P(x, K), ball_intersect_P(y, D));
    EXPECT_LE(lhs, 5.0 * (hausdorff(K, D) + distance(x, y)) * (1 + 1e-6));
  }
}

TEST(POperator, ThreeDimensionalSubset) {
  std::vector<Point> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(Point{double(i & 1), double((i >> 1) & 1), double((i >> 2) & 1)});
  const auto K = ConvexBody::hull(pts);
  const Point y{2.0, 0.5, 0.5};
  const auto P = ball_intersect_P(y, K);
  for (const auto& v : P.vertices()) {
    EXPECT_LE(project(v, K).distance, 1e-9);
    EXPECT_LE(distance(v, y), 2.0 + 1e-9);
  }
  EXPECT_LE(project(Point{1.0, 0.5, 0.5}, P).distance, 1e-9);
}

TEST(Csv, BodyAndQuadratureRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto K = disc(0.5, -1, 2, 17);
  write_body_csv(dir / "hamrep_body.csv", K);
  EXPECT_EQ(read_body_csv(dir / "hamrep_body.csv"), K);
  const auto Q = SphereQuadrature::uniform(3, 50);
  write_quadrature_csv(dir / "hamrep_quad.csv", Q);
  const auto Q2 = read_quadrature_csv(dir / "hamrep_quad.csv");
  ASSERT_EQ(Q2.size(), Q.size());
  EXPECT_EQ(Q2.nodes()[7], Q.nodes()[7]);
}
