#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hamrep/epigraph.hpp"
#include "hamrep/error.hpp"
#include "hamrep/stability.hpp"

using namespace hamrep;
using namespace hamrep::stability;

namespace {

geometry::ConvexBody disc(double r, int n) {
  std::vector<Point> pts;
  for (int k = 0; k < n; ++k) {
    const double th = 2 * std::numbers::pi * k / n;
    pts.push_back(Point{r * std::cos(th), r * std::sin(th)});
  }
  return geometry::ConvexBody::hull(pts);
}

std::vector<BasePoint> mesh() {
  std::vector<BasePoint> pts;
  for (double x : {-1.0, 0.0, 0.5}) {
    for (const auto& a : representation::control_cloud(6, 2)) pts.push_back({0.0, x, a});
  }
  return pts;
}

}  // namespace

TEST(Perturbation, MembersShiftHAndL) {
  const PerturbationFamily fam{models::find_entry("EX2"), Rule::kShift, 1.0, {1, 2}};
  const auto e = fam.member(4);
  const auto& base = fam.base;
  for (double x : {-1.0, 0.3}) {
    for (double p : {-2.0, 0.0, 1.5}) EXPECT_DOUBLE_EQ(e.hamiltonian.H(0, x, p) - base.hamiltonian.H(0, x, p), 0.25);
    for (double v : {-0.5, 0.0, 0.9}) {
      EXPECT_DOUBLE_EQ(e.lagrangian.L(0, x, v).value() - base.lagrangian.L(0, x, v).value(), -0.25);
      EXPECT_LE(e.lagrangian.L(0, x, v).value(), e.lagrangian.lambda(0, x));
    }
  }
  const PerturbationFamily bump{models::find_entry("EX2"), Rule::kBump, 1.0, {1}};
  EXPECT_DOUBLE_EQ(bump.member(2).hamiltonian.H(0, 0.5, 0) - base.hamiltonian.H(0, 0.5, 0), 0.25);
  EXPECT_DOUBLE_EQ(bump.member(2).hamiltonian.H(0, 3, 0), base.hamiltonian.H(0, 3, 0));
  EXPECT_THROW(parse_rule("twist"), InputError);
  EXPECT_EQ(parse_rule("drift"), Rule::kDrift);
}

TEST(Perturbation, MembersSatisfyStandingAssumptions) {
  const PerturbationFamily fam{models::find_entry("EX2"), Rule::kBump, 1.0, {1}};
  const auto plan = models::SamplePlan::uniform(1, 3, 2, 17, 4, 17);
  for (int i : {1, 4, 16}) {
    const auto e = fam.member(i);
    for (const auto& r : models::check_H1_H4(e.hamiltonian, plan)) EXPECT_TRUE(r.pass) << r.condition << i;
    EXPECT_TRUE(models::check_HLC(e.hamiltonian, 2, e.hamiltonian.k(0, 2), plan).pass) << i;
  }
}

TEST(StabilityAudit, ZeroPerturbationIsIdenticallyZero) {
  const PerturbationFamily fam{models::find_entry("EX2"), Rule::kShift, 0.0, {1, 2, 4}};
  const auto r = stability_audit_e(fam, mesh());
  for (double d : r.deviations) EXPECT_EQ(d, 0.0);
  EXPECT_TRUE(r.report.pass);
}

TEST(StabilityAudit, ShiftFamilyDecaysLikeOneOverI) {
  const PerturbationFamily fam{models::find_entry("EX2"), Rule::kShift, 1.0, {1, 2, 4, 8, 16, 32, 64, 128, 256}};
  const auto r = stability_audit_e(fam, mesh());
  EXPECT_GE(r.r_squared, 0.9);
  EXPECT_GT(r.rate_constant, 0.0);
  EXPECT_LE(r.deviations.back(), 1e-2);
  EXPECT_TRUE(r.report.pass);
  // Steiner chain: |e_i - e| <= (n+1) H(Phi_i, Phi).
  for (double c : r.chain_ratio) EXPECT_LE(c, 1.0 + 1e-9);
}

TEST(StabilityAudit, BumpAndDriftConverge) {
  for (Rule rule : {Rule::kBump, Rule::kDrift}) {
    const PerturbationFamily fam{models::find_entry("EX2"), rule, 1.0, {1, 4, 16, 64, 256, 1024}};
    const auto r = stability_audit_e(fam, mesh());
    EXPECT_TRUE(r.report.pass) << rule_name(rule) << " " << r.deviations.back();
    EXPECT_GE(r.r_squared, 0.9);
  }
}

TEST(StabilityAudit, Deterministic) {
  const PerturbationFamily fam{models::find_entry("EX1"), Rule::kShift, 1.0, {1, 3, 9}};
  const auto a = stability_audit_e(fam, mesh()), b = stability_audit_e(fam, mesh());
  EXPECT_EQ(a.deviations, b.deviations);
  EXPECT_EQ(a.rate_constant, b.rate_constant);
}

TEST(RateFit, ExactInverseData) {
  const std::vector<int> i{1, 2, 4, 8};
  const std::vector<double> y{3.0, 1.5, 0.75, 0.375};
  const auto [C, r2] = fit_inverse_rate(i, y);
  EXPECT_DOUBLE_EQ(C, 3.0);
  EXPECT_DOUBLE_EQ(r2, 1.0);
}

TEST(SetLimit, ConstantSequence) {
  const auto K = disc(1, 64);
  const SetSequenceProbe probe{{K, K, K}, K, {Point{2, 0}, Point{0, 0}, Point{-3, 1}}};
  const auto r = set_limit_check(probe);
  for (double d : r.deviations) EXPECT_EQ(d, 0.0);
  EXPECT_TRUE(r.report.pass);
  EXPECT_THROW(set_limit_check({{K, K}, K, {Point{0, 0}}}), InputError);
}

TEST(SetLimit, ShrinkingDiscs) {
  SetSequenceProbe probe;
  probe.target = disc(1, 1 << 14);
  probe.probes = {Point{2, 0}};
  std::vector<int> idx{1, 2, 4, 8, 16, 32, 64, 128};
  for (int i : idx) probe.bodies.push_back(disc(1 + 1.0 / i, 1 << 14));
  const auto r = set_limit_check(probe);
  for (std::size_t k = 0; k < idx.size(); ++k) EXPECT_NEAR(r.deviations[k], 1.0 / idx[k], 1e-6);
  EXPECT_TRUE(r.report.pass);
}

TEST(SetLimit, EpigraphBodiesConverge) {
  const auto& e = models::find_entry("EX2");
  const double cap = 30;
  SetSequenceProbe probe;
  probe.target = epigraph::EpigraphSection(e.lagrangian, 0, 0, 2, 5, cap).to_body();
  for (int i : {1, 2, 4, 8, 16, 32, 64, 128}) {
    probe.bodies.push_back(epigraph::EpigraphSection(e.lagrangian, 0, 1.0 / i, 2, 5, cap).to_body());
  }
  for (double v = -3; v <= 3; v += 0.5) {
    for (double eta = -3; eta <= 10; eta += 1.0) probe.probes.push_back(Point{v, eta});
  }
  const auto r = set_limit_check(probe);
  EXPECT_TRUE(r.report.pass) << r.deviations.back();
  EXPECT_NEAR(r.deviations.back(), 1.0 / 128, 1e-3);
}

TEST(EpiConvergence, TrivialAndShiftedSequences) {
  const conjugate::Grid g(conjugate::Axis::spanning(-1, 1, 41));
  const auto F = conjugate::GridFunction::sample(g, [](const Point& x) { return x[0] * x[0]; });
  EXPECT_TRUE(epi_convergence_check({F, F}, F).report.pass);
  std::vector<conjugate::GridFunction> Fi;
  for (int i = 1; i <= 200; ++i) {
    Fi.push_back(conjugate::GridFunction::sample(g, [i](const Point& x) { return x[0] * x[0] + 1.0 / i; }));
  }
  const auto r = epi_convergence_check(Fi, F);
  EXPECT_TRUE(r.report.pass);
  EXPECT_NEAR(r.recovery_gap.back(), 1.0 / 200, 1e-12);
  EXPECT_LT(r.liminf_gap.back(), 0.0);
  // Values far from the limit fail.
  const auto G = conjugate::GridFunction::sample(g, [](const Point& x) { return x[0] * x[0] + 1; });
  EXPECT_FALSE(epi_convergence_check({G}, F).report.pass);
  const conjugate::Grid h(conjugate::Axis::spanning(-1, 1, 21));
  EXPECT_THROW(epi_convergence_check({conjugate::GridFunction::sample(h, [](const Point&) { return 0.0; })}, F),
               InputError);
}

TEST(EpiConvergence, MovingMinimumNeedsRecoveryNodes) {
  // F_i(x) = (x - 1/i)^2 epi-converges to x^2 although values at fixed nodes
  // approach from both sides.
  const conjugate::Grid g(conjugate::Axis::spanning(-1, 1, 201));
  const auto F = conjugate::GridFunction::sample(g, [](const Point& x) { return x[0] * x[0]; });
  std::vector<conjugate::GridFunction> Fi;
  for (int i : {1, 10, 100, 1000}) {
    Fi.push_back(conjugate::GridFunction::sample(g, [i](const Point& x) { return std::pow(x[0] - 1.0 / i, 2); }));
  }
  const auto r = epi_convergence_check(Fi, F);
  EXPECT_TRUE(r.report.pass);
}
