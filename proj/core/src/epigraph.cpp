#include "hamrep/epigraph.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hamrep/error.hpp"
#include "hamrep/io.hpp"

namespace hamrep::epigraph {
namespace {

constexpr double kMemberSlack = 1e-12;

// Distance from z to the vertical ray {(v, eta) : eta >= Lv}.
double ray_distance(const Point& z, double v, double Lv) {
  const double dv = z[0] - v;
  if (z[1] >= Lv) return std::abs(dv);
  return std::hypot(dv, Lv - z[1]);
}

}  // namespace

std::vector<double> dom_nodes(const models::Domain& dom, const SectionOptions& opt) {
  if (opt.dom_nodes < 2) throw InputError("dom grid needs at least two nodes");
  if (dom.is_singleton()) return {dom.lo};
  const double lo = dom.inner_lo(), hi = dom.inner_hi();
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  const int n = opt.dom_nodes;
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double s = -1.0 + 2.0 * i / (n - 1);
    double node = opt.clustered ? mid + half * std::sin(0.5 * std::numbers::pi * s) : mid + half * s;
    if (i == 0) node = lo;
    if (i == n - 1) node = hi;
    v.push_back(node);
  }
  return v;
}

double default_cap(double omega) { return omega + 4.0 * (1.0 + omega); }

EpigraphSection::EpigraphSection(const models::LagrangianModel& L, double t, double x, double growth_bound,
                                 double reach, double eta_cap, const SectionOptions& opt)
    : L_(&L), t_(t), x_(x), dom_(L.dom(t, x)), eta_cap_(eta_cap), acknowledge_cap_(opt.acknowledge_cap) {
  v_ = dom_nodes(dom_, opt);
  Lv_.reserve(v_.size());
  double lmin = std::numeric_limits<double>::infinity();
  for (double v : v_) {
    const ExtReal val = L.L(t, x, v);
    if (val.is_infinite()) throw PropernessError(fmt::format("L(t={}, x={}, .) is +inf at dom node {}", t, x, v));
    Lv_.push_back(val.value());
    lmin = std::min(lmin, val.value());
  }
  for (std::size_t i = 1; i < v_.size(); ++i) h_v_ = std::max(h_v_, v_[i] - v_[i - 1]);
  W_ = std::max(growth_bound, reach) * (1.0 + 1e-12) + 1e-12;
  eta_lo_ = std::min(lmin, -reach) - 1.0;
  if (!(eta_cap_ > lmin)) throw WindowError("epigraph cap lies below the graph minimum");
  if (!dom_.open || dom_.is_singleton() || acknowledge_cap_) {
    std::vector<Point> pts;
    pts.reserve(v_.size() + 2);
    for (std::size_t i = 0; i < v_.size(); ++i) pts.push_back(Point{v_[i], std::min(Lv_[i], eta_cap_)});
    pts.push_back(Point{v_.front(), eta_cap_});
    pts.push_back(Point{v_.back(), eta_cap_});
    body_ = geometry::ConvexBody::hull(pts);
  }
}

void EpigraphSection::check_window(const Point& z) const {
  if (z.dim() != 2) throw InputError("epigraph points live in R^2");
  if (std::abs(z[0]) > W_ || z[1] < eta_lo_ || z[1] > eta_cap_) {
    throw WindowError(fmt::format("point ({}, {}) lies outside the epigraph window", z[0], z[1]));
  }
}

bool EpigraphSection::member(const Point& z) const {
  check_window(z);
  if (!dom_.contains(z[0])) return false;
  const ExtReal val = L_->L(t_, x_, z[0]);
  return val.is_finite() && val.value() <= z[1] + kMemberSlack;
}

double EpigraphSection::distance(const Point& z) const {
  check_window(z);
  if (member(z)) return 0.0;
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const double d = ray_distance(z, v_[i], Lv_[i]);
    if (d < best) best = d, best_i = i;
  }
  if (v_.size() == 1) return best;
  // Golden-section refinement on the two cells around the best node.
  double a = v_[best_i == 0 ? 0 : best_i - 1];
  double b = v_[std::min(best_i + 1, v_.size() - 1)];
  auto f = [&](double v) {
    const ExtReal val = L_->L(t_, x_, std::clamp(v, v_.front(), v_.back()));
    return val.is_finite() ? ray_distance(z, v, val.value()) : std::numeric_limits<double>::infinity();
  };
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
    if (fc <= fd) {
      b = d, d = c, fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c, c = d, fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return std::min({best, fc, fd});
}

const geometry::ConvexBody& EpigraphSection::to_body() const {
  if (body_.size() == 0) {
    throw WindowError("open domain: converting to a body cuts an unbounded graph; acknowledge_cap is required");
  }
  return body_;
}

void EpigraphSection::write_boundary_csv(const std::filesystem::path& path) const {
  std::string out = "v,eta\n";
  for (std::size_t i = 0; i < v_.size(); ++i) out += io::format_double(v_[i]) + ',' + io::format_double(Lv_[i]) + '\n';
  for (std::size_t i = v_.size(); i-- > 0;) out += io::format_double(v_[i]) + ',' + io::format_double(eta_cap_) + '\n';
  io::write_file_atomic(path, out);
}

double truncated_hausdorff(const EpigraphSection& a, const EpigraphSection& b) {
  if (a.eta_cap() != b.eta_cap()) throw WindowError("truncated Hausdorff distance needs a common cap");
  return geometry::hausdorff(a.to_body(), b.to_body());
}

}  // namespace hamrep::epigraph
