#include "hamrep/convex_geometry.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "hamrep/error.hpp"
#include "hamrep/io.hpp"

namespace hamrep::geometry {
namespace {

constexpr double kCollinearTol = 1e-14;
constexpr double kAffineTol = 1e-12;

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Pops while o->a->b is not a strict left turn, with a relative slack so
// that nearly collinear samples do not survive as spurious vertices.
bool left_turn(const Point& o, const Point& a, const Point& b) {
  const double a0 = a[0] - o[0], a1 = a[1] - o[1], b0 = b[0] - o[0], b1 = b[1] - o[1];
  const double c = a0 * b1 - a1 * b0;
  if (!(c > 0.0)) return false;
  return c * c > kCollinearTol * kCollinearTol * (a0 * a0 + a1 * a1) * (b0 * b0 + b1 * b1);
}

std::vector<Point> hull_1d(std::span<const Point> pts) {
  auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                      [](const Point& a, const Point& b) { return a[0] < b[0]; });
  if ((*lo)[0] == (*hi)[0]) return {*lo};
  return {*lo, *hi};
}

// Andrew's monotone chain. Output is counterclockwise from the
// lexicographically smallest point.
std::vector<Point> hull_2d(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) return pts;
  std::vector<Point> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && !left_turn(h[k - 2], h[k - 1], p)) --k;
    h[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && !left_turn(h[k - 2], h[k - 1], pts[i])) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() == 2 && h[0] == h[1]) h.resize(1);
  return h;
}

double cloud_scale(std::span<const Point> pts) {
  double s = 0.0;
  for (const auto& p : pts) {
    for (int i = 0; i < p.dim(); ++i) s = std::max(s, std::abs(p[i]));
  }
  return std::max(s, 1.0);
}

std::vector<Point> hull_3d(std::span<const Point> input) {
  std::vector<Point> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return pts;
  const double tol = kAffineTol * cloud_scale(pts);

  // Affine rank by successive farthest points.
  const Point p0 = pts.front();
  std::size_t i1 = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = distance(pts[i], p0);
    if (d > best) best = d, i1 = i;
  }
  if (best <= tol) return {p0};
  Point u = (pts[i1] - p0) * (1.0 / best);
  std::size_t i2 = 0;
  best = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Point w = pts[i] - p0;
    w -= u * dot(w, u);
    const double d = norm(w);
    if (d > best) best = d, i2 = i;
  }
  if (best <= tol) {
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
      return dot(a - p0, u) < dot(b - p0, u);
    });
    std::vector<Point> out{*lo, *hi};
    std::sort(out.begin(), out.end(), lex_less);
    return out;
  }
  Point v = pts[i2] - p0;
  v -= u * dot(v, u);
  v *= 1.0 / norm(v);
  Point nrm{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
  double off = 0.0;
  for (const auto& p : pts) off = std::max(off, std::abs(dot(p - p0, nrm)));

  std::vector<Point> out;
  if (off <= tol) {
    // Planar cloud: 2-D hull in plane coordinates, then map back.
    std::vector<Point> planar;
    planar.reserve(pts.size());
    for (const auto& p : pts) planar.push_back(Point{dot(p - p0, u), dot(p - p0, v)});
    std::vector<Point> h = hull_2d(planar);
    for (const auto& q : h) {
      auto it = std::find(planar.begin(), planar.end(), q);
      out.push_back(pts[static_cast<std::size_t>(it - planar.begin())]);
    }
  } else {
    // Full-dimensional: drop every point lying in the hull of the survivors.
    std::vector<bool> alive(pts.size(), true);
    std::vector<Point> others;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      others.clear();
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j != i && alive[j]) others.push_back(pts[j] - pts[i]);
      }
      if (norm(min_norm_point(others)) <= tol) alive[i] = false;
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (alive[i]) out.push_back(pts[i]);
    }
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

Point nearest_on_segment(const Point& y, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = squared_norm(ab);
  if (len2 == 0.0) return a;
  const double s = std::clamp(dot(y - a, ab) / len2, 0.0, 1.0);
  return a + ab * s;
}

// Point-in-convex-polygon for a counterclockwise polygon with >= 3 vertices,
// O(log V) fan search from vertex 0.
bool polygon_contains(const std::vector<Point>& v, const Point& y) {
  const std::size_t n = v.size();
  if (cross(v[0], v[1], y) < 0.0 || cross(v[0], v[n - 1], y) > 0.0) return false;
  std::size_t lo = 1, hi = n - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (cross(v[0], v[mid], y) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return cross(v[lo], v[lo + 1], y) >= 0.0;
}

Projection project_2d(const Point& y, const std::vector<Point>& v) {
  const std::size_t n = v.size();
  if (n == 1) return {v[0], distance(y, v[0])};
  if (n >= 3 && polygon_contains(v, y)) return {y, 0.0};
  const double y0 = y[0], y1 = y[1];
  double best = std::numeric_limits<double>::infinity(), bq0 = v[0][0], bq1 = v[0][1];
  const std::size_t edges = n == 2 ? 1 : n;
  for (std::size_t i = 0; i < edges; ++i) {
    const Point& a = v[i];
    const Point& b = v[i + 1 == n ? 0 : i + 1];
    const double e0 = b[0] - a[0], e1 = b[1] - a[1];
    const double len2 = e0 * e0 + e1 * e1;
    double s = len2 == 0.0 ? 0.0 : ((y0 - a[0]) * e0 + (y1 - a[1]) * e1) / len2;
    s = std::clamp(s, 0.0, 1.0);
    const double q0 = a[0] + e0 * s, q1 = a[1] + e1 * s;
    const double d2 = (y0 - q0) * (y0 - q0) + (y1 - q1) * (y1 - q1);
    if (d2 < best) best = d2, bq0 = q0, bq1 = q1;
  }
  const Point q{bq0, bq1};
  return {q, distance(y, q)};
}

// (cos, sin) of k 2 pi / count, cached per count.
const std::vector<std::pair<double, double>>& unit_circle(int count) {
  thread_local std::map<int, std::vector<std::pair<double, double>>> cache;
  auto it = cache.find(count);
  if (it == cache.end()) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double th = 2.0 * std::numbers::pi * k / count;
      pts.emplace_back(std::cos(th), std::sin(th));
    }
    it = cache.emplace(count, std::move(pts)).first;
  }
  return it->second;
}

// Points a + s(b-a), s in [0,1], at distance r from y. The roots are taken
// as foot of the perpendicular plus or minus the half chord, which keeps them
// accurate relative to r even on long segments.
void segment_sphere(const Point& a, const Point& b, const Point& y, double r, std::vector<Point>& out) {
  const int m = a.dim();
  double A = 0.0, B = 0.0;
  for (int k = 0; k < m; ++k) {
    const double ab = b[k] - a[k];
    A += ab * ab;
    B += ab * (a[k] - y[k]);
  }
  if (A == 0.0) return;
  const double t0 = -B / A;
  double p2 = 0.0;
  for (int k = 0; k < m; ++k) {
    const double f = a[k] + (b[k] - a[k]) * t0 - y[k];
    p2 += f * f;
  }
  const double p = std::sqrt(p2);
  if (p > r) return;
  const double h = std::sqrt((r - p) * (r + p) / A);
  for (double s : {t0 - h, t0 + h}) {
    if (s >= 0.0 && s <= 1.0) out.push_back(a + (b - a) * s);
  }
}

void check_dims(const ConvexBody& K, const Point& p) {
  if (p.dim() != K.dimension()) {
    throw InputError(fmt::format("dimension mismatch: body in R^{}, vector in R^{}", K.dimension(), p.dim()));
  }
}

}  // namespace

ConvexBody ConvexBody::hull(std::span<const Point> points) {
  if (points.empty()) throw InputError("convex hull of an empty point set");
  const int m = points.front().dim();
  if (m < 1 || m > 3) throw InputError("bodies are supported in R^1, R^2 and R^3 only");
  for (const auto& p : points) {
    if (p.dim() != m) throw InputError("mixed point dimensions in hull input");
    for (int i = 0; i < m; ++i) {
      if (!std::isfinite(p[i])) throw InputError("non-finite coordinate in hull input");
    }
  }
  switch (m) {
    case 1:
      return ConvexBody(1, hull_1d(points));
    case 2:
      return ConvexBody(2, hull_2d(std::vector<Point>(points.begin(), points.end())));
    default:
      return ConvexBody(3, hull_3d(points));
  }
}

ConvexBody ConvexBody::singleton(const Point& z) { return hull(std::span<const Point>(&z, 1)); }

SphereQuadrature SphereQuadrature::uniform(int m, int count) {
  SphereQuadrature q;
  q.dim_ = m;
  if (m == 1) {
    q.nodes_ = {Point{-1.0}, Point{1.0}};
    q.weights_ = {0.5, 0.5};
    return q;
  }
  if (m == 2) {
    if (count < 3) throw InputError("circle quadrature needs at least 3 nodes");
    q.circle_rule_ = true;
    q.nodes_.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
      const double th = 2.0 * std::numbers::pi * j / count;
      q.nodes_.push_back(Point{std::cos(th), std::sin(th)});
    }
    q.weights_.assign(static_cast<std::size_t>(count), 1.0 / count);
    return q;
  }
  if (m != 3) throw InputError("quadrature dimension must be 1, 2 or 3");
  // Gauss-Legendre nodes in z by Newton iteration on P_k.
  const int k = std::max(2, static_cast<int>(std::lround(std::sqrt(count / 2.0))));
  std::vector<double> z(static_cast<std::size_t>(k)), wz(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (k + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = k * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    z[static_cast<std::size_t>(i)] = x;
    wz[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  const int naz = 2 * k;
  for (int i = 0; i < k; ++i) {
    const double zi = z[static_cast<std::size_t>(i)];
    const double rho = std::sqrt(std::max(0.0, 1.0 - zi * zi));
    for (int j = 0; j < naz; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / naz;
      Point p{rho * std::cos(ph), rho * std::sin(ph), zi};
      p *= 1.0 / norm(p);
      q.nodes_.push_back(p);
      q.weights_.push_back(wz[static_cast<std::size_t>(i)] / 2.0 / naz);
    }
  }
  return q;
}

SphereQuadrature SphereQuadrature::default_for(int m) {
  return uniform(m, m == 3 ? kDefaultSphereNodes : kDefaultCircleNodes);
}

SphereQuadrature SphereQuadrature::from_nodes(std::vector<Point> nodes, std::vector<double> weights) {
  if (nodes.empty()) throw InputError("empty quadrature");
  if (nodes.size() != weights.size()) throw InputError("quadrature nodes and weights differ in length");
  const int m = nodes.front().dim();
  double total = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (nodes[j].dim() != m) throw InputError("mixed quadrature node dimensions");
    if (std::abs(norm(nodes[j]) - 1.0) > 1e-12) throw InputError("quadrature node is not a unit vector");
    if (!(weights[j] >= 0.0)) throw InputError("negative quadrature weight");
    total += weights[j];
  }
  if (!(total > 0.0)) throw InputError("quadrature weights sum to zero");
  SphereQuadrature q;
  q.dim_ = m;
  q.nodes_ = std::move(nodes);
  q.weights_ = std::move(weights);
  for (auto& w : q.weights_) w /= total;
  return q;
}

double support(const ConvexBody& K, const Point& p) { return dot(support_vertex(K, p), p); }

const Point& support_vertex(const ConvexBody& K, const Point& p) {
  check_dims(K, p);
  const auto& v = K.vertices();
  std::size_t best = 0;
  double val = dot(v[0], p);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double s = dot(v[i], p);
    if (s > val || (s == val && lex_less(v[i], v[best]))) {
      val = s;
      best = i;
    }
  }
  return v[best];
}

Point steiner_point(const ConvexBody& K, const SphereQuadrature& Q) {
  if (Q.size() == 0) throw InputError("empty quadrature");
  if (Q.dimension() != K.dimension()) throw InputError("quadrature and body dimensions differ");
  const int m = K.dimension();
  const auto& v = K.vertices();
  const auto& nodes = Q.nodes();
  const auto& w = Q.weights();
  Point s(m);
  if (v.size() == 1) return v[0];
  // The Steiner point of a segment is its midpoint.
  if (v.size() == 2) return (v[0] + v[1]) * 0.5;
  if (Q.is_circle_rule() && m == 2) {
    // Maximizing vertex advances counterclockwise with the node angle.
    const std::size_t nv = v.size();
    std::size_t k = 0;
    double best = dot(v[0], nodes[0]);
    for (std::size_t i = 1; i < nv; ++i) {
      const double d = dot(v[i], nodes[0]);
      if (d > best) best = d, k = i;
    }
    double s0 = 0.0, s1 = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double p0 = nodes[j][0], p1 = nodes[j][1];
      double cur = v[k][0] * p0 + v[k][1] * p1;
      for (std::size_t step = 0; step < nv; ++step) {
        const std::size_t nxt = k + 1 == nv ? 0 : k + 1;
        const double d = v[nxt][0] * p0 + v[nxt][1] * p1;
        if (d <= cur) break;
        cur = d;
        k = nxt;
      }
      s0 += p0 * (w[j] * cur);
      s1 += p1 * (w[j] * cur);
    }
    s = Point{s0, s1};
  } else {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      double best = dot(v[0], nodes[j]);
      for (std::size_t i = 1; i < v.size(); ++i) best = std::max(best, dot(v[i], nodes[j]));
      s += nodes[j] * (w[j] * best);
    }
  }
  return s * static_cast<double>(m);
}

Point steiner_point_exact(const ConvexBody& K) {
  const auto& v = K.vertices();
  if (v.empty()) throw InputError("Steiner point of an empty body");
  if (K.dimension() == 3) throw InputError("exact Steiner point is available for m <= 2 only");
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return (v[0] + v[1]) * 0.5;
  const std::size_t n = v.size();
  double s0 = 0.0, s1 = 0.0, total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& prev = v[i == 0 ? n - 1 : i - 1];
    const Point& next = v[i + 1 == n ? 0 : i + 1];
    const double a0 = v[i][0] - prev[0], a1 = v[i][1] - prev[1];
    const double b0 = next[0] - v[i][0], b1 = next[1] - v[i][1];
    const double turn = std::atan2(a0 * b1 - a1 * b0, a0 * b0 + a1 * b1);
    s0 += turn * v[i][0];
    s1 += turn * v[i][1];
    total += turn;
  }
  return Point{s0 / total, s1 / total};
}

Projection project(const Point& y, const ConvexBody& K) {
  check_dims(K, y);
  const auto& v = K.vertices();
  switch (K.dimension()) {
    case 1: {
      const double lo = v.front()[0], hi = v.back()[0];
      if (y[0] >= lo && y[0] <= hi) return {y, 0.0};
      const Point q{std::clamp(y[0], lo, hi)};
      return {q, std::abs(y[0] - q[0])};
    }
    case 2:
      return project_2d(y, v);
    default: {
      std::vector<Point> shifted;
      shifted.reserve(v.size());
      for (const auto& p : v) shifted.push_back(p - y);
      const Point x = min_norm_point(shifted);
      const double d = norm(x);
      if (d <= 1e-13 * cloud_scale(v)) return {y, 0.0};
      return {y + x, d};
    }
  }
}

bool contains(const ConvexBody& K, const Point& y, double tol) { return project(y, K).distance <= tol; }

double directed_hausdorff(const ConvexBody& K, const ConvexBody& D) {
  if (K.dimension() != D.dimension()) throw InputError("Hausdorff distance of bodies in different dimensions");
  double h = 0.0;
  for (const auto& v : K.vertices()) h = std::max(h, project(v, D).distance);
  return h;
}

double hausdorff(const ConvexBody& K, const ConvexBody& D) {
  return std::max(directed_hausdorff(K, D), directed_hausdorff(D, K));
}

ConvexBody ball_intersect_P(const Point& y, const ConvexBody& K, const POperatorOptions& opt) {
  const Projection pr = project(y, K);
  if (pr.distance == 0.0) return ConvexBody::singleton(y);
  const double r = 2.0 * pr.distance;
  const auto& v = K.vertices();
  const int m = K.dimension();
  if (m == 1) {
    const double lo = std::max(v.front()[0], y[0] - r);
    const double hi = std::min(v.back()[0], y[0] + r);
    const Point pts[2] = {Point{lo}, Point{hi}};
    return ConvexBody::hull(pts);
  }
  std::vector<Point> cand;
  cand.reserve(v.size() + static_cast<std::size_t>(opt.boundary_samples) + 8);
  cand.push_back(pr.point);
  std::vector<char> inside(v.size());
  const double r2 = r * r;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double d2 = 0.0;
    for (int k = 0; k < m; ++k) d2 += (v[i][k] - y[k]) * (v[i][k] - y[k]);
    inside[i] = d2 <= r2;
    if (inside[i]) cand.push_back(v[i]);
  }
  if (m == 2) {
    const std::size_t n = v.size();
    if (n >= 2) {
      const std::size_t edges = n == 2 ? 1 : n;
      for (std::size_t i = 0; i < edges; ++i) {
        const std::size_t j = (i + 1) % n;
        // A convex ball contains every edge with both ends inside.
        if (!(inside[i] && inside[j])) segment_sphere(v[i], v[j], y, r, cand);
      }
    }
    if (n >= 3) {
      const auto& circle = unit_circle(opt.boundary_samples);
      for (const auto& [c, s] : circle) {
        const Point q{y[0] + r * c, y[1] + r * s};
        if (polygon_contains(v, q)) cand.push_back(q);
      }
    }
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) segment_sphere(v[i], v[j], y, r, cand);
    }
    // Fibonacci lattice on the bounding sphere.
    const int ns = opt.boundary_samples;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < ns; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / ns;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const Point q = y + Point{rho * std::cos(golden * k), rho * std::sin(golden * k), z} * r;
      if (contains(K, q, 0.0)) cand.push_back(q);
    }
  }
  return ConvexBody::hull(cand);
}

Point min_norm_point(std::span<const Point> P) {
  if (P.empty()) throw InputError("min-norm point of an empty set");
  const int m = P.front().dim();
  double scale2 = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const double n2 = squared_norm(P[i]);
    scale2 = std::max(scale2, n2);
    if (n2 < squared_norm(P[start])) start = i;
  }
  if (scale2 == 0.0) return P[start];
  const double eps = 1e-15 * scale2;

  std::vector<std::size_t> S{start};
  std::vector<double> lambda{1.0};
  Point x = P[start];

  auto affine_min = [&](const std::vector<std::size_t>& idx, std::vector<double>& mu) {
    const std::size_t s = idx.size();
    mu.assign(s, 0.0);
    if (s == 1) {
      mu[0] = 1.0;
      return;
    }
    Eigen::MatrixXd D(m, static_cast<Eigen::Index>(s - 1));
    Eigen::VectorXd rhs(m);
    const Point& p0 = P[idx[0]];
    for (int r = 0; r < m; ++r) {
      rhs(r) = -p0[r];
      for (std::size_t c = 1; c < s; ++c) D(r, static_cast<Eigen::Index>(c - 1)) = P[idx[c]][r] - p0[r];
    }
    const Eigen::VectorXd sol = D.completeOrthogonalDecomposition().solve(rhs);
    double sum = 0.0;
    for (std::size_t c = 1; c < s; ++c) {
      mu[c] = sol(static_cast<Eigen::Index>(c - 1));
      sum += mu[c];
    }
    mu[0] = 1.0 - sum;
  };

  std::vector<double> mu;
  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    double best = dot(x, P[0]);
    for (std::size_t i = 1; i < P.size(); ++i) {
      const double d = dot(x, P[i]);
      if (d < best) best = d, j = i;
    }
    if (squared_norm(x) - best <= 1e-12 * scale2) break;
    if (std::find(S.begin(), S.end(), j) != S.end()) break;
    if (S.size() == static_cast<std::size_t>(m) + 1) break;
    S.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 100; ++minor) {
      affine_min(S, mu);
      bool interior = true;
      for (double u : mu) interior = interior && u > eps;
      if (interior) {
        lambda = mu;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < S.size(); ++i) {
        if (mu[i] <= eps) {
          const double den = lambda[i] - mu[i];
          if (den > 0.0) theta = std::min(theta, lambda[i] / den);
        }
      }
      for (std::size_t i = 0; i < S.size(); ++i) lambda[i] += theta * (mu[i] - lambda[i]);
      std::vector<std::size_t> S2;
      std::vector<double> l2;
      for (std::size_t i = 0; i < S.size(); ++i) {
        if (lambda[i] > eps) {
          S2.push_back(S[i]);
          l2.push_back(lambda[i]);
        }
      }
      if (S2.empty()) {
        S2.push_back(j);
        l2.push_back(1.0);
      }
      double tot = 0.0;
      for (double l : l2) tot += l;
      for (double& l : l2) l /= tot;
      S = std::move(S2);
      lambda = std::move(l2);
    }
    x = Point(m);
    for (std::size_t i = 0; i < S.size(); ++i) x += P[S[i]] * lambda[i];
  }
  return x;
}

std::vector<Point> read_points_csv(const std::filesystem::path& path) {
  std::vector<Point> pts;
  for (const auto& row : io::read_csv_rows(path)) {
    if (!io::is_numeric_row(row)) {
      if (pts.empty()) continue;
      throw InputError(fmt::format("non-numeric row in '{}'", path.string()));
    }
    std::vector<double> c;
    for (const auto& f : row) c.push_back(io::parse_double(f));
    pts.push_back(Point::from_span(c));
  }
  return pts;
}

void write_points_csv(const std::filesystem::path& path, std::span<const Point> points) {
  std::string out;
  for (const auto& p : points) {
    for (int i = 0; i < p.dim(); ++i) {
      if (i) out += ',';
      out += io::format_double(p[i]);
    }
    out += '\n';
  }
  io::write_file_atomic(path, out);
}

ConvexBody read_body_csv(const std::filesystem::path& path) { return ConvexBody::hull(read_points_csv(path)); }

void write_body_csv(const std::filesystem::path& path, const ConvexBody& K) { write_points_csv(path, K.vertices()); }

SphereQuadrature read_quadrature_csv(const std::filesystem::path& path) {
  std::vector<Point> nodes;
  std::vector<double> weights;
  for (const auto& row : io::read_csv_rows(path)) {
    if (!io::is_numeric_row(row)) {
      if (nodes.empty()) continue;
      throw InputError(fmt::format("non-numeric row in '{}'", path.string()));
    }
    if (row.size() < 2 || row.size() > 4) throw InputError("quadrature rows are `x1,...,xm,w` with m <= 3");
    std::vector<double> c;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) c.push_back(io::parse_double(row[i]));
    nodes.push_back(Point::from_span(c));
    weights.push_back(io::parse_double(row.back()));
  }
  return SphereQuadrature::from_nodes(std::move(nodes), std::move(weights));
}

void write_quadrature_csv(const std::filesystem::path& path, const SphereQuadrature& Q) {
  std::string out;
  for (std::size_t j = 0; j < Q.size(); ++j) {
    for (int i = 0; i < Q.dimension(); ++i) out += io::format_double(Q.nodes()[j][i]) + ',';
    out += io::format_double(Q.weights()[j]) + '\n';
  }
  io::write_file_atomic(path, out);
}

}  // namespace hamrep::geometry
