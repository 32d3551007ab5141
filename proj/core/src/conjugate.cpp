#include "hamrep/conjugate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "hamrep/error.hpp"
#include "hamrep/io.hpp"
#include "hamrep/parallel.hpp"

namespace hamrep::conjugate {
namespace {

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// Lower convex envelope of finite samples evaluated at every node in the
// span of the finite nodes (monotone chain on the lower side).
std::vector<double> lower_envelope(const std::vector<double>& v, const std::vector<double>& g, std::size_t first,
                                   std::size_t last) {
  std::vector<std::size_t> h;
  for (std::size_t i = first; i <= last; ++i) {
    if (!std::isfinite(g[i])) continue;
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2], b = h.back();
      const double cr = (v[b] - v[a]) * (g[i] - g[a]) - (g[b] - g[a]) * (v[i] - v[a]);
      if (cr <= 0.0) {
        h.pop_back();
      } else {
        break;
      }
    }
    h.push_back(i);
  }
  std::vector<double> env(v.size(), std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const std::size_t a = h[k], b = h[k + 1];
    for (std::size_t i = a; i <= b; ++i) {
      const double s = (v[i] - v[a]) / (v[b] - v[a]);
      env[i] = i == a ? g[a] : (i == b ? g[b] : g[a] + s * (g[b] - g[a]));
    }
  }
  if (h.size() == 1) env[h[0]] = g[h[0]];
  return env;
}

}  // namespace

Axis Axis::spanning(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo)) throw InputError("axis needs hi > lo and at least two nodes");
  return Axis{lo, (hi - lo) / (count - 1), count};
}

Axis Axis::with_step(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw InputError("axis needs a positive step and hi >= lo");
  const int count = static_cast<int>(std::ceil((hi - lo) / step - 1e-9)) + 1;
  return Axis{lo, step, count};
}

Grid::Grid(Axis a) : axes_{a} {
  if (a.count < 1 || !(a.step > 0.0)) throw InputError("grid axes must be strictly increasing");
}

Grid::Grid(Axis a, Axis b) : axes_{a, b} {
  for (const auto& ax : axes_) {
    if (ax.count < 1 || !(ax.step > 0.0)) throw InputError("grid axes must be strictly increasing");
  }
}

std::size_t Grid::size() const {
  std::size_t n = axes_.empty() ? 0 : 1;
  for (const auto& a : axes_) n *= static_cast<std::size_t>(a.count);
  return n;
}

Point Grid::node(std::size_t flat) const {
  if (axes_.size() == 1) return Point{axes_[0].node(static_cast<int>(flat))};
  const auto nb = static_cast<std::size_t>(axes_[1].count);
  return Point{axes_[0].node(static_cast<int>(flat / nb)), axes_[1].node(static_cast<int>(flat % nb))};
}

void GridFunction::validate() const {
  if (grid.dimension() < 1 || grid.dimension() > 2) throw InputError("grid functions are 1-D or 2-D");
  if (values.size() != grid.size()) throw InputError("grid function has the wrong number of values");
  for (const auto& v : values) {
    if (v.is_finite()) return;
  }
  throw PropernessError("grid function is +inf at every node");
}

Axis padded_slope_axis(double bound, double h) {
  const double w = 1.2 * std::max(bound, h);
  return Axis::with_step(-w, w, h);
}

GridFunction conjugate_grid(const GridFunction& g, const Grid& dual) {
  g.validate();
  if (dual.dimension() != g.grid.dimension()) throw InputError("dual grid dimension differs from the primal grid");
  std::vector<Point> nodes;
  std::vector<double> vals;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (g.values[i].is_finite()) {
      nodes.push_back(g.grid.node(i));
      vals.push_back(g.values[i].value());
    }
  }
  GridFunction out{dual, std::vector<ExtReal>(dual.size())};
  parallel_for(dual.size(), [&](std::size_t j) {
    const Point p = dual.node(j);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) best = std::max(best, dot(p, nodes[i]) - vals[i]);
    out.values[j] = ExtReal(best);
  });
  return out;
}

GridFunction episum(const GridFunction& phi, const GridFunction& psi) {
  phi.validate();
  psi.validate();
  const int dim = phi.grid.dimension();
  if (psi.grid.dimension() != dim) throw InputError("episum of grid functions in different dimensions");
  std::vector<Axis> axes;
  for (int k = 0; k < dim; ++k) {
    const Axis& a = phi.grid.axes()[static_cast<std::size_t>(k)];
    const Axis& b = psi.grid.axes()[static_cast<std::size_t>(k)];
    // A single-node axis carries no spacing of its own.
    double step = a.step;
    if (a.count > 1 && b.count > 1) {
      if (!same_step(a.step, b.step)) throw InputError("episum needs a common grid spacing");
    } else if (a.count == 1) {
      step = b.step;
    }
    axes.push_back(Axis{a.lo + b.lo, step, a.count + b.count - 1});
  }
  GridFunction out;
  out.grid = dim == 1 ? Grid(axes[0]) : Grid(axes[0], axes[1]);
  out.values.assign(out.grid.size(), ExtReal::infinity());
  if (dim == 1) {
    const int na = phi.grid.axes()[0].count, nb = psi.grid.axes()[0].count;
    parallel_for(out.values.size(), [&](std::size_t w) {
      ExtReal best = ExtReal::infinity();
      const int iw = static_cast<int>(w);
      for (int i = std::max(0, iw - nb + 1); i <= std::min(na - 1, iw); ++i) {
        best = std::min(best, phi.values[static_cast<std::size_t>(i)] + psi.values[static_cast<std::size_t>(iw - i)]);
      }
      out.values[w] = best;
    });
  } else {
    const int na0 = phi.grid.axes()[0].count, na1 = phi.grid.axes()[1].count;
    const int nb0 = psi.grid.axes()[0].count, nb1 = psi.grid.axes()[1].count;
    const int nw1 = axes[1].count;
    parallel_for(out.values.size(), [&](std::size_t w) {
      const int w0 = static_cast<int>(w) / nw1, w1 = static_cast<int>(w) % nw1;
      ExtReal best = ExtReal::infinity();
      for (int i0 = std::max(0, w0 - nb0 + 1); i0 <= std::min(na0 - 1, w0); ++i0) {
        for (int i1 = std::max(0, w1 - nb1 + 1); i1 <= std::min(na1 - 1, w1); ++i1) {
          const auto a = static_cast<std::size_t>(i0 * na1 + i1);
          const auto b = static_cast<std::size_t>((w0 - i0) * nb1 + (w1 - i1));
          best = std::min(best, phi.values[a] + psi.values[b]);
        }
      }
      out.values[w] = best;
    });
  }
  return out;
}

ExtReal ConeConjugate::operator()(double v) const {
  if (std::abs(v) <= radius) return ExtReal(level);
  return ExtReal::infinity();
}

ExtReal ConeConjugate::operator()(const Point& v) const {
  if (norm(v) <= radius) return ExtReal(level);
  return ExtReal::infinity();
}

ConeConjugate conjugate_of_cone_term(double k, double delta) {
  if (!(k >= 0.0) || !(delta >= 0.0)) throw InputError("cone term needs k >= 0 and delta >= 0");
  const double r = k * delta;
  return ConeConjugate{r, r == 0.0 ? 0.0 : -r};
}

BiconjugateReport biconjugate_check(const GridFunction& g) {
  g.validate();
  if (g.grid.dimension() != 1) throw InputError("biconjugate_check supports 1-D grids");
  const std::size_t n = g.values.size();
  std::vector<double> v(n), gv(n);
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = g.grid.node(i)[0];
    gv[i] = g.values[i].raw();
    if (g.values[i].is_finite()) {
      first = std::min(first, i);
      last = i;
    }
  }
  BiconjugateReport rep;
  rep.envelope = lower_envelope(v, gv, first, last);

  // Slope window of the envelope, padded by 20%.
  double smin = 0.0, smax = 0.0;
  bool any = false;
  for (std::size_t i = first; i < last; ++i) {
    const double s = (rep.envelope[i + 1] - rep.envelope[i]) / (v[i + 1] - v[i]);
    smin = any ? std::min(smin, s) : s;
    smax = any ? std::max(smax, s) : s;
    any = true;
  }
  const double pad = 0.2 * std::max({std::abs(smin), std::abs(smax), 1.0});
  const int m = std::max<int>(64, static_cast<int>(n));
  const Axis dual_axis = Axis::spanning(smin - pad, smax + pad, m);
  const GridFunction gs = conjugate_grid(g, Grid(dual_axis));

  std::vector<double> fv, fg;
  for (std::size_t i = first; i <= last; ++i) {
    if (std::isfinite(gv[i])) fv.push_back(v[i]), fg.push_back(gv[i]);
  }
  auto exact_conj = [&](double p) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fv.size(); ++i) best = std::max(best, p * fv[i] - fg[i]);
    return best;
  };

  rep.biconjugate.assign(n, std::numeric_limits<double>::infinity());
  parallel_for(last - first + 1, [&](std::size_t off) {
    const std::size_t i = first + off;
    int k = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double val = dual_axis.node(j) * v[i] - gs.values[static_cast<std::size_t>(j)].raw();
      if (val > best) best = val, k = j;
    }
    // Golden-section refinement of the concave map p -> p v - g*(p).
    double a = dual_axis.node(std::max(0, k - 1)), b = dual_axis.node(std::min(m - 1, k + 1));
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = c * v[i] - exact_conj(c), fd = d * v[i] - exact_conj(d);
    for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (fc >= fd) {
        b = d, d = c, fd = fc;
        c = b - r * (b - a);
        fc = c * v[i] - exact_conj(c);
      } else {
        a = c, c = d, fc = fd;
        d = a + r * (b - a);
        fd = d * v[i] - exact_conj(d);
      }
    }
    rep.biconjugate[i] = std::max({best, fc, fd});
  });
  for (std::size_t i = first; i <= last; ++i) {
    const double dev = std::abs(rep.biconjugate[i] - rep.envelope[i]);
    if (dev > rep.max_deviation || rep.worst_node < 0) {
      rep.max_deviation = dev;
      rep.worst_node = static_cast<int>(i);
    }
  }
  return rep;
}

GridFunction read_grid_function_csv(const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  for (const auto& row : io::read_csv_rows(path)) {
    if (!io::is_numeric_row(row)) {
      if (rows.empty()) continue;
      throw InputError(fmt::format("non-numeric row in '{}'", path.string()));
    }
    std::vector<double> r;
    for (const auto& f : row) r.push_back(io::parse_double(f));
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw InputError(fmt::format("no data rows in '{}'", path.string()));
  const std::size_t width = rows.front().size();
  if (width != 2 && width != 3) throw InputError("grid function rows are `v,value` or `v1,v2,value`");
  const int dim = static_cast<int>(width) - 1;
  std::vector<Axis> axes;
  for (int k = 0; k < dim; ++k) {
    std::vector<double> c;
    for (const auto& r : rows) {
      if (r.size() != width) throw InputError("ragged grid function file");
      c.push_back(r[static_cast<std::size_t>(k)]);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (c.size() == 1) {
      axes.push_back(Axis{c[0], 1.0, 1});
      continue;
    }
    const double h = (c.back() - c.front()) / static_cast<double>(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (std::abs(c[i] - c[i - 1] - h) > 1e-9 * std::max(1.0, h)) throw InputError("grid function nodes are not uniform");
    }
    axes.push_back(Axis{c.front(), h, static_cast<int>(c.size())});
  }
  GridFunction g;
  g.grid = dim == 1 ? Grid(axes[0]) : Grid(axes[0], axes[1]);
  g.values.assign(g.grid.size(), ExtReal::infinity());
  std::vector<bool> seen(g.grid.size(), false);
  for (const auto& r : rows) {
    std::size_t flat = 0;
    for (int k = 0; k < dim; ++k) {
      const Axis& a = axes[static_cast<std::size_t>(k)];
      const auto idx = static_cast<std::size_t>(std::lround((r[static_cast<std::size_t>(k)] - a.lo) / a.step));
      flat = flat * static_cast<std::size_t>(a.count) + idx;
    }
    if (seen[flat]) throw InputError("duplicate node in grid function file");
    seen[flat] = true;
    g.values[flat] = ExtReal(r.back());
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw InputError("grid function file misses nodes");
  g.validate();
  return g;
}

void write_grid_function_csv(const std::filesystem::path& path, const GridFunction& g) {
  std::string out = g.grid.dimension() == 1 ? "v,value\n" : "v1,v2,value\n";
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const Point p = g.grid.node(i);
    for (int k = 0; k < p.dim(); ++k) out += io::format_double(p[k]) + ',';
    out += io::format_double(g.values[i].raw()) + '\n';
  }
  io::write_file_atomic(path, out);
}

}  // namespace hamrep::conjugate
