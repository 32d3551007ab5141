#include "hamrep/bolza.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hamrep/error.hpp"
#include "hamrep/io.hpp"
#include "hamrep/parallel.hpp"

namespace hamrep::bolza {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGridSlack = 1e-12;

struct Move {
  double v = 0.0;
  double cost = 0.0;
  std::optional<Point> a;
};

using MoveFn = std::function<std::vector<Move>(double t, double x)>;

double trapezoid(std::span<const double> y, double t0, double T) {
  if (y.size() < 2) return 0.0;
  const double h = (T - t0) / static_cast<double>(y.size() - 1);
  double s = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

std::vector<double> time_grid(const BolzaSpec& spec) {
  if (spec.T == spec.t0) return {spec.t0};
  std::vector<double> t(static_cast<std::size_t>(spec.Nt) + 1);
  const double h = (spec.T - spec.t0) / spec.Nt;
  for (int k = 0; k <= spec.Nt; ++k) t[k] = spec.t0 + k * h;
  t.back() = spec.T;
  return t;
}

std::vector<double> state_grid(double radius, int Nx) {
  std::vector<double> x(static_cast<std::size_t>(Nx));
  const double n = Nx - 1;
  for (int j = 0; j < Nx; ++j) x[j] = radius * (2.0 * j - n) / n;
  return x;
}

void check_shape(const BolzaSpec& spec) {
  if (!(spec.T >= spec.t0)) throw InputError("bolza horizon needs T >= t0");
  if (spec.Nt < 1) throw InputError("bolza needs Nt >= 1");
  if (spec.Nx < 2) throw InputError("bolza needs Nx >= 2");
  if (!(spec.M >= 0.0) || !std::isfinite(spec.M)) throw InputError("bolza bound M must be finite and nonnegative");
  if (!(spec.radius >= 0.0)) throw InputError("bolza grid radius must be nonnegative");
  if (!spec.cost.phi && !(spec.cost.x0 && spec.cost.g)) throw InputError("bolza endpoint cost is empty");
}

double interpolate_raw(const std::vector<double>& x, const double* V, double y) {
  const std::size_t n = x.size();
  const double lo = x.front(), hi = x.back();
  if (y < lo - kGridSlack || y > hi + kGridSlack) return kInf;
  const double h = (hi - lo) / static_cast<double>(n - 1);
  double s = (std::clamp(y, lo, hi) - lo) / h;
  auto i = static_cast<std::size_t>(std::floor(s));
  if (i >= n - 1) i = n - 2;
  double w = s - static_cast<double>(i);
  if (std::abs(y - x[i]) <= kGridSlack) return V[i];
  if (std::abs(y - x[i + 1]) <= kGridSlack) return V[i + 1];
  w = std::clamp(w, 0.0, 1.0);
  if (V[i] == kInf || V[i + 1] == kInf) return kInf;
  return (1.0 - w) * V[i] + w * V[i + 1];
}

struct DpRun {
  std::vector<double> t, x;
  std::vector<double> W;  // (Nt+1) x Nx, row-major in k
  double h_t = 0.0;
};

struct Best {
  double value = kInf;
  std::size_t index = 0;
};

Best best_move(const std::vector<Move>& moves, double y, double h, const std::vector<double>& x, const double* next) {
  Best b;
  for (std::size_t m = 0; m < moves.size(); ++m) {
    const double tail = interpolate_raw(x, next, y + h * moves[m].v);
    if (tail == kInf || moves[m].cost == kInf) continue;
    const double val = h * moves[m].cost + tail;
    if (val < b.value) b = {val, m};
  }
  return b;
}

// Backward DP for one terminal slice. Slices of moves are rebuilt per time
// step unless `autonomous`, in which case slice 0 is reused.
DpRun run_dp(const std::vector<double>& t, const std::vector<double>& x, const std::vector<double>& terminal,
             const MoveFn& moves, bool autonomous, std::vector<std::vector<Move>>* cache) {
  DpRun run;
  run.t = t;
  run.x = x;
  const std::size_t K = t.size(), N = x.size();
  run.W.assign(K * N, kInf);
  std::copy(terminal.begin(), terminal.end(), run.W.begin() + static_cast<std::ptrdiff_t>((K - 1) * N));
  if (K < 2) return run;
  run.h_t = t[1] - t[0];
  std::vector<std::vector<Move>> local;
  std::vector<std::vector<Move>>& slice = cache ? *cache : local;
  for (std::size_t kk = K - 1; kk-- > 0;) {
    const double h = t[kk + 1] - t[kk];
    if (!autonomous || slice.size() != N) {
      slice.assign(N, {});
      parallel_for(N, [&](std::size_t j) { slice[j] = moves(t[kk], x[j]); });
    }
    const double* next = run.W.data() + (kk + 1) * N;
    double* cur = run.W.data() + kk * N;
    parallel_for(N, [&](std::size_t j) { cur[j] = best_move(slice[j], x[j], h, x, next).value; });
  }
  return run;
}

std::vector<ArcPoint> forward_arc(const DpRun& run, double z, const MoveFn& moves) {
  std::vector<ArcPoint> arc;
  const std::size_t K = run.t.size(), N = run.x.size();
  double y = z;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    const auto opts = moves(run.t[k], y);
    const double h = run.t[k + 1] - run.t[k];
    const Best b = best_move(opts, y, h, run.x, run.W.data() + (k + 1) * N);
    if (b.value == kInf) break;
    arc.push_back({run.t[k], y, opts[b.index].v, opts[b.index].a});
    y += h * opts[b.index].v;
  }
  if (arc.size() + 1 == K) arc.push_back({run.t.back(), y, 0.0, std::nullopt});
  return arc;
}

ValueTable to_table(const DpRun& run) {
  ValueTable tab;
  tab.t = run.t;
  tab.x = run.x;
  tab.V.reserve(run.W.size());
  for (double w : run.W) tab.V.push_back(w == kInf ? ExtReal::infinity() : ExtReal(w));
  return tab;
}

double grid_radius(const BolzaSpec& spec, const models::HamiltonianModel& H) {
  const double R = gronwall_radius(spec, H);
  return spec.radius > 0.0 ? spec.radius : R;
}

// Largest dom grid spacing over the states of the grid at the time nodes
// (only t0 when autonomous).
double max_velocity_gap(const BolzaSpec& spec, const models::HamiltonianModel& H, const models::LagrangianModel& L,
                        const std::vector<double>& t, const std::vector<double>& x) {
  double gap = 0.0;
  const std::size_t nt = H.autonomous ? 1 : t.size();
  for (std::size_t k = 0; k < nt; ++k) {
    for (double xj : x) {
      const auto v = epigraph::dom_nodes(L.dom(t[k], xj), spec.velocity_grid);
      for (std::size_t i = 1; i < v.size(); ++i) gap = std::max(gap, v[i] - v[i - 1]);
    }
  }
  return gap;
}

MoveFn variational_moves(const BolzaSpec& spec, const models::HamiltonianModel& H, const models::LagrangianModel& L) {
  return [&spec, &H, &L](double t, double x) {
    const double cap = H.c(t) * (1.0 + std::abs(x)) * (1.0 + kGridSlack) + kGridSlack;
    std::vector<Move> out;
    for (double v : epigraph::dom_nodes(L.dom(t, x), spec.velocity_grid)) {
      if (std::abs(v) > cap) continue;
      const ExtReal l = L.L(t, x, v);
      if (l.is_finite()) out.push_back({v, l.value(), std::nullopt});
    }
    return out;
  };
}

MoveFn control_moves(const BolzaSpec& spec, const representation::Representation& rep) {
  auto cloud = std::make_shared<std::vector<Point>>(representation::control_cloud(spec.cloud, spec.seed));
  return [&rep, cloud](double t, double x) {
    const auto loc = rep.at(t, x);
    std::vector<Point> controls = loc.graph_controls();
    controls.insert(controls.end(), cloud->begin(), cloud->end());
    std::vector<Move> out;
    out.reserve(controls.size());
    for (const Point& a : controls) {
      const Point e = loc.e(a);
      out.push_back({e[0], e[1], a});
    }
    return out;
  };
}

BolzaResult solve(const BolzaSpec& spec, const models::HamiltonianModel& H, const models::LagrangianModel& L,
                  const MoveFn& moves) {
  validate(spec, H);
  BolzaResult res;
  res.radius = grid_radius(spec, H);
  const auto t = time_grid(spec);
  const auto x = state_grid(res.radius, spec.Nx);
  res.h_t = t.size() > 1 ? t[1] - t[0] : 0.0;
  res.h_x = x[1] - x[0];
  res.sample_gap = (spec.T - spec.t0) * max_velocity_gap(spec, H, L, t, x);
  res.value = ExtReal::infinity();
  res.status = "INFEASIBLE";

  std::vector<double> starts;
  if (spec.cost.x0) {
    starts.push_back(*spec.cost.x0);
  } else {
    for (double z : x) {
      for (double y : x) {
        if (spec.cost(z, y).is_finite()) {
          starts.push_back(z);
          break;
        }
      }
    }
  }

  std::vector<std::vector<Move>> cache;
  bool have = false;
  for (double z : starts) {
    std::vector<double> terminal(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) terminal[j] = spec.cost(z, x[j]).raw();
    DpRun run = run_dp(t, x, terminal, moves, H.autonomous, &cache);
    const double v0 = interpolate_raw(x, run.W.data(), z);
    if (v0 == kInf) continue;
    if (!have || v0 < res.value.raw()) {
      have = true;
      res.value = ExtReal(v0);
      res.arc = forward_arc(run, z, moves);
      res.table = to_table(run);
      res.status = "OK";
    }
  }
  return res;
}

ValueTable value_table(const BolzaSpec& spec, const models::HamiltonianModel& H, const MoveFn& moves) {
  check_shape(spec);
  if (!spec.cost.g) throw InputError("value function needs a terminal cost g");
  const double R = grid_radius(spec, H);
  const auto t = time_grid(spec);
  const auto x = state_grid(R, spec.Nx);
  std::vector<double> terminal(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) terminal[j] = spec.cost.g(x[j]).raw();
  std::vector<std::vector<Move>> cache;
  return to_table(run_dp(t, x, terminal, moves, H.autonomous, &cache));
}

}  // namespace

EndpointCost EndpointCost::terminal(double x0, std::function<ExtReal(double)> g) {
  EndpointCost c;
  c.x0 = x0;
  c.g = std::move(g);
  return c;
}

EndpointCost EndpointCost::general(std::function<ExtReal(double, double)> phi) {
  EndpointCost c;
  c.phi = std::move(phi);
  return c;
}

ExtReal EndpointCost::operator()(double z, double x) const {
  if (phi) return phi(z, x);
  if (!x0 || !g) throw InputError("endpoint cost is empty");
  if (std::abs(z - *x0) > kGridSlack) return ExtReal::infinity();
  return g(x);
}

double gronwall_radius(double M, std::span<const double> c_samples, double t0, double T) {
  if (!(M >= 0.0) || !std::isfinite(M)) throw InputError("Gronwall bound M must be finite and nonnegative");
  for (double c : c_samples) {
    if (!(c >= 0.0)) throw InputError("growth samples must be nonnegative");
  }
  const double I = trapezoid(c_samples, t0, T);
  return (M + I) * std::exp(I);
}

double gronwall_radius(const BolzaSpec& spec, const models::HamiltonianModel& H) {
  check_shape(spec);
  const auto t = time_grid(spec);
  std::vector<double> c(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) c[k] = H.c(t[k]);
  return gronwall_radius(spec.M, c, spec.t0, spec.T);
}

ExtReal ValueTable::interpolate(std::size_t k, double y) const {
  if (k >= t.size()) throw InputError("time index out of range");
  std::vector<double> row(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) row[j] = at(k, j).raw();
  const double v = interpolate_raw(x, row.data(), y);
  return v == kInf ? ExtReal::infinity() : ExtReal(v);
}

double ValueTable::lipschitz_modulus(std::size_t k) const {
  double q = 0.0;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    const ExtReal a = at(k, j), b = at(k, j + 1);
    if (a.is_infinite() || b.is_infinite()) continue;
    q = std::max(q, std::abs(b.value() - a.value()) / (x[j + 1] - x[j]));
  }
  return q;
}

void ValueTable::write_csv(const std::filesystem::path& path) const {
  std::ostringstream os;
  os << "t,x,V\n";
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      os << io::format_double(t[k]) << ',' << io::format_double(x[j]) << ',' << io::format_double(at(k, j).raw())
         << '\n';
    }
  }
  io::write_file_atomic(path, os.str());
}

void validate(const BolzaSpec& spec, const models::HamiltonianModel& H) {
  check_shape(spec);
  const double R = gronwall_radius(spec, H);
  if (spec.radius > 0.0 && spec.radius < R) throw InputError("state grid radius is below the Gronwall radius");
  const auto x = state_grid(spec.radius > 0.0 ? spec.radius : R, spec.Nx);
  const double M = spec.M * (1.0 + kGridSlack) + kGridSlack;
  if (spec.cost.x0) {
    if (std::abs(*spec.cost.x0) <= M) return;
    for (double y : x) {
      if (spec.cost.g(y).is_finite() && std::abs(y) > M) throw InputError("endpoint cost violates the M condition");
    }
    return;
  }
  for (double z : x) {
    for (double y : x) {
      if (spec.cost(z, y).is_finite() && std::min(std::abs(z), std::abs(y)) > M) {
        throw InputError("endpoint cost violates the M condition");
      }
    }
  }
}

BolzaResult solve_variational(const BolzaSpec& spec, const models::HamiltonianModel& H,
                              const models::LagrangianModel& L) {
  return solve(spec, H, L, variational_moves(spec, H, L));
}

BolzaResult solve_control(const BolzaSpec& spec, const representation::Representation& rep) {
  return solve(spec, rep.hamiltonian(), rep.lagrangian(), control_moves(spec, rep));
}

ValueTable value_function(const BolzaSpec& spec, const models::HamiltonianModel& H,
                          const models::LagrangianModel& L) {
  return value_table(spec, H, variational_moves(spec, H, L));
}

ValueTable value_function(const BolzaSpec& spec, const representation::Representation& rep) {
  return value_table(spec, rep.hamiltonian(), control_moves(spec, rep));
}

double lower_bound(const BolzaSpec& spec, const models::HamiltonianModel& H) {
  const double R = gronwall_radius(spec, H);
  const auto t = time_grid(spec);
  const auto x = state_grid(spec.radius > 0.0 ? spec.radius : R, spec.Nx);
  double lo = kInf;
  if (spec.cost.x0) {
    if (std::abs(*spec.cost.x0) <= R) {
      for (double y : x) {
        if (std::abs(y) <= R) lo = std::min(lo, spec.cost.g(y).raw());
      }
    }
  } else {
    for (double z : x) {
      if (std::abs(z) > R) continue;
      for (double y : x) {
        if (std::abs(y) <= R) lo = std::min(lo, spec.cost(z, y).raw());
      }
    }
  }
  const double D = lo == kInf ? 0.0 : std::max(0.0, -lo);
  std::vector<double> k(t.size()), h0(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    k[i] = H.k(t[i], R);
    h0[i] = std::abs(H.H(t[i], 0.0, 0.0));
  }
  return -D - R * trapezoid(k, spec.t0, spec.T) - trapezoid(h0, spec.t0, spec.T);
}

void write_arc_csv(const std::filesystem::path& path, const std::vector<ArcPoint>& arc) {
  const bool control = std::any_of(arc.begin(), arc.end(), [](const ArcPoint& p) { return p.a.has_value(); });
  std::ostringstream os;
  os << (control ? "t,x,v,a1,a2\n" : "t,x,v\n");
  for (const auto& p : arc) {
    os << io::format_double(p.t) << ',' << io::format_double(p.x) << ',' << io::format_double(p.v);
    if (control) {
      const double a1 = p.a ? (*p.a)[0] : 0.0, a2 = p.a ? (*p.a)[1] : 0.0;
      os << ',' << io::format_double(a1) << ',' << io::format_double(a2);
    }
    os << '\n';
  }
  io::write_file_atomic(path, os.str());
}

}  // namespace hamrep::bolza
