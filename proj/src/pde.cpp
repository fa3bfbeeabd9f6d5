#include "ppwave/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ppwave/errors.hpp"

namespace ppwave {

void validate_grid(const Grid1D& g) {
  if (!(g.length > 0)) throw config_error("grid length must be positive");
  if (g.n_cells < 16) {
    std::ostringstream msg;
    msg << "grid too coarse: n_cells = " << g.n_cells << " (minimum 16)";
    throw config_error(msg.str());
  }
}

Field1D make_scenario(int id, const Grid1D& grid) {
  validate_grid(grid);
  if (id < 1 || id > 3) throw config_error("scenario id must be 1, 2, or 3");

  const int n = grid.n_cells;
  Field1D f;
  f.u = Eigen::VectorXd::Zero(n);
  f.v = Eigen::VectorXd::Zero(n);
  f.w = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.cell_center(i);
    switch (id) {
      case 1:
        f.u[i] = 0.2;
        f.v[i] = 0.1;
        f.w[i] = (x >= 4.8 && x <= 5.2) ? 0.08 : 0.0;
        break;
      case 2:
        f.u[i] = 1.0;
        f.v[i] = (x >= 0.0 && x <= 5.0) ? 0.1 : 0.0;
        f.w[i] = (x >= 5.0 && x <= 10.0) ? 0.1 : 0.0;
        break;
      case 3:
        f.v[i] = 1.0;
        f.u[i] = (x >= 0.0 && x <= 5.0) ? 0.15 : 0.0;
        f.w[i] = (x >= 0.0 && x <= 5.0) ? 0.1 : 0.0;
        break;
    }
  }
  return f;
}

Field1D make_uniform(const Grid1D& grid, const OdeState& s) {
  validate_grid(grid);
  Field1D f;
  f.u = Eigen::VectorXd::Constant(grid.n_cells, s[0]);
  f.v = Eigen::VectorXd::Constant(grid.n_cells, s[1]);
  f.w = Eigen::VectorXd::Constant(grid.n_cells, s[2]);
  return f;
}

double cfl_dt(const ModelParams& p, const Grid1D& g) {
  return 0.4 * g.dx() * g.dx() / p.d;
}

namespace {

void check_field(const Grid1D& g, const Field1D& f) {
  if (f.u.size() != g.n_cells || f.v.size() != g.n_cells || f.w.size() != g.n_cells)
    throw std::invalid_argument("field arrays must match the grid cell count");
}

Eigen::VectorXd neumann_laplacian(const Eigen::VectorXd& w, double dx) {
  const Eigen::Index n = w.size();
  Eigen::VectorXd lap(n);
  const double inv = 1.0 / (dx * dx);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double left = (i > 0) ? w[i - 1] : w[i];
    const double right = (i + 1 < n) ? w[i + 1] : w[i];
    lap[i] = (left - 2.0 * w[i] + right) * inv;
  }
  return lap;
}

struct FieldDeriv {
  Eigen::VectorXd du, dv, dw;
};

FieldDeriv field_rhs(const ModelParams& p, const Grid1D& g, const Field1D& f,
                     bool with_diffusion) {
  FieldDeriv d;
  d.du = f.u.array() * (p.r1 * (1.0 - f.u.array()) - p.a12 * f.v.array() - p.a13 * f.w.array());
  d.dv = f.v.array() * (p.r2 * (1.0 - f.v.array()) + p.a21 * f.u.array());
  d.dw = f.w.array() * (p.a31 * f.u.array() - p.mu);
  if (with_diffusion) d.dw += p.d * neumann_laplacian(f.w, g.dx());
  return d;
}

Field1D rk4_step(const ModelParams& p, const Grid1D& g, const Field1D& f, double dt,
                 bool with_diffusion) {
  const FieldDeriv k1 = field_rhs(p, g, f, with_diffusion);
  Field1D s;
  s.time = f.time + 0.5 * dt;
  s.u = f.u + 0.5 * dt * k1.du;
  s.v = f.v + 0.5 * dt * k1.dv;
  s.w = f.w + 0.5 * dt * k1.dw;
  const FieldDeriv k2 = field_rhs(p, g, s, with_diffusion);
  s.u = f.u + 0.5 * dt * k2.du;
  s.v = f.v + 0.5 * dt * k2.dv;
  s.w = f.w + 0.5 * dt * k2.dw;
  const FieldDeriv k3 = field_rhs(p, g, s, with_diffusion);
  s.time = f.time + dt;
  s.u = f.u + dt * k3.du;
  s.v = f.v + dt * k3.dv;
  s.w = f.w + dt * k3.dw;
  const FieldDeriv k4 = field_rhs(p, g, s, with_diffusion);

  Field1D out;
  out.time = f.time + dt;
  const double c = dt / 6.0;
  out.u = f.u + c * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  out.v = f.v + c * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
  out.w = f.w + c * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
  return out;
}

// Crank-Nicolson solve for pure w diffusion: (I - a L) w1 = (I + a L) w0
void cn_diffuse(Eigen::VectorXd& w, double alpha, double dx) {
  const Eigen::Index n = w.size();
  const double r = alpha / (dx * dx);

  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double left = (i > 0) ? w[i - 1] : w[i];
    const double right = (i + 1 < n) ? w[i + 1] : w[i];
    rhs[i] = w[i] + r * (left - 2.0 * w[i] + right);
  }

  // tridiagonal Thomas sweep; Neumann rows have diagonal 1 + r at the ends
  Eigen::VectorXd diag(n), cprime(n);
  for (Eigen::Index i = 0; i < n; ++i)
    diag[i] = (i == 0 || i + 1 == n) ? 1.0 + r : 1.0 + 2.0 * r;
  const double lower = -r, upper = -r;

  cprime[0] = upper / diag[0];
  rhs[0] /= diag[0];
  for (Eigen::Index i = 1; i < n; ++i) {
    const double m = diag[i] - lower * cprime[i - 1];
    cprime[i] = upper / m;
    rhs[i] = (rhs[i] - lower * rhs[i - 1]) / m;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) rhs[i] -= cprime[i] * rhs[i + 1];
  w = rhs;
}

void clamp_field(Field1D& f, StepStats* stats) {
  auto clamp_one = [&](Eigen::VectorXd& a) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a[i] < 0.0) {
        if (a[i] < -1e-12 && stats) ++stats->clamp_events;
        a[i] = 0.0;
      }
    }
  };
  clamp_one(f.u);
  clamp_one(f.v);
  clamp_one(f.w);
}

}  // namespace

Field1D step(const ModelParams& p, const Grid1D& g, const Field1D& f, double dt,
             StepScheme scheme, StepStats* stats) {
  validate_params(p);
  validate_grid(g);
  check_field(g, f);
  if (!(dt > 0)) throw std::invalid_argument("dt must be positive");

  Field1D out;
  if (scheme == StepScheme::ExplicitRk4) {
    const double bound = cfl_dt(p, g);
    if (dt > bound * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "explicit step dt = " << dt << " violates the CFL bound 0.4*dx^2/d = " << bound;
      throw config_error(msg.str());
    }
    out = rk4_step(p, g, f, dt, true);
  } else {
    out = rk4_step(p, g, f, dt, false);
    cn_diffuse(out.w, 0.5 * dt * p.d, g.dx());
  }

  clamp_field(out, stats);
  if (stats) stats->cell_steps += 3 * g.n_cells;

  if (!out.u.allFinite() || !out.v.allFinite() || !out.w.allFinite())
    throw numerical_error("field became non-finite during time stepping");
  return out;
}

SpaceTimeRecord run(const ModelParams& p, const Grid1D& g, const Field1D& f0,
                    const RunOptions& opts) {
  validate_params(p);
  validate_grid(g);
  check_field(g, f0);
  if (!(opts.t_end > 0)) throw std::invalid_argument("t_end must be positive");
  if (!(opts.output_every > 0)) throw std::invalid_argument("output_every must be positive");

  double dt_max = opts.dt;
  if (dt_max <= 0)
    dt_max = (opts.scheme == StepScheme::ExplicitRk4) ? cfl_dt(p, g) : opts.output_every / 8.0;

  SpaceTimeRecord rec;
  rec.grid = g;

  Field1D f = f0;
  f.time = 0;
  rec.times.push_back(0.0);
  rec.snapshots.push_back(f);

  const long n_out = static_cast<long>(std::ceil(opts.t_end / opts.output_every - 1e-9));
  for (long k = 1; k <= n_out; ++k) {
    const double t_target = std::min(k * opts.output_every, opts.t_end);
    const double span = t_target - f.time;
    const long n_sub = std::max(1L, static_cast<long>(std::ceil(span / dt_max - 1e-12)));
    const double dt = span / n_sub;
    for (long j = 0; j < n_sub; ++j) f = step(p, g, f, dt, opts.scheme, &rec.stats);
    f.time = t_target;
    rec.times.push_back(t_target);
    rec.snapshots.push_back(f);
  }
  return rec;
}

FrontTrace front_speed(const SpaceTimeRecord& rec, double threshold, bool rightward) {
  if (!(threshold > 0)) throw std::invalid_argument("threshold must be positive");
  if (rec.snapshots.size() < 4)
    throw insufficient_data_error("front tracking needs at least 4 snapshots");

  const Grid1D& g = rec.grid;
  FrontTrace tr;
  tr.threshold = threshold;
  tr.rightward = rightward;

  for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
    const Eigen::VectorXd& w = rec.snapshots[k].w;
    const int n = static_cast<int>(w.size());
    double pos = std::numeric_limits<double>::quiet_NaN();
    if (rightward) {
      for (int i = n - 2; i >= 0; --i) {
        if (w[i] >= threshold && w[i + 1] < threshold) {
          const double frac = (w[i] - threshold) / (w[i] - w[i + 1]);
          pos = g.cell_center(i) + frac * g.dx();
          break;
        }
      }
    } else {
      for (int i = 0; i + 1 < n; ++i) {
        if (w[i] < threshold && w[i + 1] >= threshold) {
          const double frac = (threshold - w[i]) / (w[i + 1] - w[i]);
          pos = g.cell_center(i) + frac * g.dx();
          break;
        }
      }
    }
    if (std::isfinite(pos)) {
      tr.times.push_back(rec.times[k]);
      tr.positions.push_back(pos);
    }
  }

  if (tr.positions.size() < 4)
    throw insufficient_data_error("front never formed: too few threshold crossings");
  const auto [pmin, pmax] = std::minmax_element(tr.positions.begin(), tr.positions.end());
  if (*pmax - *pmin < 0.25 * g.length)
    throw insufficient_data_error("front traversed less than 25% of the domain");

  // least-squares line over the last half of the trace
  const std::size_t start = tr.positions.size() / 2;
  const std::size_t m = tr.positions.size() - start;
  double st = 0, sp = 0, stt = 0, stp = 0, spp = 0;
  for (std::size_t i = start; i < tr.positions.size(); ++i) {
    st += tr.times[i];
    sp += tr.positions[i];
    stt += tr.times[i] * tr.times[i];
    stp += tr.times[i] * tr.positions[i];
    spp += tr.positions[i] * tr.positions[i];
  }
  const double denom = m * stt - st * st;
  if (!(std::abs(denom) > 0))
    throw insufficient_data_error("degenerate time samples in front trace");
  tr.speed = (m * stp - st * sp) / denom;
  const double intercept = (sp - tr.speed * st) / m;
  double ss_res = 0;
  const double mean_p = sp / m;
  double ss_tot = 0;
  for (std::size_t i = start; i < tr.positions.size(); ++i) {
    const double fit = intercept + tr.speed * tr.times[i];
    ss_res += (tr.positions[i] - fit) * (tr.positions[i] - fit);
    ss_tot += (tr.positions[i] - mean_p) * (tr.positions[i] - mean_p);
  }
  tr.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  return tr;
}

}  // namespace ppwave
