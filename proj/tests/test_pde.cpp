#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ppwave/equilibria.hpp"
#include "ppwave/errors.hpp"
#include "ppwave/pde.hpp"
#include "ppwave/trajectory.hpp"

using namespace ppwave;

namespace {

ModelParams sec4_params() {
  ModelParams p;
  p.r1 = 0.7;
  p.r2 = 0.3;
  p.mu = 0.15;
  p.a12 = 0.15;
  p.a13 = 0.5;
  p.a21 = 0.2;
  p.a31 = 0.5;
  p.d = 1.0;
  return p;
}

Grid1D grid_of(int n, double length = 10.0) {
  Grid1D g;
  g.n_cells = n;
  g.length = length;
  return g;
}

// index of the cell whose center is nearest x
int cell_at(const Grid1D& g, double x) {
  return static_cast<int>(std::floor(x / g.dx()));
}

}  // namespace

TEST_CASE("grid geometry and validation") {
  const Grid1D g = grid_of(200);
  CHECK(g.dx() == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(g.cell_center(0) == doctest::Approx(0.025));
  CHECK(g.cell_center(199) == doctest::Approx(9.975));

  CHECK_THROWS_AS(validate_grid(grid_of(8)), config_error);
  CHECK_THROWS_AS(validate_grid(grid_of(200, -1.0)), config_error);
  try {
    validate_grid(grid_of(8));
  } catch (const config_error& e) {
    CHECK(std::string(e.what()).find("n_cells = 8") != std::string::npos);
  }
}

TEST_CASE("initial scenarios place species on the intended subintervals") {
  const Grid1D g = grid_of(200);

  const Field1D s1 = make_scenario(1, g);
  CHECK(s1.u.minCoeff() == 0.2);
  CHECK(s1.u.maxCoeff() == 0.2);
  CHECK(s1.v.minCoeff() == 0.1);
  CHECK(s1.w[cell_at(g, 5.0)] == 0.08);
  CHECK(s1.w[cell_at(g, 4.85)] == 0.08);
  CHECK(s1.w[cell_at(g, 4.7)] == 0.0);
  CHECK(s1.w[cell_at(g, 5.3)] == 0.0);
  // support width: 0.4 over dx 0.05 gives 8 cells
  CHECK((s1.w.array() > 0).count() == 8);

  const Field1D s2 = make_scenario(2, g);
  CHECK(s2.u.minCoeff() == 1.0);
  CHECK(s2.v[cell_at(g, 4.9)] == 0.1);
  CHECK(s2.v[cell_at(g, 5.1)] == 0.0);
  CHECK(s2.w[cell_at(g, 4.9)] == 0.0);
  CHECK(s2.w[cell_at(g, 5.1)] == 0.1);

  const Field1D s3 = make_scenario(3, g);
  CHECK(s3.v.minCoeff() == 1.0);
  CHECK(s3.u[cell_at(g, 2.0)] == 0.15);
  CHECK(s3.u[cell_at(g, 7.0)] == 0.0);
  CHECK(s3.w[cell_at(g, 2.0)] == 0.1);
  CHECK(s3.w[cell_at(g, 7.0)] == 0.0);

  CHECK_THROWS_AS(make_scenario(0, g), config_error);
  CHECK_THROWS_AS(make_scenario(4, g), config_error);
  CHECK_THROWS_AS(make_scenario(1, grid_of(4)), config_error);
}

TEST_CASE("uniform coexistence state is a discrete fixed point") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(64);
  const OdeState estar = compute_equilibria(p)[5].coords;
  const Field1D f0 = make_uniform(g, estar);

  for (StepScheme scheme : {StepScheme::ExplicitRk4, StepScheme::ImplicitDiffusion}) {
    const Field1D f1 = step(p, g, f0, 0.005, scheme);
    CHECK((f1.u - f0.u).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((f1.v - f0.v).cwiseAbs().maxCoeff() <= 1e-13);
    CHECK((f1.w - f0.w).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("a vanished specialist never reappears") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(32);
  Field1D f = make_uniform(g, OdeState(0.8, 0.4, 0.0));
  for (int k = 0; k < 50; ++k) f = step(p, g, f, 0.01, StepScheme::ExplicitRk4);
  CHECK(f.w.cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.u.minCoeff() > 0.0);
  CHECK(f.v.minCoeff() > 0.0);
}

TEST_CASE("total specialist mass follows the decay stability polynomial when prey is absent") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(200);
  const double dt = 0.001;
  // with u = 0 the w equation is linear and the discrete Laplacian conserves mass,
  // so one step multiplies the total by the quartic stability polynomial at -mu*dt
  const double z = -p.mu * dt;
  const double factor = 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));

  Field1D f0;
  f0.u = Eigen::VectorXd::Zero(g.n_cells);
  f0.v = Eigen::VectorXd::Constant(g.n_cells, 0.5);
  f0.w = Eigen::VectorXd::NullaryExpr(g.n_cells, [&](Eigen::Index i) {
    const double x = g.cell_center(static_cast<int>(i));
    return std::exp(-(x - 5.0) * (x - 5.0));
  });
  const double m0 = f0.w.sum();

  for (StepScheme scheme : {StepScheme::ExplicitRk4, StepScheme::ImplicitDiffusion}) {
    StepStats stats;
    const Field1D f1 = step(p, g, f0, dt, scheme, &stats);
    CHECK(stats.clamp_events == 0);
    CHECK(f1.u.cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(f1.w.sum() - factor * m0) <= 1e-12 * m0);
  }
}

TEST_CASE("explicit stepping enforces the CFL bound") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(200);
  const Field1D f = make_scenario(1, g);
  const double bound = cfl_dt(p, g);
  CHECK(bound == doctest::Approx(0.4 * 0.05 * 0.05).epsilon(1e-12));

  CHECK_NOTHROW(step(p, g, f, bound, StepScheme::ExplicitRk4));
  CHECK_THROWS_AS(step(p, g, f, bound * 1.01, StepScheme::ExplicitRk4), config_error);
  // the implicit scheme has no such restriction
  CHECK_NOTHROW(step(p, g, f, 0.1, StepScheme::ImplicitDiffusion));

  CHECK_THROWS_AS(step(p, g, f, 0.0, StepScheme::ExplicitRk4), std::invalid_argument);
  Field1D wrong = f;
  wrong.u.resize(5);
  CHECK_THROWS_AS(step(p, g, wrong, 0.001, StepScheme::ExplicitRk4), std::invalid_argument);
}

TEST_CASE("negative cells are clamped and counted") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(32);
  Field1D f = make_uniform(g, OdeState(0.0, 0.0, 0.0));
  f.w[5] = -1e-6;

  StepStats stats;
  const Field1D f1 = step(p, g, f, 1e-4, StepScheme::ExplicitRk4, &stats);
  CHECK(stats.clamp_events >= 1);
  CHECK(f1.w.minCoeff() == 0.0);
  CHECK(stats.cell_steps == 3 * g.n_cells);
}

TEST_CASE("uniform fields reduce the dynamics to the pointwise system") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(32);
  const OdeState s0(0.5, 0.5, 0.5);
  const Field1D f0 = make_uniform(g, s0);

  StepControl ctrl;
  ctrl.rel_tol = 1e-10;
  ctrl.abs_tol = 1e-12;
  const OdeState ref = integrate(p, s0, 10.0, ctrl).states.back();

  for (StepScheme scheme : {StepScheme::ExplicitRk4, StepScheme::ImplicitDiffusion}) {
    RunOptions opts;
    opts.t_end = 10.0;
    opts.output_every = 1.0;
    opts.dt = 0.01;
    opts.scheme = scheme;
    const SpaceTimeRecord rec = run(p, g, f0, opts);
    const Field1D& fin = rec.terminal();

    // no spatial gradient forms beyond vectorized rounding noise
    CHECK(fin.u.maxCoeff() - fin.u.minCoeff() <= 1e-12);
    CHECK(fin.v.maxCoeff() - fin.v.minCoeff() <= 1e-12);
    CHECK(fin.w.maxCoeff() - fin.w.minCoeff() <= 1e-12);
    CHECK(std::abs(fin.u[0] - ref[0]) <= 1e-6);
    CHECK(std::abs(fin.v[0] - ref[1]) <= 1e-6);
    CHECK(std::abs(fin.w[0] - ref[2]) <= 1e-6);
  }
}

TEST_CASE("run produces the requested snapshot cadence") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(32);
  const Field1D f0 = make_scenario(1, g);

  RunOptions opts;
  opts.t_end = 2.5;
  opts.output_every = 1.0;
  const SpaceTimeRecord rec = run(p, g, f0, opts);

  REQUIRE(rec.times.size() == 4);
  CHECK(rec.times[0] == 0.0);
  CHECK(rec.times[1] == 1.0);
  CHECK(rec.times[2] == 2.0);
  CHECK(rec.times[3] == 2.5);
  CHECK(rec.snapshots.size() == rec.times.size());
  CHECK(rec.terminal().time == 2.5);
  CHECK(rec.stats.cell_steps > 0);

  RunOptions bad = opts;
  bad.t_end = 0.0;
  CHECK_THROWS_AS(run(p, g, f0, bad), std::invalid_argument);
  bad = opts;
  bad.output_every = 0.0;
  CHECK_THROWS_AS(run(p, g, f0, bad), std::invalid_argument);
}

TEST_CASE("implicit and explicit schemes agree at matched step size") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(64);
  const Field1D f0 = make_scenario(1, g);

  RunOptions oe;
  oe.t_end = 5.0;
  oe.output_every = 1.0;
  oe.dt = 0.005;
  oe.scheme = StepScheme::ExplicitRk4;
  RunOptions oi = oe;
  oi.scheme = StepScheme::ImplicitDiffusion;

  const SpaceTimeRecord re = run(p, g, f0, oe);
  const SpaceTimeRecord ri = run(p, g, f0, oi);
  const Field1D& a = re.terminal();
  const Field1D& b = ri.terminal();
  CHECK((a.u - b.u).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK((a.v - b.v).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK((a.w - b.w).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("halving the mesh leaves the solution essentially unchanged") {
  const ModelParams p = sec4_params();
  const Grid1D gc = grid_of(200), gf = grid_of(400);
  RunOptions opts;
  opts.t_end = 20.0;
  opts.output_every = 5.0;

  const SpaceTimeRecord rc = run(p, gc, make_scenario(1, gc), opts);
  const SpaceTimeRecord rf = run(p, gf, make_scenario(1, gf), opts);
  const Field1D& coarse = rc.terminal();
  const Field1D& fine = rf.terminal();

  double worst = 0;
  for (int i = 0; i < gc.n_cells; ++i) {
    worst = std::max(worst, std::abs(coarse.u[i] - 0.5 * (fine.u[2 * i] + fine.u[2 * i + 1])));
    worst = std::max(worst, std::abs(coarse.v[i] - 0.5 * (fine.v[2 * i] + fine.v[2 * i + 1])));
    worst = std::max(worst, std::abs(coarse.w[i] - 0.5 * (fine.w[2 * i] + fine.w[2 * i + 1])));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("front tracking recovers the speed of a translating profile") {
  Grid1D g = grid_of(200);
  const double c = 1.2, k = 2.0, x0 = 1.0, theta = 0.05;

  // snapshot spacing chosen so the shift is an exact number of cells and the
  // interpolation bias cancels between snapshots
  SpaceTimeRecord rec;
  rec.grid = g;
  for (int s = 0; s <= 10; ++s) {
    const double t = 0.5 * s;
    Field1D f;
    f.time = t;
    f.u = Eigen::VectorXd::Zero(g.n_cells);
    f.v = Eigen::VectorXd::Zero(g.n_cells);
    f.w = Eigen::VectorXd::NullaryExpr(g.n_cells, [&](Eigen::Index i) {
      const double x = g.cell_center(static_cast<int>(i));
      return 1.0 / (1.0 + std::exp(k * (x - x0 - c * t)));
    });
    rec.times.push_back(t);
    rec.snapshots.push_back(f);
  }

  const FrontTrace tr = front_speed(rec, theta, true);
  CHECK(tr.speed == doctest::Approx(c).epsilon(1e-10));
  CHECK(tr.r_squared >= 1.0 - 1e-12);
  CHECK(tr.positions.size() == 11);
  const double offset = std::log(1.0 / theta - 1.0) / k;
  CHECK(tr.positions.front() == doctest::Approx(x0 + offset).epsilon(1e-3));

  // mirrored profile moving left carries a negative fitted slope
  SpaceTimeRecord mirror = rec;
  for (std::size_t s = 0; s < mirror.snapshots.size(); ++s) {
    const double t = mirror.times[s];
    mirror.snapshots[s].w = Eigen::VectorXd::NullaryExpr(g.n_cells, [&](Eigen::Index i) {
      const double x = g.cell_center(static_cast<int>(i));
      return 1.0 / (1.0 + std::exp(k * ((10.0 - x0) - c * t - x)));
    });
  }
  const FrontTrace lt = front_speed(mirror, theta, false);
  CHECK(lt.speed == doctest::Approx(-c).epsilon(1e-10));
}

TEST_CASE("front tracking refuses traces that cannot support a fit") {
  Grid1D g = grid_of(200);
  SpaceTimeRecord rec;
  rec.grid = g;
  for (int s = 0; s < 8; ++s) {
    Field1D f;
    f.time = s;
    f.u = Eigen::VectorXd::Zero(g.n_cells);
    f.v = Eigen::VectorXd::Zero(g.n_cells);
    f.w = Eigen::VectorXd::NullaryExpr(
        g.n_cells, [&](Eigen::Index i) { return g.cell_center(static_cast<int>(i)) < 5.0 ? 1.0 : 0.0; });
    rec.times.push_back(s);
    rec.snapshots.push_back(f);
  }

  // stationary interface: crossings exist but never move
  CHECK_THROWS_AS(front_speed(rec, 0.05, true), insufficient_data_error);

  // no crossing at all
  SpaceTimeRecord flat = rec;
  for (auto& f : flat.snapshots) f.w.setConstant(1.0);
  CHECK_THROWS_AS(front_speed(flat, 0.05, true), insufficient_data_error);

  // too few snapshots
  SpaceTimeRecord shortrec = rec;
  shortrec.times.resize(3);
  shortrec.snapshots.resize(3);
  CHECK_THROWS_AS(front_speed(shortrec, 0.05, true), insufficient_data_error);

  CHECK_THROWS_AS(front_speed(rec, 0.0, true), std::invalid_argument);
}

TEST_CASE("localized specialist inoculation spreads and settles at coexistence") {
  const ModelParams p = sec4_params();
  const Grid1D g = grid_of(128);
  RunOptions opts;
  opts.t_end = 150.0;
  opts.output_every = 10.0;
  const SpaceTimeRecord rec = run(p, g, make_scenario(1, g), opts);
  const Field1D& fin = rec.terminal();

  const OdeState estar = compute_equilibria(p)[5].coords;
  CHECK((fin.u.array() - estar[0]).abs().maxCoeff() <= 1e-6);
  CHECK((fin.v.array() - estar[1]).abs().maxCoeff() <= 1e-6);
  CHECK((fin.w.array() - estar[2]).abs().maxCoeff() <= 1e-6);
}
