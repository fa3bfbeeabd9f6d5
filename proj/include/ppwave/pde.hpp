#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ppwave/model.hpp"

namespace ppwave {

struct Grid1D {
  double length = 10.0;
  int n_cells = 200;

  double dx() const { return length / n_cells; }
  double cell_center(int i) const { return (i + 0.5) * dx(); }
};

// throws config_error when length <= 0 or n_cells < 16
void validate_grid(const Grid1D& g);

struct Field1D {
  Eigen::VectorXd u, v, w;
  double time = 0;
};

Field1D make_scenario(int id, const Grid1D& grid);
Field1D make_uniform(const Grid1D& grid, const OdeState& s);

enum class StepScheme { ExplicitRk4, ImplicitDiffusion };

// largest stable explicit step for the w diffusion term
double cfl_dt(const ModelParams& p, const Grid1D& g);

struct StepStats {
  std::int64_t clamp_events = 0;
  std::int64_t cell_steps = 0;
};

// one time step of the method-of-lines system; u and v are reaction-only,
// w adds the second-difference Laplacian with zero-flux ghost cells
Field1D step(const ModelParams& p, const Grid1D& g, const Field1D& f, double dt,
             StepScheme scheme = StepScheme::ExplicitRk4, StepStats* stats = nullptr);

struct SpaceTimeRecord {
  Grid1D grid;
  std::vector<double> times;
  std::vector<Field1D> snapshots;
  StepStats stats;

  const Field1D& terminal() const { return snapshots.back(); }
};

struct RunOptions {
  double t_end = 300.0;
  double output_every = 1.0;
  double dt = 0;  // 0 selects the CFL bound (explicit) or output_every/8 (implicit)
  StepScheme scheme = StepScheme::ExplicitRk4;
};

SpaceTimeRecord run(const ModelParams& p, const Grid1D& g, const Field1D& f0,
                    const RunOptions& opts);

struct FrontTrace {
  std::vector<double> times;
  std::vector<double> positions;
  double speed = 0;
  double r_squared = 0;
  double threshold = 0;
  bool rightward = true;
};

// tracks the theta-crossing of w closest to the advancing boundary and fits a
// line through the last half of the trace; requires the front to traverse at
// least a quarter of the domain
FrontTrace front_speed(const SpaceTimeRecord& rec, double threshold, bool rightward = true);

}  // namespace ppwave
