#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppwave/equilibria.hpp"
#include "ppwave/errors.hpp"
#include "ppwave/model.hpp"
#include "ppwave/rk45.hpp"

namespace ppwave {

struct TrajectoryEvent {
  double time = 0;
  std::string tag;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<OdeState> states;
  std::vector<TrajectoryEvent> events;
};

struct stiffness_error : numerical_error {
  Trajectory partial;
  stiffness_error(const std::string& msg, Trajectory traj)
      : numerical_error(msg), partial(std::move(traj)) {}
};

// Adaptive 5(4) integration of the reaction system. Undershoot below -1e-9
// rejects the step and halves; in [-1e-9, 0) the state is clamped to zero
// with a "clamp:<component>" event. Tolerances must lie in [1e-12, 1e-3].
Trajectory integrate(const ModelParams& p, const OdeState& init, double t_end,
                     const StepControl& opts = {});

struct BoundsReport {
  double u_sup_tail = 0;
  double v_sup_tail = 0;
  double combined_tail = 0;  // sup of u + (a13/a31) w
  double M = 0;              // r1 + mu
  double D = 0;              // mu
  double tail_start = 0;
  bool u_ok = false;         // u_sup_tail <= 1 + slack
  bool v_ok = false;         // v_sup_tail <= 1 + a21/r2 + slack
  bool combined_ok = false;  // combined_tail <= M/D + slack
};

// Tail window = last 20% of the time span; slack 1e-3 on each bound.
BoundsReport check_bounds(const Trajectory& traj, const ModelParams& p);

struct ConvergenceHit {
  EquilibriumName name;
  double time = 0;       // earliest time after which the tail stays within eps
  double final_distance = 0;
};

std::optional<ConvergenceHit> detect_convergence(const Trajectory& traj,
                                                 const std::vector<Equilibrium>& targets,
                                                 double eps);

enum class LyapunovKind { V12, Vstar };

struct MonotonicityReport {
  bool pass = false;
  double max_increment = 0;             // largest raw positive increment
  double max_normalized_increment = 0;  // max of dV / (1 + |V|)
  double first_violation_time = 0;
  std::size_t samples = 0;
  double initial_value = 0;
  double final_value = 0;
};

// Pass iff every consecutive increment satisfies dV <= 1e-7 * (1 + |V|).
MonotonicityReport monitor_lyapunov(const Trajectory& traj, LyapunovKind which,
                                    const ModelParams& p);

}  // namespace ppwave
