#include "ppwave/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ppwave {

namespace {

constexpr double kUndershootFloor = -1e-9;

}  // namespace

Trajectory integrate(const ModelParams& p, const OdeState& init, double t_end,
                     const StepControl& opts) {
  if (!state_valid(init)) throw std::invalid_argument("initial state must be finite and nonnegative");
  if (!(t_end > 0)) throw std::invalid_argument("t_end must be positive");
  for (double tol : {opts.rel_tol, opts.abs_tol})
    if (!(tol >= 1e-12 && tol <= 1e-3))
      throw std::invalid_argument("tolerances must lie in [1e-12, 1e-3]");

  StepControl ctl = opts;
  if (ctl.max_step <= 0) ctl.max_step = t_end / 100.0;

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(init);

  auto rhs = [&p](double, const OdeState& y) { return reaction_rhs(p, y); };

  auto filter = [&traj](OdeState& y1) {
    double tmin = y1.minCoeff();
    if (tmin < kUndershootFloor) return StepDecision::RejectHalve;
    if (tmin < 0) {
      // clamp tagged later with the accepted time by the observer
      for (int i = 0; i < 3; ++i)
        if (y1[i] < 0) y1[i] = 0;
      traj.events.push_back({std::numeric_limits<double>::quiet_NaN(), "clamp"});
    }
    return StepDecision::Accept;
  };

  auto observer = [&traj](const DenseStep<OdeState>&, double t, const OdeState& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    for (auto it = traj.events.rbegin(); it != traj.events.rend() && std::isnan(it->time); ++it)
      it->time = t;
    if (!y.allFinite()) return ObserverControl::Stop;
    return ObserverControl::Continue;
  };

  const IntegrateStatus status = dopri5<OdeState>(rhs, 0.0, t_end, init, ctl, filter, observer);
  if (!traj.states.back().allFinite())
    throw stiffness_error("non-finite state during integration", std::move(traj));
  if (status == IntegrateStatus::StepUnderflow)
    throw stiffness_error("step size underflow (stiffness)", std::move(traj));
  if (status == IntegrateStatus::MaxStepsExceeded)
    throw stiffness_error("maximum step count exceeded", std::move(traj));
  return traj;
}

BoundsReport check_bounds(const Trajectory& traj, const ModelParams& p) {
  if (traj.times.size() < 10)
    throw insufficient_data_error("bounds check requires at least 10 samples");

  BoundsReport r;
  r.M = p.r1 + p.mu;
  r.D = p.mu;
  const double t0 = traj.times.front(), t1 = traj.times.back();
  r.tail_start = t1 - 0.2 * (t1 - t0);

  const double ratio = p.a13 / p.a31;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    if (traj.times[i] < r.tail_start) continue;
    const OdeState& s = traj.states[i];
    r.u_sup_tail = std::max(r.u_sup_tail, s[0]);
    r.v_sup_tail = std::max(r.v_sup_tail, s[1]);
    r.combined_tail = std::max(r.combined_tail, s[0] + ratio * s[2]);
  }

  const double slack = 1e-3;
  r.u_ok = r.u_sup_tail <= 1.0 + slack;
  r.v_ok = r.v_sup_tail <= 1.0 + p.a21 / p.r2 + slack;
  r.combined_ok = r.combined_tail <= r.M / r.D + slack;
  return r;
}

std::optional<ConvergenceHit> detect_convergence(const Trajectory& traj,
                                                 const std::vector<Equilibrium>& targets,
                                                 double eps) {
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  if (traj.times.empty()) return std::nullopt;

  std::optional<ConvergenceHit> best;
  for (const auto& target : targets) {
    if (!target.exists) continue;
    const std::size_t n = traj.times.size();
    std::size_t onset = n;  // first index from which every state stays within eps
    for (std::size_t i = n; i-- > 0;) {
      if ((traj.states[i] - target.coords).cwiseAbs().maxCoeff() <= eps)
        onset = i;
      else
        break;
    }
    if (onset == n) continue;
    ConvergenceHit hit{target.name, traj.times[onset],
                       (traj.states.back() - target.coords).cwiseAbs().maxCoeff()};
    if (!best || hit.time < best->time ||
        (hit.time == best->time && hit.final_distance < best->final_distance))
      best = hit;
  }
  return best;
}

MonotonicityReport monitor_lyapunov(const Trajectory& traj, LyapunovKind which,
                                    const ModelParams& p) {
  MonotonicityReport rep;
  rep.samples = traj.times.size();
  if (traj.times.empty()) return rep;

  auto value = [&](const OdeState& s, std::size_t i) {
    const bool need_w = which == LyapunovKind::Vstar;
    if (!(s[0] > 0) || !(s[1] > 0) || (need_w && !(s[2] > 0))) {
      std::ostringstream msg;
      msg << "Lyapunov domain violation at sample " << i << " (t=" << traj.times[i]
          << "): state (" << s[0] << ", " << s[1] << ", " << s[2] << ")";
      throw std::domain_error(msg.str());
    }
    return which == LyapunovKind::V12 ? lyapunov_V12(p, s) : lyapunov_Vstar(p, s);
  };

  double prev = value(traj.states[0], 0);
  rep.initial_value = prev;
  rep.pass = true;
  for (std::size_t i = 1; i < traj.times.size(); ++i) {
    const double cur = value(traj.states[i], i);
    const double inc = cur - prev;
    const double normalized = inc / (1.0 + std::abs(prev));
    if (inc > rep.max_increment) rep.max_increment = inc;
    if (normalized > rep.max_normalized_increment) rep.max_normalized_increment = normalized;
    if (normalized > 1e-7 && rep.pass) {
      rep.pass = false;
      rep.first_violation_time = traj.times[i];
    }
    prev = cur;
  }
  rep.final_value = prev;
  return rep;
}

}  // namespace ppwave
