#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

namespace ppwave {

struct StepControl {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double init_step = 1e-3;
  double max_step = 0;  // <= 0: chosen by the caller (t_end/100 for the ODE front end)
  std::int64_t max_steps = 4'000'000;
};

enum class StepDecision { Accept, RejectHalve };
enum class ObserverControl { Continue, Stop };

enum class IntegrateStatus { ReachedEnd, StoppedByObserver, StepUnderflow, MaxStepsExceeded };

// Dense-output segment of one accepted Dormand-Prince step over [t0, t0+h].
template <typename Vec>
struct DenseStep {
  double t0 = 0, h = 0;
  Vec c1, c2, c3, c4, c5;

  Vec eval(double t) const {
    const double theta = (t - t0) / h;
    const double theta1 = 1.0 - theta;
    return c1 + theta * (c2 + theta1 * (c3 + theta * (c4 + theta1 * c5)));
  }
};

// Dormand-Prince 5(4) with FSAL, PI step-size control and dense output.
// filter(y1) may clamp the proposed state and decide Accept/RejectHalve;
// observer(dense, t1, y1) runs on accepted steps and may stop the run.
template <typename Vec, typename Rhs, typename Filter, typename Observer>
IntegrateStatus dopri5(Rhs&& rhs, double t0, double t_end, const Vec& y0,
                       const StepControl& ctl, Filter&& filter, Observer&& observer) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;
  static constexpr double safe = 0.9, fac1 = 0.2, fac2 = 10.0, beta = 0.04;
  static constexpr double expo1 = 0.2 - beta * 0.75;

  const double span = t_end - t0;
  const double hmax = ctl.max_step > 0 ? ctl.max_step : std::abs(span);

  double t = t0;
  Vec y = y0;
  Vec k1 = rhs(t, y);
  double h = std::min({ctl.init_step, hmax, std::abs(span)});
  double facold = 1e-4;
  bool last_rejected = false;

  for (std::int64_t step = 0; step < ctl.max_steps; ++step) {
    if (t >= t_end) return IntegrateStatus::ReachedEnd;
    h = std::min(h, t_end - t);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) return IntegrateStatus::StepUnderflow;

    const Vec k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Vec k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vec k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec k6 = rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vec y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = rhs(t + h, y1);

    const Vec err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_sq = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double sk = ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
      const double e = err_vec[i] / sk;
      err_sq += e * e;
    }
    const double err = std::sqrt(err_sq / static_cast<double>(y.size()));

    const double fac11 = std::pow(std::max(err, 1e-32), expo1);
    if (err <= 1.0) {
      if (filter(y1) == StepDecision::RejectHalve) {
        h *= 0.5;
        last_rejected = true;
        continue;
      }
      DenseStep<Vec> dense;
      dense.t0 = t;
      dense.h = h;
      const Vec ydiff = y1 - y;
      const Vec bspl = h * k1 - ydiff;
      dense.c1 = y;
      dense.c2 = ydiff;
      dense.c3 = bspl;
      dense.c4 = ydiff - h * k7 - bspl;
      dense.c5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);

      const double t1 = t + h;
      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(1.0 / fac2, std::min(1.0 / fac1, fac / safe));
      double hnew = h / fac;
      facold = std::max(err, 1e-4);
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;

      t = t1;
      y = y1;
      k1 = k7;  // FSAL
      if (observer(dense, t, y) == ObserverControl::Stop) return IntegrateStatus::StoppedByObserver;
      h = std::min(hnew, hmax);
    } else {
      h = h / std::min(1.0 / fac1, fac11 / safe);
      last_rejected = true;
    }
  }
  return IntegrateStatus::MaxStepsExceeded;
}

}  // namespace ppwave
