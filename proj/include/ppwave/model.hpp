#pragma once

#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace ppwave {

// u: prey, v: generalist predator, w: specialist predator (only w diffuses).
template <typename Scalar>
struct ModelParamsT {
  Scalar r1, r2, mu;
  Scalar a12, a13, a21, a31;
  Scalar d = Scalar(1);
};

using ModelParams = ModelParamsT<double>;

using OdeState = Eigen::Vector3d;

namespace detail {
template <typename Scalar>
void require_finite(const Eigen::Matrix<Scalar, 3, 1>& s, const char* who) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    if (!s.allFinite()) throw std::invalid_argument(std::string(who) + " requires a finite state");
  }
}
}  // namespace detail

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> reaction_rhs(const ModelParamsT<Scalar>& p,
                                         const Eigen::Matrix<Scalar, 3, 1>& s) {
  detail::require_finite(s, "reaction_rhs");
  const Scalar u = s[0], v = s[1], w = s[2];
  return {u * (p.r1 * (1 - u) - p.a12 * v - p.a13 * w),
          v * (p.r2 * (1 - v) + p.a21 * u),
          w * (-p.mu + p.a31 * u)};
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> reaction_jacobian(const ModelParamsT<Scalar>& p,
                                              const Eigen::Matrix<Scalar, 3, 1>& s) {
  detail::require_finite(s, "reaction_jacobian");
  const Scalar u = s[0], v = s[1], w = s[2];
  Eigen::Matrix<Scalar, 3, 3> j;
  j << p.r1 * (1 - 2 * u) - p.a12 * v - p.a13 * w, -p.a12 * u, -p.a13 * u,
       p.a21 * v, p.r2 * (1 - 2 * v) + p.a21 * u, Scalar(0),
       p.a31 * w, Scalar(0), -p.mu + p.a31 * u;
  return j;
}

struct AssumptionReport {
  bool h1 = false;       // r1 > a12
  bool h2 = false;       // a31 > mu
  bool h3 = false;       // h3_value > 0
  double h3_value = 0;   // r1 r2 a31 - r1 r2 mu - a12 a31 r2 - a12 a21 mu
};

AssumptionReport check_assumptions(const ModelParams& p);

// True iff all eight fields are finite and strictly positive.
bool params_valid(const ModelParams& p);

// Throws config_error naming the offending field otherwise.
void validate_params(const ModelParams& p);

bool state_finite(const OdeState& s);

// Biological validity: finite and componentwise nonnegative.
bool state_valid(const OdeState& s);

void require_finite_state(const OdeState& s);

}  // namespace ppwave
