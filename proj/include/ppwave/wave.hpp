#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ppwave/model.hpp"
#include "ppwave/trajectory.hpp"

namespace ppwave {

using ProfileState = Eigen::Vector4d;

struct WaveConfig {
  double c = 0;
  double rho = 0;     // c^2/d
  double sigma1 = 0;  // unset (NaN) when subcritical
  double sigma2 = 0;
  double c_star = 0;  // 2 sqrt(d (a31 - mu))
  bool subcritical = false;
  bool degenerate = false;  // c == c_star within rounding
};

WaveConfig wave_config(const ModelParams& p, double c);

// (X1(r1(1-X1)-a12 X2-a13 Y), X2(r2(1-X2)+a21 X1), rho(Y-Z), Y(-mu+a31 X1))
ProfileState profile_rhs(const ModelParams& p, const WaveConfig& cfg, const ProfileState& s);
Eigen::Matrix4d profile_jacobian(const ModelParams& p, const WaveConfig& cfg, const ProfileState& s);

// E* lifted to the Lienard coordinates: (u*, v*, w*, w*).
ProfileState estar_lift(const ModelParams& p);

enum class Face { Interior, Q1, Q2, Q3, Q4, Q5, P1, P2, Exterior };
const char* to_string(Face f);

// Membership with a 1e-12 tolerance band; Q-faces take priority over
// P-faces at shared edges.
Face classify_point(const WaveConfig& cfg, const ModelParams& p, const ProfileState& s);

struct BoundaryCheck {
  bool points_out = false;
  double ydot = 0;
  double zdot = 0;
};

// Outward-exit condition on P1/P2 (throws std::invalid_argument elsewhere):
// P1: ydot > 0 and zdot/ydot < sigma1; P2: ydot < 0 and zdot/ydot < sigma2.
BoundaryCheck boundary_vector_check(const WaveConfig& cfg, const ModelParams& p,
                                    const ProfileState& s);

struct UnstableSpectrum {
  double lambda0 = 0;  // -r1
  std::complex<double> lambda1, lambda2, lambda3;
  Eigen::Vector4cd h1, h2, h3;
  bool real_unstable = false;  // lambda2, lambda3 real (c >= c_star)
  bool degenerate = false;
};

UnstableSpectrum unstable_spectrum(const ModelParams& p, const WaveConfig& cfg);

// Linearized unstable-manifold point of the curve gamma:
// (x1(eps, eps, z), eps, eps, z) with z in [sigma1 eps, sigma2 eps].
ProfileState gamma_point(const ModelParams& p, const WaveConfig& cfg, double eps, double z);

enum class ShotVerdict { ExitP1, ExitP2, ExitOther, StayedToHorizon, ConvergedEstar };
const char* to_string(ShotVerdict v);

struct ShotOutcome {
  ShotVerdict verdict = ShotVerdict::StayedToHorizon;
  std::optional<double> exit_time;
  ProfileState final = ProfileState::Zero();
};

struct ProfileTrajectory {
  std::vector<double> times;
  std::vector<ProfileState> states;
};

ShotOutcome shoot(const ModelParams& p, const WaveConfig& cfg, const ProfileState& start,
                  double horizon, ProfileTrajectory* record = nullptr,
                  bool stop_on_convergence = true);

struct WaveLyapunov {
  double value = 0;
  double rate = 0;  // closed-form orbital derivative
};

// L = (a21/a12)(X1-u* lnX1) + (X2-v* lnX2)
//     + (a13 a21/(a12 a31)) [Y - w* lnY - (Y-Z)(1 - w*/Y)]
// rate = -(a21 r1/a12)(X1-u*)^2 - r2(X2-v*)^2
//        - w* (rho a13 a21/(a12 a31)) (Y-Z)^2/Y^2
WaveLyapunov wave_lyapunov(const ModelParams& p, const WaveConfig& cfg, const ProfileState& s);
Eigen::Vector4d wave_lyapunov_gradient(const ModelParams& p, const WaveConfig& cfg,
                                       const ProfileState& s);

struct WaveResult {
  double z_star = 0;
  double bracket_width = 0;
  double eps = 0;
  bool certified = false;
  double tail_distance = 0;  // sup-norm distance of the final state to E* lift
  int stages = 0;            // saddle re-bisection stages performed
  ProfileTrajectory trajectory;
  MonotonicityReport lyapunov;
};

// Bisection shooting along gamma for the E1 -> E* connection, followed by
// staged re-bisection at sections near E* (the lifted E* is a saddle of the
// 4D profile flow, so a single bisection pass cannot push the tail error
// below the section noise floor).
WaveResult find_wave(const ModelParams& p, const WaveConfig& cfg, double eps, double z_tol,
                     double horizon);

}  // namespace ppwave
