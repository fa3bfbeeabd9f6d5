#pragma once

#include <array>
#include <string>

#include <Eigen/Dense>

#include "ppwave/model.hpp"

namespace ppwave {

enum class EquilibriumName { E0, E1, E2, E12, E13, Estar };
enum class Verdict { Unstable, Saddle, LocallyStable, GloballyStableClaimed };
enum class Regime { E2_GAS, E12_GAS, Estar_GAS };

const char* to_string(EquilibriumName n);
const char* to_string(Verdict v);
const char* to_string(Regime r);

struct Equilibrium {
  EquilibriumName name = EquilibriumName::E0;
  OdeState coords = OdeState::Zero();
  bool exists = false;
  Eigen::Vector3cd eigenvalues = Eigen::Vector3cd::Zero();
  Verdict verdict = Verdict::Unstable;
  bool classified = false;
};

struct RegimeVerdict {
  Regime regime = Regime::E2_GAS;
  std::string witness;
};

// Closed-form equilibria in the order E0, E1, E2, E12, E13, Estar.
// Coordinates are always the formula values; exists reflects H1/H2/H3.
std::array<Equilibrium, 6> compute_equilibria(const ModelParams& p);

// Eigenvalues of the reaction Jacobian at e.coords (sorted by descending
// real part) plus a verdict; the regime's target equilibrium is upgraded to
// GloballyStable-claimed. Throws std::invalid_argument if !e.exists.
Equilibrium classify_equilibrium(const ModelParams& p, const Equilibrium& e);

RegimeVerdict regime(const ModelParams& p);

// V12 = (a21/a12)(u - u12 ln u) + (v - v12 ln v) + (a13 a21/(a12 a31)) w
double lyapunov_V12(const ModelParams& p, const OdeState& s);
Eigen::Vector3d lyapunov_V12_gradient(const ModelParams& p, const OdeState& s);
// dV12/dt closed form: -(r1 a21/a12)(u-u12)^2 - r2 (v-v12)^2
//                      + (a13 a21/a12)(u12 - mu/a31) w
double lyapunov_V12_rate(const ModelParams& p, const OdeState& s);

// The u-coefficient of Vstar as printed is a12/a21, which is inconsistent
// with the printed derivative; a21/a12 is the derivative-consistent choice.
// Both are available; DerivativeConsistent is the default everywhere.
enum class UCoefficient { AsPrinted, DerivativeConsistent };

// Vstar = alpha (u - u* ln u) + (v - v* ln v) + (a13 a21/(a12 a31))(w - w* ln w)
double lyapunov_Vstar(const ModelParams& p, const OdeState& s,
                      UCoefficient uc = UCoefficient::DerivativeConsistent);
Eigen::Vector3d lyapunov_Vstar_gradient(const ModelParams& p, const OdeState& s,
                                        UCoefficient uc = UCoefficient::DerivativeConsistent);
// dVstar/dt closed form: -(r1 a21/a12)(u-u*)^2 - r2 (v-v*)^2
// (valid for the derivative-consistent coefficient)
double lyapunov_Vstar_rate(const ModelParams& p, const OdeState& s);

}  // namespace ppwave
