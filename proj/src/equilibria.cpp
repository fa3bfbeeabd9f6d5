#include "ppwave/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ppwave {

const char* to_string(EquilibriumName n) {
  switch (n) {
    case EquilibriumName::E0: return "E0";
    case EquilibriumName::E1: return "E1";
    case EquilibriumName::E2: return "E2";
    case EquilibriumName::E12: return "E12";
    case EquilibriumName::E13: return "E13";
    case EquilibriumName::Estar: return "Estar";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Unstable: return "Unstable";
    case Verdict::Saddle: return "Saddle";
    case Verdict::LocallyStable: return "LocallyStable";
    case Verdict::GloballyStableClaimed: return "GloballyStable-claimed";
  }
  return "?";
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::E2_GAS: return "E2_GAS";
    case Regime::E12_GAS: return "E12_GAS";
    case Regime::Estar_GAS: return "Estar_GAS";
  }
  return "?";
}

namespace {

double u12_of(const ModelParams& p) {
  return p.r2 * (p.r1 - p.a12) / (p.r1 * p.r2 + p.a12 * p.a21);
}

double v12_of(const ModelParams& p) {
  return p.r1 * (p.r2 + p.a21) / (p.r1 * p.r2 + p.a12 * p.a21);
}

}  // namespace

std::array<Equilibrium, 6> compute_equilibria(const ModelParams& p) {
  const AssumptionReport h = check_assumptions(p);
  std::array<Equilibrium, 6> out;

  out[0].name = EquilibriumName::E0;
  out[0].coords = {0, 0, 0};
  out[0].exists = true;

  out[1].name = EquilibriumName::E1;
  out[1].coords = {1, 0, 0};
  out[1].exists = true;

  out[2].name = EquilibriumName::E2;
  out[2].coords = {0, 1, 0};
  out[2].exists = true;

  out[3].name = EquilibriumName::E12;
  out[3].coords = {u12_of(p), v12_of(p), 0};
  out[3].exists = h.h1;

  out[4].name = EquilibriumName::E13;
  out[4].coords = {p.mu / p.a31, 0, p.r1 * (p.a31 - p.mu) / (p.a13 * p.a31)};
  out[4].exists = h.h2;

  out[5].name = EquilibriumName::Estar;
  const double ustar = p.mu / p.a31;
  const double vstar = 1 + p.a21 * p.mu / (p.a31 * p.r2);
  const double wstar = h.h3_value / (p.a13 * p.a31 * p.r2);
  out[5].coords = {ustar, vstar, wstar};
  out[5].exists = h.h3;

  return out;
}

Equilibrium classify_equilibrium(const ModelParams& p, const Equilibrium& e) {
  if (!e.exists)
    throw std::invalid_argument(std::string("cannot classify nonexistent equilibrium ") + to_string(e.name));

  Equilibrium out = e;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(reaction_jacobian(p, e.coords));
  Eigen::Vector3cd ev = solver.eigenvalues();
  std::array<std::complex<double>, 3> lam = {ev[0], ev[1], ev[2]};
  std::sort(lam.begin(), lam.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  out.eigenvalues << lam[0], lam[1], lam[2];

  const double tol = 1e-9;
  int n_pos = 0, n_neg = 0;
  for (const auto& l : lam) {
    if (l.real() > tol) ++n_pos;
    if (l.real() < -tol) ++n_neg;
  }
  if (n_pos >= 2)
    out.verdict = Verdict::Unstable;
  else if (n_pos == 1)
    out.verdict = Verdict::Saddle;
  else
    out.verdict = Verdict::LocallyStable;

  const RegimeVerdict rv = regime(p);
  const bool is_target =
      (rv.regime == Regime::E2_GAS && e.name == EquilibriumName::E2) ||
      (rv.regime == Regime::E12_GAS && e.name == EquilibriumName::E12) ||
      (rv.regime == Regime::Estar_GAS && e.name == EquilibriumName::Estar);
  if (is_target && n_pos == 0) out.verdict = Verdict::GloballyStableClaimed;

  out.classified = true;
  return out;
}

RegimeVerdict regime(const ModelParams& p) {
  RegimeVerdict rv;
  std::ostringstream w;
  if (p.r1 <= p.a12) {
    rv.regime = Regime::E2_GAS;
    w << "r1 = " << p.r1 << " <= a12 = " << p.a12;
  } else {
    const double threshold = p.a31 * u12_of(p);
    if (p.mu >= threshold) {
      rv.regime = Regime::E12_GAS;
      w << "r1 > a12 and mu = " << p.mu << " >= a31*u12 = " << threshold;
    } else {
      rv.regime = Regime::Estar_GAS;
      w << "r1 > a12 and mu = " << p.mu << " < a31*u12 = " << threshold;
    }
  }
  rv.witness = w.str();
  return rv;
}

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0)) throw std::domain_error(std::string(what) + " must be strictly positive for the Lyapunov function");
}

}  // namespace

double lyapunov_V12(const ModelParams& p, const OdeState& s) {
  require_positive(s[0], "u");
  require_positive(s[1], "v");
  const double alpha = p.a21 / p.a12;
  const double beta = p.a13 * p.a21 / (p.a12 * p.a31);
  return alpha * (s[0] - u12_of(p) * std::log(s[0])) + (s[1] - v12_of(p) * std::log(s[1])) + beta * s[2];
}

Eigen::Vector3d lyapunov_V12_gradient(const ModelParams& p, const OdeState& s) {
  require_positive(s[0], "u");
  require_positive(s[1], "v");
  const double alpha = p.a21 / p.a12;
  const double beta = p.a13 * p.a21 / (p.a12 * p.a31);
  return {alpha * (1 - u12_of(p) / s[0]), 1 - v12_of(p) / s[1], beta};
}

double lyapunov_V12_rate(const ModelParams& p, const OdeState& s) {
  const double du = s[0] - u12_of(p), dv = s[1] - v12_of(p);
  return -(p.r1 * p.a21 / p.a12) * du * du - p.r2 * dv * dv +
         (p.a13 * p.a21 / p.a12) * (u12_of(p) - p.mu / p.a31) * s[2];
}

namespace {

double ucoeff(const ModelParams& p, UCoefficient uc) {
  return uc == UCoefficient::AsPrinted ? p.a12 / p.a21 : p.a21 / p.a12;
}

}  // namespace

double lyapunov_Vstar(const ModelParams& p, const OdeState& s, UCoefficient uc) {
  require_positive(s[0], "u");
  require_positive(s[1], "v");
  require_positive(s[2], "w");
  const auto eq = compute_equilibria(p)[5].coords;
  const double beta = p.a13 * p.a21 / (p.a12 * p.a31);
  return ucoeff(p, uc) * (s[0] - eq[0] * std::log(s[0])) + (s[1] - eq[1] * std::log(s[1])) +
         beta * (s[2] - eq[2] * std::log(s[2]));
}

Eigen::Vector3d lyapunov_Vstar_gradient(const ModelParams& p, const OdeState& s, UCoefficient uc) {
  require_positive(s[0], "u");
  require_positive(s[1], "v");
  require_positive(s[2], "w");
  const auto eq = compute_equilibria(p)[5].coords;
  const double beta = p.a13 * p.a21 / (p.a12 * p.a31);
  return {ucoeff(p, uc) * (1 - eq[0] / s[0]), 1 - eq[1] / s[1], beta * (1 - eq[2] / s[2])};
}

double lyapunov_Vstar_rate(const ModelParams& p, const OdeState& s) {
  const auto eq = compute_equilibria(p)[5].coords;
  const double du = s[0] - eq[0], dv = s[1] - eq[1];
  return -(p.r1 * p.a21 / p.a12) * du * du - p.r2 * dv * dv;
}

}  // namespace ppwave
