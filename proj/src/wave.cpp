#include "ppwave/wave.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ppwave/errors.hpp"

namespace ppwave {

namespace {

constexpr double kFaceTol = 1e-12;
constexpr double kConvergeEps = 1e-6;
constexpr double kTailEps = 1e-3;

double vmax_of(const ModelParams& p) { return 1.0 + p.a21 / p.r2; }

StepControl shot_control() {
  StepControl ctl;
  ctl.rel_tol = 1e-12;
  ctl.abs_tol = 1e-13;
  ctl.init_step = 1e-3;
  ctl.max_step = 0.25;
  return ctl;
}

}  // namespace

WaveConfig wave_config(const ModelParams& p, double c) {
  validate_params(p);
  if (!check_assumptions(p).h2)
    throw std::invalid_argument("wave analysis requires a31 > mu (H2)");
  if (!(c > 0)) throw std::invalid_argument("wave speed c must be positive");

  WaveConfig cfg;
  cfg.c = c;
  cfg.rho = c * c / p.d;
  cfg.c_star = 2.0 * std::sqrt(p.d * (p.a31 - p.mu));
  const double disc = cfg.rho * cfg.rho - 4.0 * cfg.rho * (p.a31 - p.mu);
  cfg.degenerate = disc == 0;
  cfg.subcritical = disc <= 0;
  cfg.sigma1 = cfg.subcritical ? std::numeric_limits<double>::quiet_NaN()
                               : (cfg.rho + std::sqrt(disc)) / (2.0 * cfg.rho);
  cfg.sigma2 = (cfg.rho + std::sqrt(cfg.rho * cfg.rho + 4.0 * cfg.rho * p.mu)) / (2.0 * cfg.rho);
  return cfg;
}

ProfileState profile_rhs(const ModelParams& p, const WaveConfig& cfg, const ProfileState& s) {
  const double x1 = s[0], x2 = s[1], y = s[2], z = s[3];
  return {x1 * (p.r1 * (1 - x1) - p.a12 * x2 - p.a13 * y),
          x2 * (p.r2 * (1 - x2) + p.a21 * x1),
          cfg.rho * (y - z),
          y * (-p.mu + p.a31 * x1)};
}

Eigen::Matrix4d profile_jacobian(const ModelParams& p, const WaveConfig& cfg, const ProfileState& s) {
  const double x1 = s[0], x2 = s[1], y = s[2];
  Eigen::Matrix4d j;
  j << p.r1 * (1 - 2 * x1) - p.a12 * x2 - p.a13 * y, -p.a12 * x1, -p.a13 * x1, 0,
       p.a21 * x2, p.r2 * (1 - 2 * x2) + p.a21 * x1, 0, 0,
       0, 0, cfg.rho, -cfg.rho,
       p.a31 * y, 0, -p.mu + p.a31 * x1, 0;
  return j;
}

ProfileState estar_lift(const ModelParams& p) {
  const double us = p.mu / p.a31;
  const double vs = 1.0 + p.a21 * p.mu / (p.a31 * p.r2);
  const double ws = check_assumptions(p).h3_value / (p.a13 * p.a31 * p.r2);
  return {us, vs, ws, ws};
}

const char* to_string(Face f) {
  switch (f) {
    case Face::Interior: return "Interior";
    case Face::Q1: return "Q1";
    case Face::Q2: return "Q2";
    case Face::Q3: return "Q3";
    case Face::Q4: return "Q4";
    case Face::Q5: return "Q5";
    case Face::P1: return "P1";
    case Face::P2: return "P2";
    case Face::Exterior: return "Exterior";
  }
  return "?";
}

Face classify_point(const WaveConfig& cfg, const ModelParams& p, const ProfileState& s) {
  const double x1 = s[0], x2 = s[1], y = s[2], z = s[3];
  const double vmax = vmax_of(p);

  const bool in_closure = x1 >= -kFaceTol && x1 <= 1 + kFaceTol &&
                          x2 >= -kFaceTol && x2 <= vmax + kFaceTol &&
                          y >= -kFaceTol &&
                          z >= cfg.sigma1 * y - kFaceTol && z <= cfg.sigma2 * y + kFaceTol;
  if (!in_closure) return Face::Exterior;

  if (std::abs(x1) <= kFaceTol) return Face::Q1;
  if (std::abs(x1 - 1) <= kFaceTol) return Face::Q2;
  if (std::abs(x2) <= kFaceTol) return Face::Q3;
  if (std::abs(x2 - vmax) <= kFaceTol) return Face::Q4;
  if (std::abs(y) <= kFaceTol && std::abs(z) <= kFaceTol) return Face::Q5;
  if (std::abs(z - cfg.sigma1 * y) <= kFaceTol) return Face::P1;
  if (std::abs(z - cfg.sigma2 * y) <= kFaceTol) return Face::P2;
  return Face::Interior;
}

BoundaryCheck boundary_vector_check(const WaveConfig& cfg, const ModelParams& p,
                                    const ProfileState& s) {
  const Face f = classify_point(cfg, p, s);
  if (f != Face::P1 && f != Face::P2)
    throw std::invalid_argument(std::string("boundary_vector_check requires a P1/P2 point, got ") + to_string(f));
  const ProfileState ds = profile_rhs(p, cfg, s);
  BoundaryCheck b;
  b.ydot = ds[2];
  b.zdot = ds[3];
  if (f == Face::P1)
    b.points_out = b.ydot > 0 && b.zdot / b.ydot < cfg.sigma1;
  else
    b.points_out = b.ydot < 0 && b.zdot / b.ydot < cfg.sigma2;
  return b;
}

UnstableSpectrum unstable_spectrum(const ModelParams& p, const WaveConfig& cfg) {
  UnstableSpectrum sp;
  sp.lambda0 = -p.r1;
  sp.lambda1 = p.r2 + p.a21;
  const double disc = cfg.rho * cfg.rho - 4.0 * cfg.rho * (p.a31 - p.mu);
  sp.degenerate = cfg.degenerate;
  sp.real_unstable = disc >= 0;
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0));
  sp.lambda2 = (cfg.rho + root) / 2.0;
  sp.lambda3 = (cfg.rho - root) / 2.0;

  using C = std::complex<double>;
  const C zero(0, 0), one(1, 0);
  sp.h1 << C(-p.a12, 0) / (sp.lambda1 + p.r1), one, zero, zero;
  sp.h2 << C(-p.a13, 0) / (sp.lambda2 + p.r1), zero, one, C(p.a31 - p.mu, 0) / sp.lambda2;
  sp.h3 << C(-p.a13, 0) / (sp.lambda3 + p.r1), zero, one, C(p.a31 - p.mu, 0) / sp.lambda3;
  return sp;
}

ProfileState gamma_point(const ModelParams& p, const WaveConfig& cfg, double eps, double z) {
  if (cfg.subcritical || cfg.degenerate)
    throw subcritical_error("gamma is defined only for c > c_star");
  if (!(eps > 0 && eps <= 0.05))
    throw std::invalid_argument("eps must lie in (0, 0.05]");
  const double zlo = cfg.sigma1 * eps, zhi = cfg.sigma2 * eps;
  if (!(z >= zlo - 1e-15 && z <= zhi + 1e-15))
    throw std::invalid_argument("z must lie in [sigma1*eps, sigma2*eps]");

  const UnstableSpectrum sp = unstable_spectrum(p, cfg);
  const double l1 = sp.lambda1.real(), l2 = sp.lambda2.real(), l3 = sp.lambda3.real();
  const double zeta = z / (p.a31 - p.mu);
  const double k1 = eps;
  const double k2 = l2 * (eps - l3 * zeta) / (l2 - l3);
  const double k3 = l3 * (l2 * zeta - eps) / (l2 - l3);
  const double x1 = 1.0 - k1 * p.a12 / (l1 + p.r1) - k2 * p.a13 / (l2 + p.r1) - k3 * p.a13 / (l3 + p.r1);
  return {x1, eps, eps, z};
}

const char* to_string(ShotVerdict v) {
  switch (v) {
    case ShotVerdict::ExitP1: return "ExitP1";
    case ShotVerdict::ExitP2: return "ExitP2";
    case ShotVerdict::ExitOther: return "ExitOther";
    case ShotVerdict::StayedToHorizon: return "StayedToHorizon";
    case ShotVerdict::ConvergedEstar: return "ConvergedEstar";
  }
  return "?";
}

namespace {

struct FaceFunctions {
  double sigma1, sigma2, vmax;

  // interior-positive functions; index order fixes the verdict mapping
  static constexpr int kCount = 7;
  std::array<double, kCount> eval(const ProfileState& s) const {
    return {s[3] - sigma1 * s[2],      // 0: P1
            sigma2 * s[2] - s[3],      // 1: P2
            s[0],                      // 2: Q1
            1.0 - s[0],                // 3: Q2
            s[1],                      // 4: Q3
            vmax - s[1],               // 5: Q4
            s[2]};                     // 6: Y pinch (Q5 side)
  }

  static ShotVerdict verdict_of(int face) {
    if (face == 0) return ShotVerdict::ExitP1;
    if (face == 1) return ShotVerdict::ExitP2;
    return ShotVerdict::ExitOther;
  }
};

}  // namespace

ShotOutcome shoot(const ModelParams& p, const WaveConfig& cfg, const ProfileState& start,
                  double horizon, ProfileTrajectory* record, bool stop_on_convergence) {
  if (cfg.subcritical)
    throw subcritical_error("shooting requires c > c_star");
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");

  const FaceFunctions faces{cfg.sigma1, cfg.sigma2, vmax_of(p)};
  const ProfileState target = estar_lift(p);

  if (record) {
    record->times.clear();
    record->states.clear();
    record->times.push_back(0.0);
    record->states.push_back(start);
  }

  ShotOutcome out;
  out.final = start;

  auto rhs = [&](double, const ProfileState& y) { return profile_rhs(p, cfg, y); };
  auto filter = [](ProfileState&) { return StepDecision::Accept; };

  double t_prev = 0.0;
  ProfileState y_prev = start;
  auto g_prev = faces.eval(start);
  bool done = false;

  auto observer = [&](const DenseStep<ProfileState>& dense, double t, const ProfileState& y) {
    const auto g_now = faces.eval(y);

    int best_face = -1;
    double best_time = std::numeric_limits<double>::infinity();
    ProfileState best_state = y;
    for (int i = 0; i < FaceFunctions::kCount; ++i) {
      if (!(g_now[i] < 0)) continue;
      double te;
      ProfileState ye;
      if (g_prev[i] <= 0) {
        te = t_prev;
        ye = y_prev;
      } else {
        double lo = t_prev, hi = t;  // g(lo) > 0, g(hi) < 0
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          const double gm = faces.eval(dense.eval(mid))[i];
          if (std::abs(gm) <= 1e-10) {
            lo = hi = mid;
            break;
          }
          (gm > 0 ? lo : hi) = mid;
        }
        te = 0.5 * (lo + hi);
        ye = dense.eval(te);
      }
      if (te < best_time) {
        best_time = te;
        best_face = i;
        best_state = ye;
      }
    }

    if (best_face >= 0) {
      out.verdict = FaceFunctions::verdict_of(best_face);
      out.exit_time = best_time;
      out.final = best_state;
      if (record && best_time > t_prev) {
        record->times.push_back(best_time);
        record->states.push_back(best_state);
      }
      done = true;
      return ObserverControl::Stop;
    }

    if (record) {
      record->times.push_back(t);
      record->states.push_back(y);
    }
    out.final = y;

    if (stop_on_convergence && (y - target).cwiseAbs().maxCoeff() <= kConvergeEps) {
      out.verdict = ShotVerdict::ConvergedEstar;
      out.exit_time = std::nullopt;
      done = true;
      return ObserverControl::Stop;
    }

    t_prev = t;
    y_prev = y;
    g_prev = g_now;
    return ObserverControl::Continue;
  };

  const IntegrateStatus status =
      dopri5<ProfileState>(rhs, 0.0, horizon, start, shot_control(), filter, observer);
  if (!done) {
    if (status == IntegrateStatus::ReachedEnd) {
      out.verdict = ShotVerdict::StayedToHorizon;
    } else {
      throw numerical_error("profile integration failed before horizon or face exit");
    }
  }
  return out;
}

WaveLyapunov wave_lyapunov(const ModelParams& p, const WaveConfig& cfg, const ProfileState& s) {
  const double x1 = s[0], x2 = s[1], y = s[2], z = s[3];
  if (!(x1 > 0) || !(x2 > 0) || !(y > 0))
    throw std::domain_error("wave Lyapunov requires X1, X2, Y > 0");
  const ProfileState eq = estar_lift(p);
  const double us = eq[0], vs = eq[1], ws = eq[2];
  const double alpha = p.a21 / p.a12;
  const double beta = p.a13 * p.a21 / (p.a12 * p.a31);

  WaveLyapunov L;
  L.value = alpha * (x1 - us * std::log(x1)) + (x2 - vs * std::log(x2)) +
            beta * (y - ws * std::log(y) - (y - z) * (1.0 - ws / y));
  const double du = x1 - us, dv = x2 - vs, dyz = y - z;
  L.rate = -(p.a21 * p.r1 / p.a12) * du * du - p.r2 * dv * dv -
           ws * cfg.rho * beta * dyz * dyz / (y * y);
  return L;
}

Eigen::Vector4d wave_lyapunov_gradient(const ModelParams& p, const WaveConfig&,
                                       const ProfileState& s) {
  const double x1 = s[0], x2 = s[1], y = s[2], z = s[3];
  if (!(x1 > 0) || !(x2 > 0) || !(y > 0))
    throw std::domain_error("wave Lyapunov requires X1, X2, Y > 0");
  const ProfileState eq = estar_lift(p);
  const double us = eq[0], vs = eq[1], ws = eq[2];
  const double alpha = p.a21 / p.a12;
  const double beta = p.a13 * p.a21 / (p.a12 * p.a31);
  return {alpha * (1.0 - us / x1),
          1.0 - vs / x2,
          beta * ws * (z - y) / (y * y),
          beta * (1.0 - ws / y)};
}

namespace {

struct Piece {
  double t0 = 0;  // global start time
  std::vector<double> times;           // global
  std::vector<ProfileState> states;
};

// exact-duration flow with no event or convergence stopping
ProfileState flow_exact(const ModelParams& p, const WaveConfig& cfg, const ProfileState& y0,
                        double duration) {
  ProfileState result = y0;
  auto rhs = [&](double, const ProfileState& y) { return profile_rhs(p, cfg, y); };
  auto filter = [](ProfileState&) { return StepDecision::Accept; };
  auto observer = [&result](const DenseStep<ProfileState>&, double, const ProfileState& y) {
    result = y;
    return ObserverControl::Continue;
  };
  const IntegrateStatus st = dopri5<ProfileState>(rhs, 0.0, duration, y0, shot_control(), filter, observer);
  if (st != IntegrateStatus::ReachedEnd)
    throw numerical_error("flow_exact failed to reach requested duration");
  return result;
}

// backward run of length tau from q; returns samples in increasing global time,
// ending just before global time ts (exclusive)
Piece backward_piece(const ModelParams& p, const WaveConfig& cfg, const ProfileState& q,
                     double ts, double tau) {
  Piece piece;
  piece.t0 = ts - tau;
  std::vector<double> bt{0.0};
  std::vector<ProfileState> bs{q};
  auto rhs = [&](double, const ProfileState& y) { return ProfileState(-profile_rhs(p, cfg, y)); };
  auto filter = [](ProfileState&) { return StepDecision::Accept; };
  auto observer = [&](const DenseStep<ProfileState>&, double t, const ProfileState& y) {
    bt.push_back(t);
    bs.push_back(y);
    return ObserverControl::Continue;
  };
  const IntegrateStatus st = dopri5<ProfileState>(rhs, 0.0, tau, q, shot_control(), filter, observer);
  if (st != IntegrateStatus::ReachedEnd)
    throw numerical_error("backward patch integration failed");
  for (std::size_t i = bt.size(); i-- > 1;) {
    piece.times.push_back(ts - bt[i]);
    piece.states.push_back(bs[i]);
  }
  return piece;
}

}  // namespace

WaveResult find_wave(const ModelParams& p, const WaveConfig& cfg, double eps, double z_tol,
                     double horizon) {
  if (cfg.subcritical || cfg.degenerate) {
    std::ostringstream msg;
    msg << "no positive traveling wave for c = " << cfg.c << " <= c_star = " << cfg.c_star
        << " (subcritical refusal)";
    throw subcritical_error(msg.str());
  }
  if (!check_assumptions(p).h3)
    throw std::invalid_argument("find_wave requires H3 (positive equilibrium must exist)");
  if (!(z_tol > 0)) throw std::invalid_argument("z_tol must be positive");
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");

  const ProfileState target = estar_lift(p);
  const double zlo0 = cfg.sigma1 * eps, zhi0 = cfg.sigma2 * eps;

  WaveResult res;
  res.eps = eps;

  // coarse scan: leftmost ExitP1 -> ExitP2 transition
  constexpr int kScan = 64;
  std::array<ShotVerdict, kScan + 1> verdicts;
  for (int i = 0; i <= kScan; ++i) {
    const double z = zlo0 + (zhi0 - zlo0) * i / kScan;
    verdicts[i] = shoot(p, cfg, gamma_point(p, cfg, eps, z), horizon).verdict;
  }
  int bracket = -1;
  for (int i = 0; i < kScan; ++i) {
    if (verdicts[i] == ShotVerdict::ExitP1 && verdicts[i + 1] != ShotVerdict::ExitP1) {
      bracket = i;
      break;
    }
  }
  if (bracket < 0)
    throw config_error("gamma scan found no ExitP1/ExitP2 dichotomy; eps too large, retry with smaller eps");

  double blo = zlo0 + (zhi0 - zlo0) * bracket / kScan;
  double bhi = zlo0 + (zhi0 - zlo0) * (bracket + 1) / kScan;
  while (bhi - blo > z_tol) {
    const double mid = 0.5 * (blo + bhi);
    if (mid <= blo || mid >= bhi) break;
    const ShotVerdict v = shoot(p, cfg, gamma_point(p, cfg, eps, mid), horizon).verdict;
    if (v == ShotVerdict::ExitP1)
      blo = mid;
    else
      bhi = mid;
  }
  res.z_star = 0.5 * (blo + bhi);
  res.bracket_width = bhi - blo;

  // staged saddle re-bisection: E* lift is a saddle of the profile flow, so
  // the pair of bracketing orbits is re-bisected at successive sections near
  // the closest approach until the tail reaches the convergence ball.
  ProfileState A = gamma_point(p, cfg, eps, blo);
  ProfileState B = gamma_point(p, cfg, eps, bhi);
  double ts = 0.0;
  std::vector<Piece> pieces;
  double final_cut = 0.0;
  double prev_dmin = std::numeric_limits<double>::infinity();
  int stalls = 0;
  constexpr int kMaxStages = 40;

  for (int stage = 0; stage < kMaxStages; ++stage) {
    res.stages = stage + 1;

    ProfileState a = A, b = B;
    while (true) {
      const ProfileState m = 0.5 * (a + b);
      if ((m.array() == a.array()).all() || (m.array() == b.array()).all()) break;
      const ShotVerdict v = shoot(p, cfg, m, horizon).verdict;
      if (v == ShotVerdict::ExitP1)
        a = m;
      else if (v == ShotVerdict::ExitP2)
        b = m;
      else {
        a = m;
        b = m;
        break;
      }
    }
    const ProfileState q = 0.5 * (a + b);

    Piece piece;
    const double tau_b = std::min(5.0, ts);
    if (tau_b > 0) {
      piece = backward_piece(p, cfg, q, ts, tau_b);
    } else {
      piece.t0 = ts;
    }

    ProfileTrajectory fwd;
    shoot(p, cfg, q, horizon, &fwd);
    for (std::size_t i = 0; i < fwd.times.size(); ++i) {
      piece.times.push_back(ts + fwd.times[i]);
      piece.states.push_back(fwd.states[i]);
    }

    double dmin = std::numeric_limits<double>::infinity();
    double tmin = 0.0;
    for (std::size_t i = 0; i < fwd.times.size(); ++i) {
      const double dist = (fwd.states[i] - target).cwiseAbs().maxCoeff();
      if (dist < dmin) {
        dmin = dist;
        tmin = fwd.times[i];
      }
    }
    pieces.push_back(std::move(piece));
    final_cut = ts + tmin;

    if (dmin <= kConvergeEps) break;
    if (!(tmin > 1e-9)) break;  // no forward progress past the section

    if (dmin >= prev_dmin * 0.97) {
      if (++stalls >= 3) break;
    } else {
      stalls = 0;
    }
    prev_dmin = dmin;

    // advance the bracket pair to the new section
    const ShotOutcome sa = shoot(p, cfg, a, tmin, nullptr, false);
    const ShotOutcome sb = shoot(p, cfg, b, tmin, nullptr, false);
    double dcut = tmin;
    if (sa.exit_time || sb.exit_time)
      dcut = 0.98 * std::min(sa.exit_time.value_or(tmin), sb.exit_time.value_or(tmin));
    if (!(dcut > 1e-9)) break;

    ProfileState An, Bn;
    if (dcut == tmin && !sa.exit_time && !sb.exit_time) {
      An = sa.final;
      Bn = sb.final;
    } else {
      An = flow_exact(p, cfg, a, dcut);
      Bn = flow_exact(p, cfg, b, dcut);
    }
    const double sep = (An - Bn).cwiseAbs().maxCoeff();
    if (sep < 1e-15) break;
    A = An;
    B = Bn;
    ts += dcut;
  }

  // assemble: truncate each piece at the successor's start
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const double hi = (k + 1 < pieces.size()) ? pieces[k + 1].t0 : final_cut;
    for (std::size_t i = 0; i < pieces[k].times.size(); ++i) {
      const double t = pieces[k].times[i];
      if (t > hi + 1e-12) break;
      if (!res.trajectory.times.empty() && t <= res.trajectory.times.back()) continue;
      res.trajectory.times.push_back(t);
      res.trajectory.states.push_back(pieces[k].states[i]);
    }
  }

  if (res.trajectory.states.empty())
    throw numerical_error("wave refinement produced an empty trajectory");
  res.tail_distance = (res.trajectory.states.back() - target).cwiseAbs().maxCoeff();

  MonotonicityReport rep;
  rep.samples = res.trajectory.times.size();
  double prev = wave_lyapunov(p, cfg, res.trajectory.states.front()).value;
  rep.initial_value = prev;
  rep.pass = true;
  for (std::size_t i = 1; i < res.trajectory.states.size(); ++i) {
    const double cur = wave_lyapunov(p, cfg, res.trajectory.states[i]).value;
    const double inc = cur - prev;
    const double normalized = inc / (1.0 + std::abs(prev));
    rep.max_increment = std::max(rep.max_increment, inc);
    rep.max_normalized_increment = std::max(rep.max_normalized_increment, normalized);
    if (normalized > 1e-7 && rep.pass) {
      rep.pass = false;
      rep.first_violation_time = res.trajectory.times[i];
    }
    prev = cur;
  }
  rep.final_value = prev;
  res.lyapunov = rep;

  res.certified = res.tail_distance <= kTailEps && rep.pass;
  return res;
}

}  // namespace ppwave
