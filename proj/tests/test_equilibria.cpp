#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ppwave/equilibria.hpp"
#include "ppwave/model.hpp"

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

const Equilibrium& find(const std::array<Equilibrium, 6>& eq, EquilibriumName name) {
  for (const auto& e : eq)
    if (e.name == name) return e;
  throw std::logic_error("equilibrium not found");
}

// residual of the characteristic polynomial at a reported eigenvalue
double char_residual(const Eigen::Matrix3d& j, const std::complex<double>& lambda) {
  Eigen::Matrix3cd m = j.cast<std::complex<double>>();
  m -= lambda * Eigen::Matrix3cd::Identity();
  return std::abs(m.determinant());
}

}  // namespace

TEST_CASE("reference parameters produce the known equilibrium coordinates") {
  const ModelParams p = sec4_params();
  const auto eq = compute_equilibria(p);

  CHECK(find(eq, EquilibriumName::E0).coords.isApprox(OdeState(0, 0, 0), 0));
  CHECK(find(eq, EquilibriumName::E1).coords.isApprox(OdeState(1, 0, 0), 0));
  CHECK(find(eq, EquilibriumName::E2).coords.isApprox(OdeState(0, 1, 0), 0));

  const OdeState e12 = find(eq, EquilibriumName::E12).coords;
  CHECK(e12[0] == doctest::Approx(0.6875).epsilon(1e-12));
  CHECK(e12[1] == doctest::Approx(35.0 / 24.0).epsilon(1e-12));
  CHECK(e12[2] == 0.0);

  const OdeState e13 = find(eq, EquilibriumName::E13).coords;
  CHECK(e13[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(e13[1] == 0.0);
  CHECK(e13[2] == doctest::Approx(0.98).epsilon(1e-12));

  const OdeState estar = find(eq, EquilibriumName::Estar).coords;
  CHECK(estar[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(estar[1] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(estar[2] == doctest::Approx(0.62).epsilon(1e-12));

  for (const auto& e : eq) {
    CHECK(e.exists);
    CHECK(reaction_rhs(p, e.coords).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("E12 closed form matches an independent 2x2 linear solve") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> dist(0.05, 1.5);
  int checked = 0;
  while (checked < 50) {
    ModelParams p;
    p.r1 = dist(rng);
    p.r2 = dist(rng);
    p.mu = dist(rng);
    p.a12 = dist(rng);
    p.a13 = dist(rng);
    p.a21 = dist(rng);
    p.a31 = dist(rng);
    if (!(p.r1 > p.a12)) continue;
    ++checked;

    // r1 u + a12 v = r1 ; -a21 u + r2 v = r2
    Eigen::Matrix2d A;
    A << p.r1, p.a12, -p.a21, p.r2;
    const Eigen::Vector2d b(p.r1, p.r2);
    const Eigen::Vector2d uv = A.fullPivLu().solve(b);

    const OdeState e12 = find(compute_equilibria(p), EquilibriumName::E12).coords;
    CHECK(e12[0] == doctest::Approx(uv[0]).epsilon(1e-12));
    CHECK(e12[1] == doctest::Approx(uv[1]).epsilon(1e-12));
  }
}

TEST_CASE("existence flags follow H1, H2, H3") {
  ModelParams p = sec4_params();
  p.r1 = 0.1;  // r1 < a12
  auto eq = compute_equilibria(p);
  CHECK_FALSE(find(eq, EquilibriumName::E12).exists);
  CHECK_FALSE(find(eq, EquilibriumName::Estar).exists);
  CHECK(find(eq, EquilibriumName::E13).exists);
  // the nonexistent formula point leaves the positive quadrant
  CHECK(find(eq, EquilibriumName::E12).coords[0] < 0);

  p = sec4_params();
  p.a31 = 0.1;  // a31 < mu
  eq = compute_equilibria(p);
  CHECK_FALSE(find(eq, EquilibriumName::E13).exists);
  CHECK_FALSE(find(eq, EquilibriumName::Estar).exists);
  CHECK(find(eq, EquilibriumName::E12).exists);
}

TEST_CASE("classification on the reference parameters") {
  const ModelParams p = sec4_params();
  auto eq = compute_equilibria(p);
  for (auto& e : eq) e = classify_equilibrium(p, e);

  const auto& e0 = find(eq, EquilibriumName::E0);
  CHECK(e0.verdict == Verdict::Unstable);
  CHECK(e0.eigenvalues[0].real() == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(e0.eigenvalues[1].real() == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(e0.eigenvalues[2].real() == doctest::Approx(-0.15).epsilon(1e-9));

  const auto& e1 = find(eq, EquilibriumName::E1);
  CHECK(e1.verdict == Verdict::Unstable);
  CHECK(e1.eigenvalues[0].real() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(e1.eigenvalues[1].real() == doctest::Approx(0.35).epsilon(1e-9));
  CHECK(e1.eigenvalues[2].real() == doctest::Approx(-0.7).epsilon(1e-9));

  CHECK(find(eq, EquilibriumName::E2).verdict == Verdict::Saddle);

  const auto& e12 = find(eq, EquilibriumName::E12);
  CHECK(e12.verdict == Verdict::Saddle);
  // the decoupled w eigenvalue is exactly a31 u12 - mu
  CHECK(e12.eigenvalues[0].real() == doctest::Approx(0.19375).epsilon(1e-9));

  CHECK(find(eq, EquilibriumName::E13).verdict == Verdict::Saddle);

  const auto& estar = find(eq, EquilibriumName::Estar);
  CHECK(estar.verdict == Verdict::GloballyStableClaimed);
  for (int i = 0; i < 3; ++i) CHECK(estar.eigenvalues[i].real() < 0);

  // every reported eigenvalue annihilates the characteristic polynomial
  for (const auto& e : eq) {
    const Eigen::Matrix3d j = reaction_jacobian(p, e.coords);
    for (int i = 0; i < 3; ++i) CHECK(char_residual(j, e.eigenvalues[i]) <= 1e-9);
  }
}

TEST_CASE("classifying a nonexistent equilibrium is a precondition error") {
  ModelParams p = sec4_params();
  p.r1 = 0.1;
  const auto eq = compute_equilibria(p);
  CHECK_THROWS_AS(classify_equilibrium(p, find(eq, EquilibriumName::Estar)),
                  std::invalid_argument);
}

TEST_CASE("E2 and E12 become the claimed global attractors in their regimes") {
  ModelParams p = sec4_params();
  p.r1 = 0.1;
  auto eq = compute_equilibria(p);
  CHECK(classify_equilibrium(p, find(eq, EquilibriumName::E2)).verdict ==
        Verdict::GloballyStableClaimed);

  p = sec4_params();
  p.mu = 0.4;  // a31 u12 = 0.34375 < mu, H2 still holds
  eq = compute_equilibria(p);
  CHECK(classify_equilibrium(p, find(eq, EquilibriumName::E12)).verdict ==
        Verdict::GloballyStableClaimed);
  CHECK_FALSE(find(eq, EquilibriumName::Estar).exists);
}

TEST_CASE("regime classification covers the three rows") {
  ModelParams p = sec4_params();
  p.r1 = 0.1;
  RegimeVerdict rv = regime(p);
  CHECK(rv.regime == Regime::E2_GAS);
  CHECK_FALSE(rv.witness.empty());

  p = sec4_params();
  p.mu = 0.4;
  rv = regime(p);
  CHECK(rv.regime == Regime::E12_GAS);

  rv = regime(sec4_params());
  CHECK(rv.regime == Regime::Estar_GAS);
  CHECK(rv.witness.find("0.34375") != std::string::npos);
}

TEST_CASE("V12 gradient and closed-form rate agree with finite differences and chain rule") {
  ModelParams p = sec4_params();
  p.mu = 0.4;  // E12 regime
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> dist(0.05, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const OdeState s(dist(rng), dist(rng), dist(rng));

    const Eigen::Vector3d g = lyapunov_V12_gradient(p, s);
    for (int k = 0; k < 3; ++k) {
      OdeState hi = s, lo = s;
      hi[k] += 1e-6;
      lo[k] -= 1e-6;
      const double fd = (lyapunov_V12(p, hi) - lyapunov_V12(p, lo)) / 2e-6;
      CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
    }

    const double chain = g.dot(reaction_rhs(p, s));
    const double closed = lyapunov_V12_rate(p, s);
    CHECK(std::abs(chain - closed) <= 1e-8 * (1 + std::abs(closed)));
  }
}

TEST_CASE("V12 attains its minimum at E12 with w = 0") {
  ModelParams p = sec4_params();
  p.mu = 0.4;
  const OdeState e12 = find(compute_equilibria(p), EquilibriumName::E12).coords;
  const double v0 = lyapunov_V12(p, e12);
  for (const double delta : {0.05, -0.05}) {
    OdeState s = e12;
    s[0] += delta;
    CHECK(lyapunov_V12(p, s) > v0);
    s = e12;
    s[1] += delta;
    CHECK(lyapunov_V12(p, s) > v0);
  }
  OdeState s = e12;
  s[2] += 0.05;
  CHECK(lyapunov_V12(p, s) > v0);
  CHECK_THROWS_AS(lyapunov_V12(p, OdeState(0, 1, 0)), std::domain_error);
}

TEST_CASE("Vstar chain rule matches the closed form only for the derivative-consistent coefficient") {
  const ModelParams p = sec4_params();
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> dist(0.05, 2.0);

  double worst_consistent = 0, best_printed = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const OdeState s(dist(rng), dist(rng), dist(rng));
    const OdeState ds = reaction_rhs(p, s);

    const double chain_dc =
        lyapunov_Vstar_gradient(p, s, UCoefficient::DerivativeConsistent).dot(ds);
    const double closed = lyapunov_Vstar_rate(p, s);
    worst_consistent = std::max(worst_consistent,
                                std::abs(chain_dc - closed) / (1 + std::abs(closed)));

    const double chain_printed = lyapunov_Vstar_gradient(p, s, UCoefficient::AsPrinted).dot(ds);
    best_printed = std::min(best_printed,
                            std::abs(chain_printed - closed) / (1 + std::abs(closed)));
  }
  CHECK(worst_consistent <= 1e-8);
  // the printed a12/a21 coefficient does not reproduce the printed derivative
  CHECK(best_printed > 1e-6);
}

TEST_CASE("Vstar gradient matches finite differences for both coefficient choices") {
  const ModelParams p = sec4_params();
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> dist(0.05, 2.0);
  for (const auto uc : {UCoefficient::DerivativeConsistent, UCoefficient::AsPrinted}) {
    for (int trial = 0; trial < 25; ++trial) {
      const OdeState s(dist(rng), dist(rng), dist(rng));
      const Eigen::Vector3d g = lyapunov_Vstar_gradient(p, s, uc);
      for (int k = 0; k < 3; ++k) {
        OdeState hi = s, lo = s;
        hi[k] += 1e-6;
        lo[k] -= 1e-6;
        const double fd = (lyapunov_Vstar(p, hi, uc) - lyapunov_Vstar(p, lo, uc)) / 2e-6;
        CHECK(g[k] == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("Vstar rate is nonpositive away from the equilibrium") {
  const ModelParams p = sec4_params();
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> dist(0.05, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const OdeState s(dist(rng), dist(rng), dist(rng));
    CHECK(lyapunov_Vstar_rate(p, s) <= 0);
  }
}
