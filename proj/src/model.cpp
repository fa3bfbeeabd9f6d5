#include "ppwave/model.hpp"

#include <cmath>

#include "ppwave/errors.hpp"

namespace ppwave {

AssumptionReport check_assumptions(const ModelParams& p) {
  validate_params(p);
  AssumptionReport r;
  r.h1 = p.r1 > p.a12;
  r.h2 = p.a31 > p.mu;
  r.h3_value = p.r1 * p.r2 * p.a31 - p.r1 * p.r2 * p.mu - p.a12 * p.a31 * p.r2 - p.a12 * p.a21 * p.mu;
  r.h3 = r.h3_value > 0;
  return r;
}

bool params_valid(const ModelParams& p) {
  for (double x : {p.r1, p.r2, p.mu, p.a12, p.a13, p.a21, p.a31, p.d})
    if (!std::isfinite(x) || x <= 0) return false;
  return true;
}

void validate_params(const ModelParams& p) {
  const struct { const char* name; double value; } fields[] = {
      {"r1", p.r1}, {"r2", p.r2}, {"mu", p.mu}, {"a12", p.a12},
      {"a13", p.a13}, {"a21", p.a21}, {"a31", p.a31}, {"d", p.d}};
  for (const auto& f : fields) {
    if (!std::isfinite(f.value))
      throw config_error(std::string("parameter ") + f.name + " is not finite");
    if (f.value <= 0)
      throw config_error(std::string("parameter ") + f.name + " must be strictly positive");
  }
}

bool state_finite(const OdeState& s) { return s.allFinite(); }

bool state_valid(const OdeState& s) {
  return s.allFinite() && (s.array() >= 0).all();
}

void require_finite_state(const OdeState& s) {
  if (!s.allFinite()) throw numerical_error("non-finite state encountered");
}

}  // namespace ppwave
