#include "splitcert/trace.hpp"

#include <cmath>

#include "splitcert/errors.hpp"

namespace splitcert {

double StepSchedule::at(std::int64_t t) const {
  return alpha * std::pow(static_cast<double>(t), -theta);
}

void StepSchedule::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be finite and > 0");
  if (!(theta >= 0.0 && theta < 1.0)) throw ConfigError("theta must lie in [0, 1)");
}

std::size_t ObjectiveSpec::dim() const {
  if (smooth_parts.empty()) throw ContractError("ObjectiveSpec: no components");
  return smooth_parts.front()->dim();
}

double ObjectiveSpec::value(const Point& x) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < m(); ++i) {
    acc += smooth_parts[i]->value(x);
    acc += prox_parts[i]->value(x);
  }
  return acc;
}

void ObjectiveSpec::validate() const {
  if (smooth_parts.empty()) throw ContractError("ObjectiveSpec: m must be >= 1");
  if (smooth_parts.size() != prox_parts.size()) {
    throw ContractError("ObjectiveSpec: |smooth_parts| != |prox_parts|");
  }
  const std::size_t n = dim();
  for (std::size_t i = 0; i < m(); ++i) {
    if (!smooth_parts[i] || !prox_parts[i]) throw ContractError("ObjectiveSpec: null oracle");
    if (smooth_parts[i]->dim() != n || prox_parts[i]->dim() != n) {
      throw ContractError("ObjectiveSpec: component dimensions disagree");
    }
  }
}

void RunTrace::validate() const {
  const std::size_t n = iterates.size();
  if (f_values.size() != n || alpha_values.size() != n || eps_values.size() != n ||
      subgrad_max_l.size() != n || subgrad_max_r.size() != n) {
    throw ContractError("RunTrace: per-iteration record lengths disagree");
  }
}

}  // namespace splitcert
