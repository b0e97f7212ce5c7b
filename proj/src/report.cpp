#include "ecs/report.hpp"

#include <algorithm>
#include <cmath>

namespace ecs {

const CheckResult& CheckReport::below(std::string name, double residual, double tolerance,
                                      std::string detail) {
  const bool ok = std::isfinite(residual) && residual < tolerance;
  return add({std::move(name), ok, residual, tolerance, std::move(detail)});
}

const CheckResult& CheckReport::above(std::string name, double residual, double tolerance,
                                      std::string detail) {
  const bool ok = std::isfinite(residual) && residual > tolerance;
  return add({std::move(name), ok, residual, tolerance, std::move(detail)});
}

const CheckResult& CheckReport::add(CheckResult result) {
  checks_.push_back(std::move(result));
  return checks_.back();
}

void CheckReport::append(const CheckReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

bool CheckReport::all_passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* CheckReport::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace ecs
