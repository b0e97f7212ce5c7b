#pragma once

#include <string>
#include <vector>

namespace ecs {

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

class CheckReport {
 public:
  /// Records a "residual below tolerance" check.
  const CheckResult& below(std::string name, double residual, double tolerance, std::string detail = {});
  /// Records a "residual above tolerance" check (nondegeneracy style).
  const CheckResult& above(std::string name, double residual, double tolerance, std::string detail = {});
  const CheckResult& add(CheckResult result);
  void append(const CheckReport& other);

  bool all_passed() const;
  const std::vector<CheckResult>& checks() const { return checks_; }
  /// nullptr when no check carries the name.
  const CheckResult* find(const std::string& name) const;

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace ecs
