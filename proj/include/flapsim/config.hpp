#pragma once

// Scenario files: YAML with schema versioning and `include:` of shared
// physics blocks. Included files are deep-merged in order, then the
// including file is merged on top.

#include <stdexcept>
#include <string>
#include <vector>

#include "flapsim/scenario.hpp"

namespace flapsim {

inline constexpr int kConfigSchema = 1;

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Load, merge, parse and validate. Unknown keys are violations.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& yaml_text, const std::string& base_dir = ".");

}  // namespace flapsim
