#pragma once

#include <string>

#include "mfc/env.hpp"
#include "mfc/policy.hpp"

namespace mfc {

/// Saves the policy weights (flat, row-major) together with the dimensions
/// they were trained against.
void save_policy(const std::string& path, const EnvironmentSpec& env, const PolicyParams& phi);

/// Loads a policy artifact and checks it against the environment's
/// dimensions.
PolicyParams load_policy(const std::string& path, const EnvironmentSpec& env);

std::string format_double(double v);  // shortest round-trip decimal form
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace mfc
