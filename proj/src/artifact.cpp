#include "mfc/artifact.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfc/errors.hpp"

namespace mfc {

namespace {
constexpr const char* kPolicyFormat = "mfc-policy-v1";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CapacityError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CapacityError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw CapacityError("failed writing '" + path + "'");
}

void save_policy(const std::string& path, const EnvironmentSpec& env, const PolicyParams& phi) {
  nlohmann::json j;
  j["format"] = kPolicyFormat;
  j["env_name"] = env.name;
  j["local_state_count"] = env.local_state_count;
  j["action_count"] = phi.action_count;
  j["global_encoding_dim"] = env.global_encoding_dim;
  j["feature_dim"] = phi.feature_dim;
  j["w_max"] = phi.weight_cap;
  j["theta"] = phi.theta;
  write_text_file(path, j.dump(2) + "\n");
}

PolicyParams load_policy(const std::string& path, const EnvironmentSpec& env) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("policy artifact '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != kPolicyFormat)
    throw ValidationError("policy artifact '" + path + "' has an unknown format");

  PolicyParams phi;
  phi.action_count = j.at("action_count").get<int>();
  phi.feature_dim = j.at("feature_dim").get<int>();
  phi.weight_cap = j.at("w_max").get<double>();
  phi.theta = j.at("theta").get<std::vector<double>>();

  if (phi.action_count != env.action_count || phi.feature_dim != feature_dim_for(env) ||
      static_cast<int>(phi.theta.size()) != phi.param_count()) {
    throw ValidationError("policy artifact '" + path +
                          "' does not match the configured environment's dimensions");
  }
  return phi;
}

}  // namespace mfc
