#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "piterm/parser.hpp"
#include "piterm/typing.hpp"

inline std::string sample(const std::string& file) {
  std::ifstream in(std::string(SAMPLES_DIR) + "/" + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline piterm::TypeEnv sample_env(const std::string& file) {
  piterm::TypeEnv env;
  for (auto& [n, t] : piterm::parse_bindings(sample(file))) env.bind(n, t);
  return env;
}

inline piterm::TypeEnv env_of(const std::string& text) {
  piterm::TypeEnv env;
  for (auto& [n, t] : piterm::parse_bindings(text)) env.bind(n, t);
  return env;
}
