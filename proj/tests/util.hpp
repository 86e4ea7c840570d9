#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "phax/parser.hpp"

inline const std::filesystem::path kFixtures = PHAX_FIXTURES_DIR;

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline phax::Theory fixture(const std::string& name) {
  return phax::parse_theory_or_throw(slurp(kFixtures / name), name);
}

inline phax::Literal lit(const std::string& text) { return *phax::parse_literal(text); }
