#include "phax/profile.hpp"

#include <cmath>

#include <json.hpp>

#include "phax/error.hpp"

namespace phax {

const char* to_string(Band b) {
  switch (b) {
    case Band::Lay: return "lay";
    case Band::DecisionMaker: return "decision_maker";
    case Band::Professional: return "professional";
  }
  return "lay";
}

std::optional<Band> parse_band(std::string_view name) {
  if (name == "lay") return Band::Lay;
  if (name == "decision_maker") return Band::DecisionMaker;
  if (name == "professional") return Band::Professional;
  return std::nullopt;
}

Band band_for_expertise(double e) {
  if (e < 0.34) return Band::Lay;
  if (e < 0.67) return Band::DecisionMaker;
  return Band::Professional;
}

void validate_profile(const UserProfile& p) {
  auto check = [&](double v, const char* field) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw Error(ErrorCode::InvalidArgument, std::string("profile field ") + field + " must lie in [0,1]");
  };
  check(p.expertise, "e");
  check(p.lexical_tolerance, "l");
  check(p.cognitive_depth, "c");
}

UserProfile profile_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("profile is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "profile must be a JSON object");
  UserProfile p;
  try {
    p.name = j.value("name", std::string("custom"));
    p.expertise = j.at("e").get<double>();
    p.lexical_tolerance = j.at("l").get<double>();
    p.cognitive_depth = j.at("c").get<double>();
    if (j.contains("preferred_schemes"))
      for (const auto& s : j.at("preferred_schemes")) p.preferred_schemes.insert(s.get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed profile: ") + e.what());
  }
  validate_profile(p);
  return p;
}

std::string profile_to_json(const UserProfile& p) {
  nlohmann::ordered_json j;
  j["name"] = p.name;
  j["e"] = p.expertise;
  j["l"] = p.lexical_tolerance;
  j["c"] = p.cognitive_depth;
  j["preferred_schemes"] = p.preferred_schemes;
  return j.dump();
}

const std::vector<UserProfile>& bundled_profiles() {
  static const std::vector<UserProfile> profiles = {
      {"patient", 0.1, 0.2, 0.3, {"cause_to_effect", "ethical_value"}},
      {"clinician", 0.9, 0.9, 0.8, {"expert_opinion", "statistical_generalization"}},
      {"policymaker", 0.5, 0.6, 0.5, {"ethical_value", "practical_reasoning"}},
  };
  return profiles;
}

std::optional<UserProfile> find_bundled_profile(std::string_view name) {
  for (const auto& p : bundled_profiles())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace phax
