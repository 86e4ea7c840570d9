#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace phax {

// Audience band derived from domain expertise.
enum class Band { Lay, DecisionMaker, Professional };

const char* to_string(Band b);  // "lay", "decision_maker", "professional"
std::optional<Band> parse_band(std::string_view name);

// e < 0.34 -> lay, e < 0.67 -> decision_maker, otherwise professional.
Band band_for_expertise(double e);

struct UserProfile {
  std::string name;
  double expertise = 0.5;          // e
  double lexical_tolerance = 0.5;  // l
  double cognitive_depth = 0.5;    // c
  std::set<std::string> preferred_schemes;

  Band band() const { return band_for_expertise(expertise); }
  bool operator==(const UserProfile&) const = default;
};

// Throws Error(InvalidArgument) unless e, l, c lie in [0,1].
void validate_profile(const UserProfile& p);

// {"name","e","l","c","preferred_schemes":[...]}
UserProfile profile_from_json(std::string_view json_text);
std::string profile_to_json(const UserProfile& p);

// patient, clinician, policymaker
const std::vector<UserProfile>& bundled_profiles();
std::optional<UserProfile> find_bundled_profile(std::string_view name);

}  // namespace phax
