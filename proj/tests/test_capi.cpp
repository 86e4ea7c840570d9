#include <doctest.h>

#include <cstring>
#include <string>

#include "phax/phax.h"
#include "util.hpp"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  phax_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("C API session lifecycle") {
  phax_session* s = nullptr;
  REQUIRE(phax_session_open_file((kFixtures / "simplification.phax").c_str(), &s) == PHAX_OK);
  char* out = nullptr;
  REQUIRE(phax_session_extensions(s, "grounded", PHAX_FORMAT_TEXT, &out) == PHAX_OK);
  CHECK(take(out) == "IN: p1 p2 p3 r2\nOUT: r1\n");
  int yes = -1;
  REQUIRE(phax_session_accepts(s, "~prefer(heart_attack)", "grounded", "skeptical", &yes) == PHAX_OK);
  CHECK(yes == 1);
  REQUIRE(phax_session_accepts(s, "prefer(heart_attack)", "preferred", "credulous", &yes) == PHAX_OK);
  CHECK(yes == 0);
  CHECK(phax_session_accepts(s, "not a literal(", "grounded", "skeptical", &yes) == PHAX_ERR_INVALID_ARGUMENT);
  CHECK(phax_session_extensions(s, "ideal", PHAX_FORMAT_TEXT, &out) == PHAX_ERR_INVALID_ARGUMENT);
  CHECK(std::strstr(phax_last_error(), "ideal") != nullptr);

  REQUIRE(phax_session_serialize(s, &out) == PHAX_OK);
  std::string src = take(out);
  phax_session* again = nullptr;
  REQUIRE(phax_session_open(src.data(), src.size(), "copy", &again) == PHAX_OK);
  phax_session_close(again);
  phax_session_close(s);
  phax_session_close(nullptr);
}

TEST_CASE("C API errors") {
  phax_session* s = nullptr;
  CHECK(phax_session_open_file("/nonexistent/x.phax", &s) == PHAX_ERR_IO);
  CHECK(s == nullptr);
  const char bad[] = "premise p: q(X).";
  CHECK(phax_session_open(bad, sizeof bad - 1, nullptr, &s) == PHAX_ERR_PARSE);
  CHECK(std::string(phax_status_name(PHAX_ERR_PARSE)) == "PARSE");
  CHECK(phax_session_open(bad, sizeof bad - 1, nullptr, nullptr) == PHAX_ERR_INVALID_ARGUMENT);
  char* report = nullptr;
  CHECK(phax_check_file((kFixtures / "vaccine.phax").c_str(), &report) == PHAX_OK);
  CHECK(take(report).find("vaccine") != std::string::npos);
}

TEST_CASE("C API explain") {
  phax_session* s = nullptr;
  REQUIRE(phax_session_open_file((kFixtures / "simplification_nopref.phax").c_str(), &s) == PHAX_OK);
  phax_explain_options o;
  phax_explain_options_init(&o);
  CHECK(o.tau == 0.5);
  CHECK(o.beam_width == 8);
  o.target = "~prefer(heart_attack)";
  char* out = nullptr;
  CHECK(phax_session_explain(s, &o, &out) == PHAX_ERR_INSUFFICIENT);
  CHECK(out == nullptr);
  o.target = "prefer(heart_attack)";
  o.tau = 0.3;
  o.format = PHAX_FORMAT_JSON;
  REQUIRE(phax_session_explain(s, &o, &out) == PHAX_OK);
  CHECK(take(out).find("\"sigma_full\"") != std::string::npos);
  o.target = nullptr;
  CHECK(phax_session_explain(s, &o, &out) == PHAX_ERR_INVALID_ARGUMENT);
  phax_session_close(s);
}

TEST_CASE("C API abstract frameworks") {
  const char text[] = "p af 3\n1 2\n2 3\n";
  CHECK(phax_is_iccma(text, sizeof text - 1) == 1);
  phax_af* f = nullptr;
  REQUIRE(phax_af_open(text, sizeof text - 1, &f) == PHAX_OK);
  size_t n = 0, m = 0;
  phax_af_size(f, &n, &m);
  CHECK(n == 3);
  CHECK(m == 2);
  char* out = nullptr;
  REQUIRE(phax_af_extensions(f, "stable", PHAX_FORMAT_TEXT, &out) == PHAX_OK);
  CHECK(take(out) == "IN: 1 3\nOUT: 2\n");
  REQUIRE(phax_af_extensions(f, "grounded", PHAX_FORMAT_DOT, &out) == PHAX_OK);
  CHECK(take(out).rfind("digraph", 0) == 0);
  phax_af_close(f);
}
