// phax command-line front end; everything goes through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "phax/phax.h"

namespace {

enum Exit { kOk = 0, kDomain = 1, kUsage = 2 };

int exit_for(phax_status s) {
  switch (s) {
    case PHAX_OK: return kOk;
    case PHAX_ERR_PARSE:
    case PHAX_ERR_INVALID_ARGUMENT: return kUsage;
    default: return kDomain;
  }
}

int fail(phax_status s) {
  std::cerr << "phax: " << phax_status_name(s) << ": " << phax_last_error() << "\n";
  return exit_for(s);
}

// Prints and frees a returned string. Takes `out` by reference: it is only set once the call has run.
int emit(phax_status s, char*& out) {
  if (out) {
    std::fputs(out, stdout);
    phax_string_free(out);
  }
  return s == PHAX_OK ? kOk : fail(s);
}

bool is_iccma_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  return phax_is_iccma(text.data(), text.size()) != 0;
}

phax_format format_from(const std::string& f) {
  if (f == "json") return PHAX_FORMAT_JSON;
  if (f == "markdown") return PHAX_FORMAT_MARKDOWN;
  if (f == "dot") return PHAX_FORMAT_DOT;
  return PHAX_FORMAT_TEXT;
}

struct Session {
  phax_session* s = nullptr;
  ~Session() { phax_session_close(s); }
};

struct Framework {
  phax_af* a = nullptr;
  ~Framework() { phax_af_close(a); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phax: defeasible argumentation with audience-adapted explanations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(phax_version()));

  std::string file;
  std::string format = "text";

  auto* check = app.add_subcommand("check", "Validate a theory file");
  check->add_option("file", file, "Theory (.phax)")->required();

  auto* args = app.add_subcommand("args", "List constructed arguments");
  args->add_option("file", file, "Theory (.phax) or ICCMA framework")->required();
  args->add_option("--format", format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));

  std::string semantics = "grounded";
  auto* ext = app.add_subcommand("extensions", "Compute labellings under a semantics");
  ext->add_option("file", file, "Theory (.phax) or ICCMA framework")->required();
  ext->add_option("--semantics", semantics, "grounded, complete, preferred or stable")
      ->check(CLI::IsMember({"grounded", "complete", "preferred", "stable"}));
  ext->add_option("--format", format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));

  phax_explain_options eo;
  phax_explain_options_init(&eo);
  std::string target, profile = "clinician";
  auto* explain = app.add_subcommand("explain", "Select and render an explanation for a target");
  explain->add_option("file", file, "Theory (.phax)")->required();
  explain->add_option("--target", target, "Literal, argument label or argument id")->required();
  explain->add_option("--profile", profile, "patient, clinician, policymaker, inline JSON or a JSON file");
  explain->add_option("--tau", eo.tau, "Sufficiency threshold")->check(CLI::Range(0.0, 1.0));
  explain->add_option("--alpha", eo.alpha, "Clarity weight")->check(CLI::NonNegativeNumber);
  explain->add_option("--beta", eo.beta, "Relevance weight")->check(CLI::NonNegativeNumber);
  explain->add_option("--gamma", eo.gamma, "Lexical fit weight")->check(CLI::NonNegativeNumber);
  explain->add_option("--epsilon", eo.epsilon, "Allowed gap to the full tree's sufficiency")
      ->check(CLI::Range(0.0, 1.0));
  explain->add_option("--max-depth", eo.max_depth, "Dispute tree depth limit")->check(CLI::PositiveNumber);
  explain->add_option("--beam-width", eo.beam_width, "Beam width for large trees (0 = unbounded)");
  explain->add_option("--format", format, "text, markdown, dot or json")
      ->check(CLI::IsMember({"text", "markdown", "dot", "json"}));

  int port = phax_default_port();
  std::string host = "127.0.0.1", state_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "Port (default PHAX_PORT or 8080)")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Interface to bind");
  serve->add_option("--state-dir", state_dir, "Directory for session snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "phax: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (*check) {
    char* report = nullptr;
    phax_status s = phax_check_file(file.c_str(), &report);
    if (report) {
      std::fputs(report, s == PHAX_OK ? stdout : stderr);
      phax_string_free(report);
    }
    return s == PHAX_OK ? kOk : fail(s);
  }

  if (*args || *ext) {
    char* out = nullptr;
    if (is_iccma_file(file)) {
      Framework f;
      if (phax_status s = phax_af_open_file(file.c_str(), &f.a); s != PHAX_OK) return fail(s);
      if (*args) {
        std::size_t n = 0, m = 0;
        phax_af_size(f.a, &n, &m);
        std::cout << n << " arguments, " << m << " attacks\n";
        return kOk;
      }
      return emit(phax_af_extensions(f.a, semantics.c_str(), format_from(format), &out), out);
    }
    Session ses;
    if (phax_status s = phax_session_open_file(file.c_str(), &ses.s); s != PHAX_OK) return fail(s);
    if (*args) return emit(phax_session_arguments(ses.s, format_from(format), &out), out);
    return emit(phax_session_extensions(ses.s, semantics.c_str(), format_from(format), &out), out);
  }

  if (*explain) {
    Session ses;
    if (phax_status s = phax_session_open_file(file.c_str(), &ses.s); s != PHAX_OK) return fail(s);
    eo.target = target.c_str();
    eo.profile = profile.c_str();
    eo.format = format_from(format);
    char* out = nullptr;
    return emit(phax_session_explain(ses.s, &eo, &out), out);
  }

  if (*serve) {
    phax_status s = phax_serve(host.c_str(), port, state_dir.empty() ? nullptr : state_dir.c_str());
    return s == PHAX_OK ? kOk : fail(s);
  }
  return kUsage;
}
