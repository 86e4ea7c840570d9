#include "phax/phax.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "phax/parser.hpp"
#include "phax/service.hpp"
#include "report.hpp"

struct phax_session {
  phax::aspic::Analysis analysis;
};

struct phax_af {
  phax::af::ArgumentationFramework af;
};

namespace {

thread_local std::string last_error;

phax_status to_status(phax::ErrorCode c) {
  using phax::ErrorCode;
  switch (c) {
    case ErrorCode::Parse: return PHAX_ERR_PARSE;
    case ErrorCode::InvalidArgument: return PHAX_ERR_INVALID_ARGUMENT;
    case ErrorCode::NotFound: return PHAX_ERR_NOT_FOUND;
    case ErrorCode::Insufficient: return PHAX_ERR_INSUFFICIENT;
    case ErrorCode::LimitExceeded: return PHAX_ERR_LIMIT_EXCEEDED;
    case ErrorCode::Io: return PHAX_ERR_IO;
    case ErrorCode::Internal: return PHAX_ERR_INTERNAL;
  }
  return PHAX_ERR_INTERNAL;
}

template <class F>
phax_status guarded(F&& f) {
  last_error.clear();
  try {
    f();
    return PHAX_OK;
  } catch (const phax::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return PHAX_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PHAX_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw phax::Error(phax::ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw phax::Error(phax::ErrorCode::Io, std::string("cannot read ") + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

phax::af::Semantics semantics(const char* name) {
  auto s = phax::af::parse_semantics(name ? name : "grounded");
  if (!s) throw phax::Error(phax::ErrorCode::InvalidArgument, std::string("unknown semantics '") + name + "'");
  return *s;
}

}  // namespace

extern "C" {

const char* phax_version(void) { return "0.1.0"; }

const char* phax_status_name(phax_status status) {
  switch (status) {
    case PHAX_OK: return "OK";
    case PHAX_ERR_PARSE: return "PARSE";
    case PHAX_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case PHAX_ERR_NOT_FOUND: return "NOT_FOUND";
    case PHAX_ERR_INSUFFICIENT: return "INSUFFICIENT";
    case PHAX_ERR_LIMIT_EXCEEDED: return "LIMIT_EXCEEDED";
    case PHAX_ERR_IO: return "IO";
    case PHAX_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* phax_last_error(void) { return last_error.c_str(); }

void phax_string_free(char* s) { std::free(s); }

phax_status phax_check_file(const char* path, char** report) {
  return guarded([&] {
    require(path, "path");
    require(report, "report");
    *report = nullptr;
    auto parsed = phax::parse_theory(read_file(path));
    if (!parsed.ok()) {
      *report = dup(parsed.format_diagnostics(path));
      throw phax::Error(phax::ErrorCode::Parse, std::string(path) + ": invalid theory");
    }
    // Warnings are printed ahead of the summary.
    std::string text = parsed.format_diagnostics(path);
    *report = dup(text + phax::report::check_summary(*parsed.theory));
  });
}

phax_status phax_session_open(const char* source, size_t length, const char* filename, phax_session** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (length > 0) require(source, "source");
    auto t = phax::parse_theory_or_throw(std::string_view(source ? source : "", length),
                                         filename ? filename : "<input>");
    *out = new phax_session{phax::aspic::analyze(t)};
  });
}

phax_status phax_session_open_file(const char* path, phax_session** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto t = phax::parse_theory_or_throw(read_file(path), path);
    *out = new phax_session{phax::aspic::analyze(t)};
  });
}

void phax_session_close(phax_session* session) { delete session; }

phax_status phax_session_serialize(const phax_session* session, char** out) {
  return guarded([&] {
    require(session, "session");
    require(out, "out");
    *out = dup(phax::serialize_theory(session->analysis.theory));
  });
}

phax_status phax_session_arguments(const phax_session* session, phax_format format, char** out) {
  return guarded([&] {
    require(session, "session");
    require(out, "out");
    if (format == PHAX_FORMAT_JSON) *out = dup(phax::report::arguments_json(session->analysis).dump(2) + "\n");
    else if (format == PHAX_FORMAT_DOT) *out = dup(phax::aspic::defeat_graph_to_dot(session->analysis.graph));
    else *out = dup(phax::report::arguments_text(session->analysis));
  });
}

phax_status phax_session_extensions(const phax_session* session, const char* sem, phax_format format, char** out) {
  return guarded([&] {
    require(session, "session");
    require(out, "out");
    auto s = semantics(sem);
    const auto& a = session->analysis;
    if (format == PHAX_FORMAT_JSON) {
      *out = dup(phax::report::extensions_json(a, s).dump(2) + "\n");
    } else if (format == PHAX_FORMAT_DOT) {
      auto labs = phax::report::labellings(a.projection.af, s);
      if (labs.empty()) throw phax::Error(phax::ErrorCode::NotFound, "no labelling to draw");
      *out = dup(phax::render::render_af_dot(a.projection.af, labs.front()));
    } else {
      *out = dup(phax::report::extensions_text(a, s));
    }
  });
}

phax_status phax_session_accepts(const phax_session* session, const char* literal, const char* sem, const char* mode,
                                 int* accepted) {
  return guarded([&] {
    require(session, "session");
    require(literal, "literal");
    require(accepted, "accepted");
    auto l = phax::parse_literal(literal);
    if (!l) throw phax::Error(phax::ErrorCode::InvalidArgument, std::string("not a literal: ") + literal);
    auto m = phax::af::parse_mode(mode ? mode : "skeptical");
    if (!m) throw phax::Error(phax::ErrorCode::InvalidArgument, std::string("unknown mode '") + mode + "'");
    const auto& a = session->analysis;
    auto st = phax::aspic::conclusion_status(a, phax::report::labellings(a.projection.af, semantics(sem)), *l);
    *accepted = (*m == phax::af::Mode::Skeptical ? st.skeptical : st.credulous) ? 1 : 0;
  });
}

void phax_explain_options_init(phax_explain_options* o) {
  if (!o) return;
  phax::adapt::UtilityWeights w;
  phax::render::ExplainOptions e;
  o->target = nullptr;
  o->profile = "clinician";
  o->alpha = w.alpha;
  o->beta = w.beta;
  o->gamma = w.gamma;
  o->tau = w.tau;
  o->epsilon = w.epsilon;
  o->max_depth = e.max_depth;
  o->beam_width = e.selection.beam_width;
  o->format = PHAX_FORMAT_TEXT;
}

phax_status phax_session_explain(const phax_session* session, const phax_explain_options* o, char** out) {
  return guarded([&] {
    require(session, "session");
    require(o, "options");
    require(o->target, "options->target");
    require(out, "out");
    *out = nullptr;
    auto profile = phax::report::resolve_profile(o->profile ? o->profile : "clinician");
    phax::render::ExplainOptions opt;
    opt.weights = {o->alpha, o->beta, o->gamma, o->tau, o->epsilon};
    opt.max_depth = o->max_depth;
    opt.selection.beam_width = o->beam_width;
    switch (o->format) {
      case PHAX_FORMAT_MARKDOWN: opt.format = phax::render::Format::Markdown; break;
      case PHAX_FORMAT_DOT: opt.format = phax::render::Format::Dot; break;
      default: opt.format = phax::render::Format::Text;
    }
    auto e = phax::render::explain(session->analysis, o->target, profile, opt);
    if (o->format == PHAX_FORMAT_JSON) *out = dup(phax::report::explanation_json(e, session->analysis).dump(2) + "\n");
    else *out = dup(e.rendered.body);
  });
}

phax_status phax_af_open(const char* text, size_t length, phax_af** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    if (length > 0) require(text, "text");
    *out = new phax_af{phax::af::parse_iccma(std::string_view(text ? text : "", length))};
  });
}

phax_status phax_af_open_file(const char* path, phax_af** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = new phax_af{phax::af::parse_iccma(read_file(path))};
  });
}

void phax_af_close(phax_af* af) { delete af; }

phax_status phax_af_size(const phax_af* af, size_t* arguments, size_t* attacks) {
  return guarded([&] {
    require(af, "af");
    if (arguments) *arguments = af->af.size();
    if (attacks) *attacks = af->af.attacks().size();
  });
}

phax_status phax_af_extensions(const phax_af* af, const char* sem, phax_format format, char** out) {
  return guarded([&] {
    require(af, "af");
    require(out, "out");
    auto s = semantics(sem);
    auto labs = phax::report::labellings(af->af, s);
    if (format == PHAX_FORMAT_JSON) {
      *out = dup(phax::report::labellings_json(af->af, labs, s).dump(2) + "\n");
    } else if (format == PHAX_FORMAT_DOT) {
      if (labs.empty()) throw phax::Error(phax::ErrorCode::NotFound, "no labelling to draw");
      *out = dup(phax::render::render_af_dot(af->af, labs.front()));
    } else {
      *out = dup(phax::report::labellings_text(af->af, labs));
    }
  });
}

int phax_is_iccma(const char* text, size_t length) {
  if (!text) return 0;
  return phax::af::looks_like_iccma(std::string_view(text, length)) ? 1 : 0;
}

int phax_default_port(void) { return phax::service::default_port(); }

phax_status phax_serve(const char* host, int port, const char* state_dir) {
  return guarded([&] {
    phax::service::Config c;
    if (host) c.host = host;
    c.port = port;
    if (state_dir) c.state_dir = state_dir;
    phax::service::Service s(c);
    int bound = s.bind();
    std::fprintf(stderr, "phax: listening on http://%s:%d\n", c.host.c_str(), bound);
    s.listen();
  });
}

}  // extern "C"
