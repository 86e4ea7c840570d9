#include "phax/service.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <shared_mutex>
#include <sstream>

#include <httplib.h>

#include "phax/parser.hpp"
#include "report.hpp"

namespace phax::service {

using report::Json;
namespace fs = std::filesystem;

int default_port() {
  if (const char* env = std::getenv("PHAX_PORT")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return 8080;
}

namespace {

struct State {
  Theory theory;
  std::shared_ptr<const aspic::Analysis> analysis;
  std::uint64_t version = 1;
};

struct Session {
  std::string id;
  std::chrono::system_clock::time_point created = std::chrono::system_clock::now();
  mutable std::shared_mutex mu;  // readers copy `state`; writers replace it
  std::shared_ptr<const State> state;

  std::shared_ptr<const State> snapshot() const {
    std::shared_lock lock(mu);
    return state;
  }
};

std::shared_ptr<const State> make_state(Theory t, std::uint64_t version) {
  auto s = std::make_shared<State>();
  s->analysis = std::make_shared<const aspic::Analysis>(aspic::analyze(t));
  s->theory = std::move(t);
  s->version = version;
  return s;
}

// Request-level failure carrying an HTTP status.
struct HttpError {
  int status;
  std::string code;
  std::string message;
  Json extra = Json::object();
};

int status_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse:
    case ErrorCode::InvalidArgument: return 400;
    case ErrorCode::NotFound: return 404;
    case ErrorCode::Insufficient:
    case ErrorCode::LimitExceeded: return 422;
    case ErrorCode::Io:
    case ErrorCode::Internal: return 500;
  }
  return 500;
}

Response json_response(int status, const Json& j) { return {status, j.dump(), "application/json"}; }

Response error_response(const HttpError& e) {
  Json j = {{"code", e.code}, {"message", e.message}};
  for (auto it = e.extra.begin(); it != e.extra.end(); ++it) j[it.key()] = it.value();
  return json_response(e.status, j);
}

Json parse_body(std::string_view body) {
  if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return Json::object();
  try {
    Json j = Json::parse(body);
    if (!j.is_object()) throw HttpError{400, "MALFORMED", "request body must be a JSON object"};
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw HttpError{400, "MALFORMED", std::string("invalid JSON: ") + e.what()};
  }
}

template <class T>
T field(const Json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw HttpError{400, "MALFORMED", std::string("field '") + key + "' has the wrong type"};
  }
}

af::Semantics semantics_from(std::string_view name) {
  auto s = af::parse_semantics(name);
  if (!s) throw HttpError{400, "INVALID_ARGUMENT", "unknown semantics '" + std::string(name) + "'"};
  return *s;
}

Json diagnostics_json(const std::vector<Diagnostic>& diags) {
  Json out = Json::array();
  for (const auto& d : diags)
    out.push_back({{"severity", to_string(d.severity)},
                   {"message", d.message},
                   {"line", d.line},
                   {"column", d.column},
                   {"ids", d.ids}});
  return out;
}

UserProfile profile_from(const Json& body) {
  if (!body.contains("profile")) return *find_bundled_profile("clinician");
  const Json& p = body.at("profile");
  if (p.is_string()) {
    auto b = find_bundled_profile(p.get<std::string>());
    if (!b) throw HttpError{404, "NOT_FOUND", "unknown profile '" + p.get<std::string>() + "'"};
    return *b;
  }
  if (p.is_object()) return profile_from_json(p.dump());
  throw HttpError{400, "MALFORMED", "profile must be a name or an object"};
}

adapt::UtilityWeights weights_from(const Json& body) {
  adapt::UtilityWeights w;
  const Json& src = body.contains("weights") && body.at("weights").is_object() ? body.at("weights") : body;
  w.alpha = field(src, "alpha", w.alpha);
  w.beta = field(src, "beta", w.beta);
  w.gamma = field(src, "gamma", w.gamma);
  w.tau = field(src, "tau", w.tau);
  w.epsilon = field(src, "epsilon", w.epsilon);
  return w;
}

// Literal named by `target`: an argument id or label, or literal text.
std::optional<Literal> target_literal(const aspic::Analysis& a, std::string_view target) {
  if (const auto* arg = a.graph.arguments.find(target)) return arg->conclusion;
  if (const auto* arg = a.graph.arguments.find_by_label(target)) return arg->conclusion;
  return parse_literal(target);
}

Json target_report(const aspic::Analysis& a, const Literal& l, af::Semantics s) {
  auto status = aspic::conclusion_status(a, report::labellings(a.projection.af, s), l);
  Json j = {{"status", aspic::to_string(status.status)},
            {"skeptical", status.skeptical},
            {"credulous", status.credulous}};
  try {
    std::string root = render::resolve_target(a, l.to_string());
    j["sigma"] = adapt::sufficiency(adapt::build_dispute_tree(a.graph, a.ground, root));
  } catch (const Error&) {
    j["sigma"] = nullptr;
  }
  return j;
}

std::string new_session_id() {
  static std::mt19937_64 rng{std::random_device{}()};
  static std::mutex mu;
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    while (i < path.size() && path[i] == '/') ++i;
    std::size_t j = path.find('/', i);
    if (j == std::string_view::npos) j = path.size();
    if (j > i) parts.emplace_back(path.substr(i, j - i));
    i = j;
  }
  return parts;
}

}  // namespace

struct Service::Impl {
  Config config;
  mutable std::shared_mutex sessions_mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  httplib::Server server;
  int bound_port = -1;

  explicit Impl(Config c) : config(std::move(c)) { load_snapshots(); }

  void load_snapshots() {
    if (config.state_dir.empty()) return;
    std::error_code ec;
    fs::create_directories(config.state_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create state directory " + config.state_dir);
    for (const auto& entry : fs::directory_iterator(config.state_dir)) {
      if (entry.path().extension() != ".phax") continue;
      std::ifstream in(entry.path());
      std::stringstream ss;
      ss << in.rdbuf();
      auto parsed = parse_theory(ss.str());
      if (!parsed.ok()) continue;  // a damaged snapshot is skipped rather than fatal
      auto s = std::make_shared<Session>();
      s->id = entry.path().stem().string();
      s->state = make_state(std::move(*parsed.theory), 1);
      sessions[s->id] = std::move(s);
    }
  }

  void persist(const Session& s, const State& st) const {
    if (config.state_dir.empty()) return;
    fs::path dst = fs::path(config.state_dir) / (s.id + ".phax");
    fs::path tmp = dst;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << serialize_theory(st.theory);
      if (!out) throw Error(ErrorCode::Io, "cannot write snapshot " + tmp.string());
    }
    fs::rename(tmp, dst);
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(sessions_mu);
    auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, "NOT_FOUND", "unknown session '" + id + "'"};
    return it->second;
  }

  Response create(std::string_view body, std::string_view content_type) {
    std::string source;
    bool json = content_type.find("json") != std::string_view::npos;
    if (json) {
      Json j = parse_body(body);
      if (!j.contains("source") || !j.at("source").is_string())
        throw HttpError{400, "MALFORMED", "expected {\"source\": \"...\"}"};
      source = j.at("source").get<std::string>();
    } else {
      source = std::string(body);
    }
    auto parsed = parse_theory(source);
    if (!parsed.ok()) {
      const auto& d = parsed.diagnostics;
      std::string first = d.empty() ? "parse error" : d.front().format("<request>");
      throw HttpError{400, "PARSE", first, {{"diagnostics", diagnostics_json(d)}}};
    }
    auto s = std::make_shared<Session>();
    s->state = make_state(std::move(*parsed.theory), 1);
    {
      std::unique_lock lock(sessions_mu);
      do s->id = new_session_id();
      while (sessions.count(s->id));
      sessions[s->id] = s;
    }
    persist(*s, *s->state);
    return json_response(201, {{"id", s->id},
                               {"name", s->state->theory.name},
                               {"arguments", s->state->analysis->graph.arguments.size()}});
  }

  Response get_theory(const Session& s) const {
    auto st = s.snapshot();
    return json_response(200, {{"id", s.id},
                               {"name", st->theory.name},
                               {"version", st->version},
                               {"source", serialize_theory(st->theory)}});
  }

  Response arguments(const Session& s) const {
    auto st = s.snapshot();
    return json_response(200, report::arguments_json(*st->analysis));
  }

  Response extensions(const Session& s, const std::map<std::string, std::string>& query) const {
    auto it = query.find("semantics");
    af::Semantics sem = semantics_from(it == query.end() ? "grounded" : it->second);
    auto st = s.snapshot();
    return json_response(200, report::extensions_json(*st->analysis, sem));
  }

  Response explain(const Session& s, const Json& body) const {
    auto st = s.snapshot();
    if (!body.contains("target") || !body.at("target").is_string())
      throw HttpError{400, "MALFORMED", "field 'target' is required"};
    std::string target = body.at("target").get<std::string>();
    UserProfile profile = profile_from(body);
    render::ExplainOptions opt;
    opt.weights = weights_from(body);
    std::string fmt = field<std::string>(body, "format", "text");
    auto f = render::parse_format(fmt);
    if (!f) throw HttpError{400, "INVALID_ARGUMENT", "unsupported format '" + fmt + "'"};
    opt.format = *f;
    opt.max_depth = field<std::size_t>(body, "max_depth", opt.max_depth);
    opt.selection.beam_width = field<std::size_t>(body, "beam_width", opt.selection.beam_width);
    af::Semantics sem = semantics_from(field<std::string>(body, "semantics", "grounded"));

    const aspic::Analysis& a = *st->analysis;
    try {
      auto e = render::explain(a, target, profile, opt);
      Json out = report::explanation_json(e, a);
      out["profile"] = Json::parse(profile_to_json(profile));
      out["band"] = to_string(profile.band());
      out["acceptance"] = target_report(a, a.graph.arguments.at(e.root).conclusion, sem);
      return json_response(200, out);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::Insufficient) throw;
      std::string root = render::resolve_target(a, target, opt.max_depth);
      double sigma_full = adapt::sufficiency(adapt::build_dispute_tree(a.graph, a.ground, root, opt.max_depth));
      throw HttpError{422, "INSUFFICIENT", err.what(), {{"sigma_full", sigma_full}, {"tau", opt.weights.tau}}};
    }
  }

  Response challenge(Session& s, const Json& body) {
    std::string cq = field<std::string>(body, "cq", "");
    if (cq.empty()) throw HttpError{400, "MALFORMED", "field 'cq' is required"};
    double confidence = field(body, "confidence", 1.0);
    af::Semantics sem = semantics_from(field<std::string>(body, "semantics", "grounded"));

    std::unique_lock lock(s.mu);
    auto before = s.state;
    std::string rule = field<std::string>(body, "rule", "");
    if (rule.empty()) {
      std::string scheme = field<std::string>(body, "scheme", "");
      const schemes::Scheme* sc = schemes::find_scheme(scheme);
      if (!sc) throw HttpError{404, "NOT_FOUND", "unknown scheme '" + scheme + "'"};
      auto bindings = field<schemes::Bindings>(body, "bindings", {});
      rule = schemes::instance_rule_id(*sc, bindings);
    }
    auto inst = schemes::find_instance(before->theory, rule);
    if (!inst) throw HttpError{404, "NOT_FOUND", "no scheme instance with rule '" + rule + "'"};
    Theory next = schemes::apply_critical_question(before->theory, *inst, cq, confidence);
    auto after = make_state(std::move(next), before->version + 1);
    auto cb = report::conclusions(*before->analysis, sem);
    auto ca = report::conclusions(*after->analysis, sem);
    s.state = after;
    persist(s, *after);
    return json_response(200, {{"undercutter", schemes::undercutter_id(*inst, cq)},
                               {"rule", inst->rule_id},
                               {"version", after->version},
                               {"semantics", af::to_string(sem)},
                               {"before", report::conclusions_json(cb)},
                               {"after", report::conclusions_json(ca)},
                               {"delta", report::acceptance_delta(cb, ca)}});
  }

  static std::set<PreferencePair> pairs_from(const Json& body, const char* key) {
    std::set<PreferencePair> out;
    if (!body.contains("preferences")) return out;
    const Json& p = body.at("preferences");
    if (!p.is_object()) throw HttpError{400, "MALFORMED", "preferences must be {add, remove}"};
    for (const auto& e : field<std::vector<std::vector<std::string>>>(p, key, {})) {
      if (e.size() != 2) throw HttpError{400, "MALFORMED", "a preference is [preferred, less_preferred]"};
      out.emplace(e[0], e[1]);
    }
    return out;
  }

  Response whatif(Session& s, const Json& body) {
    bool commit = field(body, "commit", false);
    af::Semantics sem = semantics_from(field<std::string>(body, "semantics", "grounded"));
    auto disable = field<std::vector<std::string>>(body, "disable_premises", {});
    auto add = pairs_from(body, "add");
    auto remove = pairs_from(body, "remove");

    // Commit holds the writer lock across read-modify-write; previews only read.
    std::unique_lock<std::shared_mutex> wlock(s.mu, std::defer_lock);
    std::shared_lock<std::shared_mutex> rlock(s.mu, std::defer_lock);
    if (commit) wlock.lock();
    else rlock.lock();
    auto before = s.state;

    Theory t = before->theory;
    for (const auto& id : disable) {
      if (!t.premises.erase(id)) throw HttpError{404, "NOT_FOUND", "unknown premise '" + id + "'"};
      std::erase_if(t.preferences, [&](const PreferencePair& p) { return p.first == id || p.second == id; });
    }
    for (const auto& p : remove)
      if (!t.preferences.erase(p))
        throw HttpError{404, "NOT_FOUND", "no preference " + p.first + " > " + p.second};
    for (const auto& p : add) t.preferences.insert(p);
    auto diags = validate_theory(t);
    if (has_errors(diags)) {
      throw HttpError{400, "INVALID_ARGUMENT", diags.front().message, {{"diagnostics", diagnostics_json(diags)}}};
    }
    auto after = make_state(std::move(t), before->version + 1);
    auto cb = report::conclusions(*before->analysis, sem);
    auto ca = report::conclusions(*after->analysis, sem);

    Json out = {{"committed", commit},
                {"semantics", af::to_string(sem)},
                {"before", report::conclusions_json(cb)},
                {"after", report::conclusions_json(ca)},
                {"delta", report::acceptance_delta(cb, ca)}};
    std::string target = field<std::string>(body, "target", "");
    if (!target.empty()) {
      auto l = target_literal(*before->analysis, target);
      if (!l) throw HttpError{404, "NOT_FOUND", "unknown target '" + target + "'"};
      out["target"] = {{"conclusion", l->to_string()},
                       {"before", target_report(*before->analysis, *l, sem)},
                       {"after", target_report(*after->analysis, *l, sem)}};
    }
    if (commit) {
      s.state = after;
      persist(s, *after);
      out["version"] = after->version;
    } else {
      out["version"] = before->version;
    }
    return json_response(200, out);
  }

  Response route(std::string_view method, std::string_view path, const std::map<std::string, std::string>& query,
                 std::string_view body, std::string_view content_type) {
    if (body.size() > config.max_body)
      throw HttpError{413, "PAYLOAD_TOO_LARGE", "request body exceeds " + std::to_string(config.max_body) + " bytes"};
    auto parts = split_path(path);
    auto method_not_allowed = [&] { return HttpError{405, "METHOD_NOT_ALLOWED", std::string(method) + " not allowed"}; };
    if (parts.size() < 2 || parts[0] != "api") throw HttpError{404, "NOT_FOUND", "no route " + std::string(path)};

    if (parts.size() == 2 && parts[1] == "schemes") {
      if (method != "GET") throw method_not_allowed();
      return json_response(200, report::schemes_json());
    }
    if (parts[1] != "theory") throw HttpError{404, "NOT_FOUND", "no route " + std::string(path)};
    if (parts.size() == 2) {
      if (method != "POST") throw method_not_allowed();
      return create(body, content_type);
    }
    auto session = find(parts[2]);
    if (parts.size() == 3) {
      if (method != "GET") throw method_not_allowed();
      return get_theory(*session);
    }
    if (parts.size() != 4) throw HttpError{404, "NOT_FOUND", "no route " + std::string(path)};
    const std::string& op = parts[3];
    if (op == "arguments" || op == "extensions") {
      if (method != "GET") throw method_not_allowed();
      return op == "arguments" ? arguments(*session) : extensions(*session, query);
    }
    if (op == "explain" || op == "challenge" || op == "whatif") {
      if (method != "POST") throw method_not_allowed();
      Json j = parse_body(body);
      if (op == "explain") return explain(*session, j);
      return op == "challenge" ? challenge(*session, j) : whatif(*session, j);
    }
    throw HttpError{404, "NOT_FOUND", "no route " + std::string(path)};
  }
};

Service::Service(Config config) : impl_(std::make_unique<Impl>(std::move(config))) {
  auto& srv = impl_->server;
  srv.set_payload_max_length(impl_->config.max_body);
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    Response r = handle(req.method, req.path, query, req.body, req.get_header_value("Content-Type"));
    res.status = r.status;
    res.set_content(r.body, r.content_type);
    res.set_header("Access-Control-Allow-Origin", "*");
  };
  srv.Get(".*", forward);
  srv.Post(".*", forward);
  srv.Put(".*", forward);
  srv.Delete(".*", forward);
  srv.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });
  // Statuses produced by httplib itself (oversized payloads, bad requests) still get a JSON body.
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    std::string code = res.status == 413 ? "PAYLOAD_TOO_LARGE" : "HTTP_" + std::to_string(res.status);
    res.set_content(Json({{"code", code}, {"message", httplib::status_message(res.status)}}).dump(),
                    "application/json");
    return httplib::Server::HandlerResponse::Handled;
  });
}

Service::~Service() { stop(); }

Response Service::handle(std::string_view method, std::string_view path,
                         const std::map<std::string, std::string>& query, std::string_view body,
                         std::string_view content_type) {
  try {
    return impl_->route(method, path, query, body, content_type);
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const Error& e) {
    return error_response({status_for(e.code()), to_string(e.code()), e.what()});
  } catch (const std::exception& e) {
    return error_response({500, "INTERNAL", e.what()});
  }
}

int Service::bind() {
  auto& c = impl_->config;
  int port = c.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(c.host);
    if (port < 0) throw Error(ErrorCode::Io, "cannot bind " + c.host);
  } else if (!impl_->server.bind_to_port(c.host, port)) {
    throw Error(ErrorCode::Io, "cannot bind " + c.host + ":" + std::to_string(port) + " (port busy?)");
  }
  impl_->bound_port = port;
  return port;
}

void Service::listen() {
  if (impl_->bound_port < 0) throw Error(ErrorCode::Internal, "listen() before bind()");
  impl_->server.listen_after_bind();
}

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

std::size_t Service::session_count() const {
  std::shared_lock lock(impl_->sessions_mu);
  return impl_->sessions.size();
}

}  // namespace phax::service
