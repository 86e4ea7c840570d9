#include "report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace phax::report {

UserProfile resolve_profile(std::string_view source) {
  if (auto p = find_bundled_profile(source)) return *p;
  auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && source[first] == '{') return profile_from_json(source);
  std::ifstream in{std::string(source)};
  if (!in) {
    throw Error(ErrorCode::NotFound, "unknown profile '" + std::string(source) +
                                         "' (expected patient, clinician, policymaker, JSON or a file path)");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return profile_from_json(ss.str());
}

Json literal_json(const Literal& l) { return l.to_string(); }

Json arguments_json(const aspic::Analysis& a) {
  Json out;
  out["arguments"] = Json::parse(aspic::arguments_to_json(a.graph.arguments));
  Json attacks = Json::array();
  for (const auto& at : a.graph.attacks)
    attacks.push_back({{"attacker", at.attacker}, {"attacked", at.attacked}, {"kind", aspic::to_string(at.kind)},
                       {"target", at.target}});
  out["attacks"] = std::move(attacks);
  Json defeats = Json::array();
  for (const auto& [from, to] : a.graph.defeats) defeats.push_back({from, to});
  out["defeats"] = std::move(defeats);
  return out;
}

std::string arguments_text(const aspic::Analysis& a) {
  std::vector<const aspic::Argument*> args;
  for (const auto& arg : a.graph.arguments) args.push_back(&arg);
  std::sort(args.begin(), args.end(), [](auto* x, auto* y) { return x->label < y->label; });
  std::ostringstream os;
  for (const auto* arg : args) {
    os << arg->label << ": " << arg->conclusion.to_string() << "  weight=" << format_number(arg->weight);
    if (!arg->subarguments.empty()) {
      os << "  from";
      for (const auto& s : arg->subarguments) os << " " << a.graph.arguments.at(s).label;
    }
    os << "  [" << arg->id << "]\n";
  }
  return os.str();
}

std::vector<af::Labelling> labellings(const af::ArgumentationFramework& af, af::Semantics s) {
  return af::enumerate_labellings(af, s);
}

namespace {

std::vector<std::string> names_with(const af::Labelling& lab, af::Label l, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (std::size_t i : lab.indices(l)) out.push_back(names[i]);
  std::sort(out.begin(), out.end());
  return out;
}

Json labellings_json_named(const std::vector<af::Labelling>& labs, af::Semantics s,
                           const std::vector<std::string>& names) {
  Json out;
  out["semantics"] = af::to_string(s);
  Json list = Json::array();
  for (const auto& lab : labs)
    list.push_back({{"in", names_with(lab, af::Label::In, names)},
                    {"out", names_with(lab, af::Label::Out, names)},
                    {"undec", names_with(lab, af::Label::Undec, names)}});
  out["labellings"] = std::move(list);
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += " " + x;
  return s;
}

std::string labellings_text_named(const std::vector<af::Labelling>& labs, const std::vector<std::string>& names) {
  if (labs.empty()) return "no labellings\n";
  std::ostringstream os;
  for (std::size_t k = 0; k < labs.size(); ++k) {
    if (labs.size() > 1) os << "labelling " << (k + 1) << "\n";
    os << "IN:" << join(names_with(labs[k], af::Label::In, names)) << "\n";
    os << "OUT:" << join(names_with(labs[k], af::Label::Out, names)) << "\n";
    auto undec = names_with(labs[k], af::Label::Undec, names);
    if (!undec.empty()) os << "UNDEC:" << join(undec) << "\n";
  }
  return os.str();
}

std::vector<std::string> labels_of(const aspic::Analysis& a) {
  std::vector<std::string> names;
  for (std::size_t pos : a.projection.to_argument) names.push_back(a.graph.arguments[pos].label);
  return names;
}

const char* short_status(const aspic::ConclusionStatus& s) { return aspic::to_string(s.status); }

}  // namespace

Json labellings_json(const af::ArgumentationFramework& af, const std::vector<af::Labelling>& labs,
                     af::Semantics s) {
  return labellings_json_named(labs, s, af.arguments());
}

std::string labellings_text(const af::ArgumentationFramework& af, const std::vector<af::Labelling>& labs) {
  return labellings_text_named(labs, af.arguments());
}

std::vector<aspic::ConclusionStatus> conclusions(const aspic::Analysis& a, af::Semantics s) {
  return aspic::all_conclusion_statuses(a, labellings(a.projection.af, s));
}

Json conclusions_json(const std::vector<aspic::ConclusionStatus>& statuses) {
  Json out = Json::array();
  for (const auto& s : statuses)
    out.push_back({{"conclusion", s.conclusion.to_string()},
                   {"status", short_status(s)},
                   {"skeptical", s.skeptical},
                   {"credulous", s.credulous}});
  return out;
}

Json extensions_json(const aspic::Analysis& a, af::Semantics s) {
  auto labs = labellings(a.projection.af, s);
  Json out = labellings_json_named(labs, s, labels_of(a));
  Json args = Json::array();
  for (std::size_t i = 0; i < a.projection.af.size(); ++i) {
    const aspic::Argument& arg = a.graph.arguments[a.projection.to_argument[i]];
    Json node = {{"id", arg.id}, {"label", arg.label}, {"conclusion", arg.conclusion.to_string()}};
    // Per-labelling status, so a view can colour nodes without recomputing.
    Json per = Json::array();
    for (const auto& lab : labs) per.push_back(af::to_string(lab[i]));
    node["labels"] = std::move(per);
    args.push_back(std::move(node));
  }
  out["arguments"] = std::move(args);
  Json edges = Json::array();
  for (const auto& [from, to] : a.graph.defeats) edges.push_back({from, to});
  out["defeats"] = std::move(edges);
  out["conclusions"] = conclusions_json(aspic::all_conclusion_statuses(a, labs));
  return out;
}

std::string extensions_text(const aspic::Analysis& a, af::Semantics s) {
  return labellings_text_named(labellings(a.projection.af, s), labels_of(a));
}

Json acceptance_delta(const std::vector<aspic::ConclusionStatus>& before,
                      const std::vector<aspic::ConclusionStatus>& after) {
  std::map<std::string, const aspic::ConclusionStatus*> b, f;
  for (const auto& s : before) b[s.conclusion.to_string()] = &s;
  for (const auto& s : after) f[s.conclusion.to_string()] = &s;
  std::set<std::string> keys;
  for (const auto& [k, _] : b) keys.insert(k);
  for (const auto& [k, _] : f) keys.insert(k);
  Json out = Json::array();
  for (const auto& k : keys) {
    auto x = b.find(k);
    auto y = f.find(k);
    std::string sb = x == b.end() ? "absent" : short_status(*x->second);
    std::string sa = y == f.end() ? "absent" : short_status(*y->second);
    bool kb = x != b.end() && x->second->skeptical;
    bool ka = y != f.end() && y->second->skeptical;
    if (sb == sa && kb == ka) continue;
    out.push_back({{"conclusion", k},
                   {"before", sb},
                   {"after", sa},
                   {"skeptical_before", kb},
                   {"skeptical_after", ka}});
  }
  return out;
}

Json explanation_json(const render::Explanation& e, const aspic::Analysis& a) {
  const auto& sel = e.selection;
  Json nodes = Json::array();
  for (const auto& n : sel.subtree.nodes()) {
    const aspic::Argument& arg = a.graph.arguments.at(n.argument);
    Json j = {{"id", n.id},
              {"role", adapt::to_string(n.role)},
              {"argument", n.argument},
              {"label", arg.label},
              {"conclusion", arg.conclusion.to_string()},
              {"base", n.base},
              {"parent", n.parent ? Json(*n.parent) : Json(nullptr)},
              {"children", n.children}};
    if (n.scheme_tag) j["scheme"] = *n.scheme_tag;
    nodes.push_back(std::move(j));
  }
  Json out;
  out["root"] = e.root;
  out["selection"] = {{"node_ids", sel.node_ids},
                      {"nodes", std::move(nodes)},
                      {"full_size", e.full.size()},
                      {"sigma", sel.sigma},
                      {"sigma_full", sel.sigma_full},
                      {"utility", sel.utility},
                      {"features",
                       {{"clarity", sel.features.clarity},
                        {"relevance", sel.features.relevance},
                        {"lexical_fit", sel.features.lexical_fit}}},
                      {"exact", sel.exact}};
  out["rendered"] = {{"format", render::to_string(e.rendered.format)},
                     {"body", e.rendered.body},
                     {"claim", e.rendered.claim},
                     {"supports", e.rendered.supports},
                     {"challenges", e.rendered.challenges}};
  return out;
}

Json schemes_json() {
  Json out = Json::array();
  for (const auto& s : schemes::builtin_schemes()) {
    Json premises = Json::array();
    for (const auto& p : s.premise_templates) premises.push_back(p.to_string());
    Json cqs = Json::array();
    for (const auto& q : s.critical_questions) cqs.push_back({{"id", q.id}, {"text", q.text}});
    Json audience;
    for (const auto& [band, text] : s.audience_templates) audience[to_string(band)] = text;
    out.push_back({{"id", s.id},
                   {"title", s.title},
                   {"description", s.description},
                   {"variables", s.variables},
                   {"premises", std::move(premises)},
                   {"conclusion", s.conclusion_template.to_string()},
                   {"critical_questions", std::move(cqs)},
                   {"audience", std::move(audience)},
                   {"example", s.example_text},
                   {"example_bindings", s.example_bindings}});
  }
  return out;
}

std::string check_summary(const Theory& t) {
  std::size_t axioms = 0, strict = 0;
  for (const auto& [_, p] : t.premises) axioms += p.is_axiom();
  for (const auto& [_, r] : t.rules) strict += !r.is_defeasible();
  std::ostringstream os;
  os << "ok: theory " << t.name << ": " << t.premises.size() << " premises (" << axioms << " axioms), "
     << t.rules.size() << " rules (" << strict << " strict), " << t.preferences.size() << " preferences\n";
  return os.str();
}

}  // namespace phax::report
