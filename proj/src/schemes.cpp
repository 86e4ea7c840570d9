#include "phax/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "phax/parser.hpp"

namespace phax::schemes {

namespace {

Term term(const std::string& name) {
  return is_variable_name(name) ? Term::variable(name) : Term::constant(name);
}

Literal tmpl(std::string predicate, std::vector<std::string> args) {
  std::vector<Term> terms;
  for (const auto& a : args) terms.push_back(term(a));
  return Literal(std::move(predicate), std::move(terms));
}

std::vector<Scheme> make_schemes() {
  std::vector<Scheme> out;

  out.push_back({"expert_opinion",
                 "Expert Opinion",
                 "Relying on authority or professional expertise",
                 {"E", "D", "P"},
                 {tmpl("is_expert", {"E", "D"}), tmpl("asserts", {"E", "P"}), tmpl("relevant", {"P", "D"})},
                 tmpl("believe", {"P"}),
                 {{"expertise", "Is {E} a genuine expert in {D}?"},
                  {"bias", "Is {E} biased?"},
                  {"consistency", "Is {P} consistent with what other experts in {D} assert?"},
                  {"evidence", "Is the assertion of {E} based on evidence?"}},
                 {{Band::Lay, "Trusted experts on {D} support this: {P}."},
                  {Band::DecisionMaker, "{E}, an authority on {D}, advises: {P}."},
                  {Band::Professional, "Expert opinion ({E}, domain {D}) asserts {P}."}},
                 "WHO recommends vaccination for this age group",
                 {{"E", "who"}, {"D", "immunization"}, {"P", "vaccinate_group"}}});

  out.push_back({"cause_to_effect",
                 "Cause to Effect",
                 "Predicting consequences of an action or event",
                 {"A", "E"},
                 {tmpl("action", {"A"}), tmpl("causes", {"A", "E"})},
                 tmpl("expect", {"E"}),
                 {{"confounders", "Could something other than {A} explain {E}?"},
                  {"strength", "Is the causal link between {A} and {E} well established?"}},
                 {{Band::Lay, "{A} helps bring about {E}."},
                  {Band::DecisionMaker, "Acting on {A} is expected to lead to {E}."},
                  {Band::Professional, "Causal evidence links {A} to {E}."}},
                 "Masking reduces viral transmission",
                 {{"A", "masking"}, {"E", "reduced_transmission"}}});

  out.push_back({"practical_reasoning",
                 "Practical Reasoning",
                 "Choosing actions to achieve desired outcomes",
                 {"G", "A"},
                 {tmpl("goal", {"G"}), tmpl("action", {"A"}), tmpl("promotes", {"A", "G"})},
                 tmpl("do", {"A"}),
                 {{"alternatives", "Are there alternative actions to {A} that achieve {G}?"},
                  {"side_effects", "Does {A} have consequences that outweigh {G}?"},
                  {"feasibility", "Is {A} feasible?"}},
                 {{Band::Lay, "Doing {A} helps reach the goal of {G}."},
                  {Band::DecisionMaker, "To achieve {G}, {A} is the recommended action."},
                  {Band::Professional, "{A} is indicated because it promotes {G}."}},
                 "To prevent ICU overload, implement lockdown",
                 {{"G", "prevent_icu_overload"}, {"A", "lockdown"}}});

  out.push_back({"analogy",
                 "Analogy",
                 "Inferring based on similarity to previous cases",
                 {"A", "S", "T"},
                 {tmpl("worked_for", {"A", "S"}), tmpl("similar", {"T", "S"})},
                 tmpl("works_for", {"A", "T"}),
                 {{"relevant_differences", "Are there relevant differences between {S} and {T}?"},
                  {"counter_analogy", "Is there a similar case where {A} did not work?"}},
                 {{Band::Lay, "{A} worked for {S}, so it can help with {T} too."},
                  {Band::DecisionMaker, "Experience with {S} suggests {A} will work for {T}."},
                  {Band::Professional, "By analogy with {S}, {A} is expected to be effective for {T}."}},
                 "Contact tracing worked for Ebola; it can help for COVID",
                 {{"A", "contact_tracing"}, {"S", "ebola"}, {"T", "covid"}}});

  out.push_back({"statistical_generalization",
                 "Statistical Generalization",
                 "Drawing conclusions from population-level data",
                 {"X", "G"},
                 {tmpl("sample_outcome", {"X", "G"}), tmpl("representative_sample", {"G"})},
                 tmpl("generalizes", {"X", "G"}),
                 {{"representativeness", "Is the sample for {G} representative?"},
                  {"sample_size", "Is the sample large enough to support claims about {X}?"}},
                 {{Band::Lay, "{X} has helped many people in {G}."},
                  {Band::DecisionMaker, "Population data show {X} works across {G}."},
                  {Band::Professional, "Sample results for {X} generalize to {G}."}},
                 "This drug helped 70% of patients in clinical trials",
                 {{"X", "drug"}, {"G", "trial_patients"}}});

  out.push_back({"ethical_value",
                 "Ethical/Value-based",
                 "Arguing based on fairness, harm, or social values",
                 {"A", "V"},
                 {tmpl("action", {"A"}), tmpl("upholds", {"A", "V"}), tmpl("value", {"V"})},
                 tmpl("ought", {"A"}),
                 {{"competing_values", "Do other values conflict with {V}?"},
                  {"value_promotion", "Does {A} actually uphold {V}?"}},
                 {{Band::Lay, "{A} is the fair thing to do because it protects {V}."},
                  {Band::DecisionMaker, "{A} upholds the value of {V}."},
                  {Band::Professional, "{A} is ethically required on grounds of {V}."}},
                 "We must prioritize vulnerable groups to ensure equity",
                 {{"A", "prioritize_vulnerable"}, {"V", "equity"}}});
  return out;
}

Literal bind(const Literal& l, const Bindings& b) {
  Literal out = l;
  for (auto& t : out.args)
    if (t.is_variable()) t = Term::constant(b.at(t.name));
  return out;
}

bool unify_into(const Literal& pattern, const Literal& ground, Bindings& b) {
  if (pattern.predicate != ground.predicate || pattern.negated != ground.negated ||
      pattern.arity() != ground.arity())
    return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    const Term& p = pattern.args[i];
    const Term& g = ground.args[i];
    if (g.is_variable()) return false;
    if (!p.is_variable()) {
      if (p.name != g.name) return false;
      continue;
    }
    auto [it, fresh] = b.emplace(p.name, g.name);
    if (!fresh && it->second != g.name) return false;
  }
  return true;
}

Theory checked(Theory t, const char* what) {
  auto diags = validate_theory(t);
  if (has_errors(diags)) {
    std::string msg = std::string(what) + " produced an invalid theory:";
    for (const auto& d : diags) msg += " " + d.message + ";";
    throw Error(ErrorCode::InvalidArgument, msg);
  }
  return t;
}

}  // namespace

const CriticalQuestion* Scheme::find_question(std::string_view cq) const {
  for (const auto& q : critical_questions)
    if (q.id == cq) return &q;
  return nullptr;
}

const std::vector<Scheme>& builtin_schemes() {
  static const std::vector<Scheme> schemes = make_schemes();
  return schemes;
}

const Scheme* find_scheme(std::string_view id) {
  for (const auto& s : builtin_schemes())
    if (s.id == id) return &s;
  return nullptr;
}

std::string instance_rule_id(const Scheme& s, const Bindings& bindings) {
  std::string id = s.id;
  for (const auto& v : s.variables) id += "__" + bindings.at(v);
  return id;
}

Instantiation instantiate_scheme(const Theory& t, std::string_view scheme_id, const Bindings& bindings,
                                 double confidence) {
  const Scheme* s = find_scheme(scheme_id);
  if (!s) throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + std::string(scheme_id) + "'");
  for (const auto& v : s->variables) {
    auto it = bindings.find(v);
    if (it == bindings.end())
      throw Error(ErrorCode::InvalidArgument, "incomplete bindings for " + s->id + ": missing " + v);
    if (!is_constant_name(it->second))
      throw Error(ErrorCode::InvalidArgument, "binding " + v + "=" + it->second + " is not a constant");
  }
  for (const auto& [var, value] : bindings)
    if (std::find(s->variables.begin(), s->variables.end(), var) == s->variables.end())
      throw Error(ErrorCode::InvalidArgument, "scheme " + s->id + " has no variable " + var);
  if (!std::isfinite(confidence) || confidence < 0.0 || confidence > 1.0)
    throw Error(ErrorCode::InvalidArgument, "confidence must lie in [0,1]");

  Instantiation result{t, {}};
  SchemeInstance& inst = result.instance;
  inst.scheme = s->id;
  inst.bindings = bindings;
  inst.rule_id = instance_rule_id(*s, bindings);
  inst.confidence = confidence;

  Rule rule;
  rule.id = inst.rule_id;
  rule.kind = RuleKind::Defeasible;
  rule.scheme_tag = s->id;
  for (std::size_t k = 0; k < s->premise_templates.size(); ++k) {
    Premise p;
    p.id = inst.rule_id + "_p" + std::to_string(k + 1);
    p.literal = bind(s->premise_templates[k], bindings);
    p.confidence = confidence;
    p.source = s->title + " scheme";
    inst.premise_ids.push_back(p.id);
    rule.body.push_back(p.literal);
    result.theory.premises.try_emplace(p.id, std::move(p));
  }
  rule.head = bind(s->conclusion_template, bindings);
  result.theory.rules.try_emplace(rule.id, std::move(rule));
  result.theory.collect_constants();
  result.theory = checked(std::move(result.theory), "scheme instantiation");
  return result;
}

std::optional<Bindings> match_scheme(const Scheme& s, const Rule& rule) {
  if (rule.body.size() != s.premise_templates.size()) return std::nullopt;
  Bindings b;
  for (std::size_t i = 0; i < rule.body.size(); ++i)
    if (!unify_into(s.premise_templates[i], rule.body[i], b)) return std::nullopt;
  if (!unify_into(s.conclusion_template, rule.head, b)) return std::nullopt;
  for (const auto& v : s.variables)
    if (!b.count(v)) return std::nullopt;
  return b;
}

std::optional<SchemeInstance> find_instance(const Theory& t, std::string_view rule_id) {
  auto it = t.rules.find(std::string(rule_id));
  if (it == t.rules.end() || !it->second.scheme_tag) return std::nullopt;
  const Scheme* s = find_scheme(*it->second.scheme_tag);
  if (!s) return std::nullopt;
  auto b = match_scheme(*s, it->second);
  if (!b) return std::nullopt;
  SchemeInstance inst;
  inst.scheme = s->id;
  inst.bindings = *b;
  inst.rule_id = it->first;
  double conf = 1.0;
  for (std::size_t k = 0; k < s->premise_templates.size(); ++k) {
    std::string pid = inst.rule_id + "_p" + std::to_string(k + 1);
    if (auto p = t.premises.find(pid); p != t.premises.end()) {
      inst.premise_ids.push_back(pid);
      conf = std::min(conf, p->second.confidence);
    }
  }
  inst.confidence = conf;
  return inst;
}

std::string undercutter_id(const SchemeInstance& inst, std::string_view cq) {
  return inst.rule_id + "__cq_" + std::string(cq);
}

Theory apply_critical_question(const Theory& t, const SchemeInstance& inst, std::string_view cq,
                               double evidence_confidence) {
  const Scheme* s = find_scheme(inst.scheme);
  if (!s) throw Error(ErrorCode::NotFound, "unknown scheme '" + inst.scheme + "'");
  const CriticalQuestion* q = s->find_question(cq);
  if (!q)
    throw Error(ErrorCode::NotFound, "scheme " + s->id + " has no critical question '" + std::string(cq) + "'");
  if (!t.rules.count(inst.rule_id))
    throw Error(ErrorCode::NotFound, "scheme instance rule '" + inst.rule_id + "' is not in the theory");
  if (!is_constant_name(inst.rule_id))
    throw Error(ErrorCode::InvalidArgument, "rule id '" + inst.rule_id + "' cannot be undercut");
  if (!std::isfinite(evidence_confidence) || evidence_confidence < 0.0 || evidence_confidence > 1.0)
    throw Error(ErrorCode::InvalidArgument, "evidence confidence must lie in [0,1]");

  Theory out = t;
  Premise p;
  p.id = undercutter_id(inst, cq);
  p.literal = applicable_literal(inst.rule_id, true);
  p.confidence = evidence_confidence;
  p.source = fill_template(q->text, inst.bindings);
  out.premises.try_emplace(p.id, std::move(p));
  out.constants.insert(inst.rule_id);
  return checked(std::move(out), "critical question");
}

std::string fill_template(std::string_view text, const Bindings& bindings) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '{') {
      auto close = text.find('}', i);
      if (close != std::string_view::npos) {
        std::string var(text.substr(i + 1, close - i - 1));
        if (auto it = bindings.find(var); it != bindings.end()) {
          std::string v = it->second;
          std::replace(v.begin(), v.end(), '_', ' ');
          out += v;
          i = close;
          continue;
        }
      }
    }
    out += text[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// PICO

void validate_study(const StudyRecord& r) {
  if (r.id.empty() || r.population.empty() || r.intervention.empty() || r.comparison.empty())
    throw Error(ErrorCode::InvalidArgument, "study " + r.id + ": labels must be nonempty");
  if (!std::isfinite(r.credibility) || r.credibility < 0.0 || r.credibility > 1.0)
    throw Error(ErrorCode::InvalidArgument, "study " + r.id + ": credibility must lie in [0,1]");
  if (r.sample_size == 0) throw Error(ErrorCode::InvalidArgument, "study " + r.id + ": sample size must be positive");
  if (to_constant(r.id).empty() || to_constant(r.population).empty() || to_constant(r.intervention).empty())
    throw Error(ErrorCode::InvalidArgument, "study " + r.id + ": labels need at least one letter or digit");
}

std::string to_constant(std::string_view label) {
  std::string out;
  bool pending_sep = false;
  for (unsigned char c : label) {
    if (std::isalnum(c)) {
      if (pending_sep && !out.empty()) out += '_';
      pending_sep = false;
      out += static_cast<char>(std::tolower(c));
    } else {
      pending_sep = true;
    }
  }
  if (!out.empty() && !(out[0] >= 'a' && out[0] <= 'z')) out = "c_" + out;
  return out;
}

std::string study_rule_id(const StudyRecord& r) { return to_constant(r.id) + "_recommend"; }

Theory encode_study(const StudyRecord& r) {
  validate_study(r);
  const std::string sid = to_constant(r.id);
  const std::string pop = to_constant(r.population);
  const std::string inv = to_constant(r.intervention);
  const std::string src = "study " + r.id + " (n=" + std::to_string(r.sample_size) + ")";

  Theory t;
  t.name = sid;
  auto add = [&](const std::string& suffix, Literal lit, double conf, std::string source) {
    Premise p;
    p.id = sid + "_" + suffix;
    p.literal = std::move(lit);
    p.confidence = conf;
    p.source = std::move(source);
    t.premises.emplace(p.id, p);
    return p.literal;
  };
  Rule rule;
  rule.id = study_rule_id(r);
  rule.kind = RuleKind::Defeasible;
  rule.weight = r.credibility;
  rule.body.push_back(add("population", Literal::ground("population_match", {sid, pop}), 1.0,
                          src + ": population " + r.population));
  rule.body.push_back(add("intervention", Literal::ground("intervention_applied", {sid, inv}), 1.0,
                          src + ": intervention " + r.intervention + ", comparison " + r.comparison));
  rule.body.push_back(add("outcome", Literal::ground("outcome_observed", {sid}, !r.outcome_observed), 1.0,
                          src + (r.outcome_observed ? ": outcome observed" : ": outcome not observed")));
  rule.body.push_back(add("credibility", Literal::ground("credible", {sid}), r.credibility,
                          src + ": credibility " + format_number(r.credibility)));
  rule.head = Literal::ground("recommend", {inv, pop}, !r.outcome_observed);
  t.rules.emplace(rule.id, std::move(rule));
  t.collect_constants();
  return t;
}

Theory merge_theories(const Theory& t, const Theory& fragment) {
  Theory out = t;
  out.constants.insert(fragment.constants.begin(), fragment.constants.end());
  for (const auto& [id, p] : fragment.premises) {
    auto [it, fresh] = out.premises.try_emplace(id, p);
    if (!fresh && !(it->second == p)) throw Error(ErrorCode::InvalidArgument, "conflicting premise " + id);
  }
  for (const auto& [id, r] : fragment.rules) {
    auto [it, fresh] = out.rules.try_emplace(id, r);
    if (!fresh && !(it->second == r)) throw Error(ErrorCode::InvalidArgument, "conflicting rule " + id);
  }
  out.preferences.insert(fragment.preferences.begin(), fragment.preferences.end());
  return checked(std::move(out), "merge");
}

const char* to_string(StudyOrder o) {
  switch (o) {
    case StudyOrder::FirstPreferred: return "first";
    case StudyOrder::SecondPreferred: return "second";
    case StudyOrder::Incomparable: return "incomparable";
  }
  return "incomparable";
}

StudyOrder study_preference(const StudyRecord& a, const StudyRecord& b) {
  if (a.credibility > b.credibility) return StudyOrder::FirstPreferred;
  if (a.credibility < b.credibility) return StudyOrder::SecondPreferred;
  if (a.sample_size > b.sample_size) return StudyOrder::FirstPreferred;
  if (a.sample_size < b.sample_size) return StudyOrder::SecondPreferred;
  return StudyOrder::Incomparable;
}

Theory apply_study_preference(const Theory& t, const StudyRecord& a, const StudyRecord& b) {
  const std::string ra = study_rule_id(a), rb = study_rule_id(b);
  for (const auto& id : {ra, rb})
    if (!t.rules.count(id)) throw Error(ErrorCode::NotFound, "study rule '" + id + "' is not in the theory");
  Theory out = t;
  switch (study_preference(a, b)) {
    case StudyOrder::FirstPreferred: out.preferences.emplace(ra, rb); break;
    case StudyOrder::SecondPreferred: out.preferences.emplace(rb, ra); break;
    case StudyOrder::Incomparable: break;
  }
  return checked(std::move(out), "study preference");
}

namespace {

bool parse_outcome(std::string v, const std::string& study) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "positive" || v == "observed" || v == "yes" || v == "true" || v == "1" || v == "+") return true;
  if (v == "negative" || v == "not_observed" || v == "no" || v == "false" || v == "0" || v == "-") return false;
  throw Error(ErrorCode::InvalidArgument, "study " + study + ": unrecognized outcome '" + v + "'");
}

std::vector<std::vector<std::string>> csv_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::InvalidArgument, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string trim(std::string s) {
  auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

double to_double(const std::string& v, const std::string& what) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad " + what + " '" + v + "'");
  }
}

std::uint64_t to_count(const std::string& v, const std::string& what) {
  try {
    std::size_t used = 0;
    unsigned long long n = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad " + what + " '" + v + "'");
  }
}

}  // namespace

std::vector<StudyRecord> studies_from_csv(std::string_view csv) {
  auto rows = csv_rows(csv);
  if (rows.empty()) return {};
  static const std::vector<std::string> columns = {"id", "population", "intervention", "comparison",
                                                   "outcome", "credibility", "sample_size"};
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < rows[0].size(); ++i) pos[trim(rows[0][i])] = i;
  for (const auto& c : columns)
    if (!pos.count(c)) throw Error(ErrorCode::InvalidArgument, "CSV header lacks column '" + c + "'");
  std::vector<StudyRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto get = [&](const std::string& c) {
      std::size_t i = pos.at(c);
      if (i >= row.size())
        throw Error(ErrorCode::InvalidArgument, "CSV row " + std::to_string(r + 1) + " lacks column " + c);
      return trim(row[i]);
    };
    StudyRecord s;
    s.id = get("id");
    s.population = get("population");
    s.intervention = get("intervention");
    s.comparison = get("comparison");
    s.outcome_observed = parse_outcome(get("outcome"), s.id);
    s.credibility = to_double(get("credibility"), "credibility");
    s.sample_size = to_count(get("sample_size"), "sample_size");
    validate_study(s);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<StudyRecord> studies_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("study JSON: ") + e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::InvalidArgument, "study JSON must be an array");
  std::vector<StudyRecord> out;
  try {
    for (const auto& o : j) {
      StudyRecord s;
      s.id = o.at("id").get<std::string>();
      s.population = o.at("population").get<std::string>();
      s.intervention = o.at("intervention").get<std::string>();
      s.comparison = o.at("comparison").get<std::string>();
      const auto& oc = o.at("outcome");
      s.outcome_observed = oc.is_boolean() ? oc.get<bool>() : parse_outcome(oc.get<std::string>(), s.id);
      s.credibility = o.at("credibility").get<double>();
      const auto& n = o.at("sample_size");
      if (!n.is_number_integer() || n.get<long long>() <= 0)
        throw Error(ErrorCode::InvalidArgument, "study " + s.id + ": sample size must be a positive integer");
      s.sample_size = n.get<std::uint64_t>();
      validate_study(s);
      out.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("study JSON: ") + e.what());
  }
  return out;
}

}  // namespace phax::schemes
