#include "phax/render.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "phax/parser.hpp"
#include "phax/schemes.hpp"

namespace phax::render {

const char* to_string(Format f) {
  switch (f) {
    case Format::Text: return "text";
    case Format::Markdown: return "markdown";
    case Format::Dot: return "dot";
  }
  return "text";
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "text") return Format::Text;
  if (name == "markdown" || name == "md") return Format::Markdown;
  if (name == "dot") return Format::Dot;
  return std::nullopt;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

std::string annotation_for(const aspic::Argument& a, const GroundTheory& gt) {
  std::string s = "weight " + format_number(a.weight);
  std::string prem;
  for (const auto& pid : a.premise_set) {
    const Premise* p = gt.find_premise(pid);
    if (!p) continue;
    prem += (prem.empty() ? "" : ", ") + pid + " " + format_number(p->confidence);
    if (p->is_axiom()) prem += " (axiom)";
  }
  if (!prem.empty()) s += "; premises " + prem;
  std::string rules;
  for (const auto& rid : a.defeasible_rules) {
    const GroundRule* r = gt.find_rule(rid);
    rules += (rules.empty() ? "" : ", ") + rid + (r ? " " + format_number(r->rule.weight) : "");
  }
  if (!rules.empty()) s += "; rules " + rules;
  return s;
}

}  // namespace

std::string humanize(const Literal& l) {
  if (l.negated) return "not " + Literal(l.predicate, l.args, false).to_string();
  if (l.args.size() == 1) return l.args.front().name;
  return l.to_string();
}

Sentence render_argument(const aspic::Argument& a, const UserProfile& u, const GroundTheory& gt) {
  Sentence out;
  const Band band = u.band();
  if (band == Band::Professional) out.annotation = annotation_for(a, gt);

  std::string shown;
  for (const auto& pid : a.premise_set) {
    const Premise* p = gt.find_premise(pid);
    if (!p) continue;
    auto it = p->display_text.find(to_string(band));
    if (it != p->display_text.end()) shown += (shown.empty() ? "" : " ") + it->second;
  }
  if (!shown.empty()) {
    out.text = shown;
    return out;
  }

  if (a.scheme_tag && u.preferred_schemes.count(*a.scheme_tag) && a.top_rule) {
    const schemes::Scheme* s = schemes::find_scheme(*a.scheme_tag);
    const GroundRule* r = gt.find_rule(*a.top_rule);
    if (s && r) {
      if (auto b = schemes::match_scheme(*s, r->rule)) {
        auto tpl = s->audience_templates.find(band);
        if (tpl != s->audience_templates.end()) {
          out.text = schemes::fill_template(tpl->second, *b);
          return out;
        }
      }
    }
  }

  const Literal& c = a.conclusion;
  if (c.negated && c.predicate == kApplicablePredicate && c.args.size() == 1) {
    if (a.is_premise_argument()) {
      const Premise* p = gt.find_premise(*a.premise_set.begin());
      if (p && !p->source.empty()) {
        out.text = "Open question: " + p->source;
        return out;
      }
    }
    out.text = "The reasoning step " + c.args.front().name + " may not apply here.";
    return out;
  }
  out.text = (a.is_premise_argument() ? "It is given that: " : "It follows that: ") + humanize(c) + ".";
  return out;
}

namespace {

struct NodeView {
  const adapt::TreeNode* node;
  const aspic::Argument* arg;
  Sentence sentence;
};

class Writer {
 public:
  Writer(const adapt::ExplanationSelection& sel, const aspic::Analysis& an, const UserProfile& u)
      : sel_(sel), an_(an), u_(u), band_(u.band()) {
    for (const auto& n : sel.subtree.nodes()) {
      const aspic::Argument& a = an.graph.arguments.at(n.argument);
      views_[n.id] = {&n, &a, render_argument(a, u, an.ground)};
    }
  }

  RenderedExplanation build(Format f) {
    RenderedExplanation r;
    r.format = f;
    const NodeView& root = views_.at(sel_.subtree.root().id);
    r.claim = humanize(root.arg->conclusion);
    r.supports.push_back(root.sentence.text);
    if (band_ != Band::Lay) {
      for (const auto& pid : root.arg->premise_set) {
        const Premise* p = an_.ground.find_premise(pid);
        if (!p) continue;
        std::string line = p->literal.to_string();
        if (band_ == Band::Professional) line += " [" + pid + ", confidence " + format_number(p->confidence) + "]";
        r.supports.push_back(line);
      }
    }
    for (std::size_t c : root.node->children) collect_challenges(c, 0, r.challenges);

    if (f == Format::Dot) r.body = dot();
    else r.body = f == Format::Markdown ? markdown(r) : text(r);
    return r;
  }

 private:
  void collect_challenges(std::size_t id, std::size_t level, std::vector<std::string>& out) {
    const NodeView& v = views_.at(id);
    std::string kind = v.node->role == adapt::Role::Opponent ? "Concern" : "Answer";
    std::string line = std::string(level * 2, ' ') + kind + ": " + v.sentence.text;
    if (band_ == Band::Professional) line += " (" + v.sentence.annotation + ")";
    out.push_back(line);
    for (std::size_t c : v.node->children) collect_challenges(c, level + 1, out);
  }

  std::string footer() const {
    std::string s;
    if (band_ == Band::Professional) {
      s += "Sufficiency: " + fixed2(sel_.sigma) + " (full tree " + fixed2(sel_.sigma_full) + ")\n";
      s += "Utility: " + fixed2(sel_.utility) + " (clarity " + fixed2(sel_.features.clarity) + ", relevance " +
           fixed2(sel_.features.relevance) + ", lexical fit " + fixed2(sel_.features.lexical_fit) + ")\n";
    } else if (band_ == Band::DecisionMaker) {
      s += "Strength of the case: " + strength_word(sel_.sigma) + "\n";
    }
    return s;
  }

  // Challenge lines carry their nesting as leading spaces.
  static std::string bullet(const std::string& line) {
    std::size_t indent = line.find_first_not_of(' ');
    return std::string(indent, ' ') + "- " + line.substr(indent) + "\n";
  }

  static std::string strength_word(double sigma) {
    if (sigma >= 0.75) return "strong";
    if (sigma >= 0.5) return "moderate";
    return "weak";
  }

  std::string text(const RenderedExplanation& r) const {
    std::ostringstream os;
    os << "Claim: " << r.claim << "\n";
    os << r.supports.front() << "\n";
    const NodeView& root = views_.at(sel_.subtree.root().id);
    if (band_ == Band::Professional) os << "  (" << root.sentence.annotation << ")\n";
    if (r.supports.size() > 1) {
      os << "Based on:\n";
      for (std::size_t i = 1; i < r.supports.size(); ++i) os << "- " << r.supports[i] << "\n";
    }
    if (!r.challenges.empty()) {
      os << "Challenges:\n";
      for (const auto& c : r.challenges) os << bullet(c);
    }
    os << footer();
    return os.str();
  }

  std::string markdown(const RenderedExplanation& r) const {
    std::ostringstream os;
    os << "## Claim: " << r.claim << "\n\n" << r.supports.front() << "\n";
    const NodeView& root = views_.at(sel_.subtree.root().id);
    if (band_ == Band::Professional) os << "\n_" << root.sentence.annotation << "_\n";
    if (r.supports.size() > 1) {
      os << "\n### Based on\n\n";
      for (std::size_t i = 1; i < r.supports.size(); ++i) os << "- " << r.supports[i] << "\n";
    }
    if (!r.challenges.empty()) {
      os << "\n### Challenges\n\n";
      for (const auto& c : r.challenges) os << bullet(c);
    }
    std::string f = footer();
    if (!f.empty()) os << "\n" << f;
    return os.str();
  }

  std::string dot() const {
    std::ostringstream os;
    os << "digraph explanation {\n  rankdir=BT;\n  node [shape=box, style=filled, fontname=\"Helvetica\"];\n";
    for (const auto& n : sel_.subtree.nodes()) {
      const NodeView& v = views_.at(n.id);
      bool pro = n.role == adapt::Role::Proponent;
      std::string label = v.arg->label + "\n" + v.arg->conclusion.to_string();
      if (band_ == Band::Professional) label += "\nweight " + format_number(n.base);
      os << "  n" << n.id << " [label=\"" << dot_escape(label) << "\", fillcolor=\""
         << (pro ? "#d8f0d8" : "#f6d5d5") << "\"";
      if (!n.parent) os << ", penwidth=3";
      os << "];\n";
    }
    for (const auto& n : sel_.subtree.nodes())
      if (n.parent) os << "  n" << n.id << " -> n" << *n.parent << " [label=\"defeats\"];\n";
    os << "}\n";
    return os.str();
  }

  const adapt::ExplanationSelection& sel_;
  const aspic::Analysis& an_;
  const UserProfile& u_;
  Band band_;
  std::map<std::size_t, NodeView> views_;
};

}  // namespace

RenderedExplanation render_explanation(const adapt::ExplanationSelection& sel, const aspic::Analysis& analysis,
                                       const UserProfile& u, Format format) {
  if (sel.subtree.empty()) throw Error(ErrorCode::InvalidArgument, "empty explanation subtree");
  return Writer(sel, analysis, u).build(format);
}

std::string render_af_dot(const af::ArgumentationFramework& af, const af::Labelling& lab) {
  if (lab.size() != af.size()) throw Error(ErrorCode::InvalidArgument, "labelling does not match framework");
  std::ostringstream os;
  os << "digraph af {\n";
  for (std::size_t i = 0; i < af.size(); ++i) {
    const char* color = lab[i] == af::Label::In ? "#8fd18f" : lab[i] == af::Label::Out ? "#e58f8f" : "#d0d0d0";
    os << "  \"" << dot_escape(af.name(i)) << "\" [style=filled, fillcolor=\"" << color << "\", xlabel=\""
       << af::to_string(lab[i]) << "\"];\n";
  }
  for (const auto& [a, b] : af.attacks())
    os << "  \"" << dot_escape(af.name(a)) << "\" -> \"" << dot_escape(af.name(b)) << "\";\n";
  os << "}\n";
  return os.str();
}

std::string resolve_target(const aspic::Analysis& analysis, std::string_view target, std::size_t max_depth) {
  const auto& args = analysis.graph.arguments;
  if (const aspic::Argument* a = args.find(target)) return a->id;
  if (const aspic::Argument* a = args.find_by_label(target)) return a->id;
  auto lit = parse_literal(target);
  if (!lit) throw Error(ErrorCode::NotFound, "unknown target '" + std::string(target) + "'");
  auto candidates = args.concluding(*lit);
  if (candidates.empty()) throw Error(ErrorCode::NotFound, "no argument concludes " + lit->to_string());
  std::string best;
  double best_sigma = -1.0;
  for (const aspic::Argument* a : candidates) {
    double s = adapt::sufficiency(adapt::build_dispute_tree(analysis.graph, analysis.ground, a->id, max_depth));
    if (s > best_sigma || (s == best_sigma && a->id < best)) {
      best = a->id;
      best_sigma = s;
    }
  }
  return best;
}

Explanation explain(const aspic::Analysis& analysis, std::string_view target, const UserProfile& u,
                    const ExplainOptions& options) {
  validate_profile(u);
  adapt::validate_weights(options.weights);
  Explanation e;
  e.root = resolve_target(analysis, target, options.max_depth);
  e.full = adapt::build_dispute_tree(analysis.graph, analysis.ground, e.root, options.max_depth);
  e.selection = adapt::select_explanation(e.full, u, options.weights, options.selection);
  e.rendered = render_explanation(e.selection, analysis, u, options.format);
  return e;
}

}  // namespace phax::render
