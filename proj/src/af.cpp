#include "phax/af.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace phax::af {

const char* to_string(Label l) {
  switch (l) {
    case Label::In: return "IN";
    case Label::Out: return "OUT";
    case Label::Undec: return "UNDEC";
  }
  return "UNDEC";
}

const char* to_string(Semantics s) {
  switch (s) {
    case Semantics::Grounded: return "grounded";
    case Semantics::Complete: return "complete";
    case Semantics::Preferred: return "preferred";
    case Semantics::Stable: return "stable";
  }
  return "grounded";
}

const char* to_string(Mode m) { return m == Mode::Credulous ? "credulous" : "skeptical"; }

std::optional<Semantics> parse_semantics(std::string_view name) {
  if (name == "grounded") return Semantics::Grounded;
  if (name == "complete") return Semantics::Complete;
  if (name == "preferred") return Semantics::Preferred;
  if (name == "stable") return Semantics::Stable;
  return std::nullopt;
}

std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "credulous") return Mode::Credulous;
  if (name == "skeptical") return Mode::Skeptical;
  return std::nullopt;
}

ArgumentationFramework::ArgumentationFramework(
    std::vector<std::string> args, const std::vector<std::pair<std::string, std::string>>& attacks)
    : args_(std::move(args)) {
  std::sort(args_.begin(), args_.end());
  if (std::adjacent_find(args_.begin(), args_.end()) != args_.end())
    throw Error(ErrorCode::InvalidArgument, "duplicate argument id");
  attackers_.resize(args_.size());
  targets_.resize(args_.size());
  for (const auto& [from, to] : attacks) {
    auto a = index_of(from);
    auto b = index_of(to);
    if (!a || !b)
      throw Error(ErrorCode::InvalidArgument, "attack (" + from + ", " + to + ") has an unknown endpoint");
    attacks_.emplace_back(*a, *b);
  }
  std::sort(attacks_.begin(), attacks_.end());
  if (std::adjacent_find(attacks_.begin(), attacks_.end()) != attacks_.end())
    throw Error(ErrorCode::InvalidArgument, "duplicate attack");
  for (const auto& [a, b] : attacks_) {
    attackers_[b].push_back(a);
    targets_[a].push_back(b);
  }
}

std::optional<std::size_t> ArgumentationFramework::index_of(std::string_view id) const {
  auto it = std::lower_bound(args_.begin(), args_.end(), id);
  if (it == args_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - args_.begin());
}

bool ArgumentationFramework::attacks(std::size_t from, std::size_t to) const {
  return std::binary_search(attacks_.begin(), attacks_.end(), std::make_pair(from, to));
}

std::vector<std::size_t> Labelling::indices(Label l) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == l) out.push_back(i);
  return out;
}

std::vector<std::string> Labelling::ids(const ArgumentationFramework& af, Label l) const {
  std::vector<std::string> out;
  for (std::size_t i : indices(l)) out.push_back(af.name(i));
  return out;
}

bool is_complete_labelling(const ArgumentationFramework& af, const Labelling& lab) {
  if (lab.size() != af.size()) return false;
  for (std::size_t i = 0; i < af.size(); ++i) {
    bool any_in = false;
    bool all_out = true;
    for (std::size_t a : af.attackers(i)) {
      any_in |= lab[a] == Label::In;
      all_out &= lab[a] == Label::Out;
    }
    Label expected = all_out ? Label::In : any_in ? Label::Out : Label::Undec;
    if (lab[i] != expected) return false;
  }
  return true;
}

Labelling grounded_labelling(const ArgumentationFramework& af) {
  const std::size_t n = af.size();
  enum class State : std::uint8_t { Open, In, Out };
  std::vector<State> state(n, State::Open);
  std::vector<std::size_t> out_attackers(n, 0);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i)
    if (af.attackers(i).empty()) queue.push_back(i);

  // Each IN argument makes its targets OUT; each OUT argument may free a target.
  while (!queue.empty()) {
    std::size_t a = queue.back();
    queue.pop_back();
    if (state[a] != State::Open) continue;
    state[a] = State::In;
    for (std::size_t t : af.attacked_by(a)) {
      if (state[t] != State::Open) continue;
      state[t] = State::Out;
      for (std::size_t u : af.attacked_by(t)) {
        if (state[u] != State::Open) continue;
        if (++out_attackers[u] == af.attackers(u).size()) queue.push_back(u);
      }
    }
  }
  Labelling lab(n);
  for (std::size_t i = 0; i < n; ++i)
    lab[i] = state[i] == State::In ? Label::In : state[i] == State::Out ? Label::Out : Label::Undec;
  return lab;
}

namespace {

class CompleteSearch {
 public:
  CompleteSearch(const ArgumentationFramework& af, Labelling base, std::vector<std::size_t> open)
      : af_(af), lab_(std::move(base)), open_(std::move(open)), assigned_(af.size(), true) {
    for (std::size_t i : open_) assigned_[i] = false;
  }

  std::vector<Labelling> run() {
    search(0);
    return std::move(found_);
  }

 private:
  // False when `v`'s label can no longer be made legal.
  bool consistent(std::size_t v) const {
    std::size_t in = 0, undec = 0, unassigned = 0;
    for (std::size_t a : af_.attackers(v)) {
      if (!assigned_[a]) ++unassigned;
      else if (lab_[a] == Label::In) ++in;
      else if (lab_[a] == Label::Undec) ++undec;
    }
    switch (lab_[v]) {
      case Label::In: return in == 0 && undec == 0;
      case Label::Out: return in > 0 || unassigned > 0;
      case Label::Undec: return in == 0 && (undec > 0 || unassigned > 0);
    }
    return false;
  }

  void search(std::size_t pos) {
    if (pos == open_.size()) {
      if (is_complete_labelling(af_, lab_)) found_.push_back(lab_);
      return;
    }
    std::size_t v = open_[pos];
    assigned_[v] = true;
    for (Label l : {Label::In, Label::Out, Label::Undec}) {
      lab_[v] = l;
      bool ok = consistent(v);
      for (std::size_t t : af_.attacked_by(v)) {
        if (!ok) break;
        if (assigned_[t]) ok = consistent(t);
      }
      if (ok) search(pos + 1);
    }
    assigned_[v] = false;
    lab_[v] = Label::Undec;
  }

  const ArgumentationFramework& af_;
  Labelling lab_;
  std::vector<std::size_t> open_;
  std::vector<bool> assigned_;
  std::vector<Labelling> found_;
};

void sort_by_in_set(const ArgumentationFramework& af, std::vector<Labelling>& labs) {
  std::sort(labs.begin(), labs.end(), [&](const Labelling& a, const Labelling& b) {
    return a.ids(af, Label::In) < b.ids(af, Label::In);
  });
}

bool is_subset(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::vector<Labelling> enumerate_labellings(const ArgumentationFramework& af, Semantics semantics,
                                            const EnumerationOptions& options) {
  Labelling grounded = grounded_labelling(af);
  if (semantics == Semantics::Grounded) return {grounded};

  // Grounded IN/OUT decisions are shared by every complete labelling, so only
  // the grounded-UNDEC arguments are searched.
  std::vector<std::size_t> open = grounded.indices(Label::Undec);
  if (open.size() > options.max_arguments) {
    throw Error(ErrorCode::LimitExceeded, std::to_string(open.size()) +
                                              " undecided arguments exceed the enumeration cap of " +
                                              std::to_string(options.max_arguments));
  }
  std::vector<Labelling> complete = CompleteSearch(af, grounded, open).run();

  std::vector<Labelling> out;
  if (semantics == Semantics::Complete) {
    out = std::move(complete);
  } else if (semantics == Semantics::Stable) {
    for (auto& l : complete)
      if (l.indices(Label::Undec).empty()) out.push_back(std::move(l));
  } else {
    std::vector<std::vector<std::size_t>> ins;
    for (const auto& l : complete) ins.push_back(l.indices(Label::In));
    for (std::size_t i = 0; i < complete.size(); ++i) {
      bool maximal = true;
      for (std::size_t j = 0; j < complete.size() && maximal; ++j) {
        if (i != j && ins[i].size() < ins[j].size() && is_subset(ins[i], ins[j])) maximal = false;
      }
      if (maximal) out.push_back(complete[i]);
    }
  }
  sort_by_in_set(af, out);
  return out;
}

bool accepted_in(const std::vector<Labelling>& labellings, std::size_t arg, Mode mode) {
  if (mode == Mode::Credulous)
    return std::any_of(labellings.begin(), labellings.end(),
                       [&](const Labelling& l) { return l[arg] == Label::In; });
  return std::all_of(labellings.begin(), labellings.end(),
                     [&](const Labelling& l) { return l[arg] == Label::In; });
}

bool acceptance(const ArgumentationFramework& af, std::string_view arg, Semantics semantics, Mode mode,
                const EnumerationOptions& options) {
  auto idx = af.index_of(arg);
  if (!idx) throw Error(ErrorCode::NotFound, "unknown argument '" + std::string(arg) + "'");
  if (semantics == Semantics::Grounded) return grounded_labelling(af)[*idx] == Label::In;
  return accepted_in(enumerate_labellings(af, semantics, options), *idx, mode);
}

// ---------------------------------------------------------------------------
// ICCMA

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<std::size_t> parse_index(const std::string& s) {
  std::size_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

bool looks_like_iccma(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto words = split_ws(line);
    if (words.empty() || words[0].front() == '#') continue;
    return words.size() >= 2 && words[0] == "p" && words[1] == "af";
  }
  return false;
}

ArgumentationFramework parse_iccma(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> n;
  std::vector<std::pair<std::string, std::string>> attacks;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::Parse, "<iccma>:" + std::to_string(lineno) + ":1: error: " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto words = split_ws(line);
    if (words.empty() || words[0].front() == '#') continue;
    if (!n) {
      if (words.size() != 3 || words[0] != "p" || words[1] != "af") fail("expected 'p af <n>' header");
      n = parse_index(words[2]);
      if (!n) fail("bad argument count '" + words[2] + "'");
      continue;
    }
    if (words.size() != 2) fail("expected '<attacker> <attacked>'");
    auto a = parse_index(words[0]);
    auto b = parse_index(words[1]);
    if (!a || !b || *a < 1 || *b < 1 || *a > *n || *b > *n) fail("argument out of range 1.." + std::to_string(*n));
    if (!seen.emplace(*a, *b).second) continue;
    attacks.emplace_back(words[0], words[1]);
  }
  if (!n) fail("missing 'p af <n>' header");
  std::vector<std::string> args;
  for (std::size_t i = 1; i <= *n; ++i) args.push_back(std::to_string(i));
  // Normalize numeric spellings such as "01".
  for (auto& [a, b] : attacks) {
    a = std::to_string(*parse_index(a));
    b = std::to_string(*parse_index(b));
  }
  return ArgumentationFramework(std::move(args), attacks);
}

std::string to_iccma(const ArgumentationFramework& af) {
  // Keep numeric ids 1..n as they are; otherwise number by sorted position.
  std::vector<std::size_t> number(af.size());
  bool numeric = true;
  std::set<std::size_t> used;
  for (std::size_t i = 0; i < af.size() && numeric; ++i) {
    auto v = parse_index(af.name(i));
    numeric = v && *v >= 1 && *v <= af.size() && used.insert(*v).second && std::to_string(*v) == af.name(i);
    if (numeric) number[i] = *v;
  }
  if (!numeric)
    for (std::size_t i = 0; i < af.size(); ++i) number[i] = i + 1;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [a, b] : af.attacks()) pairs.emplace_back(number[a], number[b]);
  std::sort(pairs.begin(), pairs.end());
  std::ostringstream os;
  os << "p af " << af.size() << "\n";
  if (!numeric)
    for (std::size_t i = 0; i < af.size(); ++i) os << "# " << number[i] << " " << af.name(i) << "\n";
  for (const auto& [a, b] : pairs) os << a << " " << b << "\n";
  return os.str();
}

}  // namespace phax::af
