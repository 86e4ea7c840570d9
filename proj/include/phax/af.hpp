#pragma once

// Dung-style abstract argumentation frameworks and labelling semantics.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phax/error.hpp"

namespace phax::af {

enum class Label : std::uint8_t { In, Out, Undec };
enum class Semantics { Grounded, Complete, Preferred, Stable };
enum class Mode { Credulous, Skeptical };

const char* to_string(Label l);
const char* to_string(Semantics s);
const char* to_string(Mode m);
std::optional<Semantics> parse_semantics(std::string_view name);
std::optional<Mode> parse_mode(std::string_view name);

// Arguments are kept sorted by id; every index-based accessor refers to that order.
class ArgumentationFramework {
 public:
  ArgumentationFramework() = default;
  // Throws Error(InvalidArgument) on duplicate arguments, duplicate attacks or
  // attack endpoints outside `args`.
  ArgumentationFramework(std::vector<std::string> args,
                         const std::vector<std::pair<std::string, std::string>>& attacks);

  std::size_t size() const { return args_.size(); }
  bool empty() const { return args_.empty(); }
  const std::vector<std::string>& arguments() const { return args_; }
  const std::string& name(std::size_t i) const { return args_[i]; }
  std::optional<std::size_t> index_of(std::string_view id) const;

  const std::vector<std::size_t>& attackers(std::size_t i) const { return attackers_[i]; }
  const std::vector<std::size_t>& attacked_by(std::size_t i) const { return targets_[i]; }
  // (attacker, attacked) index pairs in lexicographic order.
  const std::vector<std::pair<std::size_t, std::size_t>>& attacks() const { return attacks_; }
  bool attacks(std::size_t from, std::size_t to) const;

 private:
  std::vector<std::string> args_;
  std::vector<std::pair<std::size_t, std::size_t>> attacks_;
  std::vector<std::vector<std::size_t>> attackers_;
  std::vector<std::vector<std::size_t>> targets_;
};

// Total assignment, indexed like ArgumentationFramework::arguments().
class Labelling {
 public:
  Labelling() = default;
  explicit Labelling(std::size_t n, Label fill = Label::Undec) : labels_(n, fill) {}
  explicit Labelling(std::vector<Label> labels) : labels_(std::move(labels)) {}

  std::size_t size() const { return labels_.size(); }
  Label operator[](std::size_t i) const { return labels_[i]; }
  Label& operator[](std::size_t i) { return labels_[i]; }
  const std::vector<Label>& labels() const { return labels_; }

  std::vector<std::size_t> indices(Label l) const;
  std::vector<std::string> ids(const ArgumentationFramework& af, Label l) const;

  bool operator==(const Labelling&) const = default;

 private:
  std::vector<Label> labels_;
};

// An extension is the IN set of a labelling.
using Extension = std::vector<std::string>;

struct EnumerationOptions {
  std::size_t max_arguments = 25;
};

// IN iff every attacker is OUT; OUT iff some attacker is IN; UNDEC otherwise.
bool is_complete_labelling(const ArgumentationFramework& af, const Labelling& lab);

Labelling grounded_labelling(const ArgumentationFramework& af);

// Result sorted by IN set (lexicographic over sorted argument ids). Grounded
// returns the single grounded labelling and ignores the size cap.
std::vector<Labelling> enumerate_labellings(const ArgumentationFramework& af, Semantics semantics,
                                            const EnumerationOptions& options = {});

bool acceptance(const ArgumentationFramework& af, std::string_view arg, Semantics semantics, Mode mode,
                const EnumerationOptions& options = {});

// Same as acceptance() but reuses a precomputed labelling set.
bool accepted_in(const std::vector<Labelling>& labellings, std::size_t arg, Mode mode);

// ICCMA'23 plain format: "p af <n>" then one "<attacker> <attacked>" pair per
// line, arguments numbered 1..n, '#' comment lines.
ArgumentationFramework parse_iccma(std::string_view text);
std::string to_iccma(const ArgumentationFramework& af);
bool looks_like_iccma(std::string_view text);

}  // namespace phax::af
