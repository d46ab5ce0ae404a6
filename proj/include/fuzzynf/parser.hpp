#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzynf/syntax.hpp"

namespace fnf {

/// Name of the universal fuzzy set constant every structure provides.
inline constexpr std::string_view kUniversalSet = "V";

struct ParseContext {
  /// Identifiers read as set constants rather than variables.
  std::set<std::string> constants{std::string(kUniversalSet)};
  /// When present, the only free variables allowed (others raise UnboundVariable).
  /// When absent, free variables are accepted and their sorts inferred from use.
  std::optional<std::map<std::string, Sort>> declared;
  /// Position of the first character of the text (used for theory-file diagnostics).
  SourcePos origin;
};

/// Parses one formula of the grammar
///   formula := quant | iff ; quant := ("forall"|"exists") ident ":" ("U"|"D") "." formula
///   iff := impl ("<->" impl)* ; impl := disj ("->" disj)* ; disj := conj ("|" conj)*
///   conj := neg ("&" neg)* ; neg := "~" neg | atom
///   atom := "in(" s "," s ")" | "mu(" s "," s ")" ("="|"<") d | d ("="|"<") d | s "=" s | "(" formula ")"
/// and returns a sort-checked AST. `->` associates to the right, the others to the left.
/// Binders that shadow an enclosing binder, a constant or a declared variable are renamed.
Formula parse_formula(std::string_view text, const ParseContext& ctx = {});

struct CrispConstant {
  std::string name;
  std::string literal;  // nested-brace rendering, e.g. "{{}}"
  int line = 0;

  friend bool operator==(const CrispConstant& a, const CrispConstant& b) {
    return a.name == b.name && a.literal == b.literal;
  }
};

enum class EntryKind : std::uint8_t { Axiom, Comprehension, Classical };

std::string_view entry_keyword(EntryKind k);

struct TheoryEntry {
  EntryKind kind = EntryKind::Axiom;
  std::string label;
  Formula formula;
  std::optional<Var> element_var;  // comprehension and classical entries
  std::optional<Var> degree_var;   // comprehension entries only
  int line = 0;

  friend bool operator==(const TheoryEntry& a, const TheoryEntry& b) {
    return a.kind == b.kind && a.label == b.label && a.formula == b.formula &&
           a.element_var == b.element_var && a.degree_var == b.degree_var;
  }
};

/// Ordered, labeled list of formulas: a finite fragment of the axiom set.
struct TheoryFragment {
  std::string name = "fragment";
  std::vector<CrispConstant> constants;
  std::vector<TheoryEntry> entries;

  std::vector<const TheoryEntry*> of_kind(EntryKind k) const;
  std::size_t comprehension_count() const { return of_kind(EntryKind::Comprehension).size(); }

  friend bool operator==(const TheoryFragment&, const TheoryFragment&) = default;
};

/// Line-oriented theory format:
///   name <ident>
///   constant <name> = <nested braces>
///   axiom <label>: <formula>
///   comprehension <label> (x, v): <formula>
///   classical <label> (x): <formula>
/// '#' starts a comment. Comprehension and classical formulas may name V, crisp
/// constants and labels of entries on earlier lines; axioms may name any label.
TheoryFragment parse_theory(std::string_view text, std::string name = "fragment");

/// Reads a theory file; the fragment name defaults to the file stem.
TheoryFragment load_theory_file(const std::string& path);

/// Re-emits a fragment in the theory format; parse_theory inverts it.
std::string print_theory(const TheoryFragment& frag);

}  // namespace fnf
