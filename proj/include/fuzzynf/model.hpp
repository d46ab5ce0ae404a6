#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzynf/hierarchy.hpp"
#include "fuzzynf/parser.hpp"
#include "fuzzynf/stratify.hpp"
#include "fuzzynf/syntax.hpp"

namespace fnf {

/// An element of the quantification domain V_n ∪ S.
struct DomainElement {
  enum class Kind : std::uint8_t { Crisp, Named };

  Kind kind = Kind::Crisp;
  std::uint32_t index = 0;  // into V_n for Crisp, into S for Named

  static DomainElement crisp(std::size_t i) { return {Kind::Crisp, static_cast<std::uint32_t>(i)}; }
  static DomainElement named(std::size_t i) { return {Kind::Named, static_cast<std::uint32_t>(i)}; }
  bool is_crisp() const { return kind == Kind::Crisp; }
  bool is_named() const { return kind == Kind::Named; }

  friend bool operator==(const DomainElement&, const DomainElement&) = default;
  friend auto operator<=>(const DomainElement&, const DomainElement&) = default;
};

/// How mu(u, w) is read when w is a crisp element, where the model gives no value.
/// Reject makes the atom false and counts it. Characteristic reads w as
/// its {0,1} characteristic function (1 iff u is crisp and u ∈ w); the crisp
/// extraction uses it for translated classical formulas.
enum class MuOnCrisp : std::uint8_t { Reject, Characteristic };

/// A member of S: the universal set (no formula) or a comprehension-defined set.
struct SetDefinition {
  std::string label;
  std::optional<Formula> formula;
  Var element_var{"x", Sort::Set};
  Var degree_var{"v", Sort::Degree};
  MuOnCrisp mu_on_crisp = MuOnCrisp::Reject;
};

/// Membership table indexed by domain position (crisp elements first, then S).
struct FuzzySet {
  std::string name;
  std::vector<Degree> table;

  friend bool operator==(const FuzzySet&, const FuzzySet&) = default;
};

class ModelError : public std::runtime_error {
 public:
  enum class Code { SelfReference, UnknownConstant, NotAFuzzySet, NotStratified, OutOfGrid, Malformed };

  ModelError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

class StratificationError : public ModelError {
 public:
  StratificationError(std::string label, InconsistencyCertificate cert);
  const std::string& label() const { return label_; }
  const InconsistencyCertificate& certificate() const { return cert_; }

 private:
  std::string label_;
  InconsistencyCertificate cert_;
};

/// The finite fuzzy model M_n: crisp domain V_n, degree grid, and the named
/// fuzzy sets S = [V, A_1, ..., A_k] with tables total on V_n ∪ S.
class FuzzyStructure {
 public:
  /// Tables start at 0 except the universal set (index 0), which is all 1.
  /// `definitions[0]` must be the universal set.
  FuzzyStructure(HFUniverse universe, DegreeGrid grid, std::vector<CrispConstant> constants,
                 std::vector<SetDefinition> definitions);

  const HFUniverse& universe() const { return universe_; }
  const DegreeGrid& grid() const { return grid_; }
  const std::vector<CrispConstant>& crisp_constants() const { return crisp_constants_; }
  const std::vector<SetDefinition>& definitions() const { return definitions_; }

  std::size_t crisp_count() const { return universe_.size(); }
  std::size_t set_count() const { return sets_.size(); }
  std::size_t domain_size() const { return crisp_count() + set_count(); }

  DomainElement element(std::size_t pos) const;
  std::size_t position(DomainElement e) const;

  const FuzzySet& set(std::size_t i) const { return sets_.at(i); }
  const std::vector<FuzzySet>& sets() const { return sets_; }
  std::optional<std::size_t> set_index(std::string_view label) const;

  /// mu(elem, set); throws ModelError(NotAFuzzySet) when `set` is crisp.
  Degree mu(DomainElement elem, DomainElement set) const;
  Degree degree(std::size_t elem_pos, std::size_t set) const { return sets_.at(set).table.at(elem_pos); }

  /// Overwrites one table entry; the degree must lie in the grid.
  void set_degree(std::size_t elem_pos, std::size_t set, Degree d);
  void set_table(std::size_t set, std::vector<Degree> table);

  /// Resolves a constant name: set labels to Named, crisp constants to Crisp.
  std::optional<DomainElement> constant(std::string_view name) const;

  /// Braces for crisp elements, the label for named ones.
  std::string element_name(DomainElement e) const;
  std::string element_name(std::size_t pos) const { return element_name(element(pos)); }

  friend bool operator==(const FuzzyStructure& a, const FuzzyStructure& b);

 private:
  HFUniverse universe_;
  DegreeGrid grid_;
  std::vector<CrispConstant> crisp_constants_;
  std::vector<SetDefinition> definitions_;
  std::vector<FuzzySet> sets_;
  std::map<std::string, DomainElement, std::less<>> constants_;
};

struct BuildOptions {
  bool allow_large = false;
};

/// The universal set over the structure's domain: 1 everywhere, itself included.
FuzzySet build_universal(const FuzzyStructure& st);

/// Table of the set defined by `def` over the domain of a complete structure:
/// each entry is the largest grid degree at which the formula holds, or 0.
FuzzySet materialize_comprehension(const SetDefinition& def, const FuzzyStructure& st);

/// Builds M_n from explicit definitions (definitions[0] the universal set).
/// Checks stratification and naming discipline, then fills every table. Entries
/// are computed on demand, so a set may consult another set's entries in any
/// order as long as no entry depends on itself.
FuzzyStructure build_structure(HFUniverse universe, DegreeGrid grid, std::vector<CrispConstant> constants,
                               std::vector<SetDefinition> definitions);

/// S = [V, A_1..A_k] from the fragment's comprehension entries, in order.
std::vector<SetDefinition> comprehension_definitions(const TheoryFragment& frag);

FuzzyStructure build_model(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts = {});

/// Table lookup; throws ModelError(NotAFuzzySet) on a crisp second argument.
Degree mu_eval(const FuzzyStructure& st, DomainElement elem, DomainElement set);

}  // namespace fnf
