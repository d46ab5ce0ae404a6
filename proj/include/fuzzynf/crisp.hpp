#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fuzzynf/checker.hpp"
#include "fuzzynf/model.hpp"
#include "fuzzynf/parser.hpp"

namespace fnf {

/// A member of S and whether its table is {0,1}-valued on the whole domain.
struct CrispCandidate {
  std::size_t set = 0;
  std::string name;
  bool crisp = true;
  // First non-binary entry, when not crisp.
  std::optional<std::string> witness_element;
  std::optional<Degree> witness_degree;
};

/// One candidate per member of S, in order.
std::vector<CrispCandidate> crisp_universe(const FuzzyStructure& st);

/// Crisp sets with equal degrees on every element of V_n. The representative is
/// the member that comes first in S.
struct EquivClass {
  std::size_t representative = 0;
  std::vector<std::size_t> members;
};

/// A pair of members of S, read as element and set, whose membership differs
/// from the one their classes' representatives give. The equivalence only looks
/// at V_n, so this is reported rather than refused.
struct Divergence {
  std::size_t element = 0;
  std::size_t set = 0;
  bool member = false;
};

/// The quotient N. Its domain is V_n (positions 0..crisp_count-1) followed by the
/// classes; membership in a class is "mu(x, representative) = 1", with a class as
/// element read through its own representative.
class CrispStructure {
 public:
  const std::vector<EquivClass>& classes() const { return classes_; }
  std::size_t crisp_count() const { return crisp_count_; }
  std::size_t domain_size() const { return crisp_count_ + classes_.size(); }

  /// Element at N-position `pos` is a member of class `cls`.
  bool in(std::size_t pos, std::size_t cls) const { return members_.at(cls).at(pos); }

  std::optional<std::size_t> class_of(std::size_t set) const;
  std::optional<std::size_t> universal_class() const { return universal_; }
  const std::vector<Divergence>& divergences() const { return divergences_; }

  std::string class_name(const FuzzyStructure& st, std::size_t cls) const;
  std::string element_name(const FuzzyStructure& st, std::size_t pos) const;

  /// Classes with representatives, members, the full membership relation and the universal class.
  nlohmann::ordered_json to_json(const FuzzyStructure& st) const;

 private:
  friend CrispStructure quotient(const FuzzyStructure& st, const std::vector<CrispCandidate>& cands);

  std::size_t crisp_count_ = 0;
  std::vector<EquivClass> classes_;
  std::vector<std::optional<std::size_t>> class_of_;
  std::vector<std::vector<bool>> members_;
  std::optional<std::size_t> universal_;
  std::vector<Divergence> divergences_;
};

CrispStructure quotient(const FuzzyStructure& st, const std::vector<CrispCandidate>& cands);

class TranslationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (d = 1 & psi') where psi' has every in(u, w) replaced by mu(u, w) = 1. The
/// degree variable is `degree_name` unless psi already uses that name, in which
/// case a fresh variant is taken. Throws TranslationError when psi mentions mu
/// or degrees.
Formula translate_crisp(const Formula& psi, const std::string& degree_name = "d");

/// Definition of the set a classical entry denotes: its translation, with mu on a
/// crisp second argument read as that element's characteristic function.
SetDefinition classical_definition(const TheoryEntry& entry);

/// Truth of a classical formula in N; in(u, w) is HF membership for crisp w and
/// ∈_N for a class. Set constants denote the class of the named set.
bool eval_in_quotient(const Formula& psi, const CrispStructure& ns, const FuzzyStructure& st,
                      const std::vector<std::pair<std::string, std::size_t>>& env);

struct RepresentedSet {
  std::string label;
  std::string formula;
  std::optional<std::size_t> cls;
  bool universal = false;
  std::vector<std::string> members;  // crisp members of the class
};

struct NFReport {
  std::vector<Verdict> verdicts;
  std::vector<RepresentedSet> represented;

  bool holds() const;
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// (a) distinct classes differ on V_n; (b) each classical formula's set is crisp,
/// matches an independent materialization, and its class has exactly the crisp
/// members satisfying the formula in N; (c) a class containing every element of
/// N, itself included, exists.
NFReport verify_nf(const CrispStructure& ns, const std::vector<const TheoryEntry*>& corpus,
                   const FuzzyStructure& st);

/// Comprehension sets followed by the sets of the classical entries.
std::vector<SetDefinition> extraction_definitions(const TheoryFragment& frag);

struct ExtractResult {
  // Full check of M_n built from the comprehension entries alone.
  std::optional<CheckReport> base;
  // M_n with the classical sets appended to S.
  FuzzyStructure structure;
  // Comprehension and universality on the extended structure. Its extensionality
  // collisions are expected (they are what the quotient identifies) and do not count.
  CheckReport extended;
  std::vector<CrispCandidate> candidates;
  CrispStructure quotient;
  NFReport nf;

  bool holds() const;
};

/// Checks M_n, builds it again with the classical sets added, and extracts N.
ExtractResult extract(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts = {});

/// Extraction from an already extended (for instance reloaded) structure; no base check.
ExtractResult extract_from(FuzzyStructure st, const TheoryFragment& frag);

}  // namespace fnf
