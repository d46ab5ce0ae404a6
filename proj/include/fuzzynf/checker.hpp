#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "fuzzynf/eval.hpp"
#include "fuzzynf/model.hpp"
#include "fuzzynf/parser.hpp"
#include "fuzzynf/stratify.hpp"

namespace fnf {

/// Outcome of one axiom check. A failing verdict names the assignment that
/// falsifies it, in binding order.
struct Verdict {
  std::string name;
  bool holds = true;
  bool informational = false;  // reported but not part of the overall status
  std::uint64_t instances = 0;
  std::vector<std::pair<std::string, std::string>> counterexample;
  std::string message;

  nlohmann::ordered_json to_json() const;
};

nlohmann::ordered_json certificate_json(const InconsistencyCertificate& cert);

struct CheckReport {
  std::string fragment;
  unsigned level = 0;
  unsigned grid = 0;
  std::size_t comprehensions = 0;
  std::vector<std::string> sets;

  // Set when the fragment could not be built; verdicts are then empty.
  std::optional<std::string> rejected;
  std::string rejected_label;
  std::optional<InconsistencyCertificate> certificate;

  std::vector<Verdict> verdicts;
  EvalStats stats;
  double elapsed_ms = 0;  // never serialized, so reruns compare equal

  bool holds() const;
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
};

/// Distinct sets of S must differ at some element of V_n. Reports the least
/// colliding pair (i < j).
Verdict check_extensionality(const FuzzyStructure& st);

/// The comprehension biconditional for every comprehension-defined set, every
/// element of V_n ∪ S and every grid degree; the least failing (set, x, d) is reported.
Verdict check_comprehension(const FuzzyStructure& st, EvalStats* stats = nullptr);

/// mu(x, V) = 1 for every x in V_n ∪ S, V itself included.
Verdict check_universality(const FuzzyStructure& st);

/// The comprehension biconditional for the set at index `set` as a closed sentence
/// mentioning the set by name.
Formula comprehension_instance(const SetDefinition& def);

/// Evaluates a sentence. Leading universal quantifiers are expanded explicitly so
/// that a failure reports the least falsifying assignment.
Verdict check_sentence(std::string name, const Formula& f, const FuzzyStructure& st, EvalOptions opts = {},
                       EvalStats* stats = nullptr);

/// Runs every check on a built structure, the fragment's own axiom entries
/// included unless `axioms` is false.
CheckReport check_structure(const FuzzyStructure& st, const TheoryFragment& frag, bool axioms = true);

/// Builds M_n for the fragment and checks it. An unstratified formula rejects the
/// fragment before anything is built and the certificate is attached.
CheckReport run_fragment(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts = {});

/// Prefix fragment with the first `count` comprehension entries; axioms are kept
/// when every name they mention is available in the prefix.
TheoryFragment fragment_prefix(const TheoryFragment& frag, std::size_t count);

/// run_fragment over the prefixes Σ_1 ⊆ Σ_2 ⊆ ... of the comprehension entries
/// (a single report for a fragment without any). Stops after the first failure.
std::vector<CheckReport> growing_fragments(const TheoryFragment& frag, unsigned n, unsigned k_grid,
                                           BuildOptions opts = {});

/// Entries whose table on V_n changes between levels n and n+1.
struct StabilityProbe {
  unsigned level = 0;
  struct Change {
    std::string set;
    std::string element;
    Degree at_n;
    Degree at_next;
  };
  std::vector<Change> changes;

  nlohmann::ordered_json to_json() const;
};

StabilityProbe stability_probe(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts = {});

}  // namespace fnf
