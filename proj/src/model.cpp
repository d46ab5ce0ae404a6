#include "fuzzynf/model.hpp"

#include <set>

#include "fuzzynf/eval.hpp"

namespace fnf {

StratificationError::StratificationError(std::string label, InconsistencyCertificate cert)
    : ModelError(Code::NotStratified, "formula '" + label + "' is not stratified: " + cert.to_string()),
      label_(std::move(label)),
      cert_(std::move(cert)) {}

FuzzyStructure::FuzzyStructure(HFUniverse universe, DegreeGrid grid, std::vector<CrispConstant> constants,
                               std::vector<SetDefinition> definitions)
    : universe_(std::move(universe)),
      grid_(std::move(grid)),
      crisp_constants_(std::move(constants)),
      definitions_(std::move(definitions)) {
  if (definitions_.empty() || definitions_[0].formula) {
    throw ModelError(ModelError::Code::Malformed, "the first set must be the universal set");
  }
  for (const auto& c : crisp_constants_) {
    HFSet s;
    try {
      s = HFSet::parse(c.literal);
    } catch (const std::invalid_argument& e) {
      throw ModelError(ModelError::Code::Malformed, "constant " + c.name + ": " + e.what());
    }
    auto idx = universe_.index_of(s);
    if (!idx) {
      throw ModelError(ModelError::Code::UnknownConstant, "constant " + c.name + " = " + c.literal +
                                                              " is not an element of V_" +
                                                              std::to_string(universe_.level()));
    }
    if (!constants_.emplace(c.name, DomainElement::crisp(*idx)).second) {
      throw ModelError(ModelError::Code::Malformed, "constant " + c.name + " defined twice");
    }
  }
  for (std::size_t i = 0; i < definitions_.size(); ++i) {
    if (!constants_.emplace(definitions_[i].label, DomainElement::named(i)).second) {
      throw ModelError(ModelError::Code::Malformed, "name " + definitions_[i].label + " used twice");
    }
  }
  std::size_t n = universe_.size() + definitions_.size();
  for (std::size_t i = 0; i < definitions_.size(); ++i) {
    sets_.push_back(FuzzySet{definitions_[i].label, std::vector<Degree>(n, i == 0 ? Degree::one() : Degree::zero())});
  }
}

DomainElement FuzzyStructure::element(std::size_t pos) const {
  if (pos < crisp_count()) return DomainElement::crisp(pos);
  if (pos < domain_size()) return DomainElement::named(pos - crisp_count());
  throw std::out_of_range("domain position " + std::to_string(pos));
}

std::size_t FuzzyStructure::position(DomainElement e) const {
  return e.is_crisp() ? e.index : crisp_count() + e.index;
}

std::optional<std::size_t> FuzzyStructure::set_index(std::string_view label) const {
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    if (sets_[i].name == label) return i;
  }
  return std::nullopt;
}

Degree FuzzyStructure::mu(DomainElement elem, DomainElement set) const {
  if (!set.is_named()) {
    throw ModelError(ModelError::Code::NotAFuzzySet, element_name(set) + " is a crisp element, not a fuzzy set");
  }
  return degree(position(elem), set.index);
}

void FuzzyStructure::set_degree(std::size_t elem_pos, std::size_t set, Degree d) {
  if (!grid_.contains(d)) {
    throw ModelError(ModelError::Code::OutOfGrid, d.to_string() + " is not in the degree grid");
  }
  sets_.at(set).table.at(elem_pos) = d;
}

void FuzzyStructure::set_table(std::size_t set, std::vector<Degree> table) {
  if (table.size() != domain_size()) {
    throw ModelError(ModelError::Code::Malformed, "table size does not match the domain");
  }
  for (const auto& d : table) {
    if (!grid_.contains(d)) throw ModelError(ModelError::Code::OutOfGrid, d.to_string() + " is not in the degree grid");
  }
  sets_.at(set).table = std::move(table);
}

std::optional<DomainElement> FuzzyStructure::constant(std::string_view name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

std::string FuzzyStructure::element_name(DomainElement e) const {
  if (e.is_crisp()) return universe_.element(e.index).to_string();
  return sets_.at(e.index).name;
}

bool operator==(const FuzzyStructure& a, const FuzzyStructure& b) {
  return a.universe_.level() == b.universe_.level() && a.grid_.resolution() == b.grid_.resolution() &&
         a.crisp_constants_ == b.crisp_constants_ && a.sets_ == b.sets_;
}

FuzzySet build_universal(const FuzzyStructure& st) {
  return FuzzySet{std::string(kUniversalSet), std::vector<Degree>(st.domain_size(), Degree::one())};
}

namespace {

// Names a definition may use: crisp constants and sets before it.
void check_references(const SetDefinition& def, std::size_t self, const FuzzyStructure& st) {
  const Formula& phi = *def.formula;
  for (const auto& c : constants_of(phi)) {
    if (c == def.label) {
      throw ModelError(ModelError::Code::SelfReference, "set " + def.label + " is defined in terms of itself");
    }
    auto e = st.constant(c);
    if (!e) throw ModelError(ModelError::Code::UnknownConstant, "set " + def.label + " mentions unknown constant " + c);
    if (e->is_named() && e->index >= self) {
      throw ModelError(ModelError::Code::SelfReference,
                       "set " + def.label + " refers to " + c + ", which is defined after it");
    }
  }
  for (const auto& v : free_variables(phi)) {
    if (v != def.element_var && v != def.degree_var) {
      throw ModelError(ModelError::Code::Malformed,
                       "set " + def.label + " has free variable " + v.name + " besides its designated ones");
    }
  }
}

class LazyBuilder : public Evaluator {
 public:
  explicit LazyBuilder(FuzzyStructure& st) : Evaluator(st), target_(st) {
    state_.assign(st.set_count(), std::vector<State>(st.domain_size(), State::Pending));
    state_[0].assign(st.domain_size(), State::Done);
  }

  void fill() {
    for (std::size_t s = 1; s < target_.set_count(); ++s) {
      for (std::size_t p = 0; p < target_.domain_size(); ++p) lookup(p, s);
    }
  }

 protected:
  Degree lookup(std::size_t elem_pos, std::size_t set) override {
    State& st = state_.at(set).at(elem_pos);
    if (st == State::Done) return target_.degree(elem_pos, set);
    if (st == State::Busy) {
      throw ModelError(ModelError::Code::SelfReference,
                       "the degree of " + target_.element_name(elem_pos) + " in " + target_.set(set).name +
                           " depends on itself");
    }
    st = State::Busy;
    const SetDefinition& def = target_.definitions()[set];
    EvalOptions saved = options();
    set_options({def.mu_on_crisp});
    Degree d = max_satisfying_degree(*this, *def.formula, def.element_var, def.degree_var,
                                     target_.element(elem_pos), target_.grid());
    set_options(saved);
    target_.set_degree(elem_pos, set, d);
    state_[set][elem_pos] = State::Done;
    return d;
  }

 private:
  enum class State : std::uint8_t { Pending, Busy, Done };

  FuzzyStructure& target_;
  std::vector<std::vector<State>> state_;
};

}  // namespace

FuzzySet materialize_comprehension(const SetDefinition& def, const FuzzyStructure& st) {
  if (!def.formula) return build_universal(st);
  const Formula& phi = *def.formula;
  for (const auto& c : constants_of(phi)) {
    if (c == def.label) {
      throw ModelError(ModelError::Code::SelfReference, "set " + def.label + " is defined in terms of itself");
    }
    if (!st.constant(c)) {
      throw ModelError(ModelError::Code::UnknownConstant, "set " + def.label + " mentions unknown constant " + c);
    }
  }
  Evaluator ev(st, {def.mu_on_crisp});
  FuzzySet out{def.label, {}};
  out.table.reserve(st.domain_size());
  for (std::size_t p = 0; p < st.domain_size(); ++p) {
    out.table.push_back(max_satisfying_degree(ev, phi, def.element_var, def.degree_var, st.element(p), st.grid()));
  }
  return out;
}

FuzzyStructure build_structure(HFUniverse universe, DegreeGrid grid, std::vector<CrispConstant> constants,
                               std::vector<SetDefinition> definitions) {
  FuzzyStructure st(std::move(universe), std::move(grid), std::move(constants), std::move(definitions));
  for (std::size_t i = 1; i < st.set_count(); ++i) {
    const SetDefinition& def = st.definitions()[i];
    if (!def.formula) throw ModelError(ModelError::Code::Malformed, "set " + def.label + " has no formula");
    auto strat = is_stratified(*def.formula);
    if (!strat.stratified) throw StratificationError(def.label, *strat.certificate);
    check_references(def, i, st);
  }
  LazyBuilder(st).fill();
  return st;
}

std::vector<SetDefinition> comprehension_definitions(const TheoryFragment& frag) {
  std::vector<SetDefinition> defs;
  defs.push_back(SetDefinition{std::string(kUniversalSet), std::nullopt});
  for (const auto* e : frag.of_kind(EntryKind::Comprehension)) {
    defs.push_back(SetDefinition{e->label, e->formula, *e->element_var, *e->degree_var, MuOnCrisp::Reject});
  }
  return defs;
}

FuzzyStructure build_model(const TheoryFragment& frag, unsigned n, unsigned k_grid, BuildOptions opts) {
  return build_structure(build_vn(n, opts.allow_large), build_grid(k_grid), frag.constants,
                         comprehension_definitions(frag));
}

Degree mu_eval(const FuzzyStructure& st, DomainElement elem, DomainElement set) { return st.mu(elem, set); }

}  // namespace fnf
