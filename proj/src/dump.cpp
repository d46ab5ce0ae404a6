#include "fuzzynf/dump.hpp"

#include <sstream>

namespace fnf {

namespace {

std::string dump_name(const FuzzyStructure& st, std::size_t pos) {
  DomainElement e = st.element(pos);
  return e.is_crisp() ? st.element_name(e) : "@" + st.element_name(e);
}

[[noreturn]] void bad(int line, const std::string& what) {
  throw ModelError(ModelError::Code::Malformed, "dump line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string write_dump(const FuzzyStructure& st) {
  std::ostringstream out;
  out << "fuzzynf-structure 1\n";
  out << "level " << st.universe().level() << "\n";
  out << "grid " << st.grid().resolution() << "\n";
  out << "sets " << st.set_count() << "\n";
  for (const auto& c : st.crisp_constants()) out << "constant " << c.name << " " << c.literal << "\n";
  for (std::size_t i = 0; i < st.set_count(); ++i) out << "set " << i << " " << st.set(i).name << "\n";
  for (std::size_t p = 0; p < st.domain_size(); ++p) {
    std::string elem = dump_name(st, p);
    for (std::size_t s = 0; s < st.set_count(); ++s) {
      out << "mu " << elem << " " << st.set(s).name << " " << st.degree(p, s).to_string() << "\n";
    }
  }
  return out.str();
}

FuzzyStructure read_dump(std::string_view text, std::vector<SetDefinition> definitions) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  unsigned level = 0, grid = 0;
  std::size_t nsets = 0;
  bool header = false;
  std::vector<CrispConstant> constants;
  std::vector<std::string> labels;
  struct Entry {
    std::string elem, set, degree;
    int line;
  };
  std::vector<Entry> entries;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (!header) {
      std::string version;
      if (key != "fuzzynf-structure" || !(ls >> version) || version != "1") bad(lineno, "missing header");
      header = true;
      continue;
    }
    if (key == "level") {
      if (!(ls >> level)) bad(lineno, "bad level");
    } else if (key == "grid") {
      if (!(ls >> grid)) bad(lineno, "bad grid");
    } else if (key == "sets") {
      if (!(ls >> nsets)) bad(lineno, "bad set count");
    } else if (key == "constant") {
      CrispConstant c;
      if (!(ls >> c.name >> c.literal)) bad(lineno, "bad constant");
      c.line = lineno;
      constants.push_back(c);
    } else if (key == "set") {
      std::size_t i;
      std::string label;
      if (!(ls >> i >> label) || i != labels.size()) bad(lineno, "bad set line");
      labels.push_back(label);
    } else if (key == "mu") {
      Entry e{{}, {}, {}, lineno};
      if (!(ls >> e.elem >> e.set >> e.degree)) bad(lineno, "bad mu line");
      entries.push_back(e);
    } else {
      bad(lineno, "unknown record '" + key + "'");
    }
  }
  if (!header) bad(lineno, "missing header");
  if (labels.size() != nsets || definitions.size() != nsets) bad(lineno, "set count does not match");
  for (std::size_t i = 0; i < nsets; ++i) {
    if (definitions[i].label != labels[i]) bad(lineno, "set " + labels[i] + " does not match definition " + definitions[i].label);
  }

  FuzzyStructure st(build_vn(level, true), build_grid(grid), std::move(constants), std::move(definitions));
  std::vector<std::vector<bool>> seen(st.set_count(), std::vector<bool>(st.domain_size(), false));
  for (const auto& e : entries) {
    std::optional<std::size_t> pos;
    if (!e.elem.empty() && e.elem[0] == '@') {
      if (auto i = st.set_index(e.elem.substr(1))) pos = st.crisp_count() + *i;
    } else {
      try {
        pos = st.universe().index_of(HFSet::parse(e.elem));
      } catch (const std::invalid_argument&) {
      }
    }
    if (!pos) bad(e.line, "unknown element " + e.elem);
    auto s = st.set_index(e.set);
    if (!s) bad(e.line, "unknown set " + e.set);
    Degree d;
    try {
      d = Degree::parse(e.degree);
    } catch (const std::invalid_argument& ex) {
      bad(e.line, ex.what());
    }
    if (seen[*s][*pos]) bad(e.line, "duplicate entry");
    seen[*s][*pos] = true;
    st.set_degree(*pos, *s, d);
  }
  for (std::size_t s = 0; s < st.set_count(); ++s) {
    for (std::size_t p = 0; p < st.domain_size(); ++p) {
      if (!seen[s][p]) bad(lineno, "missing entry for " + st.element_name(p) + " in " + st.set(s).name);
    }
  }
  return st;
}

}  // namespace fnf
