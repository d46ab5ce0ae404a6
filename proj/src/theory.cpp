#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fuzzynf/parser.hpp"

namespace fnf {

std::string_view entry_keyword(EntryKind k) {
  switch (k) {
    case EntryKind::Axiom:
      return "axiom";
    case EntryKind::Comprehension:
      return "comprehension";
    case EntryKind::Classical:
      return "classical";
  }
  return "?";
}

std::vector<const TheoryEntry*> TheoryFragment::of_kind(EntryKind k) const {
  std::vector<const TheoryEntry*> out;
  for (const auto& e : entries) {
    if (e.kind == k) out.push_back(&e);
  }
  return out;
}

namespace {

struct LineCursor {
  std::string_view text;
  std::size_t i = 0;
  int line = 0;

  SourcePos pos() const { return {line, static_cast<int>(i) + 1}; }

  void skip_space() {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  }

  std::string ident() {
    skip_space();
    std::size_t j = i;
    while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
    if (j == i || std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw SyntaxError(SyntaxError::Code::Parse, pos(), "expected an identifier");
    }
    std::string out(text.substr(i, j - i));
    i = j;
    return out;
  }

  void expect(char c) {
    skip_space();
    if (i >= text.size() || text[i] != c) {
      throw SyntaxError(SyntaxError::Code::Parse, pos(), std::string("expected '") + c + "'");
    }
    ++i;
  }

  bool peek(char c) {
    skip_space();
    return i < text.size() && text[i] == c;
  }
};

// set := '{' [set (',' set)*] '}'
bool hf_set(std::string_view s, std::size_t& i) {
  if (i >= s.size() || s[i] != '{') return false;
  ++i;
  if (i < s.size() && s[i] == '}') return ++i, true;
  while (true) {
    if (!hf_set(s, i)) return false;
    if (i < s.size() && s[i] == ',') {
      ++i;
      continue;
    }
    if (i < s.size() && s[i] == '}') return ++i, true;
    return false;
  }
}

bool valid_hf_literal(std::string_view s) {
  std::size_t i = 0;
  return hf_set(s, i) && i == s.size();
}

std::string strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

}  // namespace

TheoryFragment parse_theory(std::string_view text, std::string name) {
  TheoryFragment frag;
  frag.name = std::move(name);

  std::vector<std::string> lines;
  {
    std::istringstream in{std::string(text)};
    std::string l;
    while (std::getline(in, l)) lines.push_back(strip_comment(l));
  }

  std::set<std::string> labels{std::string(kUniversalSet)};
  auto claim = [&](const std::string& label, SourcePos pos) {
    if (label == "forall" || label == "exists" || label == "in" || label == "mu") {
      throw SyntaxError(SyntaxError::Code::Parse, pos, "keyword '" + label + "' used as label");
    }
    if (!labels.insert(label).second) {
      throw SyntaxError(SyntaxError::Code::DuplicateLabel, pos, "duplicate label '" + label + "'");
    }
  };

  // Axioms may mention any set label of the file, so collect those first.
  std::set<std::string> all_sets{std::string(kUniversalSet)};
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::istringstream words(lines[n]);
    std::string kw, label;
    words >> kw >> label;
    if (kw == "comprehension" || kw == "classical" || kw == "constant") {
      auto cut = label.find_first_of(":(=");
      all_sets.insert(label.substr(0, cut));
    }
  }

  std::set<std::string> visible{std::string(kUniversalSet)};
  for (std::size_t n = 0; n < lines.size(); ++n) {
    LineCursor cur{lines[n], 0, static_cast<int>(n) + 1};
    cur.skip_space();
    if (cur.i >= cur.text.size()) continue;
    SourcePos kw_pos = cur.pos();
    std::string kw = cur.ident();

    if (kw == "name") {
      frag.name = cur.ident();
      continue;
    }
    if (kw == "constant") {
      SourcePos at = (cur.skip_space(), cur.pos());
      std::string cname = cur.ident();
      claim(cname, at);
      cur.expect('=');
      std::string literal;
      for (char c : cur.text.substr(cur.i)) {
        if (!std::isspace(static_cast<unsigned char>(c))) literal += c;
      }
      if (!valid_hf_literal(literal)) {
        throw SyntaxError(SyntaxError::Code::BadLiteral, cur.pos(),
                          "malformed hereditarily finite set literal '" + literal + "'");
      }
      frag.constants.push_back({cname, literal, cur.line});
      visible.insert(cname);
      continue;
    }

    EntryKind kind;
    if (kw == "axiom") {
      kind = EntryKind::Axiom;
    } else if (kw == "comprehension") {
      kind = EntryKind::Comprehension;
    } else if (kw == "classical") {
      kind = EntryKind::Classical;
    } else {
      throw SyntaxError(SyntaxError::Code::UnknownDirective, kw_pos, "unknown directive '" + kw + "'");
    }

    SourcePos label_pos = (cur.skip_space(), cur.pos());
    std::string label = cur.ident();
    claim(label, label_pos);

    ParseContext ctx;
    ctx.declared.emplace();
    std::optional<Var> x, v;
    if (kind != EntryKind::Axiom) {
      if (!cur.peek('(')) {
        throw SyntaxError(SyntaxError::Code::MissingDesignation, cur.pos(),
                          "entry '" + label + "' lacks its designated variables");
      }
      cur.expect('(');
      SourcePos xpos = (cur.skip_space(), cur.pos());
      x = Var{cur.ident(), Sort::Set};
      if (kind == EntryKind::Comprehension) {
        if (!cur.peek(',')) {
          throw SyntaxError(SyntaxError::Code::MissingDesignation, cur.pos(),
                            "comprehension '" + label + "' needs (set variable, degree variable)");
        }
        cur.expect(',');
        SourcePos vpos = (cur.skip_space(), cur.pos());
        v = Var{cur.ident(), Sort::Degree};
        if (v->name == x->name) {
          throw SyntaxError(SyntaxError::Code::MissingDesignation, vpos,
                            "designated variables must be distinct");
        }
      }
      cur.expect(')');
      if (all_sets.count(x->name) || x->name == kUniversalSet ||
          (v && (all_sets.count(v->name) || v->name == kUniversalSet))) {
        throw SyntaxError(SyntaxError::Code::MissingDesignation, xpos,
                          "designated variable collides with a constant");
      }
      (*ctx.declared)[x->name] = Sort::Set;
      if (v) (*ctx.declared)[v->name] = Sort::Degree;
      ctx.constants = visible;
    } else {
      ctx.constants = all_sets;
    }
    cur.expect(':');
    ctx.origin = {cur.line, static_cast<int>(cur.i) + 1};

    Formula f = parse_formula(cur.text.substr(cur.i), ctx);
    frag.entries.push_back(TheoryEntry{kind, label, std::move(f), x, v, cur.line});
    if (kind != EntryKind::Axiom) visible.insert(label);
  }
  return frag;
}

TheoryFragment load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read theory file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_theory(buf.str(), std::filesystem::path(path).stem().string());
}

std::string print_theory(const TheoryFragment& frag) {
  std::string out = "name " + frag.name + "\n";
  for (const auto& c : frag.constants) out += "constant " + c.name + " = " + c.literal + "\n";
  for (const auto& e : frag.entries) {
    out += std::string(entry_keyword(e.kind)) + " " + e.label;
    if (e.kind == EntryKind::Comprehension) {
      out += " (" + e.element_var->name + ", " + e.degree_var->name + ")";
    } else if (e.kind == EntryKind::Classical) {
      out += " (" + e.element_var->name + ")";
    }
    out += ": " + print(e.formula) + "\n";
  }
  return out;
}

}  // namespace fnf
