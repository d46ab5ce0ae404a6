#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "fuzzynf/checker.hpp"
#include "fuzzynf/crisp.hpp"
#include "fuzzynf/dump.hpp"
#include "fuzzynf/parser.hpp"
#include "fuzzynf/stratify.hpp"

#ifndef FUZZYNF_DEFAULT_CORPUS
#define FUZZYNF_DEFAULT_CORPUS "corpus/default.theory"
#endif

namespace fnf::cli {

using nlohmann::ordered_json;

namespace {

const char* kMuTypingNote = "mu(x, A) = d and mu(x, A) < d are typed like x in A for stratification";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

TheoryFragment load(const RunConfig& cfg) {
  std::string path = cfg.corpus.empty() ? default_corpus_path() : cfg.corpus;
  if (!std::filesystem::exists(path)) throw UsageError("corpus " + path + " does not exist");
  return load_theory_file(path);
}

void validate(const RunConfig& cfg) {
  if (cfg.level < 1) throw UsageError("--level must be at least 1");
  if (cfg.grid < 1) throw UsageError("--grid must be at least 1");
  unsigned cap = cfg.allow_large ? kLargeLevelCap : kDefaultLevelCap;
  if (cfg.level > cap) {
    throw CapExceeded("level " + std::to_string(cfg.level) + " exceeds the cap of " + std::to_string(cap) +
                      (cfg.allow_large ? "" : "; pass --allow-large for level 5"));
  }
}

std::string result_line(bool pass) { return std::string("RESULT: ") + (pass ? "PASS" : "FAIL") + "\n"; }

// Fills in the report text, writes it out when asked and appends the summary line.
CommandResult finish(const RunConfig& cfg, const std::string& command, const std::string& fragment, bool pass,
                     const std::string& text, ordered_json json) {
  CommandResult r;
  r.exit_code = pass ? 0 : 1;
  if (cfg.format == Format::Json) {
    json["result"] = pass ? "PASS" : "FAIL";
    r.report = json.dump(2) + "\n";
  } else {
    r.report = text + result_line(pass);
  }
  r.output = r.report;
  if (cfg.format == Format::Json) r.output += result_line(pass);

  std::string path = cfg.out;
  if (path.empty()) {
    if (const char* dir = std::getenv("FUZZYNF_OUT_DIR"); dir && *dir) {
      std::filesystem::create_directories(dir);
      path = (std::filesystem::path(dir) / (fragment + "-" + command + (cfg.format == Format::Json ? ".json" : ".txt")))
                 .string();
    }
  }
  if (!path.empty()) {
    write_file(path, r.report);
    r.report_path = path;
  }
  return r;
}

CommandResult guarded(const RunConfig& cfg, const std::function<CommandResult()>& body) {
  auto fail = [](int code, const std::string& msg) {
    CommandResult r;
    r.exit_code = code;
    r.output = "error: " + msg + "\n" + result_line(false);
    return r;
  };
  try {
    validate(cfg);
    return body();
  } catch (const SyntaxError& e) {
    return fail(2, e.what());
  } catch (const CapExceeded& e) {
    return fail(2, std::string("refused: ") + e.what());
  } catch (const UsageError& e) {
    return fail(2, e.what());
  } catch (const StratificationError& e) {
    return fail(1, e.what());
  } catch (const ModelError& e) {
    return fail(2, e.what());
  } catch (const std::exception& e) {
    return fail(2, e.what());
  }
}

std::string typing_text(const StratTyping& t) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : t.assignment) {
    out += (first ? "" : ", ") + k + ": " + std::to_string(v);
    first = false;
  }
  return out + "}";
}

}  // namespace

std::string default_corpus_path() { return FUZZYNF_DEFAULT_CORPUS; }

CommandResult cmd_stratify(const RunConfig& cfg) {
  return guarded(cfg, [&] {
    TheoryFragment frag = load(cfg);
    std::ostringstream text;
    ordered_json j;
    j["fragment"] = frag.name;
    j["notes"] = {kMuTypingNote};
    ordered_json fs = ordered_json::array();
    bool pass = true;
    std::size_t count = 0;
    for (const auto& e : frag.entries) {
      if (e.kind == EntryKind::Axiom) continue;
      ++count;
      StratResult r = is_stratified(e.formula);
      ordered_json fj;
      fj["label"] = e.label;
      fj["kind"] = std::string(entry_keyword(e.kind));
      fj["formula"] = print(e.formula);
      fj["stratified"] = r.stratified;
      text << e.label << ": ";
      if (r.stratified) {
        ordered_json t = ordered_json::object();
        for (const auto& [k, v] : r.typing->assignment) t[k] = v;
        fj["typing"] = t;
        text << "stratified " << typing_text(*r.typing) << "\n";
      } else {
        pass = false;
        fj["certificate"] = certificate_json(*r.certificate);
        text << "NOT stratified\n  " << r.certificate->to_string() << "\n";
        for (const auto& s : r.certificate->cycle) {
          text << "  line " << e.line << ", " << to_string(s.constraint.origin) << ": "
               << (s.constraint.atom.empty() ? s.constraint.to_string() : s.constraint.atom) << "  delta "
               << s.step << "\n";
        }
      }
      fs.push_back(fj);
      if (!pass && cfg.fail_fast) break;
    }
    j["formulas"] = fs;
    text << count << " formula(s), " << (pass ? "all stratified" : "some not stratified") << "\n";
    text << "note: " << kMuTypingNote << "\n";
    return finish(cfg, "stratify", frag.name, pass, text.str(), j);
  });
}

CommandResult cmd_check(const RunConfig& cfg) {
  return guarded(cfg, [&] {
    TheoryFragment frag = load(cfg);
    BuildOptions opts{cfg.allow_large};
    std::vector<CheckReport> reports;
    if (!cfg.model.empty()) {
      FuzzyStructure st = read_dump(read_file(cfg.model), comprehension_definitions(frag));
      reports.push_back(check_structure(st, frag));
    } else if (cfg.grow) {
      reports = growing_fragments(frag, cfg.level, cfg.grid, opts);
    } else {
      reports.push_back(run_fragment(frag, cfg.level, cfg.grid, opts));
    }
    if (!cfg.dump.empty()) write_file(cfg.dump, write_dump(build_model(frag, cfg.level, cfg.grid, opts)));

    if (cfg.fail_fast) {
      for (auto& r : reports) {
        for (std::size_t i = 0; i < r.verdicts.size(); ++i) {
          if (!r.verdicts[i].holds) {
            r.verdicts.resize(i + 1);
            break;
          }
        }
      }
    }

    bool pass = true;
    std::ostringstream text;
    ordered_json j;
    j["fragment"] = frag.name;
    j["mode"] = !cfg.model.empty() ? "reloaded" : cfg.grow ? "grow" : "single";
    ordered_json rs = ordered_json::array();
    for (const auto& r : reports) {
      pass = pass && r.holds();
      rs.push_back(r.to_json());
      text << r.to_text();
    }
    j["reports"] = rs;
    if (cfg.grow) text << reports.size() << " prefix report(s)\n";

    if (cfg.probe) {
      unsigned cap = cfg.allow_large ? kLargeLevelCap : kDefaultLevelCap;
      if (cfg.level + 1 > cap) {
        j["probe"] = {{"skipped", "level " + std::to_string(cfg.level + 1) + " is above the cap"}};
        text << "stability probe skipped: level " << cfg.level + 1 << " is above the cap\n";
      } else {
        StabilityProbe p = stability_probe(frag, cfg.level, cfg.grid, opts);
        j["probe"] = p.to_json();
        text << "stability probe n=" << cfg.level << " vs n=" << cfg.level + 1 << ": "
             << (p.changes.empty() ? "stable" : std::to_string(p.changes.size()) + " change(s)") << "\n";
        for (const auto& c : p.changes) {
          text << "  " << c.set << " at " << c.element << ": " << c.at_n.to_string() << " -> "
               << c.at_next.to_string() << "\n";
        }
      }
    }
    return finish(cfg, "check", frag.name, pass, text.str(), j);
  });
}

CommandResult cmd_extract(const RunConfig& cfg) {
  return guarded(cfg, [&] {
    TheoryFragment frag = load(cfg);
    BuildOptions opts{cfg.allow_large};
    auto build = [&]() -> ExtractResult {
      if (!cfg.model.empty()) {
        return extract_from(read_dump(read_file(cfg.model), extraction_definitions(frag)), frag);
      }
      return extract(frag, cfg.level, cfg.grid, opts);
    };
    ExtractResult x = build();
    if (!cfg.dump.empty()) write_file(cfg.dump, write_dump(x.structure));
    const FuzzyStructure& st = x.structure;
    bool pass = x.holds();

    std::ostringstream text;
    if (x.base) text << "base model:\n" << x.base->to_text();
    text << "extended with the classical sets:\n" << x.extended.to_text();
    text << "  (extensionality collisions here are what the quotient identifies)\n";
    text << "crisp universe:\n";
    ordered_json cands = ordered_json::array();
    for (const auto& c : x.candidates) {
      ordered_json cj;
      cj["set"] = c.name;
      cj["crisp"] = c.crisp;
      if (!c.crisp) {
        cj["witness"] = {{"element", *c.witness_element}, {"degree", c.witness_degree->to_string()}};
        text << "  " << c.name << ": excluded, degree " << c.witness_degree->to_string() << " at "
             << *c.witness_element << "\n";
      } else {
        text << "  " << c.name << ": crisp\n";
      }
      cands.push_back(cj);
    }
    const CrispStructure& q = x.quotient;
    text << "quotient: " << q.classes().size() << " class(es)";
    if (auto u = q.universal_class()) text << ", universal class " << q.class_name(st, *u);
    text << "\n";
    for (std::size_t c = 0; c < q.classes().size(); ++c) {
      text << "  " << c << " " << q.class_name(st, c) << " = {";
      bool first = true;
      for (auto m : q.classes()[c].members) {
        text << (first ? "" : ", ") << st.set(m).name;
        first = false;
      }
      text << "} elements {";
      first = true;
      for (std::size_t p = 0; p < q.domain_size(); ++p) {
        if (!q.in(p, c)) continue;
        text << (first ? "" : " ") << q.element_name(st, p);
        first = false;
      }
      text << "}\n";
    }
    if (!q.divergences().empty()) {
      text << "  " << q.divergences().size()
           << " membership(s) between sets depend on the chosen representatives (reported, not enforced)\n";
    }
    text << "NF verification:\n" << x.nf.to_text();

    ordered_json j;
    j["fragment"] = frag.name;
    j["level"] = st.universe().level();
    j["grid"] = st.grid().resolution();
    j["base"] = x.base ? x.base->to_json() : ordered_json(nullptr);
    j["extended"] = x.extended.to_json();
    j["candidates"] = cands;
    j["quotient"] = q.to_json(st);
    j["nf"] = x.nf.to_json();
    return finish(cfg, "extract", frag.name, pass, text.str(), j);
  });
}

}  // namespace fnf::cli
