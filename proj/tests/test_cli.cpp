#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace fnf::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run_tool(const std::string& args) {
  std::string cmd = std::string(FUZZYNF_TOOL_PATH) + " " + args + " 2>&1";
  Run r{0, ""};
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string last_line(const std::string& out) {
  std::string s = out;
  while (!s.empty() && s.back() == '\n') s.pop_back();
  return s.substr(s.find_last_of('\n') + 1);
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("fuzzynf-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return (path / name).string();
  }
};

std::string read_file(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("commands on the default corpus pass") {
  RunConfig cfg;
  for (auto cmd : {cmd_stratify, cmd_check, cmd_extract}) {
    CommandResult r = cmd(cfg);
    CHECK(r.exit_code == 0);
    CHECK(last_line(r.output) == "RESULT: PASS");
  }
}

TEST_CASE("exit codes of the executable") {
  TempDir tmp;
  std::string empty = tmp.write("empty.theory", "");
  std::string russell = tmp.write("russell.theory", "comprehension R (x, v): v = 1 & ~in(x, x)\n");
  std::string broken = tmp.write("broken.theory", "comprehension R (x, v): v = = 1\n");

  Run ok = run_tool("check");
  CHECK(ok.code == 0);
  CHECK(last_line(ok.out) == "RESULT: PASS");

  Run e = run_tool("check --corpus " + empty);
  CHECK(e.code == 0);
  CHECK(last_line(e.out) == "RESULT: PASS");

  for (const char* sub : {"stratify", "check", "extract"}) {
    Run r = run_tool(std::string(sub) + " --corpus " + russell);
    CHECK(r.code == 1);
    CHECK(last_line(r.out) == "RESULT: FAIL");
    CHECK(r.out.find("in(x, x)") != std::string::npos);
  }

  Run cap = run_tool("check --level 5");
  CHECK(cap.code == 2);
  CHECK(cap.out.find("refused") != std::string::npos);
  CHECK(last_line(cap.out) == "RESULT: FAIL");

  CHECK(run_tool("check --corpus " + broken).code == 2);
  CHECK(run_tool("check --corpus " + (tmp.path / "missing.theory").string()).code == 2);
  CHECK(run_tool("check --no-such-flag").code == 2);
  CHECK(run_tool("check --grid 0").code == 2);
}

TEST_CASE("check --grow reports every prefix") {
  RunConfig cfg;
  cfg.grow = true;
  cfg.format = Format::Json;
  CommandResult r = cmd_check(cfg);
  CHECK(r.exit_code == 0);
  auto j = nlohmann::json::parse(r.report);
  REQUIRE(j["reports"].size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(j["reports"][i]["comprehensions"] == i + 1);
    CHECK(j["reports"][i]["status"] == "PASS");
  }
  CHECK(j["result"] == "PASS");
}

TEST_CASE("output is deterministic") {
  for (auto format : {Format::Text, Format::Json}) {
    RunConfig cfg;
    cfg.format = format;
    CHECK(cmd_check(cfg).output == cmd_check(cfg).output);
    CHECK(cmd_extract(cfg).output == cmd_extract(cfg).output);
    CHECK(cmd_stratify(cfg).output == cmd_stratify(cfg).output);
  }
  CHECK(run_tool("extract --format json").out == run_tool("extract --format json").out);
}

TEST_CASE("json reports parse and carry a result") {
  RunConfig cfg;
  cfg.format = Format::Json;
  for (auto cmd : {cmd_stratify, cmd_check, cmd_extract}) {
    CommandResult r = cmd(cfg);
    auto j = nlohmann::json::parse(r.report);
    CHECK(j["result"] == "PASS");
    CHECK(last_line(r.output) == "RESULT: PASS");
  }
}

TEST_CASE("dump and reload") {
  TempDir tmp;
  std::string dump = (tmp.path / "m.dump").string();
  Run w = run_tool("check --dump " + dump);
  CHECK(w.code == 0);
  Run again = run_tool("check --model " + dump);
  CHECK(again.code == 0);

  std::string text = read_file(dump);
  std::string needle = "mu {{}} contains_empty 1\n";
  auto at = text.find(needle);
  REQUIRE(at != std::string::npos);
  text.replace(at, needle.size(), "mu {{}} contains_empty 3/4\n");
  std::string bad = tmp.write("bad.dump", text);
  Run r = run_tool("check --model " + bad);
  CHECK(r.code == 1);
  CHECK(last_line(r.out) == "RESULT: FAIL");
  CHECK(r.out.find("contains_empty") != std::string::npos);

  std::string off = text;
  off.replace(at, needle.size(), "mu {{}} contains_empty 1/3\n");
  CHECK(run_tool("check --model " + tmp.write("off.dump", off)).code == 2);
  CHECK(run_tool("check --model " + tmp.write("short.dump", text.substr(0, text.size() / 2))).code == 2);
}

TEST_CASE("reports go to FUZZYNF_OUT_DIR") {
  TempDir tmp;
  setenv("FUZZYNF_OUT_DIR", tmp.path.c_str(), 1);
  RunConfig cfg;
  CommandResult text = cmd_check(cfg);
  cfg.format = Format::Json;
  CommandResult json = cmd_extract(cfg);
  unsetenv("FUZZYNF_OUT_DIR");
  CHECK(text.report_path == (tmp.path / "default-check.txt").string());
  CHECK(json.report_path == (tmp.path / "default-extract.json").string());
  CHECK(read_file(text.report_path) == text.report);
  CHECK(nlohmann::json::parse(read_file(json.report_path))["result"] == "PASS");

  RunConfig explicit_out;
  explicit_out.out = (tmp.path / "chosen.txt").string();
  CommandResult r = cmd_stratify(explicit_out);
  CHECK(r.report_path == explicit_out.out);
  CHECK(fs::exists(explicit_out.out));
}

TEST_CASE("fail-fast stops at the first failing verdict") {
  TempDir tmp;
  RunConfig cfg;
  cfg.corpus = tmp.write("dup.theory",
                         "comprehension A (x, v): v = 1/2\n"
                         "comprehension B (x, v): v = 1/2 & x = x\n");
  cfg.format = Format::Json;
  auto full = nlohmann::json::parse(cmd_check(cfg).report);
  cfg.fail_fast = true;
  CommandResult fast = cmd_check(cfg);
  CHECK(fast.exit_code == 1);
  auto j = nlohmann::json::parse(fast.report);
  CHECK(j["reports"][0]["verdicts"].size() < full["reports"][0]["verdicts"].size());
  CHECK(j["reports"][0]["verdicts"].back()["holds"] == false);
}
