#pragma once

#include <string>

namespace fnf::cli {

enum class Format { Text, Json };

struct RunConfig {
  unsigned level = 3;
  unsigned grid = 4;
  std::string corpus;  // empty: the shipped default corpus
  std::string out;     // report file; empty: $FUZZYNF_OUT_DIR/<fragment>-<command>.<ext> when set
  Format format = Format::Text;
  bool grow = false;
  bool allow_large = false;
  bool fail_fast = false;
  bool probe = false;   // compare tables at level n and n+1
  std::string model;    // reload this structure dump instead of building
  std::string dump;     // write the built structure here
};

struct CommandResult {
  int exit_code = 0;   // 0 pass, 1 verification failure, 2 usage or input error
  std::string output;  // what goes to stdout; always ends with "RESULT: PASS|FAIL\n"
  std::string report;  // report document in the requested format
  std::string report_path;
};

std::string default_corpus_path();

CommandResult cmd_stratify(const RunConfig& cfg);
CommandResult cmd_check(const RunConfig& cfg);
CommandResult cmd_extract(const RunConfig& cfg);

}  // namespace fnf::cli
