#include <iostream>

#include "CLI11.hpp"

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite models of restricted fuzzy NF: stratification, model checking, crisp extraction"};
  app.require_subcommand(1);

  fnf::cli::RunConfig cfg;
  std::string format = "text";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--level", cfg.level, "cumulative hierarchy level n")->capture_default_str();
    sub->add_option("--grid", cfg.grid, "degree grid resolution k")->capture_default_str();
    sub->add_option("--corpus", cfg.corpus, "theory file (default: the shipped corpus)");
    sub->add_option("--out", cfg.out, "write the report to this file");
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    sub->add_flag("--allow-large", cfg.allow_large, "allow level 5");
    sub->add_flag("--fail-fast", cfg.fail_fast, "stop at the first failure");
  };

  auto* stratify = app.add_subcommand("stratify", "decide stratification of every formula in the corpus");
  add_common(stratify);
  auto* check = app.add_subcommand("check", "build M_n and verify the axioms");
  add_common(check);
  check->add_flag("--grow", cfg.grow, "check every prefix of the comprehension entries");
  check->add_flag("--probe", cfg.probe, "compare tables with level n+1");
  check->add_option("--model", cfg.model, "re-verify a structure dump instead of building");
  check->add_option("--dump", cfg.dump, "write the structure dump");
  auto* extract = app.add_subcommand("extract", "extract and verify the crisp quotient");
  add_common(extract);
  extract->add_option("--model", cfg.model, "extract from a structure dump instead of building");
  extract->add_option("--dump", cfg.dump, "write the structure dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    if (code != 0) {
      std::cout << "RESULT: FAIL\n";
      return 2;
    }
    return 0;
  }
  cfg.format = format == "json" ? fnf::cli::Format::Json : fnf::cli::Format::Text;

  fnf::cli::CommandResult r;
  if (*stratify) r = fnf::cli::cmd_stratify(cfg);
  else if (*check) r = fnf::cli::cmd_check(cfg);
  else r = fnf::cli::cmd_extract(cfg);
  std::cout << r.output;
  return r.exit_code;
}
