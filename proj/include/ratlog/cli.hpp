#ifndef RATLOG_CLI_HPP
#define RATLOG_CLI_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ratlog/chains.hpp"
#include "ratlog/godel.hpp"
#include "ratlog/product.hpp"

namespace ratlog::cli {

enum class Logic { RL, RP, RG };
enum class Mode { Admissible, Derivable };

struct Check {
  Logic logic = Logic::RP;
  Mode mode = Mode::Admissible;
  std::optional<GodelExtension> extension;  // RG only; defaults to RG itself
  std::vector<std::string> rules;           // rule texts, parsed by run()
  bool batch = false;                       // came from --rules-file
  DovetailBudget budget;
};

struct Eval {
  std::string algebra;  // "L", "P", "G" or "MV"
  std::optional<GodelChainSpec> chain;
  unsigned mv_n = 1;
  std::string formula;
  std::map<unsigned, std::string> assignment;  // raw values, parsed per algebra
};

struct VarietyCompare {
  VarietyGen g1, g2;
};

struct VarietyAxiomsCmd {
  VarietyGen g;
  std::set<Rational> mentioned;
};

struct Classify {
  GodelChainSpec chain;
  bool quasivariety = false;  // classify Q(chain) instead of the axiomatic extension
};

struct CheckTable {
  std::string path;
  Flavor flavor = Flavor::Prod;
};

struct Gadget {
  std::set<Integer> primes;
};

using Command = std::variant<Check, Eval, VarietyCompare, VarietyAxiomsCmd, Classify, CheckTable, Gadget>;

struct Output {
  nlohmann::json doc;
  int exit_code = 0;  // 0 definitive, 2 unknown, 1 input error
};

// "r=m/n" or "p=m/n,gamma=k|omega". Throws InputError.
GodelChainSpec parse_ext(const std::string& text);

struct Invocation {
  Command command;
  std::optional<std::string> json_out;
};

// --help and friends: the text to print, exit 0.
struct HelpRequested {
  std::string text;
};

// Throws InputError on malformed arguments and HelpRequested for --help.
Invocation parse_command(const std::vector<std::string>& args);

Output run(const Command& cmd);

// Whole program: parse, run, print, write --json-out. Returns the exit code.
int main(int argc, char** argv);

}  // namespace ratlog::cli

#endif  // RATLOG_CLI_HPP
