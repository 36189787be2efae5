#pragma once

#include "tmlcost/btypes/typing.hpp"
#include "tmlcost/costgen/translate.hpp"
#include "tmlcost/costsolve/costsolve.hpp"
#include "tmlcost/interp/interp.hpp"
#include "tmlcost/lang/syntax.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tmlcost::cli {

using Inputs = std::map<std::string, Rational>;

/// Parsed, typed and translated program.
struct Analysis {
  std::shared_ptr<const lang::Program> program;
  btypes::BProgram types;
  costgen::CostEquationSystem equations;
};

std::string read_file(const std::string& path);

/// Parses `text`; `capacity` replaces the main block's `with k`.
std::shared_ptr<const lang::Program> load_program(std::string_view text, std::optional<Rational> capacity = {});

Analysis analyze_program(std::shared_ptr<const lang::Program> p);

/// "n=3", "n=0..8" or "n=1,2,5" for each name; the grid is their product.
std::vector<Inputs> parse_grid(const std::vector<std::string>& specs);

/// "name=value" pairs.
Inputs parse_bindings(const std::vector<std::string>& specs);

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

struct CheckPoint {
  Inputs inputs;
  costsolve::CostValue bound;
  Rational max_elapsed;
  std::size_t schedules = 0;
  std::vector<std::size_t> worst_choices;  // Activate choices of the max-elapsed schedule
  bool truncated = false;
  std::string note;  // why the point is inconclusive
  Verdict verdict = Verdict::Pass;
};

struct CheckReport {
  Verdict verdict = Verdict::Pass;
  std::vector<CheckPoint> points;
};

/// For each grid point: every schedule of `policy` must finish with
/// elapsed time <= the cost bound. Zeno or budget-limited runs and
/// non-finite bounds make the point inconclusive.
CheckReport check_program(const Analysis& a, const std::vector<Inputs>& grid, const interp::SchedulerPolicy& policy,
                          const interp::Budgets& budgets);

/// The `tmlc` command line. Exit codes: 0 ok, 1 internal error (or a
/// failed check), 2 user or program error, 3 inconclusive.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tmlcost::cli
