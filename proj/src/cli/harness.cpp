#include "tmlcost/cli/cli.hpp"

#include <fstream>
#include <sstream>

namespace tmlcost::cli {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::shared_ptr<const lang::Program> load_program(std::string_view text, std::optional<Rational> capacity) {
  lang::Program p = lang::parse_program(text);
  if (capacity) {
    if (capacity->sign() <= 0) throw std::invalid_argument("capacity must be positive");
    p.main.capacity = *capacity;
  }
  return std::make_shared<const lang::Program>(std::move(p));
}

Analysis analyze_program(std::shared_ptr<const lang::Program> p) {
  Analysis a;
  a.types = btypes::type_program(*p);
  a.equations = costgen::translate_program(a.types);
  a.program = std::move(p);
  return a;
}

namespace {

std::pair<std::string, std::string> split_binding(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("expected name=value, got '" + spec + "'");
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

}  // namespace

Inputs parse_bindings(const std::vector<std::string>& specs) {
  Inputs out;
  for (const auto& s : specs) {
    auto [name, value] = split_binding(s);
    out[name] = Rational::parse(value);
  }
  return out;
}

std::vector<Inputs> parse_grid(const std::vector<std::string>& specs) {
  std::vector<Inputs> grid{{}};
  for (const auto& s : specs) {
    auto [name, range] = split_binding(s);
    std::vector<Rational> values;
    if (auto dots = range.find(".."); dots != std::string::npos) {
      Rational lo = Rational::parse(range.substr(0, dots));
      Rational hi = Rational::parse(range.substr(dots + 2));
      for (Rational v = lo; v <= hi; v = v + Rational(1)) values.push_back(v);
    } else {
      std::stringstream ss(range);
      std::string item;
      while (std::getline(ss, item, ',')) values.push_back(Rational::parse(item));
    }
    std::vector<Inputs> next;
    for (const auto& g : grid)
      for (const auto& v : values) {
        Inputs p = g;
        p[name] = v;
        next.push_back(std::move(p));
      }
    grid = std::move(next);
  }
  return grid;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

CheckReport check_program(const Analysis& a, const std::vector<Inputs>& grid, const interp::SchedulerPolicy& policy,
                          const interp::Budgets& budgets) {
  using interp::RunOutcome;
  CheckReport report;
  for (const auto& inputs : grid) {
    CheckPoint pt;
    pt.inputs = inputs;
    pt.bound = costsolve::eval_entry(a.equations, inputs);

    std::vector<interp::Trace> traces;
    if (policy.kind == interp::SchedulerPolicy::Kind::Exhaustive) {
      auto ex = interp::explore(a.program, inputs, policy.bound, budgets);
      traces = std::move(ex.traces);
      pt.truncated = ex.truncated;
    } else {
      traces.push_back(interp::run(a.program, inputs, policy, budgets, false));
    }
    pt.schedules = traces.size();

    bool first = true;
    for (const auto& tr : traces) {
      if (tr.outcome == RunOutcome::ZenoSuspected || tr.outcome == RunOutcome::BudgetExhausted) {
        pt.verdict = Verdict::Inconclusive;
        pt.note = interp::outcome_name(tr.outcome);
      }
      if (first || pt.max_elapsed < tr.elapsed) {
        pt.max_elapsed = tr.elapsed;
        pt.worst_choices = tr.choices;
        first = false;
      }
    }
    if (pt.verdict != Verdict::Inconclusive) {
      if (!pt.bound.is_finite()) {
        pt.verdict = Verdict::Inconclusive;
        pt.note = "bound is " + pt.bound.str();
      } else if (pt.bound.value < pt.max_elapsed) {
        pt.verdict = Verdict::Fail;
      }
    }
    if (pt.verdict == Verdict::Fail) report.verdict = Verdict::Fail;
    if (pt.verdict == Verdict::Inconclusive && report.verdict == Verdict::Pass) report.verdict = Verdict::Inconclusive;
    report.points.push_back(std::move(pt));
  }
  return report;
}

}  // namespace tmlcost::cli
