#include "tmlcost/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>

namespace tmlcost::cli {

using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kUser = 2, kInconclusive = 3 };

struct Globals {
  bool json = false;
  std::optional<std::uint64_t> seed;
};

json inputs_json(const Inputs& in) {
  json j = json::object();
  for (const auto& [k, v] : in) j[k] = v.str();
  return j;
}

std::string inputs_str(const Inputs& in) {
  std::string out;
  for (const auto& [k, v] : in) out += (out.empty() ? "" : " ") + k + "=" + v.str();
  return out.empty() ? "()" : out;
}

interp::SchedulerPolicy policy_of(const std::string& text, const Globals& g) {
  if (text == "random") return interp::SchedulerPolicy::random(g.seed.value_or(0));
  return interp::SchedulerPolicy::parse(text);
}

std::optional<Rational> opt_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return Rational::parse(s);
}

// Reports an error as text or as {"error": kind, "message": ...}.
int fail(std::ostream& out, std::ostream& err, const Globals& g, int code, const std::string& kind,
         const std::string& msg, json extra = json::object()) {
  if (g.json) {
    extra["error"] = kind;
    extra["message"] = msg;
    out << extra.dump() << "\n";
  } else {
    err << "error: " << kind << ": " << msg << "\n";
  }
  return code;
}

// --- parse

struct ParseOpts {
  std::string file;
  bool print = false;
};

int cmd_parse(const ParseOpts& o, const Globals& g, std::ostream& out) {
  auto p = load_program(read_file(o.file));
  if (g.json) {
    json j{{"ok", true}, {"methods", json::array()}};
    for (const auto& m : p->methods) j["methods"].push_back(m.name);
    if (o.print) j["program"] = lang::print_program(*p);
    out << j.dump() << "\n";
  } else if (o.print) {
    out << lang::print_program(*p);
  } else {
    out << "ok: " << p->methods.size() << " method(s)\n";
  }
  return kOk;
}

// --- simulate

struct SimOpts {
  std::string file;
  std::string policy = "fifo";
  std::vector<std::string> args;
  std::uint64_t max_steps = interp::Budgets{}.max_steps;
  std::uint64_t max_ticks = interp::Budgets{}.max_ticks;
  bool trace = false;
  std::string capacity;
};

int outcome_exit(interp::RunOutcome o) {
  return o == interp::RunOutcome::ZenoSuspected || o == interp::RunOutcome::BudgetExhausted ? kInconclusive : kOk;
}

int cmd_simulate(const SimOpts& o, const Globals& g, std::ostream& out) {
  auto p = load_program(read_file(o.file), opt_rational(o.capacity));
  auto policy = policy_of(o.policy, g);
  interp::Budgets budgets{o.max_steps, o.max_ticks};
  Inputs inputs = parse_bindings(o.args);

  if (policy.kind == interp::SchedulerPolicy::Kind::Exhaustive) {
    auto ex = interp::explore(p, inputs, policy.bound, budgets);
    Rational worst;
    int code = kOk;
    std::map<std::string, std::size_t> outcomes;
    for (const auto& tr : ex.traces) {
      if (worst < tr.elapsed) worst = tr.elapsed;
      ++outcomes[interp::outcome_name(tr.outcome)];
      code = std::max(code, outcome_exit(tr.outcome));
    }
    if (g.json) {
      out << json{{"policy", policy.str()},     {"schedules", ex.traces.size()}, {"truncated", ex.truncated},
                  {"max_elapsed", worst.str()}, {"outcomes", outcomes}}
                 .dump()
          << "\n";
    } else {
      out << "policy: " << policy.str() << "\nschedules: " << ex.traces.size() << (ex.truncated ? " (truncated)" : "")
          << "\nmax elapsed: " << worst.str() << "\n";
      for (const auto& [name, n] : outcomes) out << "  " << name << ": " << n << "\n";
    }
    return code;
  }

  interp::Trace tr = interp::run(p, inputs, policy, budgets, o.trace);
  if (o.trace)
    for (const auto& e : tr.log) {
      json line{{"rule", e.rule}, {"elapsed", e.elapsed.str()}};
      line["object"] = e.object ? json(e.object->v) : json(nullptr);
      if (e.rule == "Tick") line["t"] = e.tick.str();
      out << line.dump() << "\n";
    }
  if (g.json) {
    out << json{{"outcome", interp::outcome_name(tr.outcome)},
                {"elapsed", tr.elapsed.str()},
                {"steps", tr.steps},
                {"ticks", tr.ticks},
                {"policy", policy.str()}}
               .dump()
        << "\n";
  } else {
    out << "outcome: " << interp::outcome_name(tr.outcome) << "\nelapsed: " << tr.elapsed.str()
        << "\nsteps: " << tr.steps << "\nticks: " << tr.ticks << "\n";
  }
  return outcome_exit(tr.outcome);
}

// --- analyze

struct AnalyzeOpts {
  std::string file;
  std::string capacity;
  std::vector<std::string> args;
  bool dump_btypes = false;
  bool dump_equations = false;
};

bool entry_is_closed(const costgen::CostEquationSystem& sys) {
  auto it = sys.formals.find(sys.entry);
  return it == sys.formals.end() || it->second.empty();
}

int cmd_analyze(const AnalyzeOpts& o, const Globals& g, std::ostream& out) {
  Analysis a = analyze_program(load_program(read_file(o.file), opt_rational(o.capacity)));
  bool all = !o.dump_btypes && !o.dump_equations;
  bool want_bound = !o.args.empty() || entry_is_closed(a.equations);
  std::optional<costsolve::CostValue> bound;
  if (want_bound) bound = costsolve::eval_entry(a.equations, parse_bindings(o.args));

  if (g.json) {
    json j{{"ok", true}};
    if (all || o.dump_btypes) j["btypes"] = btypes::print_bprogram(a.types);
    if (all || o.dump_equations) {
      j["equations"] = json::array();
      for (const auto& eq : a.equations.equations) j["equations"].push_back(eq.str());
    }
    if (bound) j["bound"] = bound->str();
    out << j.dump() << "\n";
    return kOk;
  }
  if (all || o.dump_btypes) out << btypes::print_bprogram(a.types);
  if (all) out << "\n";
  if (all || o.dump_equations) out << a.equations.str();
  if (bound) out << "bound: " << bound->str() << "\n";
  return kOk;
}

// --- check

struct CheckOpts {
  std::string file;
  std::string capacity;
  std::vector<std::string> grid;
  std::string policy = "exhaustive:256";
  std::uint64_t max_steps = interp::Budgets{}.max_steps;
  std::uint64_t max_ticks = interp::Budgets{}.max_ticks;
};

int cmd_check(const CheckOpts& o, const Globals& g, std::ostream& out) {
  Analysis a = analyze_program(load_program(read_file(o.file), opt_rational(o.capacity)));
  auto policy = policy_of(o.policy, g);
  CheckReport r = check_program(a, parse_grid(o.grid), policy, interp::Budgets{o.max_steps, o.max_ticks});

  // The point with the largest bound - elapsed gap among finite bounds.
  const CheckPoint* widest = nullptr;
  for (const auto& pt : r.points)
    if (pt.bound.is_finite() && (!widest || widest->bound.value - widest->max_elapsed < pt.bound.value - pt.max_elapsed))
      widest = &pt;

  if (g.json) {
    json j{{"verdict", verdict_name(r.verdict)}, {"policy", policy.str()}, {"points", json::array()}};
    for (const auto& pt : r.points) {
      json jp{{"inputs", inputs_json(pt.inputs)},
              {"bound", pt.bound.str()},
              {"max_elapsed", pt.max_elapsed.str()},
              {"schedules", pt.schedules},
              {"truncated", pt.truncated},
              {"worst_schedule", pt.worst_choices},
              {"verdict", verdict_name(pt.verdict)}};
      if (!pt.note.empty()) jp["note"] = pt.note;
      j["points"].push_back(jp);
    }
    if (widest) j["max_gap"] = {{"inputs", inputs_json(widest->inputs)}, {"schedule", widest->worst_choices}};
    out << j.dump() << "\n";
  } else {
    for (const auto& pt : r.points) {
      out << verdict_name(pt.verdict) << "  " << inputs_str(pt.inputs) << "  elapsed " << pt.max_elapsed.str()
          << " <= bound " << pt.bound.str() << "  (" << pt.schedules << " schedule(s)"
          << (pt.truncated ? ", truncated" : "") << ")";
      if (!pt.note.empty()) out << "  " << pt.note;
      out << "\n";
    }
    if (widest) {
      out << "max gap at " << inputs_str(widest->inputs) << ", schedule [";
      for (std::size_t i = 0; i < widest->worst_choices.size(); ++i) out << (i ? " " : "") << widest->worst_choices[i];
      out << "]\n";
    }
    out << "verdict: " << verdict_name(r.verdict) << "\n";
  }
  switch (r.verdict) {
    case Verdict::Pass: return kOk;
    case Verdict::Fail: return kInternal;
    case Verdict::Inconclusive: return kInconclusive;
  }
  return kInternal;
}

// --- emit-cofloco

struct EmitOpts {
  std::string file;
  std::vector<std::string> capacities;
  std::vector<std::string> symbols;
  std::string out_path;
};

int cmd_emit(const EmitOpts& o, const Globals& g, std::ostream& out) {
  Analysis a = analyze_program(load_program(read_file(o.file)));
  std::string text = costsolve::emit_cofloco(a.equations, parse_bindings(o.capacities), o.symbols);
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + o.out_path);
    f << text;
  }
  if (g.json) {
    out << json{{"ok", true}, {"cofloco", text}}.dump() << "\n";
  } else if (o.out_path.empty()) {
    out << text;
  }
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tmlc: time analysis of tml programs"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_flag("--json", g.json, "Machine-readable output");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for --policy random");

  ParseOpts po;
  auto* parse = app.add_subcommand("parse", "Parse and check well-formedness");
  parse->add_option("file", po.file)->required();
  parse->add_flag("--print", po.print, "Print the canonical program");

  SimOpts so;
  auto* sim = app.add_subcommand("simulate", "Run the timed semantics");
  sim->add_option("file", so.file)->required();
  sim->add_option("--policy", so.policy, "fifo | random[:seed] | exhaustive:K");
  sim->add_option("--args", so.args, "Main inputs, name=value");
  sim->add_option("--capacity", so.capacity, "Capacity of the main cog");
  sim->add_option("--max-steps", so.max_steps, "Reductions allowed between ticks");
  sim->add_option("--max-ticks", so.max_ticks, "Ticks allowed per run");
  sim->add_flag("--trace", so.trace, "Print each step as a JSON line");

  AnalyzeOpts ao;
  auto* ana = app.add_subcommand("analyze", "Infer behavioural types and cost equations");
  ana->add_option("file", ao.file)->required();
  ana->add_option("--capacity", ao.capacity, "Capacity of the main cog");
  ana->add_option("--args", ao.args, "Main inputs, name=value");
  ana->add_flag("--dump-btypes", ao.dump_btypes, "Print behavioural types");
  ana->add_flag("--dump-equations", ao.dump_equations, "Print cost equations");

  CheckOpts co;
  auto* chk = app.add_subcommand("check", "Compare simulated time against the bound");
  chk->add_option("file", co.file)->required();
  chk->add_option("--capacity", co.capacity, "Capacity of the main cog");
  chk->add_option("--grid", co.grid, "name=lo..hi, name=v1,v2 or name=v");
  chk->add_option("--policy", co.policy, "fifo | random[:seed] | exhaustive:K");
  chk->add_option("--max-steps", co.max_steps, "Reductions allowed between ticks");
  chk->add_option("--max-ticks", co.max_ticks, "Ticks allowed per run");

  EmitOpts eo;
  auto* emit = app.add_subcommand("emit-cofloco", "Write cost equations in CoFloCo syntax");
  emit->add_option("file", eo.file)->required();
  emit->add_option("--capacity", eo.capacities, "Capacity formal, name=value");
  emit->add_option("--symbol", eo.symbols, "Only these cost symbols");
  emit->add_option("--out", eo.out_path, "Output file");

  for (auto* sub : {parse, sim, ana, chk, emit}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    return fail(out, err, g, kUser, "UsageError", e.what());
  }
  if (seed_opt->count()) g.seed = seed;

  try {
    if (*parse) return cmd_parse(po, g, out);
    if (*sim) return cmd_simulate(so, g, out);
    if (*ana) return cmd_analyze(ao, g, out);
    if (*chk) return cmd_check(co, g, out);
    if (*emit) return cmd_emit(eo, g, out);
  } catch (const btypes::TypeErrors& e) {
    json extra{{"errors", json::array()}};
    std::string kind = e.errors.empty() ? "TypeError" : btypes::kind_name(e.errors.front().kind);
    for (const auto& te : e.errors)
      extra["errors"].push_back({{"kind", btypes::kind_name(te.kind)}, {"method", te.method}, {"message", te.what()}});
    return fail(out, err, g, kUser, kind, e.what(), extra);
  } catch (const btypes::TypeError& e) {
    return fail(out, err, g, kUser, btypes::kind_name(e.kind), e.what());
  } catch (const lang::ParseError& e) {
    return fail(out, err, g, kUser, "ParseError", e.what());
  } catch (const lang::WellFormednessError& e) {
    return fail(out, err, g, kUser, "WellFormednessError", e.what());
  } catch (const interp::UnknownMethod& e) {
    return fail(out, err, g, kUser, "UnknownMethod", e.what());
  } catch (const interp::RuntimeTypeError& e) {
    // Only reachable for well-typed programs if the type system is wrong.
    return fail(out, err, g, *chk ? kInternal : kUser, "RuntimeTypeError", e.what());
  } catch (const lang::EvalError& e) {
    return fail(out, err, g, kUser, "EvalError", e.what());
  } catch (const costsolve::UnboundDenominator& e) {
    return fail(out, err, g, kUser, "UnboundDenominator", e.what());
  } catch (const costsolve::NoApplicableEquation& e) {
    return fail(out, err, g, kUser, "NoApplicableEquation", e.what());
  } catch (const costgen::UndefinedSymbol& e) {
    return fail(out, err, g, kUser, "UndefinedSymbol", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(out, err, g, kUser, "InvalidArgument", e.what());
  } catch (const std::exception& e) {
    return fail(out, err, g, kInternal, "InternalError", e.what());
  }
  return kInternal;
}

}  // namespace tmlcost::cli
