#pragma once

#include "tmlcost/lang/ast.hpp"
#include "tmlcost/lang/eval.hpp"
#include "tmlcost/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tmlcost::interp {

using lang::CogId;
using lang::FutureId;
using lang::ObjectId;
using lang::Value;

/// One entry of a process continuation. Source statements are never
/// sequences; the other kinds are produced only by the interpreter.
struct RtStmt {
  enum class Kind {
    Source,       // a statement of the program
    AssignValue,  // x = v, for an already computed value
    GetFuture,    // x = f.get on a known future
    JobLeft,      // job(k) with the remaining cycle count k
    Cont,         // cont(f): hand the cog back to the synchronous caller
  };
  Kind kind = Kind::Source;
  lang::StmtPtr source;
  std::string var;
  Value value = lang::Bottom{};
  FutureId future;
  Rational cycles;
};

/// `{l | s}`. The continuation is stored as a stack; its top is `stack.back()`.
struct Process {
  lang::Store locals;
  std::vector<RtStmt> stack;

  bool done() const { return stack.empty(); }
  const RtStmt& top() const { return stack.back(); }
  FutureId destiny() const;
  /// Pushes `s` so that it runs before the current continuation.
  void push(const lang::StmtPtr& s);
};

struct Cog {
  std::optional<ObjectId> active;
  Rational capacity;
};

struct Object {
  CogId cog;
  std::optional<Process> active;  // nullopt is `idle`
  std::vector<Process> queue;
};

struct Invoc {
  ObjectId callee;
  FutureId future;
  std::string method;
  std::vector<Value> args;
};

/// Runtime state. Identifiers are indices into the vectors, so each id
/// kind is a monotone counter; cog 0 and object 0 are `start` and future 0
/// is the destiny of the main body.
struct Configuration {
  std::shared_ptr<const lang::Program> program;
  std::vector<Cog> cogs;
  std::vector<Object> objects;
  std::vector<std::optional<Value>> futures;  // nullopt is an unresolved future
  std::vector<Invoc> invocs;
  Rational elapsed;

  const Object& object(ObjectId o) const { return objects.at(o.v); }
  Object& object(ObjectId o) { return objects.at(o.v); }
  const Cog& cog(CogId c) const { return cogs.at(c.v); }
  Cog& cog(CogId c) { return cogs.at(c.v); }
  bool resolved(FutureId f) const { return futures.at(f.v).has_value(); }
};

/// Initial values for main-block Int locals (the program's inputs).
using Inputs = std::map<std::string, Rational>;

class RuntimeTypeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnknownMethod : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct SchedulerPolicy {
  enum class Kind { Fifo, SeededRandom, Exhaustive };
  Kind kind = Kind::Fifo;
  std::uint64_t seed = 0;
  int bound = 0;  // branch points explored per schedule (Exhaustive)

  static SchedulerPolicy fifo() { return {}; }
  static SchedulerPolicy random(std::uint64_t seed) { return {Kind::SeededRandom, seed, 0}; }
  static SchedulerPolicy exhaustive(int bound) { return {Kind::Exhaustive, 0, bound}; }
  /// "fifo", "random:<seed>" or "exhaustive:<k>".
  static SchedulerPolicy parse(std::string_view text);
  std::string str() const;
};

/// Resolves Activate choices. FIFO takes the first candidate; SeededRandom
/// draws from a seeded engine; a replay prefix forces the first choices
/// (used by the exhaustive explorer).
class Scheduler {
public:
  explicit Scheduler(SchedulerPolicy policy, std::vector<std::size_t> forced = {});

  std::size_t choose(std::size_t candidates);

  /// Options seen at each recorded branch point, in order.
  const std::vector<std::size_t>& branch_widths() const { return widths_; }
  const std::vector<std::size_t>& choices() const { return choices_; }

private:
  SchedulerPolicy policy_;
  std::mt19937_64 rng_;
  std::vector<std::size_t> forced_;
  std::vector<std::size_t> widths_, choices_;
};

struct StepOutcome {
  enum class Kind { Progress, Stable, Terminated, Deadlock };
  Kind kind = Kind::Progress;
  std::string rule;
  std::optional<ObjectId> object;
  Rational t;  // Stable only
};

struct Stability {
  enum class Kind { StronglyStable, StableNoJob, NotStable };
  Kind kind = Kind::NotStable;
  Rational t;
};

Configuration init_configuration(std::shared_ptr<const lang::Program> p, const Inputs& inputs = {});

/// Process for running method `m` on behalf of future `f`:
/// locals {destiny -> f, params -> vals, declared locals -> bottom}.
Process bind(const lang::Program& p, ObjectId o, FutureId f, const std::string& m, const std::vector<Value>& vals);

/// Applies one non-Tick rule, or reports why none applies.
StepOutcome step(Configuration& c, Scheduler& sched);

/// Definition of t-stability: StronglyStable(t) when no non-Tick rule is
/// enabled and the smallest remaining job time among active jobs is t.
Stability stability_time(const Configuration& c);

/// Advances time by `t`: every active job(e) in a cog of capacity k becomes
/// job([[e]] - k*t). Requires stability_time(c) == StronglyStable(t).
void tick(Configuration& c, const Rational& t);

/// Whether any non-Tick rule is enabled.
bool any_rule_enabled(const Configuration& c);

struct Budgets {
  std::uint64_t max_steps = 100000;  // between two ticks
  std::uint64_t max_ticks = 10000;
};

enum class RunOutcome { Terminated, Deadlock, ZenoSuspected, BudgetExhausted };
const char* outcome_name(RunOutcome o);

struct LogEntry {
  std::string rule;
  std::optional<ObjectId> object;
  Rational elapsed;  // after the step
  Rational tick;     // time advanced (Tick only)
};

struct Trace {
  Rational elapsed;
  RunOutcome outcome = RunOutcome::Terminated;
  std::uint64_t steps = 0;
  std::uint64_t ticks = 0;
  std::vector<LogEntry> log;
  std::vector<std::size_t> choices;
  Configuration final_state;
};

/// Runs from the initial configuration until it terminates, deadlocks or
/// a budget trips. ZenoSuspected means max_steps reductions without a tick.
Trace run(std::shared_ptr<const lang::Program> p, const Inputs& inputs, Scheduler& sched, const Budgets& budgets,
          bool keep_log = true);

Trace run(std::shared_ptr<const lang::Program> p, const Inputs& inputs, const SchedulerPolicy& policy,
          const Budgets& budgets, bool keep_log = true);

struct Exploration {
  std::vector<Trace> traces;  // without logs or final states
  bool truncated = false;     // the schedule cap was hit
};

/// Depth-first enumeration of Activate choices by replay. At most
/// `branch_bound` branch points are explored per schedule (later ones take
/// the first candidate) and at most `max_schedules` schedules are run.
Exploration explore(std::shared_ptr<const lang::Program> p, const Inputs& inputs, int branch_bound,
                    const Budgets& budgets, std::size_t max_schedules = 100000);

}  // namespace tmlcost::interp
