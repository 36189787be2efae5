#include "tmlcost/interp/interp.hpp"

#include <algorithm>
#include <charconv>

namespace tmlcost::interp {

using lang::AssignStmt;
using lang::Bottom;
using lang::Expr;
using lang::Stmt;
using lang::StmtPtr;

// ---------------------------------------------------------------------------
// Processes
// ---------------------------------------------------------------------------

FutureId Process::destiny() const {
  auto it = locals.find("destiny");
  if (it == locals.end() || !std::holds_alternative<FutureId>(it->second))
    throw RuntimeTypeError("process without a destiny");
  return std::get<FutureId>(it->second);
}

void Process::push(const StmtPtr& s) {
  if (!s || s->as<lang::SkipStmt>()) return;
  if (auto seq = s->as<lang::SeqStmt>()) {
    push(seq->rest);
    push(seq->first);
    return;
  }
  RtStmt r;
  r.source = s;
  stack.push_back(std::move(r));
}

Process bind(const lang::Program& p, ObjectId, FutureId f, const std::string& m, const std::vector<Value>& vals) {
  const lang::MethodDecl* decl = p.find_method(m);
  if (!decl) throw UnknownMethod("unknown method '" + m + "'");
  if (decl->params.size() != vals.size())
    throw RuntimeTypeError("method '" + m + "' expects " + std::to_string(decl->params.size()) + " arguments, got " +
                           std::to_string(vals.size()));
  Process proc;
  proc.locals["destiny"] = f;
  for (std::size_t i = 0; i < vals.size(); ++i) proc.locals[decl->params[i].name] = vals[i];
  for (const auto& l : decl->locals) proc.locals[l.name] = Bottom{};
  // `this` is resolved through the evaluation context, which is the same
  // as substituting o for it.
  proc.push(decl->body);
  return proc;
}

Configuration init_configuration(std::shared_ptr<const lang::Program> p, const Inputs& inputs) {
  Configuration c;
  c.program = p;
  c.cogs.push_back(Cog{ObjectId{0}, p->main.capacity});
  c.futures.emplace_back(std::nullopt);
  Process proc;
  proc.locals["destiny"] = FutureId{0};
  for (const auto& l : p->main.locals) proc.locals[l.name] = Bottom{};
  for (const auto& [name, v] : inputs) {
    auto it = proc.locals.find(name);
    if (it == proc.locals.end()) throw RuntimeTypeError("input '" + name + "' is not a local of the main block");
    it->second = v;
  }
  proc.push(p->main.body);
  c.objects.push_back(Object{CogId{0}, std::move(proc), {}});
  return c;
}

// ---------------------------------------------------------------------------
// Scheduling
// ---------------------------------------------------------------------------

SchedulerPolicy SchedulerPolicy::parse(std::string_view text) {
  auto number = [&](std::string_view digits) -> std::uint64_t {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty())
      throw std::invalid_argument("bad scheduler policy '" + std::string(text) + "'");
    return v;
  };
  if (text == "fifo") return fifo();
  if (text.starts_with("random:")) return random(number(text.substr(7)));
  if (text.starts_with("exhaustive:")) return exhaustive(static_cast<int>(number(text.substr(11))));
  throw std::invalid_argument("bad scheduler policy '" + std::string(text) + "'");
}

std::string SchedulerPolicy::str() const {
  switch (kind) {
    case Kind::Fifo: return "fifo";
    case Kind::SeededRandom: return "random:" + std::to_string(seed);
    case Kind::Exhaustive: return "exhaustive:" + std::to_string(bound);
  }
  return "?";
}

Scheduler::Scheduler(SchedulerPolicy policy, std::vector<std::size_t> forced)
    : policy_(policy), rng_(policy.seed), forced_(std::move(forced)) {}

std::size_t Scheduler::choose(std::size_t candidates) {
  if (candidates <= 1) return 0;
  std::size_t pick = 0;
  switch (policy_.kind) {
    case SchedulerPolicy::Kind::Fifo: break;
    case SchedulerPolicy::Kind::SeededRandom:
      pick = std::uniform_int_distribution<std::size_t>(0, candidates - 1)(rng_);
      break;
    case SchedulerPolicy::Kind::Exhaustive:
      if (widths_.size() >= static_cast<std::size_t>(policy_.bound)) return 0;
      if (widths_.size() < forced_.size()) pick = std::min(forced_[widths_.size()], candidates - 1);
      widths_.push_back(candidates);
      break;
  }
  choices_.push_back(pick);
  return pick;
}

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

namespace {

lang::EvalContext context(const Configuration& c, ObjectId o) {
  return {o, c.cog(c.object(o).cog).capacity};
}

Value eval(const Configuration& c, ObjectId o, const Process& p, const Expr& e) {
  try {
    return lang::eval_pure(e, p.locals, context(c, o));
  } catch (const lang::EvalError& err) {
    throw RuntimeTypeError(err.what());
  }
}

Rational eval_num(const Configuration& c, ObjectId o, const Process& p, const Expr& e) {
  Value v = eval(c, o, p, e);
  if (auto r = std::get_if<Rational>(&v)) return *r;
  throw RuntimeTypeError("expected a number, got " + lang::value_str(v));
}

template <class T>
T eval_as(const Configuration& c, ObjectId o, const Process& p, const Expr& e, const char* what) {
  Value v = eval(c, o, p, e);
  if (auto r = std::get_if<T>(&v)) return *r;
  throw RuntimeTypeError(std::string("expected ") + what + ", got " + lang::value_str(v));
}

std::vector<Value> eval_args(const Configuration& c, ObjectId o, const Process& p, const std::vector<Expr>& args) {
  std::vector<Value> out;
  for (const auto& a : args) out.push_back(eval(c, o, p, a));
  return out;
}

void assign(Process& p, const std::string& x, Value v) {
  auto it = p.locals.find(x);
  if (it == p.locals.end()) throw RuntimeTypeError("assignment to undeclared variable '" + x + "'");
  it->second = std::move(v);
}

FutureId fresh_future(Configuration& c) {
  c.futures.emplace_back(std::nullopt);
  return FutureId{static_cast<std::uint32_t>(c.futures.size() - 1)};
}

// Remaining cycles of the job on top of `p`, if the top is a job.
std::optional<Rational> job_cycles(const Configuration& c, ObjectId o, const Process& p) {
  if (p.done()) return std::nullopt;
  const RtStmt& top = p.top();
  if (top.kind == RtStmt::Kind::JobLeft) return top.cycles;
  if (top.kind == RtStmt::Kind::Source)
    if (auto j = top.source->as<lang::JobStmt>()) return eval_num(c, o, p, j->cycles);
  return std::nullopt;
}

// The future a process waits on if its next statement is a get.
std::optional<FutureId> get_target(const Configuration& c, ObjectId o, const Process& p) {
  if (p.done()) return std::nullopt;
  const RtStmt& top = p.top();
  if (top.kind == RtStmt::Kind::GetFuture) return top.future;
  if (top.kind != RtStmt::Kind::Source) return std::nullopt;
  auto a = top.source->as<AssignStmt>();
  if (!a) return std::nullopt;
  auto g = std::get_if<lang::GetRhs>(&a->rhs);
  if (!g) return std::nullopt;
  try {
    Value v = lang::eval_pure(g->future, p.locals, context(c, o));
    if (auto f = std::get_if<FutureId>(&v)) return *f;
  } catch (const lang::EvalError&) {
  }
  return std::nullopt;
}

bool blocked(const Configuration& c, ObjectId o, const Process& p) {
  auto f = get_target(c, o, p);
  return f && !c.resolved(*f);
}

// Where a `cont(f)` hands control back to: the object holding the queued
// process whose destiny is f, and its index in that queue.
std::optional<std::pair<ObjectId, std::size_t>> cont_target(const Configuration& c, ObjectId o, FutureId f) {
  auto search = [&](ObjectId x) -> std::optional<std::pair<ObjectId, std::size_t>> {
    const Object& ob = c.object(x);
    for (std::size_t i = 0; i < ob.queue.size(); ++i)
      if (ob.queue[i].destiny() == f) return std::make_pair(x, i);
    return std::nullopt;
  };
  if (auto r = search(o)) return r;
  CogId cog = c.object(o).cog;
  for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
    ObjectId x{i};
    if (x == o || c.object(x).cog != cog || c.object(x).active) continue;
    if (auto r = search(x)) return r;
  }
  return std::nullopt;
}

// Whether the active process of `o` can take a step. Statements whose
// evaluation fails count as enabled; the failure is reported when applied.
bool local_enabled(const Configuration& c, ObjectId o) {
  const Object& ob = c.object(o);
  if (!ob.active) return false;
  const Process& p = *ob.active;
  if (p.done()) return true;
  const RtStmt& top = p.top();
  switch (top.kind) {
    case RtStmt::Kind::JobLeft: return top.cycles.is_zero();
    case RtStmt::Kind::Cont: return cont_target(c, o, top.future).has_value();
    case RtStmt::Kind::AssignValue:
    case RtStmt::Kind::GetFuture: return true;
    case RtStmt::Kind::Source: break;
  }
  if (auto j = top.source->as<lang::JobStmt>()) {
    try {
      return eval_num(c, o, p, j->cycles).is_zero();
    } catch (const RuntimeTypeError&) {
      return true;
    }
  }
  if (auto a = top.source->as<AssignStmt>()) {
    if (auto call = std::get_if<lang::SyncCallRhs>(&a->rhs)) {
      try {
        Value v = lang::eval_pure(call->callee, p.locals, context(c, o));
        if (auto callee = std::get_if<ObjectId>(&v)) {
          if (*callee == o) return true;
          const Object& target = c.object(*callee);
          if (target.cog == ob.cog) return !target.active;
        }
      } catch (const lang::EvalError&) {
      }
    }
  }
  return true;
}

bool release_enabled(const Configuration& c, ObjectId o) {
  const Object& ob = c.object(o);
  return !ob.active && c.cog(ob.cog).active == o;
}

struct Candidate {
  ObjectId object;
  std::size_t index;
};

std::vector<Candidate> activation_candidates(const Configuration& c, CogId cog) {
  std::vector<Candidate> out;
  if (c.cog(cog).active) return out;
  for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
    ObjectId o{i};
    const Object& ob = c.object(o);
    if (ob.cog != cog || ob.active) continue;
    for (std::size_t k = 0; k < ob.queue.size(); ++k)
      if (!blocked(c, o, ob.queue[k])) out.push_back({o, k});
  }
  return out;
}

void go_idle(Object& ob, bool requeue) {
  if (requeue) ob.queue.push_back(std::move(*ob.active));
  ob.active.reset();
}

std::string apply_local(Configuration& c, ObjectId o) {
  Object* ob = &c.object(o);
  Process& p = *ob->active;

  if (p.done()) {
    go_idle(*ob, false);
    return "End";
  }

  RtStmt top = p.top();
  switch (top.kind) {
    case RtStmt::Kind::JobLeft:
      p.stack.pop_back();
      return "Job-0";
    case RtStmt::Kind::AssignValue:
      p.stack.pop_back();
      assign(p, top.var, top.value);
      return "Assign-Local";
    case RtStmt::Kind::GetFuture: {
      if (!c.resolved(top.future)) {
        go_idle(*ob, true);
        return "Get-False";
      }
      p.stack.pop_back();
      assign(p, top.var, *c.futures[top.future.v]);
      return "Get-True";
    }
    case RtStmt::Kind::Cont: {
      auto target = cont_target(c, o, top.future);
      if (!target) throw RuntimeTypeError("no process to resume for cont");
      auto [x, idx] = *target;
      if (x == o) {
        Process resumed = std::move(ob->queue[idx]);
        ob->queue.erase(ob->queue.begin() + static_cast<std::ptrdiff_t>(idx));
        ob->active = std::move(resumed);
        return "Self-Sync-Return-Sched";
      }
      go_idle(*ob, false);
      Object& caller = c.object(x);
      Process resumed = std::move(caller.queue[idx]);
      caller.queue.erase(caller.queue.begin() + static_cast<std::ptrdiff_t>(idx));
      caller.active = std::move(resumed);
      c.cog(caller.cog).active = x;
      return "Cog-Sync-Return-Sched";
    }
    case RtStmt::Kind::Source: break;
  }

  const Stmt& s = *top.source;
  if (auto j = s.as<lang::JobStmt>()) {
    Rational k = eval_num(c, o, p, j->cycles);
    if (k.sign() < 0) throw RuntimeTypeError("job with negative cycle count " + k.str());
    if (!k.is_zero()) throw RuntimeTypeError("job not ready");
    p.stack.pop_back();
    return "Job-0";
  }
  if (auto i = s.as<lang::IfStmt>()) {
    bool cond = !eval_num(c, o, p, i->cond).is_zero();
    p.stack.pop_back();
    p.push(cond ? i->then_branch : i->else_branch);
    return cond ? "Cond-True" : "Cond-False";
  }
  if (auto r = s.as<lang::ReturnStmt>()) {
    Value v = eval(c, o, p, r->value);
    FutureId f = p.destiny();
    if (c.resolved(f)) throw RuntimeTypeError("future resolved twice");
    c.futures[f.v] = v;
    while (!p.done() && p.top().kind != RtStmt::Kind::Cont) p.stack.pop_back();
    if (p.done()) go_idle(*ob, false);
    return "Return";
  }
  const auto* a = s.as<AssignStmt>();
  if (!a) throw RuntimeTypeError("unexpected statement");

  return std::visit(
      [&](const auto& rhs) -> std::string {
        using T = std::decay_t<decltype(rhs)>;
        if constexpr (std::is_same_v<T, lang::PureRhs>) {
          Value v = eval(c, o, p, rhs.expr);
          p.stack.pop_back();
          assign(p, a->var, v);
          return "Assign-Local";
        } else if constexpr (std::is_same_v<T, lang::NewWithRhs>) {
          Rational k = eval_num(c, o, p, rhs.capacity);
          if (k.sign() <= 0) throw RuntimeTypeError("cog capacity must be positive, got " + k.str());
          ObjectId fresh{static_cast<std::uint32_t>(c.objects.size())};
          CogId cog{static_cast<std::uint32_t>(c.cogs.size())};
          p.stack.pop_back();
          assign(p, a->var, fresh);
          c.cogs.push_back(Cog{fresh, k});
          c.objects.push_back(Object{cog, std::nullopt, {}});
          return "New";
        } else if constexpr (std::is_same_v<T, lang::NewLocalRhs>) {
          ObjectId fresh{static_cast<std::uint32_t>(c.objects.size())};
          CogId cog = ob->cog;
          p.stack.pop_back();
          assign(p, a->var, fresh);
          c.objects.push_back(Object{cog, std::nullopt, {}});
          return "New-Local";
        } else if constexpr (std::is_same_v<T, lang::GetRhs>) {
          FutureId f = eval_as<FutureId>(c, o, p, rhs.future, "a future");
          if (!c.resolved(f)) {
            go_idle(*ob, true);
            return "Get-False";
          }
          p.stack.pop_back();
          assign(p, a->var, *c.futures[f.v]);
          return "Get-True";
        } else if constexpr (std::is_same_v<T, lang::AsyncCallRhs>) {
          ObjectId callee = eval_as<ObjectId>(c, o, p, rhs.callee, "an object");
          std::vector<Value> args = eval_args(c, o, p, rhs.args);
          if (!c.program->find_method(rhs.method)) throw UnknownMethod("unknown method '" + rhs.method + "'");
          FutureId f = fresh_future(c);
          p.stack.pop_back();
          assign(p, a->var, f);
          c.invocs.push_back(Invoc{callee, f, rhs.method, std::move(args)});
          return "Async-Call";
        } else {
          // Synchronous call; only allowed inside the caller's cog.
          ObjectId callee = eval_as<ObjectId>(c, o, p, rhs.callee, "an object");
          std::vector<Value> args = eval_args(c, o, p, rhs.args);
          if (c.object(callee).cog != ob->cog)
            throw RuntimeTypeError("synchronous call '" + rhs.method + "' on an object of another cog");
          FutureId caller_destiny = p.destiny();
          FutureId f = fresh_future(c);
          ob = &c.object(o);
          Process callee_proc = interp::bind(*c.program, callee, f, rhs.method, args);
          RtStmt cont;
          cont.kind = RtStmt::Kind::Cont;
          cont.future = caller_destiny;
          callee_proc.stack.insert(callee_proc.stack.begin(), cont);

          Process& caller = *ob->active;
          std::string x = a->var;
          caller.stack.pop_back();
          RtStmt wait;
          wait.kind = RtStmt::Kind::GetFuture;
          wait.var = x;
          wait.future = f;
          caller.stack.push_back(wait);

          if (callee == o) {
            go_idle(*ob, true);
            ob->active = std::move(callee_proc);
            return "Self-Sync-Call";
          }
          Object& target = c.object(callee);
          if (target.active) throw RuntimeTypeError("synchronous call on a busy object");
          go_idle(*ob, true);
          target.active = std::move(callee_proc);
          c.cog(target.cog).active = callee;
          return "Cog-Sync-Call";
        }
      },
      a->rhs);
}

bool all_idle(const Configuration& c) {
  return c.invocs.empty() && std::all_of(c.objects.begin(), c.objects.end(),
                                         [](const Object& ob) { return !ob.active && ob.queue.empty(); });
}

}  // namespace

bool any_rule_enabled(const Configuration& c) {
  if (!c.invocs.empty()) return true;
  for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
    ObjectId o{i};
    if (local_enabled(c, o) || release_enabled(c, o)) return true;
  }
  for (std::uint32_t i = 0; i < c.cogs.size(); ++i)
    if (!activation_candidates(c, CogId{i}).empty()) return true;
  return false;
}

Stability stability_time(const Configuration& c) {
  if (any_rule_enabled(c)) return {};
  std::optional<Rational> best;
  for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
    ObjectId o{i};
    const Object& ob = c.object(o);
    if (!ob.active) continue;
    auto k = job_cycles(c, o, *ob.active);
    if (!k) continue;
    Rational t = *k / c.cog(ob.cog).capacity;
    if (!best || t < *best) best = t;
  }
  if (best) return {Stability::Kind::StronglyStable, *best};
  return {Stability::Kind::StableNoJob, Rational(0)};
}

void tick(Configuration& c, const Rational& t) {
  for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
    ObjectId o{i};
    Object& ob = c.object(o);
    if (!ob.active) continue;
    auto k = job_cycles(c, o, *ob.active);
    if (!k) continue;
    RtStmt left;
    left.kind = RtStmt::Kind::JobLeft;
    left.cycles = *k - c.cog(ob.cog).capacity * t;
    if (left.cycles.sign() < 0) throw std::logic_error("tick past a job's completion");
    ob.active->stack.back() = left;
  }
  c.elapsed = c.elapsed + t;
}

StepOutcome step(Configuration& c, Scheduler& sched) {
  if (!c.invocs.empty()) {
    Invoc inv = std::move(c.invocs.front());
    c.invocs.erase(c.invocs.begin());
    Process p = interp::bind(*c.program, inv.callee, inv.future, inv.method, inv.args);
    c.object(inv.callee).queue.push_back(std::move(p));
    return {StepOutcome::Kind::Progress, "Bind-Mtd", inv.callee, {}};
  }
  for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
    ObjectId o{i};
    if (local_enabled(c, o)) return {StepOutcome::Kind::Progress, apply_local(c, o), o, {}};
  }
  for (std::uint32_t i = 0; i < c.objects.size(); ++i) {
    ObjectId o{i};
    if (release_enabled(c, o)) {
      c.cog(c.object(o).cog).active.reset();
      return {StepOutcome::Kind::Progress, "Release-Cog", o, {}};
    }
  }
  for (std::uint32_t i = 0; i < c.cogs.size(); ++i) {
    auto cands = activation_candidates(c, CogId{i});
    if (cands.empty()) continue;
    Candidate pick = cands[sched.choose(cands.size())];
    Object& ob = c.object(pick.object);
    ob.active = std::move(ob.queue[pick.index]);
    ob.queue.erase(ob.queue.begin() + static_cast<std::ptrdiff_t>(pick.index));
    c.cog(CogId{i}).active = pick.object;
    return {StepOutcome::Kind::Progress, "Activate", pick.object, {}};
  }
  Stability st = stability_time(c);
  if (st.kind == Stability::Kind::StronglyStable) return {StepOutcome::Kind::Stable, "", std::nullopt, st.t};
  if (all_idle(c)) return {StepOutcome::Kind::Terminated, "", std::nullopt, {}};
  return {StepOutcome::Kind::Deadlock, "", std::nullopt, {}};
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

const char* outcome_name(RunOutcome o) {
  switch (o) {
    case RunOutcome::Terminated: return "Terminated";
    case RunOutcome::Deadlock: return "Deadlock";
    case RunOutcome::ZenoSuspected: return "ZenoSuspected";
    case RunOutcome::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

Trace run(std::shared_ptr<const lang::Program> p, const Inputs& inputs, Scheduler& sched, const Budgets& budgets,
          bool keep_log) {
  Trace tr;
  Configuration c = init_configuration(std::move(p), inputs);
  std::uint64_t since_tick = 0;
  for (;;) {
    StepOutcome out = step(c, sched);
    if (out.kind == StepOutcome::Kind::Progress) {
      ++tr.steps;
      if (keep_log) tr.log.push_back({out.rule, out.object, c.elapsed, Rational(0)});
      if (++since_tick > budgets.max_steps) {
        tr.outcome = RunOutcome::ZenoSuspected;
        break;
      }
      continue;
    }
    if (out.kind == StepOutcome::Kind::Stable) {
      if (tr.ticks >= budgets.max_ticks) {
        tr.outcome = RunOutcome::BudgetExhausted;
        break;
      }
      tick(c, out.t);
      ++tr.ticks;
      since_tick = 0;
      if (keep_log) tr.log.push_back({"Tick", std::nullopt, c.elapsed, out.t});
      continue;
    }
    tr.outcome = out.kind == StepOutcome::Kind::Terminated ? RunOutcome::Terminated : RunOutcome::Deadlock;
    break;
  }
  tr.elapsed = c.elapsed;
  tr.choices = sched.choices();
  tr.final_state = std::move(c);
  return tr;
}

Trace run(std::shared_ptr<const lang::Program> p, const Inputs& inputs, const SchedulerPolicy& policy,
          const Budgets& budgets, bool keep_log) {
  Scheduler sched(policy);
  return run(std::move(p), inputs, sched, budgets, keep_log);
}

Exploration explore(std::shared_ptr<const lang::Program> p, const Inputs& inputs, int branch_bound,
                    const Budgets& budgets, std::size_t max_schedules) {
  Exploration ex;
  std::vector<std::size_t> prefix;
  for (;;) {
    if (ex.traces.size() >= max_schedules) {
      ex.truncated = true;
      break;
    }
    Scheduler sched(SchedulerPolicy::exhaustive(branch_bound), prefix);
    Trace tr = run(p, inputs, sched, budgets, false);
    tr.final_state = Configuration{};
    ex.traces.push_back(std::move(tr));

    // Next schedule in depth-first order: bump the deepest branch point
    // that still has unexplored options.
    std::vector<std::size_t> taken = sched.choices();
    const auto& widths = sched.branch_widths();
    taken.resize(widths.size());
    while (!taken.empty() && taken.back() + 1 >= widths[taken.size() - 1]) taken.pop_back();
    if (taken.empty()) break;
    ++taken.back();
    prefix = std::move(taken);
  }
  return ex;
}

}  // namespace tmlcost::interp
