#include "tmlcost/costsolve/costsolve.hpp"

#include <exception>
#include <pthread.h>
#include <set>

namespace tmlcost::costsolve {

using costgen::CostExpr;

std::string CostValue::str() const {
  switch (kind) {
    case Kind::Finite: return value.str();
    case Kind::Unbounded: return "Unbounded";
    case Kind::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

namespace {

using Args = std::vector<std::optional<Rational>>;
using Lookup = std::function<std::optional<Rational>(const std::string&)>;

std::optional<Rational> eval_lin(const lang::LinExpr& e, const Lookup& lookup) {
  Rational v = e.constant();
  for (const auto& [x, k] : e.terms()) {
    auto xv = lookup(x);
    if (!xv) return std::nullopt;
    v = v + k * *xv;
  }
  return v;
}

Rational nat(const Rational& v) { return v.sign() < 0 ? Rational(0) : v; }

// Exhaustion dominates unboundedness, which dominates finite values.
CostValue worse(const CostValue& a, const CostValue& b) {
  if (a.kind == CostValue::Kind::BudgetExhausted || b.kind == CostValue::Kind::BudgetExhausted)
    return CostValue::exhausted();
  return CostValue::unbounded();
}

std::string call_str(const std::string& symbol, const Args& args) {
  std::string out = symbol + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i] ? args[i]->str() : "?";
  }
  return out + ")";
}

class Evaluator {
public:
  Evaluator(const CostEquationSystem& sys, const EvalBudget& budget) : sys_(sys), budget_(budget) {}

  CostValue call(const std::string& symbol, const Args& args) {
    auto key = std::make_pair(symbol, args);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (active_.count(key)) return CostValue::unbounded();
    if (depth_ >= budget_.max_depth) return CostValue::exhausted();

    auto eqs = sys_.equations_for(symbol);
    if (eqs.empty()) throw costgen::UndefinedSymbol("cost symbol '" + symbol + "' has no equations");

    active_.insert(key);
    ++depth_;
    std::optional<CostValue> best;
    for (const auto* eq : eqs) {
      if (eq->formals.size() != args.size())
        throw std::invalid_argument(call_str(symbol, args) + ": expected " + std::to_string(eq->formals.size()) +
                                    " arguments");
      std::map<std::string, std::optional<Rational>> env;
      for (std::size_t i = 0; i < args.size(); ++i) env[eq->formals[i]] = args[i];
      Lookup lookup = [&](const std::string& x) -> std::optional<Rational> {
        auto it = env.find(x);
        return it == env.end() ? std::nullopt : it->second;
      };
      bool applicable = true;
      for (const auto& g : eq->guard)
        if (lang::truth(g.eval(lookup)) == false) applicable = false;
      if (!applicable) continue;
      CostValue v = eval(eq->body, lookup);
      if (!best) {
        best = v;
      } else if (!best->is_finite() || !v.is_finite()) {
        best = worse(*best, v);
      } else if (best->value < v.value) {
        best = v;
      }
    }
    --depth_;
    active_.erase(key);
    if (!best) throw NoApplicableEquation("no equation of " + symbol + " applies at " + call_str(symbol, args));
    if (best->kind != CostValue::Kind::BudgetExhausted) memo_[key] = *best;
    return *best;
  }

private:
  CostValue eval(const CostExpr& e, const Lookup& lookup) {
    switch (e.kind) {
      case CostExpr::Kind::Lin: {
        auto v = eval_lin(e.num, lookup);
        return v ? CostValue::finite(nat(*v)) : CostValue::unbounded();
      }
      case CostExpr::Kind::Ratio: {
        auto n = eval_lin(e.num, lookup);
        auto d = eval_lin(e.den, lookup);
        if (!n || !d) return CostValue::unbounded();
        return CostValue::finite(nat(*n / *d));
      }
      case CostExpr::Kind::Apply: {
        Args args;
        for (const auto& a : e.args) args.push_back(eval_lin(a, lookup));
        return call(e.callee, args);
      }
      case CostExpr::Kind::Add:
      case CostExpr::Kind::Max: {
        bool sum = e.kind == CostExpr::Kind::Add;
        CostValue acc = CostValue::finite(Rational(0));
        for (const auto& o : e.ops) {
          CostValue v = eval(o, lookup);
          if (!acc.is_finite() || !v.is_finite()) {
            acc = worse(acc, v);
            continue;
          }
          if (sum) {
            acc.value = acc.value + v.value;
          } else if (acc.value < v.value) {
            acc.value = v.value;
          }
        }
        return acc;
      }
    }
    return CostValue::unbounded();
  }

  const CostEquationSystem& sys_;
  EvalBudget budget_;
  std::map<std::pair<std::string, Args>, CostValue> memo_;
  std::set<std::pair<std::string, Args>> active_;
  std::size_t depth_ = 0;
};

// Unfolding recurses once per nested application, so a deep budget needs
// more stack than a default thread has.
constexpr std::size_t kStackBytes = std::size_t(1) << 30;

struct Job {
  std::function<void()> fn;
  std::exception_ptr error;
};

void* run_job(void* p) {
  auto* job = static_cast<Job*>(p);
  try {
    job->fn();
  } catch (...) {
    job->error = std::current_exception();
  }
  return nullptr;
}

void with_big_stack(std::function<void()> fn) {
  Job job{std::move(fn), nullptr};
  pthread_attr_t attr;
  pthread_t th;
  bool spawned = pthread_attr_init(&attr) == 0 && pthread_attr_setstacksize(&attr, kStackBytes) == 0 &&
                 pthread_create(&th, &attr, run_job, &job) == 0;
  pthread_attr_destroy(&attr);
  if (!spawned) {
    run_job(&job);
  } else {
    pthread_join(th, nullptr);
  }
  if (job.error) std::rethrow_exception(job.error);
}

}  // namespace

CostValue eval_cost(const CostEquationSystem& sys, const std::string& symbol, const Args& args,
                    const EvalBudget& budget) {
  CostValue out;
  with_big_stack([&] {
    Evaluator ev(sys, budget);
    out = ev.call(symbol, args);
  });
  return out;
}

CostValue eval_cost(const CostEquationSystem& sys, const std::string& symbol, const std::vector<Rational>& args,
                    const EvalBudget& budget) {
  return eval_cost(sys, symbol, Args(args.begin(), args.end()), budget);
}

CostValue eval_entry(const CostEquationSystem& sys, const std::map<std::string, Rational>& inputs,
                     const EvalBudget& budget) {
  Args args;
  auto it = sys.formals.find(sys.entry);
  if (it != sys.formals.end())
    for (const auto& x : it->second) {
      auto v = inputs.find(x);
      args.push_back(v == inputs.end() ? std::nullopt : std::optional<Rational>(v->second));
    }
  return eval_cost(sys, sys.entry, args, budget);
}

}  // namespace tmlcost::costsolve
