#pragma once

// Random program and behavioural type generators shared by the property
// tests and the acceptance suite.

#include "support.hpp"

#include <random>
#include <set>
#include <sstream>

namespace tmltest::gen {

using namespace tmlcost;

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
template <class T>
const T& one_of(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(xs.size()) - 1))];
}

// ---------------------------------------------------------------------------
// Syntax generator: well-formed, not necessarily well-typed.
// ---------------------------------------------------------------------------

class SyntaxGen {
public:
  explicit SyntaxGen(std::uint64_t seed) : rng_(seed) {}

  std::string program() {
    std::ostringstream os;
    int n = pick(rng_, 0, 3);
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("m" + std::to_string(i));
    methods_ = names;
    for (const auto& m : names) os << method(m) << "\n";
    ints_ = {"a", "b"};
    classes_ = {"o"};
    futs_ = {"f"};
    os << "{\n  Int a; Int b; Class o; Fut<Int> f;\n" << stmts(2, false) << "} with " << pick(rng_, 1, 4);
    if (coin(rng_, 0.2)) os << "/" << pick(rng_, 2, 3);
    os << "\n";
    return os.str();
  }

private:
  std::string method(const std::string& name) {
    bool cls = coin(rng_, 0.2);
    std::ostringstream os;
    os << (cls ? "Class " : "Int ") << name << "(";
    ints_ = {};
    classes_ = {};
    int params = pick(rng_, 0, 2);
    for (int i = 0; i < params; ++i) {
      bool c = coin(rng_, 0.3);
      std::string p = "p" + std::to_string(i);
      (c ? classes_ : ints_).push_back(p);
      os << (i ? ", " : "") << (c ? "Class " : "Int ") << p;
    }
    os << ") {\n  Int x; Class y; Fut<Int> g;\n";
    ints_.push_back("x");
    classes_.push_back("y");
    futs_ = {"g"};
    os << stmts(2, true);
    os << "  return " << (cls ? (coin(rng_) ? "this" : "y") : int_expr(2)) << ";\n}\n";
    return os.str();
  }

  std::string stmts(int depth, bool in_method) {
    std::string out;
    int n = pick(rng_, 0, 4);
    for (int i = 0; i < n; ++i) out += "  " + stmt(depth, in_method) + "\n";
    return out;
  }

  std::string stmt(int depth, bool in_method) {
    switch (pick(rng_, 0, depth > 0 ? 9 : 8)) {
      case 0: return one_of(rng_, ints_) + " = " + int_expr(3) + ";";
      case 1: return "job(" + int_expr(2) + ");";
      case 2: return one_of(rng_, classes_) + " = new Class with " + int_expr(1) + ";";
      case 3: return one_of(rng_, classes_) + " = new local Class;";
      case 4: return one_of(rng_, futs_) + " = " + receiver() + "!" + method_name() + "(" + args(false) + ");";
      case 5: return one_of(rng_, ints_) + " = " + receiver() + "." + method_name() + "(" + args(true) + ");";
      case 6: return one_of(rng_, ints_) + " = " + one_of(rng_, futs_) + ".get;";
      case 7: return "job(this.capacity);";
      case 8: return one_of(rng_, ints_) + " = " + nonsize_expr() + ";";
      default: {
        std::string s = "if (" + cond() + ") {\n" + stmts(depth - 1, in_method) + "  }";
        if (coin(rng_)) s += " else {\n" + stmts(depth - 1, in_method) + "  }";
        return s;
      }
    }
  }

  std::string receiver() { return coin(rng_, 0.3) ? "this" : one_of(rng_, classes_); }
  std::string method_name() { return methods_.empty() || coin(rng_, 0.1) ? "ext" : one_of(rng_, methods_); }

  std::string args(bool vars_only) {
    int n = pick(rng_, 0, 2);
    std::string out;
    for (int i = 0; i < n; ++i) out += (i ? ", " : "") + (vars_only ? one_of(rng_, ints_) : int_expr(2));
    return out;
  }

  std::string atom() {
    switch (pick(rng_, 0, 3)) {
      case 0: return std::to_string(pick(rng_, 0, 9));
      case 1: return std::to_string(pick(rng_, 1, 5)) + " * " + one_of(rng_, ints_);
      case 2: return "(" + one_of(rng_, ints_) + " - " + std::to_string(pick(rng_, 0, 3)) + ")";
      default: return one_of(rng_, ints_);
    }
  }

  std::string int_expr(int depth) {
    if (depth == 0 || coin(rng_, 0.4)) return atom();
    return int_expr(depth - 1) + (coin(rng_) ? " + " : " - ") + int_expr(depth - 1);
  }

  std::string nonsize_expr() {
    switch (pick(rng_, 0, 2)) {
      case 0: return one_of(rng_, ints_) + " * " + one_of(rng_, ints_);
      case 1: return int_expr(1) + " / " + std::to_string(pick(rng_, 1, 4));
      default: return "-" + atom();
    }
  }

  std::string cond() {
    std::string c = int_expr(1) + (coin(rng_) ? " <= " : " >= ") + int_expr(1);
    if (coin(rng_, 0.25)) c += (coin(rng_) ? " and " : " or ") + one_of(rng_, ints_) + " <= " + atom();
    if (coin(rng_, 0.15)) c = coin(rng_) ? "true" : one_of(rng_, ints_) + " * " + one_of(rng_, ints_) + " <= 1";
    return c;
  }

  Rng rng_;
  std::vector<std::string> methods_, ints_, classes_, futs_;
};

// ---------------------------------------------------------------------------
// Timed programs: well-typed and terminating. Method i only calls methods
// with a larger index, on this object, on a local object, or on a cog it
// created.
// ---------------------------------------------------------------------------

class TimedGen {
public:
  explicit TimedGen(std::uint64_t seed) : rng_(seed) {}

  std::string program() {
    int n = pick(rng_, 1, 4);
    std::ostringstream os;
    for (int i = 0; i < n; ++i) os << method(i, n) << "\n";
    int cap = pick(rng_, 1, 3);
    os << "{\n  Class o; Fut<Int> f; Int r; Int k;\n  k = " << pick(rng_, 0, 3) << ";\n";
    os << "  o = " << (coin(rng_) ? "new local Class" : "new Class with " + std::to_string(cap)) << ";\n";
    os << "  f = o!m0(k);\n";
    if (coin(rng_, 0.8)) os << "  r = f.get;\n";
    os << "} with " << pick(rng_, 1, 2) << "\n";
    return os.str();
  }

private:
  std::string method(int i, int n) {
    std::ostringstream os;
    os << "Int m" << i << "(Int n) {\n  Int v; Class o; Fut<Int> f0; Fut<Int> f1; Fut<Int> f2;\n";
    bool have_o = false;
    std::vector<std::string> pending;
    int next_fut = 0;
    int count = pick(rng_, 1, 6);
    for (int s = 0; s < count; ++s) {
      int kind = pick(rng_, 0, 6);
      if (kind <= 1) {
        os << "  job(" << (coin(rng_, 0.3) ? "n + " : "") << pick(rng_, 0, 3) << ");\n";
      } else if (kind == 2 && i + 1 < n && next_fut < 3) {
        std::string recv = "this";
        if (have_o && coin(rng_)) recv = "o";
        std::string f = "f" + std::to_string(next_fut++);
        os << "  " << f << " = " << recv << "!m" << pick(rng_, i + 1, n - 1) << "(" << pick(rng_, 0, 2) << ");\n";
        pending.push_back(f);
      } else if (kind == 3 && !pending.empty()) {
        std::string f = pending.front();
        pending.erase(pending.begin());
        os << "  v = " << f << ".get;\n";
      } else if (kind == 4 && !have_o) {
        os << "  o = " << (coin(rng_) ? "new local Class" : "new Class with " + std::to_string(pick(rng_, 1, 3)))
           << ";\n";
        have_o = true;
      } else if (kind == 5 && i + 1 < n) {
        os << "  v = this.m" << pick(rng_, i + 1, n - 1) << "(n);\n";
      } else {
        os << "  if (n <= " << pick(rng_, 0, 2) << ") { job(1); } else { job(2); }\n";
      }
    }
    for (const auto& f : pending)
      if (coin(rng_)) os << "  v = " << f << ".get;\n";
    os << "  return 0;\n}\n";
    return os.str();
  }

  Rng rng_;
};

// ---------------------------------------------------------------------------
// Behavioural types for the translation properties.
// ---------------------------------------------------------------------------

using btypes::Atom;
using btypes::BasicValue;
using btypes::BType;
using btypes::BTypePtr;

class BTypeGen {
public:
  explicit BTypeGen(std::uint64_t seed) : rng_(seed) {}

  BTypePtr btype(int depth) {
    std::vector<Atom> atoms;
    int n = pick(rng_, 0, 6);
    for (int i = 0; i < n; ++i) atoms.push_back(atom());
    BTypePtr tail;
    if (depth > 0 && coin(rng_, 0.5)) {
      auto x = lang::LinExpr::var("n");
      lang::SizeExpr g = lang::SizeExpr::cmp(x, lang::CmpOp::Le, lang::LinExpr(q(pick(rng_, 0, 3))));
      tail = coin(rng_) ? BType::choice(BType::guarded(g, btype(depth - 1)), BType::guarded(g.negate(), btype(depth - 1)))
                        : BType::choice(btype(depth - 1), btype(depth - 1));
    } else {
      tail = BType::leaf(atom(), nullptr);
    }
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) tail = seq(*it, tail);
    return tail;
  }

private:
  // Prefixes `a` to every path of `b`.
  static BTypePtr seq(const Atom& a, const BTypePtr& b) { return BType::seq(a, b); }

  Atom atom() {
    static const std::vector<std::string> cogs{"c", "d1", "d2"};
    switch (pick(rng_, 0, 5)) {
      case 0: return Atom::cost(lang::LinExpr(q(pick(rng_, 1, 3))), lang::LinExpr::var("e"));
      case 1: return Atom::new_cog("d" + std::to_string(pick(rng_, 1, 2)), lang::LinExpr::var("e"));
      case 2: {
        std::string f = "f" + std::to_string(next_++);
        futures_.push_back(f);
        BasicValue arg = coin(rng_, 0.8) ? BasicValue::of_size(lang::LinExpr::var("n")) : BasicValue::unknown();
        return Atom::async_call(f, "a_" + f, {BasicValue::cog_val(one_of(rng_, cogs), lang::LinExpr::var("e")), arg},
                                BasicValue::unknown());
      }
      case 3:
        if (!futures_.empty() && coin(rng_, 0.8)) return Atom::sync(one_of(rng_, futures_));
        return Atom::sync("absent");
      case 4:
        return Atom::sync_call("s" + std::to_string(next_++), {BasicValue::cog_val("c", lang::LinExpr::var("e"))},
                               BasicValue::unknown());
      default: return Atom::zero();
    }
  }

  Rng rng_;
  std::vector<std::string> futures_;
  int next_ = 0;
};

inline std::set<std::string> applied(const costgen::CostExpr& e) {
  std::vector<const costgen::CostExpr*> apps;
  e.applications(apps);
  std::set<std::string> out;
  for (const auto* a : apps) out.insert(a->callee);
  return out;
}

}  // namespace tmltest::gen
