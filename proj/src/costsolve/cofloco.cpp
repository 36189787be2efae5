#include "tmlcost/costsolve/costsolve.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tmlcost::costsolve {

using costgen::CostEquation;
using costgen::CostExpr;
using lang::CmpOp;
using lang::LinExpr;
using lang::SizeExpr;

namespace {

std::string var_name(const std::string& x) {
  if (x.starts_with("_u")) return "Fresh" + x.substr(2);
  std::string out;
  for (char ch : x) {
    if (ch == '_' && out.empty()) continue;
    out += ch == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return out.empty() ? "V" : out;
}

std::string coeff_term(const Rational& k, const std::string& v, bool first) {
  std::string sign = k.sign() < 0 ? "-" : (first ? "" : "+");
  Rational a = k.sign() < 0 ? Rational(0) - k : k;
  if (a == Rational(1)) return sign + v;
  return sign + a.str() + "*" + v;
}

/// `N-1`, `2*E`, `-N`, `3`.
std::string render_lin(const LinExpr& e) {
  std::string out;
  for (const auto& [x, k] : e.terms()) out += coeff_term(k, var_name(x), out.empty());
  const Rational& c = e.constant();
  if (out.empty()) return c.str();
  if (c.sign() > 0) out += "+" + c.str();
  if (c.sign() < 0) out += c.str();
  return out;
}

using Conj = std::vector<std::string>;

// Constraint `e >= 0`, `e = 0` or `e > 0`, moving the constant right.
std::optional<std::string> constraint(const LinExpr& e, const char* op) {
  LinExpr lhs = e - LinExpr(e.constant());
  Rational rhs = Rational(0) - e.constant();
  if (lhs.is_constant()) return std::nullopt;
  return render_lin(lhs) + op + rhs.str();
}

// Alternatives (a disjunction) of constraint conjunctions for `g`.
std::vector<Conj> dnf(const SizeExpr& g) {
  auto lit = [](const LinExpr& diff, const char* op) -> std::vector<Conj> {
    if (diff.is_constant()) {
      const Rational& c = diff.constant();
      bool holds = std::string(op) == ">=" ? c.sign() >= 0 : std::string(op) == "=" ? c.is_zero() : c.sign() > 0;
      return holds ? std::vector<Conj>{{}} : std::vector<Conj>{};
    }
    return {{*constraint(diff, op)}};
  };
  auto greater = [&](const LinExpr& diff) {
    if (diff.is_integral()) return lit(diff - LinExpr(Rational(1)), ">=");
    return lit(diff, ">");
  };
  auto unequal = [&](const LinExpr& diff) {
    auto out = greater(diff);
    for (auto& c : greater(-diff)) out.push_back(c);
    return out;
  };
  return std::visit(
      [&](const auto& n) -> std::vector<Conj> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinExpr>) {
          return unequal(n);
        } else if constexpr (std::is_same_v<T, SizeExpr::Cmp>) {
          LinExpr diff = n.rhs - n.lhs;
          switch (n.op) {
            case CmpOp::Le: return lit(diff, ">=");
            case CmpOp::Lt: return greater(diff);
            case CmpOp::Eq: return lit(diff, "=");
            case CmpOp::Ne: return unequal(diff);
          }
          return {};
        } else if constexpr (std::is_same_v<T, SizeExpr::And>) {
          std::vector<Conj> out;
          for (const auto& a : dnf(*n.lhs))
            for (const auto& b : dnf(*n.rhs)) {
              Conj c = a;
              c.insert(c.end(), b.begin(), b.end());
              out.push_back(std::move(c));
            }
          return out;
        } else {
          auto out = dnf(*n.lhs);
          for (auto& c : dnf(*n.rhs)) out.push_back(std::move(c));
          return out;
        }
      },
      g.node());
}

// Sum alternatives: each max operand gives its own alternative.
std::vector<std::vector<const CostExpr*>> expand(const CostExpr& e) {
  switch (e.kind) {
    case CostExpr::Kind::Max: {
      std::vector<std::vector<const CostExpr*>> out;
      for (const auto& o : e.ops)
        for (auto& alt : expand(o)) out.push_back(std::move(alt));
      return out;
    }
    case CostExpr::Kind::Add: {
      std::vector<std::vector<const CostExpr*>> out{{}};
      for (const auto& o : e.ops) {
        std::vector<std::vector<const CostExpr*>> next;
        for (const auto& prefix : out)
          for (const auto& alt : expand(o)) {
            auto joined = prefix;
            joined.insert(joined.end(), alt.begin(), alt.end());
            next.push_back(std::move(joined));
          }
        out = std::move(next);
      }
      return out;
    }
    default: return {{&e}};
  }
}

class Emitter {
public:
  Emitter(const CostEquationSystem& sys, const std::map<std::string, Rational>& caps) : sys_(sys), caps_(caps) {}

  void equation(const CostEquation& eq, std::ostringstream& os) {
    const auto& cap_pos = sys_.capacity_positions.at(eq.symbol);
    std::map<std::string, Rational> bound;  // capacity formals of this head with a value
    for (std::size_t i = 0; i < eq.formals.size(); ++i)
      if (cap_pos[i] && caps_.count(eq.formals[i])) bound.emplace(eq.formals[i], caps_.at(eq.formals[i]));

    auto fix = [&](const LinExpr& e) {
      return e.substitute([&](const std::string& x) -> std::optional<LinExpr> {
        auto it = bound.find(x);
        if (it == bound.end()) return std::nullopt;
        return LinExpr(it->second);
      });
    };

    std::string head = eq.symbol + "(";
    for (std::size_t i = 0; i < eq.formals.size(); ++i) head += (i ? "," : "") + var_name(eq.formals[i]);
    head += ")";

    std::vector<Conj> guards{{}};
    for (const auto& g : eq.guard) {
      SizeExpr fixed = g.substitute([&](const std::string& x) -> std::optional<LinExpr> {
        auto it = bound.find(x);
        if (it == bound.end()) return std::nullopt;
        return LinExpr(it->second);
      });
      std::vector<Conj> next;
      for (const auto& a : guards)
        for (const auto& b : dnf(fixed)) {
          Conj c = a;
          c.insert(c.end(), b.begin(), b.end());
          next.push_back(std::move(c));
        }
      guards = std::move(next);
    }
    Conj cap_constraints;
    for (std::size_t i = 0; i < eq.formals.size(); ++i) {
      auto it = bound.find(eq.formals[i]);
      if (it == bound.end()) continue;
      // The formal stands for 1/v, so v = p/q gives p*V = q.
      Rational p(it->second.numerator(), Rational::Int(1)), q(it->second.denominator(), Rational::Int(1));
      cap_constraints.push_back((p == Rational(1) ? "" : p.str() + "*") + var_name(eq.formals[i]) + "=" + q.str());
    }

    for (const auto& alt : expand(eq.body)) {
      std::vector<std::string> costs, calls;
      for (const CostExpr* t : alt) {
        switch (t->kind) {
          case CostExpr::Kind::Lin: {
            LinExpr v = fix(t->num);
            if (v.is_constant()) {
              if (!v.constant().is_zero()) costs.push_back(v.constant().str());
            } else {
              costs.push_back("nat(" + render_lin(v) + ")");
            }
            break;
          }
          case CostExpr::Kind::Ratio: costs.push_back(ratio(*t, bound, fix)); break;
          case CostExpr::Kind::Apply: calls.push_back(call(*t, bound, fix)); break;
          default: break;
        }
      }
      std::string cost = costs.empty() ? "0" : "";
      for (std::size_t i = 0; i < costs.size(); ++i) cost += (i ? "+" : "") + costs[i];
      for (const auto& g : guards) {
        Conj all = g;
        all.insert(all.end(), cap_constraints.begin(), cap_constraints.end());
        os << "eq(" << head << "," << cost << ",[" << join(calls) << "],[" << join(all) << "]).\n";
      }
    }
  }

private:
  static std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
    return out;
  }

  template <class Fix>
  std::string ratio(const CostExpr& t, const std::map<std::string, Rational>& bound, const Fix& fix) {
    if (t.den.is_single_var() && bound.count(t.den.single_var())) {
      std::string rv = var_name(t.den.single_var());
      LinExpr num = fix(t.num);
      if (num.is_constant()) {
        if (num.constant() == Rational(1)) return "nat(" + rv + ")";
        return num.constant().str() + "*nat(" + rv + ")";
      }
      Rational inv = Rational(1) / bound.at(t.den.single_var());
      return "nat(" + render_lin(num) + ")*(" + inv.str() + ")";
    }
    for (const auto& x : t.den.vars())
      if (!bound.count(x))
        throw UnboundDenominator(x, "denominator variable '" + x + "' has no fixed capacity");
    LinExpr den = fix(t.den);
    LinExpr num = fix(t.num) * (Rational(1) / den.constant());
    return num.is_constant() ? num.constant().str() : "nat(" + render_lin(num) + ")";
  }

  template <class Fix>
  std::string call(const CostExpr& t, const std::map<std::string, Rational>& bound, const Fix& fix) {
    const auto& formals = sys_.formals.at(t.callee);
    const auto& cap_pos = sys_.capacity_positions.at(t.callee);
    std::string out = t.callee + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i) out += ",";
      const LinExpr& a = t.args[i];
      auto binding = caps_.find(formals[i]);
      if (cap_pos[i] && binding != caps_.end()) {
        // The callee reads this position as a reciprocal capacity.
        if (a.is_single_var() && bound.count(a.single_var()) && bound.at(a.single_var()) == binding->second) {
          out += var_name(a.single_var());
        } else if (a.is_constant() && a.constant() == binding->second) {
          out += (Rational(1) / a.constant()).str();
        } else {
          throw UnboundDenominator(formals[i], "call " + t.str() + " passes capacity " + a.str() + " where " +
                                                   formals[i] + " is fixed to " + binding->second.str());
        }
        continue;
      }
      out += render_lin(fix(a));
    }
    return out + ")";
  }

  const CostEquationSystem& sys_;
  const std::map<std::string, Rational>& caps_;
};

}  // namespace

std::string emit_cofloco(const CostEquationSystem& sys, const std::map<std::string, Rational>& capacities,
                         const std::vector<std::string>& symbols) {
  std::vector<std::string> order = symbols;
  if (order.empty())
    for (const auto& eq : sys.equations)
      if (eq.symbol != sys.entry && std::find(order.begin(), order.end(), eq.symbol) == order.end())
        order.push_back(eq.symbol);

  for (const auto& [name, v] : capacities)
    if (v.sign() <= 0) throw std::invalid_argument("capacity " + name + " must be positive");

  std::ostringstream os;
  Emitter em(sys, capacities);
  for (const auto& s : order)
    for (const auto* eq : sys.equations_for(s)) em.equation(*eq, os);
  return os.str();
}

}  // namespace tmlcost::costsolve
