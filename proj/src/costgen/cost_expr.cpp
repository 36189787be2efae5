#include "tmlcost/costgen/cost_expr.hpp"

#include <algorithm>

namespace tmlcost::costgen {

CostExpr CostExpr::lin(LinExpr e) {
  CostExpr c;
  c.num = std::move(e);
  return c;
}

CostExpr CostExpr::ratio(LinExpr num, LinExpr den) {
  if (den.is_constant()) {
    if (den.constant().is_zero()) throw DivisionByZero();
    return lin(num * (Rational(1) / den.constant()));
  }
  CostExpr c;
  c.kind = Kind::Ratio;
  c.num = std::move(num);
  c.den = std::move(den);
  return c;
}

CostExpr CostExpr::apply(std::string callee, std::vector<LinExpr> args) {
  CostExpr c;
  c.kind = Kind::Apply;
  c.callee = std::move(callee);
  c.args = std::move(args);
  return c;
}

CostExpr CostExpr::add(std::vector<CostExpr> ops) {
  if (ops.empty()) return zero();
  if (ops.size() == 1) return std::move(ops.front());
  CostExpr c;
  c.kind = Kind::Add;
  c.ops = std::move(ops);
  return c;
}

CostExpr CostExpr::max(std::vector<CostExpr> ops) {
  if (ops.empty()) return zero();
  if (ops.size() == 1) return std::move(ops.front());
  CostExpr c;
  c.kind = Kind::Max;
  c.ops = std::move(ops);
  return c;
}

CostExpr operator+(const CostExpr& a, const CostExpr& b) { return CostExpr::add({a, b}); }

std::set<std::string> CostExpr::vars() const {
  std::set<std::string> out;
  auto take = [&](const LinExpr& e) {
    for (const auto& x : e.vars()) out.insert(x);
  };
  switch (kind) {
    case Kind::Lin: take(num); break;
    case Kind::Ratio: take(num); take(den); break;
    case Kind::Apply:
      for (const auto& a : args) take(a);
      break;
    case Kind::Add:
    case Kind::Max:
      for (const auto& o : ops)
        for (const auto& x : o.vars()) out.insert(x);
      break;
  }
  return out;
}

void CostExpr::applications(std::vector<const CostExpr*>& out) const {
  if (kind == Kind::Apply) out.push_back(this);
  for (const auto& o : ops) o.applications(out);
}

bool operator==(const CostExpr& a, const CostExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case CostExpr::Kind::Lin: return a.num == b.num;
    case CostExpr::Kind::Ratio: return a.num == b.num && a.den == b.den;
    case CostExpr::Kind::Apply: return a.callee == b.callee && a.args == b.args;
    case CostExpr::Kind::Add:
    case CostExpr::Kind::Max: return a.ops == b.ops;
  }
  return false;
}

namespace {

std::string operand(const LinExpr& e) {
  std::string s = e.str();
  if (s.find(' ') == std::string::npos) return s;
  return "(" + s + ")";
}

}  // namespace

std::string CostExpr::str() const {
  switch (kind) {
    case Kind::Lin: return num.str();
    case Kind::Ratio: return operand(num) + "/" + operand(den);
    case Kind::Apply: {
      std::string out = callee + "(";
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ", ";
        out += args[i].str();
      }
      return out + ")";
    }
    case Kind::Add: {
      std::string out;
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) out += " + ";
        out += ops[i].kind == Kind::Lin && !ops[i].num.is_constant() ? "(" + ops[i].str() + ")" : ops[i].str();
      }
      return out;
    }
    case Kind::Max: {
      std::string out = "max(";
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) out += ", ";
        out += ops[i].str();
      }
      return out + ")";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Simplification
// ---------------------------------------------------------------------------

namespace {

std::vector<CostExpr> summands(const CostExpr& e) {
  if (e.kind == CostExpr::Kind::Add) return e.ops;
  if (e.is_zero()) return {};
  return {e};
}

// Sum of already simplified summands, merging linear parts and ratios
// over the same denominator at the position of their first occurrence.
CostExpr make_sum(const std::vector<CostExpr>& parts) {
  std::vector<CostExpr> out;
  for (const auto& p : parts) {
    for (const auto& s : summands(p)) {
      auto same = std::find_if(out.begin(), out.end(), [&](const CostExpr& o) {
        if (s.kind == CostExpr::Kind::Lin) return o.kind == CostExpr::Kind::Lin;
        if (s.kind == CostExpr::Kind::Ratio) return o.kind == CostExpr::Kind::Ratio && o.den == s.den;
        return false;
      });
      if (same == out.end()) {
        out.push_back(s);
      } else {
        same->num += s.num;
      }
    }
  }
  std::erase_if(out, [](const CostExpr& o) {
    return (o.kind == CostExpr::Kind::Lin || o.kind == CostExpr::Kind::Ratio) && o.num == LinExpr();
  });
  return CostExpr::add(std::move(out));
}

// Costs are nonnegative by construction (job amounts are checked at run
// time), so a zero operand never decides a max.
CostExpr make_max(const std::vector<CostExpr>& parts) {
  std::vector<CostExpr> ops;
  for (const auto& p : parts) {
    std::vector<CostExpr> flat = p.kind == CostExpr::Kind::Max ? p.ops : std::vector<CostExpr>{p};
    for (auto& o : flat) {
      if (o.is_zero()) continue;
      if (std::find(ops.begin(), ops.end(), o) == ops.end()) ops.push_back(std::move(o));
    }
  }
  if (ops.size() <= 1) return CostExpr::max(std::move(ops));

  // Pull out summands common to every operand.
  std::vector<std::vector<CostExpr>> sums;
  for (const auto& o : ops) sums.push_back(summands(o));
  std::vector<CostExpr> common;
  for (const auto& s : sums.front()) {
    bool everywhere = std::all_of(sums.begin() + 1, sums.end(), [&](const std::vector<CostExpr>& v) {
      return std::find(v.begin(), v.end(), s) != v.end();
    });
    if (everywhere) common.push_back(s);
  }
  if (common.empty()) return CostExpr::max(std::move(ops));
  std::vector<CostExpr> rests;
  for (auto& v : sums) {
    for (const auto& s : common) v.erase(std::find(v.begin(), v.end(), s));
    rests.push_back(make_sum({CostExpr::add(std::move(v))}));
  }
  common.push_back(make_max(rests));
  return make_sum(common);
}

}  // namespace

CostExpr simplify(const CostExpr& e) {
  switch (e.kind) {
    case CostExpr::Kind::Lin:
    case CostExpr::Kind::Ratio:
    case CostExpr::Kind::Apply: return e;
    case CostExpr::Kind::Add: {
      std::vector<CostExpr> parts;
      for (const auto& o : e.ops) parts.push_back(simplify(o));
      return make_sum(parts);
    }
    case CostExpr::Kind::Max: {
      std::vector<CostExpr> parts;
      for (const auto& o : e.ops) parts.push_back(simplify(o));
      return make_max(parts);
    }
  }
  return e;
}

}  // namespace tmlcost::costgen
