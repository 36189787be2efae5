#include "tmlcost/costgen/translate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tmlcost::costgen {

using btypes::BType;

const PendingCall* TransEnv::find(const std::string& f) const {
  for (const auto& p : entries_)
    if (p.future == f) return &p;
  return nullptr;
}

std::vector<PendingCall> TransEnv::take_cog(const std::string& cog) {
  std::vector<PendingCall> taken;
  std::vector<PendingCall> kept;
  for (auto& p : entries_) (p.cog() == cog ? taken : kept).push_back(std::move(p));
  entries_ = std::move(kept);
  return taken;
}

LinExpr strip(const BasicValue& v, FreshNames& fresh) {
  if (v.has_linear()) return v.linear();
  return LinExpr::var(fresh.next());
}

namespace {

CostExpr call_cost(const std::string& m, const std::vector<BasicValue>& header, FreshNames& fresh) {
  std::vector<LinExpr> args;
  for (const auto& v : header) args.push_back(strip(v, fresh));
  return CostExpr::apply(m, std::move(args));
}

}  // namespace

std::pair<TransEnv, CostExpr> translate_atom(TransEnv psi, const std::string& cog, CostExpr e, const Atom& a,
                                             FreshNames& fresh) {
  switch (a.kind) {
    case Atom::Kind::Zero:
    case Atom::Kind::NewCog: return {std::move(psi), std::move(e)};
    case Atom::Kind::Cost: return {std::move(psi), e + CostExpr::ratio(a.num, a.den)};
    case Atom::Kind::SyncCall: return {std::move(psi), e + call_cost(a.method, a.header, fresh)};
    case Atom::Kind::AsyncCall:
      psi.add(PendingCall{a.name, e, a.method, a.header});
      return {std::move(psi), std::move(e)};
    case Atom::Kind::Sync: break;
  }

  const PendingCall* p = psi.find(a.name);
  if (!p) return {std::move(psi), std::move(e)};
  std::string target = p->cog();
  std::vector<PendingCall> group = psi.take_cog(target);
  std::vector<CostExpr> costs;
  for (const auto& g : group) costs.push_back(call_cost(g.method, g.header, fresh));
  CostExpr e1 = CostExpr::add(std::move(costs));
  if (target == cog) return {std::move(psi), e + e1};

  std::vector<CostExpr> times;
  for (const auto& g : group) times.push_back(g.time);
  CostExpr e2 = CostExpr::max(std::move(times));
  return {std::move(psi), CostExpr::max({std::move(e), e1 + e2})};
}

std::vector<Branch> translate_btype(const Branch& start, const std::string& cog, const BTypePtr& b, FreshNames& fresh) {
  switch (b->kind) {
    case BType::Kind::Leaf: {
      auto [psi, cost] = translate_atom(start.psi, cog, start.cost, b->atom, fresh);
      return {Branch{std::move(psi), start.guard, std::move(cost)}};
    }
    case BType::Kind::Seq: {
      auto [psi, cost] = translate_atom(start.psi, cog, start.cost, b->atom, fresh);
      return translate_btype(Branch{std::move(psi), start.guard, std::move(cost)}, cog, b->next, fresh);
    }
    case BType::Kind::Choice: {
      auto out = translate_btype(start, cog, b->left, fresh);
      for (auto& br : translate_btype(start, cog, b->right, fresh)) out.push_back(std::move(br));
      return out;
    }
    case BType::Kind::Guarded: {
      Branch inner = start;
      inner.guard.push_back(b->guard);
      return translate_btype(inner, cog, b->body, fresh);
    }
  }
  return {};
}

CostExpr drain_residual(const TransEnv& psi, const std::string& cog, FreshNames& fresh) {
  TransEnv cur = psi;
  CostExpr e = CostExpr::zero();
  for (const auto& p : psi.entries()) {
    auto [next, cost] = translate_atom(std::move(cur), cog, std::move(e), Atom::sync(p.future), fresh);
    cur = std::move(next);
    e = std::move(cost);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Equations
// ---------------------------------------------------------------------------

std::string CostEquation::str() const {
  std::ostringstream os;
  os << symbol << "(";
  for (std::size_t i = 0; i < formals.size(); ++i) os << (i ? ", " : "") << formals[i];
  os << ") = " << body.str() << " [";
  if (guard.empty()) os << "true";
  for (std::size_t i = 0; i < guard.size(); ++i) {
    if (i) os << " ∧ ";
    std::string g = guard[i].str(lang::Notation::Math);
    bool compound = !guard[i].is_linear() && !std::holds_alternative<SizeExpr::Cmp>(guard[i].node());
    os << (guard.size() > 1 && compound ? "(" + g + ")" : g);
  }
  os << "]";
  return os.str();
}

std::vector<const CostEquation*> CostEquationSystem::equations_for(const std::string& symbol) const {
  std::vector<const CostEquation*> out;
  for (const auto& e : equations)
    if (e.symbol == symbol) out.push_back(&e);
  return out;
}

std::string CostEquationSystem::str() const {
  std::string out;
  for (const auto& e : equations) out += e.str() + "\n";
  return out;
}

namespace {

struct Head {
  std::vector<std::string> formals;
  std::vector<bool> capacity;
  std::vector<SizeExpr> guard;  // ties repeated or non-variable header entries
};

Head method_head(const btypes::MethodBType& mb) {
  Head h;
  std::set<std::string> used;
  for (const auto& v : mb.header)
    if (!v.is_unknown())
      for (const auto& x : v.size.vars()) used.insert(x);
  auto fresh = [&](const std::string& base) {
    std::string name = base;
    for (int i = 1; used.count(name); ++i) name = base + std::to_string(i);
    used.insert(name);
    return name;
  };
  std::set<std::string> bound;
  for (const auto& v : mb.header) {
    h.capacity.push_back(v.is_cog());
    if (v.has_linear() && v.linear().is_single_var() && !bound.count(v.linear().single_var())) {
      bound.insert(v.linear().single_var());
      h.formals.push_back(v.linear().single_var());
      continue;
    }
    std::string base = v.has_linear() && v.linear().is_single_var() ? v.linear().single_var() : "_h";
    std::string name = fresh(base);
    h.formals.push_back(name);
    if (v.has_linear()) h.guard.push_back(SizeExpr::cmp(LinExpr::var(name), lang::CmpOp::Eq, v.linear()));
  }
  return h;
}

std::vector<CostEquation> equations(const std::string& symbol, const std::vector<std::string>& formals,
                                    const std::vector<SizeExpr>& head_guard, const std::string& cog,
                                    const BTypePtr& body) {
  FreshNames fresh;
  std::vector<CostEquation> out;
  for (auto& br : translate_btype(Branch{}, cog, body, fresh)) {
    CostExpr residual = drain_residual(br.psi, cog, fresh);
    std::vector<SizeExpr> guard = br.guard;
    guard.insert(guard.end(), head_guard.begin(), head_guard.end());
    out.push_back(CostEquation{symbol, formals, simplify(br.cost + residual), std::move(guard)});
  }
  return out;
}

}  // namespace

std::vector<CostEquation> translate_method(const btypes::MethodBType& mb) {
  Head h = method_head(mb);
  return equations(mb.name, h.formals, h.guard, mb.header.front().cog, mb.body);
}

CostEquationSystem translate_program(const btypes::BProgram& bp) {
  CostEquationSystem sys;
  for (const auto& m : bp.methods) {
    Head h = method_head(m);
    sys.formals[m.name] = h.formals;
    sys.capacity_positions[m.name] = h.capacity;
    for (auto& e : equations(m.name, h.formals, h.guard, m.header.front().cog, m.body))
      sys.equations.push_back(std::move(e));
  }

  auto mains = equations("main", {}, {}, bp.main.header.front().cog, bp.main.body);
  std::set<std::string> free;
  for (const auto& e : mains) {
    for (const auto& x : e.body.vars()) free.insert(x);
    for (const auto& g : e.guard)
      for (const auto& x : g.vars()) free.insert(x);
  }
  std::vector<std::string> formals;
  for (std::size_t i = 1; i < bp.main.header.size(); ++i) {
    const std::string& x = bp.main.header[i].linear().single_var();
    if (free.count(x)) formals.push_back(x);
  }
  for (auto& e : mains) {
    e.formals = formals;
    sys.equations.push_back(std::move(e));
  }
  sys.formals["main"] = formals;
  sys.capacity_positions["main"] = std::vector<bool>(formals.size(), false);

  for (const auto& e : sys.equations) {
    std::vector<const CostExpr*> apps;
    e.body.applications(apps);
    for (const CostExpr* a : apps)
      if (!sys.formals.count(a->callee))
        throw UndefinedSymbol("cost symbol '" + a->callee + "' has no equations");
  }
  return sys;
}

}  // namespace tmlcost::costgen
