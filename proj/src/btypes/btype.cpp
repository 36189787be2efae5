#include "tmlcost/btypes/btype.hpp"

#include <sstream>

namespace tmlcost::btypes {

using lang::Notation;

std::string BasicValue::str() const {
  switch (kind) {
    case Kind::Unknown: return "--";
    case Kind::Size: return size.str(Notation::Math);
    case Kind::Cog: return cog + "[" + size.str(Notation::Math) + "]";
  }
  return "?";
}

bool operator==(const BasicValue& a, const BasicValue& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BasicValue::Kind::Unknown: return true;
    case BasicValue::Kind::Size: return a.size == b.size;
    case BasicValue::Kind::Cog: return a.cog == b.cog && a.size == b.size;
  }
  return false;
}

const Signature* TypeEnv::method(const std::string& m) const {
  if (!methods) return nullptr;
  auto it = methods->find(m);
  return it == methods->end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Atoms
// ---------------------------------------------------------------------------

Atom Atom::cost(LinExpr num, LinExpr den) {
  Atom a;
  a.kind = Kind::Cost;
  a.num = std::move(num);
  a.den = std::move(den);
  return a;
}

Atom Atom::new_cog(std::string cog, SizeExpr capacity) {
  Atom a;
  a.kind = Kind::NewCog;
  a.name = std::move(cog);
  a.capacity = std::move(capacity);
  return a;
}

Atom Atom::sync_call(std::string method, std::vector<BasicValue> header, BasicValue ret) {
  Atom a;
  a.kind = Kind::SyncCall;
  a.method = std::move(method);
  a.header = std::move(header);
  a.ret = std::move(ret);
  return a;
}

Atom Atom::async_call(std::string future, std::string method, std::vector<BasicValue> header, BasicValue ret) {
  Atom a = sync_call(std::move(method), std::move(header), std::move(ret));
  a.kind = Kind::AsyncCall;
  a.name = std::move(future);
  return a;
}

Atom Atom::sync(std::string future) {
  Atom a;
  a.kind = Kind::Sync;
  a.name = std::move(future);
  return a;
}

namespace {

std::string operand(const LinExpr& e) {
  if (e.is_constant() || (e.terms().size() == 1 && e.constant().is_zero())) {
    std::string s = e.str();
    if (s.find(' ') == std::string::npos && s.find('/') == std::string::npos) return s;
  }
  return "(" + e.str() + ")";
}

std::string call_str(const std::string& m, const std::vector<BasicValue>& header, const BasicValue& ret) {
  std::string out = m + "(";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ", ";
    out += header[i].str();
  }
  return out + ") → " + ret.str();
}

}  // namespace

std::string Atom::str() const {
  switch (kind) {
    case Kind::Zero: return "0";
    case Kind::Cost:
      if (den == LinExpr(Rational(1))) return num.is_constant() ? num.str() : operand(num);
      return operand(num) + "/" + operand(den);
    case Kind::NewCog: return name + "[" + capacity.str(Notation::Math) + "]";
    case Kind::SyncCall: return call_str(method, header, ret);
    case Kind::AsyncCall: return "ν" + name + ": " + call_str(method, header, ret);
    case Kind::Sync: return name + "✓";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

BTypePtr BType::leaf(Atom a, std::shared_ptr<const TypeEnv> env) {
  auto b = std::make_shared<BType>();
  b->kind = Kind::Leaf;
  b->atom = std::move(a);
  b->env = std::move(env);
  return b;
}

BTypePtr BType::seq(Atom a, BTypePtr next) {
  auto b = std::make_shared<BType>();
  b->kind = Kind::Seq;
  b->atom = std::move(a);
  b->next = std::move(next);
  return b;
}

BTypePtr BType::choice(BTypePtr l, BTypePtr r) {
  auto b = std::make_shared<BType>();
  b->kind = Kind::Choice;
  b->left = std::move(l);
  b->right = std::move(r);
  return b;
}

BTypePtr BType::guarded(SizeExpr g, BTypePtr body) {
  auto b = std::make_shared<BType>();
  b->kind = Kind::Guarded;
  b->guard = std::move(g);
  b->body = std::move(body);
  return b;
}

BTypePtr graft(const BTypePtr& b, const std::function<BTypePtr(const Atom&, const TypeEnv&)>& f) {
  switch (b->kind) {
    case BType::Kind::Leaf: {
      static const TypeEnv empty;
      return f(b->atom, b->env ? *b->env : empty);
    }
    case BType::Kind::Seq: return BType::seq(b->atom, graft(b->next, f));
    case BType::Kind::Choice: return BType::choice(graft(b->left, f), graft(b->right, f));
    case BType::Kind::Guarded: return BType::guarded(b->guard, graft(b->body, f));
  }
  return b;
}

BTypePtr erase_envs(const BTypePtr& b) {
  return graft(b, [](const Atom& a, const TypeEnv&) { return BType::leaf(a, nullptr); });
}

namespace {

void collect_paths(const BTypePtr& b, BPath& cur, std::vector<BPath>& out) {
  switch (b->kind) {
    case BType::Kind::Leaf:
      cur.atoms.push_back(b->atom);
      out.push_back(cur);
      cur.atoms.pop_back();
      return;
    case BType::Kind::Seq:
      cur.atoms.push_back(b->atom);
      collect_paths(b->next, cur, out);
      cur.atoms.pop_back();
      return;
    case BType::Kind::Choice:
      collect_paths(b->left, cur, out);
      collect_paths(b->right, cur, out);
      return;
    case BType::Kind::Guarded:
      cur.guards.push_back(b->guard);
      collect_paths(b->body, cur, out);
      cur.guards.pop_back();
      return;
  }
}

}  // namespace

std::vector<BPath> paths(const BTypePtr& b) {
  std::vector<BPath> out;
  BPath cur;
  collect_paths(b, cur, out);
  return out;
}

const MethodBType* BProgram::find(const std::string& name) const {
  for (const auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace {

std::string inline_btype(const BTypePtr& b);

std::string nested(const BTypePtr& b) {
  if (b->kind == BType::Kind::Choice) return "(" + inline_btype(b) + ")";
  return inline_btype(b);
}

std::string inline_btype(const BTypePtr& b) {
  switch (b->kind) {
    case BType::Kind::Leaf: return b->atom.str() + " ▷ ∅";
    case BType::Kind::Seq: return b->atom.str() + " ⨟ " + nested(b->next);
    case BType::Kind::Choice: return inline_btype(b->left) + " + " + inline_btype(b->right);
    case BType::Kind::Guarded: return "(" + b->guard.str(Notation::Math) + "){ " + inline_btype(b->body) + " }";
  }
  return "?";
}

void alternatives(const BTypePtr& b, std::vector<BTypePtr>& out) {
  if (b->kind == BType::Kind::Choice) {
    alternatives(b->left, out);
    alternatives(b->right, out);
  } else {
    out.push_back(b);
  }
}

}  // namespace

std::string print_btype(const BTypePtr& b) { return inline_btype(b); }

std::string print_method_btype(const MethodBType& m) {
  std::ostringstream os;
  os << m.name << "(";
  for (std::size_t i = 0; i < m.header.size(); ++i) {
    if (i) os << ", ";
    os << m.header[i].str();
  }
  os << ") {\n";
  std::vector<BTypePtr> alts;
  alternatives(m.body, alts);
  for (std::size_t i = 0; i < alts.size(); ++i) {
    if (i) os << "  +\n";
    os << "  " << inline_btype(alts[i]) << "\n";
  }
  os << "} : " << m.ret.str() << "\n";
  return os.str();
}

std::string print_bprogram(const BProgram& p) {
  std::string out;
  for (const auto& m : p.methods) out += print_method_btype(m) + "\n";
  out += print_method_btype(p.main);
  return out;
}

}  // namespace tmlcost::btypes
