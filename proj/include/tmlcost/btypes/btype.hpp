#pragma once

#include "tmlcost/lang/linear.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tmlcost::btypes {

using lang::LinExpr;
using lang::SizeExpr;

/// `--`, a size expression, or `c[se]` (an object of cog c with capacity se).
struct BasicValue {
  enum class Kind { Unknown, Size, Cog };
  Kind kind = Kind::Unknown;
  SizeExpr size;    // Size: the value; Cog: the capacity
  std::string cog;  // Cog only

  static BasicValue unknown() { return {}; }
  static BasicValue of_size(SizeExpr se) { return {Kind::Size, std::move(se), {}}; }
  static BasicValue cog_val(std::string name, SizeExpr capacity) {
    return {Kind::Cog, std::move(capacity), std::move(name)};
  }

  bool is_unknown() const { return kind == Kind::Unknown; }
  bool is_size() const { return kind == Kind::Size; }
  bool is_cog() const { return kind == Kind::Cog; }
  /// Linear content of a Size value or the capacity of a Cog value.
  bool has_linear() const { return kind != Kind::Unknown && size.is_linear(); }
  const LinExpr& linear() const { return size.linear(); }

  std::string str() const;
  friend bool operator==(const BasicValue& a, const BasicValue& b);
};

/// A basic value or a future name.
struct ExtValue {
  bool is_future = false;
  std::string future;
  BasicValue basic;

  static ExtValue of(BasicValue b) { return {false, {}, std::move(b)}; }
  static ExtValue fut(std::string f) { return {true, std::move(f), {}}; }
  std::string str() const { return is_future ? future : basic.str(); }
};

struct Signature {
  std::vector<BasicValue> header;  // header[0] is the receiver's cog value
  BasicValue ret;
};

struct FutureEntry {
  BasicValue value;
  bool checked = false;
};

/// Typing environment. Value semantics, so an update never leaks into
/// environments held elsewhere.
struct TypeEnv {
  std::shared_ptr<const std::map<std::string, Signature>> methods;
  std::map<std::string, ExtValue> vars;  // includes `this` and `destiny`
  std::map<std::string, FutureEntry> futures;
  std::map<std::string, SizeExpr> cogs;  // cogs created locally

  const Signature* method(const std::string& m) const;
};

struct Atom {
  enum class Kind { Cost, NewCog, SyncCall, AsyncCall, Sync, Zero };
  Kind kind = Kind::Zero;
  LinExpr num, den;                 // Cost: num / den
  std::string name;                 // NewCog: cog; AsyncCall, Sync: future
  SizeExpr capacity;                // NewCog
  std::string method;               // calls
  std::vector<BasicValue> header;   // calls: callee cog value, then arguments
  BasicValue ret;                   // calls

  static Atom zero() { return {}; }
  static Atom cost(LinExpr num, LinExpr den);
  static Atom new_cog(std::string cog, SizeExpr capacity);
  static Atom sync_call(std::string method, std::vector<BasicValue> header, BasicValue ret);
  static Atom async_call(std::string future, std::string method, std::vector<BasicValue> header, BasicValue ret);
  static Atom sync(std::string future);

  std::string str() const;
};

struct BType;
using BTypePtr = std::shared_ptr<const BType>;

/// `a ▷ Γ` | `a ⨟ b` | `b + b` | `(se){b}`.
struct BType {
  enum class Kind { Leaf, Seq, Choice, Guarded };
  Kind kind = Kind::Leaf;
  Atom atom;                         // Leaf, Seq
  std::shared_ptr<const TypeEnv> env;  // Leaf; null once erased
  BTypePtr next;                     // Seq
  BTypePtr left, right;              // Choice
  SizeExpr guard;                    // Guarded
  BTypePtr body;                     // Guarded

  static BTypePtr leaf(Atom a, std::shared_ptr<const TypeEnv> env);
  static BTypePtr seq(Atom a, BTypePtr next);
  static BTypePtr choice(BTypePtr l, BTypePtr r);
  static BTypePtr guarded(SizeExpr g, BTypePtr b);
};

/// Replaces every leaf `a ▷ Γ` with `f(a, Γ)`.
BTypePtr graft(const BTypePtr& b, const std::function<BTypePtr(const Atom&, const TypeEnv&)>& f);

/// Same tree with every leaf environment set to ∅.
BTypePtr erase_envs(const BTypePtr& b);

/// Root-to-leaf paths, each as its guards and atoms in order.
struct BPath {
  std::vector<SizeExpr> guards;
  std::vector<Atom> atoms;
};
std::vector<BPath> paths(const BTypePtr& b);

struct MethodBType {
  std::string name;
  std::vector<BasicValue> header;  // header[0] is `this`
  BTypePtr body;
  BasicValue ret;
};

struct BProgram {
  std::vector<MethodBType> methods;
  MethodBType main;  // named "main", header (start[k], main Int locals)

  const MethodBType* find(const std::string& name) const;
};

std::string print_btype(const BTypePtr& b);
/// `m(c[e], n) { ... } : --`, one top-level alternative per line.
std::string print_method_btype(const MethodBType& m);
std::string print_bprogram(const BProgram& p);

}  // namespace tmlcost::btypes
