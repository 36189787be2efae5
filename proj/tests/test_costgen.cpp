#include "support.hpp"

#include <gtest/gtest.h>

using namespace tmlcost;
using namespace tmlcost::costgen;
using btypes::BType;
using lang::LinExpr;
using lang::parse_expr;

namespace {

LinExpr lin(std::string_view s) { return parse_expr(s).size_expr().linear(); }

BasicValue cog(const std::string& c, std::string_view cap) { return BasicValue::cog_val(c, lin(cap)); }
BasicValue size(std::string_view s) { return BasicValue::of_size(lin(s)); }

Atom fib_call(const std::string& f, const std::string& c, std::string_view n) {
  return Atom::async_call(f, "fib", {cog(c, "e"), size(n)}, BasicValue::unknown());
}

CostEquationSystem system_of(const std::string& corpus_file) {
  return translate_program(btypes::type_program(*tmltest::corpus(corpus_file)));
}

std::vector<std::string> strs(const std::vector<const CostEquation*>& eqs) {
  std::vector<std::string> out;
  for (const auto* e : eqs) out.push_back(e->str());
  return out;
}

}  // namespace

TEST(TranslateAtom, Cost) {
  FreshNames fresh;
  auto [psi, e] = translate_atom({}, "c", CostExpr::zero(), Atom::cost(lin("1"), lin("e")), fresh);
  EXPECT_TRUE(psi.empty());
  EXPECT_EQ(simplify(e).str(), "1/e");
}

TEST(TranslateAtom, NewCogChangesNothing) {
  FreshNames fresh;
  auto [psi, e] = translate_atom({}, "c", CostExpr::ratio(lin("1"), lin("e")), Atom::new_cog("d", lin("e")), fresh);
  EXPECT_TRUE(psi.empty());
  EXPECT_EQ(e.str(), "1/e");
}

TEST(TranslateAtom, SyncCallAddsTheCallee) {
  FreshNames fresh;
  Atom a = Atom::sync_call("fib", {cog("c", "e"), size("n - 1")}, BasicValue::unknown());
  auto [psi, e] = translate_atom({}, "c", CostExpr::zero(), a, fresh);
  EXPECT_EQ(simplify(e).str(), "fib(e, n - 1)");
}

TEST(TranslateAtom, UnknownArgumentsBecomeFreshNames) {
  FreshNames fresh;
  Atom a = Atom::sync_call("m", {cog("c", "e"), BasicValue::unknown(), BasicValue::unknown()}, BasicValue::unknown());
  auto [psi, e] = translate_atom({}, "c", CostExpr::zero(), a, fresh);
  EXPECT_EQ(simplify(e).str(), "m(e, _u1, _u2)");
}

TEST(TranslateAtom, FibTrace) {
  FreshNames fresh;
  CostExpr e = CostExpr::ratio(lin("1"), lin("e"));
  auto [psi1, e1] = translate_atom({}, "c", e, fib_call("f", "c", "n - 1"), fresh);
  EXPECT_EQ(e1.str(), "1/e");
  auto [psi, e2] = translate_atom(psi1, "c", e1, fib_call("g", "c2", "n - 2"), fresh);
  EXPECT_EQ(psi.entries().size(), 2u);
  auto [psi2, e3] = translate_atom(psi, "c", e2, Atom::sync("f"), fresh);
  EXPECT_EQ(simplify(e3).str(), "1/e + fib(e, n - 1)");
  ASSERT_EQ(psi2.entries().size(), 1u);
  EXPECT_EQ(psi2.entries()[0].future, "g");
  auto [psi3, e4] = translate_atom(psi2, "c", e3, Atom::sync("g"), fresh);
  EXPECT_TRUE(psi3.empty());
  EXPECT_EQ(simplify(e4).str(), "1/e + max(fib(e, n - 1), fib(e, n - 2))");
}

TEST(TranslateAtom, SameCogSyncChargesEveryPendingCallOnThatCog) {
  FreshNames fresh;
  Atom s = Atom::async_call("f", "server", {cog("c", "e")}, size("0"));
  Atom l = Atom::async_call("g", "print_log", {cog("c", "e")}, size("0"));
  auto [p1, e1] = translate_atom({}, "c", CostExpr::zero(), s, fresh);
  auto [p2, e2] = translate_atom(p1, "c", e1, l, fresh);
  auto [p3, e3] = translate_atom(p2, "c", e2, Atom::sync("f"), fresh);
  EXPECT_TRUE(p3.empty());
  EXPECT_EQ(simplify(e3).str(), "server(e) + print_log(e)");
}

TEST(TranslateAtom, AbsentFutureIsFree) {
  FreshNames fresh;
  auto [psi, e] = translate_atom({}, "c", CostExpr::ratio(lin("1"), lin("e")), Atom::sync("f"), fresh);
  EXPECT_EQ(e.str(), "1/e");
}

TEST(TranslateAtom, DoubleGetChargesOnce) {
  FreshNames fresh;
  auto [p1, e1] = translate_atom({}, "c", CostExpr::zero(), fib_call("f", "c", "n"), fresh);
  auto [p2, e2] = translate_atom(p1, "c", e1, Atom::sync("f"), fresh);
  auto [p3, e3] = translate_atom(p2, "c", e2, Atom::sync("f"), fresh);
  EXPECT_EQ(simplify(e3).str(), "fib(e, n)");
}

TEST(TranslateBType, FibBody) {
  btypes::BProgram bp = btypes::type_program(*tmltest::corpus("fib_cap1.tml"));
  const auto& fib = *bp.find("fib");
  FreshNames fresh;
  auto branches = translate_btype(Branch{}, fib.header[0].cog, fib.body, fresh);
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_TRUE(branches[0].psi.empty());
  EXPECT_EQ(simplify(branches[0].cost).str(), "0");
  EXPECT_EQ(branches[0].guard.at(0).str(lang::Notation::Math), "n ≤ 1");
  EXPECT_TRUE(branches[1].psi.empty());
  EXPECT_EQ(simplify(branches[1].cost).str(), "1/e + max(fib(e, n - 1), fib(e, n - 2))");
  EXPECT_EQ(branches[1].guard.at(0).str(lang::Notation::Math), "n ≥ 2");
}

TEST(TranslateBType, ZeroLeafKeepsTheBranch) {
  FreshNames fresh;
  Branch start{{}, {}, CostExpr::ratio(lin("3"), lin("e"))};
  auto out = translate_btype(start, "c", BType::leaf(Atom::zero(), nullptr), fresh);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].cost.str(), "3/e");
  EXPECT_TRUE(out[0].guard.empty());
}

TEST(TranslateBType, UnguardedChoice) {
  FreshNames fresh;
  auto b = BType::choice(BType::leaf(Atom::cost(lin("1"), lin("e")), nullptr),
                         BType::leaf(Atom::cost(lin("2"), lin("e")), nullptr));
  auto out = translate_btype(Branch{}, "c", b, fresh);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].guard, out[1].guard);
  EXPECT_EQ(simplify(out[0].cost).str(), "1/e");
  EXPECT_EQ(simplify(out[1].cost).str(), "2/e");
}

TEST(Drain, Empty) {
  FreshNames fresh;
  EXPECT_TRUE(drain_residual({}, "c", fresh).is_zero());
}

TEST(Drain, CrossCogEntry) {
  FreshNames fresh;
  TransEnv psi;
  psi.add(PendingCall{"f", CostExpr::ratio(lin("1"), lin("e")), "m", {cog("d", "e"), size("k")}});
  EXPECT_EQ(simplify(drain_residual(psi, "c", fresh)).str(), "m(e, k) + 1/e");
}

TEST(Drain, TwoSameCogEntries) {
  FreshNames fresh;
  TransEnv psi;
  psi.add(PendingCall{"f", CostExpr::zero(), "a", {cog("c", "e")}});
  psi.add(PendingCall{"g", CostExpr::zero(), "b", {cog("c", "e")}});
  EXPECT_EQ(simplify(drain_residual(psi, "c", fresh)).str(), "a(e) + b(e)");
}

TEST(TranslateMethod, Fib) {
  auto sys = system_of("fib_cap1.tml");
  EXPECT_EQ(strs(sys.equations_for("fib")),
            (std::vector<std::string>{"fib(e, n) = 0 [n ≤ 1]",
                                      "fib(e, n) = 1/e + max(fib(e, n - 1), fib(e, n - 2)) [n ≥ 2]"}));
}

TEST(TranslateMethod, Wait) {
  auto sys = system_of("wait_timer.tml");
  EXPECT_EQ(strs(sys.equations_for("wait")), std::vector<std::string>{"wait(e, n) = n/e [true]"});
}

TEST(TranslateMethod, UnsynchronisedCallIsCharged) {
  auto p = tmltest::program(R"(
Int work() { job(3); return 0; }
Int fire() { Fut<Int> f; Class o; o = new local Class; f = o!work(); return 0; }
{ } with 1
)");
  auto sys = translate_program(btypes::type_program(*p));
  EXPECT_EQ(strs(sys.equations_for("fire")), std::vector<std::string>{"fire(e) = work(e) [true]"});
}

TEST(TranslateMethod, WrapperWithLogSumsBothCalls) {
  auto sys = system_of("wrapper_with_log.tml");
  auto eqs = sys.equations_for("wrapper_with_log");
  ASSERT_EQ(eqs.size(), 1u);
  EXPECT_EQ(eqs[0]->body.str(), "1/e + server(e) + print_log(e)");
}

TEST(TranslateMethod, WrapperSameHasOneServerSummand) {
  auto sys = system_of("wrapper_same.tml");
  auto eqs = sys.equations_for("wrapper");
  ASSERT_EQ(eqs.size(), 1u);
  const CostExpr& b = eqs[0]->body;
  ASSERT_EQ(b.kind, CostExpr::Kind::Add);
  int servers = 0;
  for (const auto& o : b.ops) {
    EXPECT_NE(o.kind, CostExpr::Kind::Max);
    if (o.kind == CostExpr::Kind::Apply && o.callee == "server") ++servers;
  }
  EXPECT_EQ(servers, 1);
}

TEST(TranslateProgram, FibEntry) {
  auto sys = system_of("fib_cap1.tml");
  EXPECT_EQ(sys.entry, "main");
  EXPECT_EQ(strs(sys.equations_for("main")), std::vector<std::string>{"main(n) = fib(1, n) [true]"});
  EXPECT_EQ(sys.formals.at("main"), std::vector<std::string>{"n"});
}

TEST(TranslateProgram, EmptyMain) {
  auto sys = translate_program(btypes::type_program(*tmltest::program("{ } with 1")));
  EXPECT_EQ(strs(sys.equations_for("main")), std::vector<std::string>{"main() = 0 [true]"});
}

TEST(TranslateProgram, UndefinedSymbol) {
  btypes::BProgram bp = btypes::type_program(*tmltest::corpus("wait_timer.tml"));
  bp.methods.clear();
  EXPECT_THROW(translate_program(bp), UndefinedSymbol);
}

TEST(TranslateProgram, FreeVariablesAreFormalsOrFresh) {
  for (const char* f : {"fib_cap1.tml", "fib_alt.tml", "wrapper_same.tml", "wrapper_with_external_log.tml",
                        "wait_timer.tml", "fake_one.tml", "foo.tml"}) {
    auto sys = system_of(f);
    for (const auto& eq : sys.equations) {
      std::set<std::string> allowed(eq.formals.begin(), eq.formals.end());
      for (const auto& x : eq.body.vars()) EXPECT_TRUE(allowed.count(x) || x.starts_with("_u")) << f << ": " << x;
      for (const auto& g : eq.guard)
        for (const auto& x : g.vars()) EXPECT_TRUE(allowed.count(x) || x.starts_with("_u")) << f << ": " << x;
    }
  }
}

TEST(Simplify, FactorsCommonSummandsOutOfMax) {
  CostExpr a = CostExpr::ratio(lin("1"), lin("e"));
  CostExpr f = CostExpr::apply("f", {lin("n")});
  CostExpr g = CostExpr::apply("g", {lin("n")});
  EXPECT_EQ(simplify(CostExpr::max({a + f, a + g})).str(), "1/e + max(f(n), g(n))");
  EXPECT_EQ(simplify(CostExpr::max({f, f})).str(), "f(n)");
  EXPECT_EQ(simplify(CostExpr::add({CostExpr::zero(), f})).str(), "f(n)");
}
