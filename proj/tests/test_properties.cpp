#include "generators.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace tmlcost;
using tmltest::q;

using namespace tmltest::gen;
using btypes::Atom;
using btypes::BTypePtr;

TEST(Properties, ParserRoundTrip) {
  int parsed = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    std::string src = SyntaxGen(seed).program();
    lang::Program p;
    try {
      p = lang::parse_program(src);
    } catch (const std::exception& e) {
      FAIL() << "seed " << seed << ": generated program rejected: " << e.what() << "\n" << src;
    }
    ++parsed;
    std::string printed = lang::print_program(p);
    lang::Program again = lang::parse_program(printed);
    ASSERT_EQ(again, p) << "seed " << seed << "\n" << src << "\n---\n" << printed;
    ASSERT_EQ(lang::print_program(again), printed) << "seed " << seed;
  }
  EXPECT_EQ(parsed, 500);
}

TEST(Properties, ClassificationIsAPartition) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    lang::Program p = lang::parse_program(SyntaxGen(seed).program());
    std::function<void(const lang::Stmt&)> walk = [&](const lang::Stmt& s) {
      if (auto a = s.as<lang::AssignStmt>()) {
        if (auto pure = std::get_if<lang::PureRhs>(&a->rhs)) {
          const lang::Expr& e = pure->expr;
          lang::Expr again = lang::parse_expr(lang::print_expr(e));
          EXPECT_EQ(again.cls(), e.cls());
        }
      } else if (auto seq = s.as<lang::SeqStmt>()) {
        walk(*seq->first);
        walk(*seq->rest);
      } else if (auto i = s.as<lang::IfStmt>()) {
        walk(*i->then_branch);
        walk(*i->else_branch);
      }
    };
    walk(*p.main.body);
    for (const auto& m : p.methods) walk(*m.body);
  }
}

TEST(Properties, PsiConservation) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    BTypeGen gen(seed);
    BTypePtr b = gen.btype(3);
    costgen::FreshNames fresh;
    auto branches = costgen::translate_btype(costgen::Branch{}, "c", b, fresh);
    auto ps = btypes::paths(b);
    ASSERT_EQ(branches.size(), ps.size()) << "seed " << seed;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      std::set<std::string> issued;
      for (const auto& a : ps[i].atoms)
        if (a.kind == Atom::Kind::AsyncCall || a.kind == Atom::Kind::SyncCall) issued.insert(a.method);
      costgen::CostExpr total = branches[i].cost + costgen::drain_residual(branches[i].psi, "c", fresh);
      EXPECT_EQ(applied(total), issued) << "seed " << seed << " path " << i;
      EXPECT_EQ(applied(costgen::simplify(total)), issued) << "seed " << seed << " path " << i;
      EXPECT_EQ(branches[i].guard.size(), ps[i].guards.size());
    }
  }
}

TEST(Properties, TickProgress) {
  int ticks = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto p = tmltest::program(TimedGen(seed).program());
    for (std::uint64_t sched = 0; sched < 3; ++sched) {
      interp::Configuration c = interp::init_configuration(p);
      interp::Scheduler s(sched == 0 ? interp::SchedulerPolicy::fifo() : interp::SchedulerPolicy::random(seed + sched));
      for (int guard = 0; guard < 100000; ++guard) {
        interp::StepOutcome o = interp::step(c, s);
        if (o.kind == interp::StepOutcome::Kind::Progress) continue;
        if (o.kind != interp::StepOutcome::Kind::Stable) break;
        interp::Stability st = interp::stability_time(c);
        ASSERT_EQ(st.kind, interp::Stability::Kind::StronglyStable) << "seed " << seed;
        ASSERT_EQ(st.t, o.t);
        ASSERT_FALSE(interp::any_rule_enabled(c)) << "seed " << seed;
        Rational before = c.elapsed;
        interp::tick(c, st.t);
        ++ticks;
        ASSERT_EQ(c.elapsed, before + st.t);
        ASSERT_TRUE(interp::any_rule_enabled(c)) << "seed " << seed;
        interp::StepOutcome next = interp::step(c, s);
        ASSERT_EQ(next.rule, "Job-0") << "seed " << seed;
      }
    }
  }
  EXPECT_GT(ticks, 100);
}

TEST(Properties, GeneratedProgramsRespectTheirBound) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    std::string src = TimedGen(seed).program();
    cli::Analysis a = cli::analyze_program(tmltest::program(src));
    cli::CheckReport r = cli::check_program(a, {{}}, interp::SchedulerPolicy::exhaustive(8), {});
    const auto& pt = r.points.at(0);
    ASSERT_NE(r.verdict, cli::Verdict::Fail)
        << "seed " << seed << ": elapsed " << pt.max_elapsed.str() << " > bound " << pt.bound.str() << "\n"
        << src << "\n"
        << a.equations.str();
    if (r.verdict == cli::Verdict::Pass) ++checked;
  }
  EXPECT_GT(checked, 140);
}

TEST(Properties, FutureLinearityAndRestriction) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto p = tmltest::program(TimedGen(seed).program());
    btypes::BProgram bp = btypes::type_program(*p);
    std::vector<const btypes::MethodBType*> all{&bp.main};
    for (const auto& m : bp.methods) all.push_back(&m);
    for (const auto* m : all) {
      for (const auto& path : btypes::paths(m->body)) {
        std::map<std::string, int> introduced, checked;
        std::set<std::string> cogs{m->header.at(0).cog};
        for (const auto& a : path.atoms) {
          if (a.kind == Atom::Kind::NewCog) cogs.insert(a.name);
          if (a.kind == Atom::Kind::AsyncCall) ++introduced[a.name];
          if (a.kind == Atom::Kind::Sync) ++checked[a.name];
          if (a.kind == Atom::Kind::AsyncCall || a.kind == Atom::Kind::SyncCall)
            EXPECT_TRUE(cogs.count(a.header.at(0).cog)) << "seed " << seed << " " << a.str();
        }
        for (const auto& [f, n] : introduced) EXPECT_EQ(n, 1) << "seed " << seed << " " << f;
        for (const auto& [f, n] : checked) EXPECT_LE(n, 1) << "seed " << seed << " " << f;
      }
    }
  }
}

TEST(Properties, SizeGuardsPartitionIntegers) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto p = tmltest::program(TimedGen(seed).program());
    auto sys = costgen::translate_program(btypes::type_program(*p));
    for (const auto& [sym, formals] : sys.formals) {
      if (sym == sys.entry) continue;
      for (int n = -3; n <= 5; ++n) {
        std::vector<std::optional<Rational>> args(formals.size());
        for (std::size_t i = 0; i < formals.size(); ++i) args[i] = formals[i] == "n" ? q(n) : q(1);
        // each argument vector is covered by some equation
        EXPECT_NO_THROW(costsolve::eval_cost(sys, sym, args)) << "seed " << seed << " " << sym << " n=" << n;
      }
    }
  }
}

TEST(Properties, ScheduleIndependentOutcome) {
  struct Case {
    const char* file;
    interp::Inputs in;
  };
  std::vector<Case> cases{{"wait_timer.tml", {}}, {"wrapper_same.tml", {}}, {"wrapper_with_log.tml", {}}};
  for (int n = 0; n <= 6; ++n) cases.push_back({"fib_cap1.tml", {{"n", q(n)}}});
  for (const auto& c : cases) {
    auto ex = interp::explore(tmltest::corpus(c.file), c.in, 256, {});
    for (const auto& t : ex.traces) EXPECT_EQ(t.outcome, interp::RunOutcome::Terminated) << c.file;
  }
}

TEST(Properties, ReplayReproducesElapsed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto p = tmltest::program(TimedGen(seed).program());
    interp::Trace a = interp::run(p, {}, interp::SchedulerPolicy::random(seed), {});
    interp::Scheduler replay(interp::SchedulerPolicy::exhaustive(1 << 30), a.choices);
    interp::Trace b = interp::run(p, {}, replay, {});
    EXPECT_EQ(a.elapsed, b.elapsed) << "seed " << seed;
    EXPECT_EQ(a.steps, b.steps);
  }
}
