#include <catch2/catch.hpp>

#include <fstream>

#include "modforms2/eval.hpp"
#include "modforms2/identities.hpp"

using namespace modforms2;

namespace {

const Environment& test_env() {
  static Environment env = make_environment(16);
  return env;
}

}  // namespace

TEST_CASE("parser builds the expected trees") {
  ExprPtr e = parse("delta(Ecal2) - Ecal2^2/4");
  REQUIRE(e->kind == Expr::Kind::Sub);
  CHECK(e->lhs->kind == Expr::Kind::Call);
  CHECK(e->lhs->name == "delta");
  REQUIRE(e->rhs->kind == Expr::Kind::Div);
  CHECK(e->rhs->lhs->kind == Expr::Kind::Pow);
  CHECK(e->rhs->lhs->exponent == 2);
  CHECK(e->rhs->rhs->literal == 4);

  ExprPtr f = parse("2*scale2(E2) - E2");
  REQUIRE(f->kind == Expr::Kind::Sub);
  CHECK(f->lhs->kind == Expr::Kind::Mul);

  // precedence: ^ over unary minus over * / over + -
  ExprPtr g = parse("-E2^2");
  REQUIRE(g->kind == Expr::Kind::Call);
  CHECK(g->name == "neg");
  CHECK(g->args[0]->kind == Expr::Kind::Pow);

  ExprPtr h = parse("1 - 2 - 3");  // left associative
  REQUIRE(h->kind == Expr::Kind::Sub);
  CHECK(h->lhs->kind == Expr::Kind::Sub);

  CHECK(parse("E2^-1")->exponent == -1);
  CHECK(parse("  delta ( E2 ) ")->kind == Expr::Kind::Call);
}

TEST_CASE("parser reports byte offsets") {
  try {
    parse("delta(");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.offset() == 6);
    CHECK(std::string(e.what()).find("offset 6") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("1 + * 2"), parse_error);
  CHECK_THROWS_AS(parse("foo(E2)"), parse_error);   // unknown function
  CHECK_THROWS_AS(parse("E2^E4"), parse_error);     // exponent must be literal
  CHECK_THROWS_AS(parse("(1+2"), parse_error);
  CHECK_THROWS_AS(parse(""), parse_error);
  CHECK_THROWS_AS(parse("1 2"), parse_error);
}

TEST_CASE("print-parse round trip is stable") {
  for (const std::string text :
       {"delta(Ecal2) - Ecal2^2/4", "2*scale2(E2) - E2", "-(u2 + u3)",
        "(4*delta(Ecal2) - Ecal2^2)^3/(1 - s)", "3/2*dlog(Dcal) - 1/2*dlog(Delta)",
        "a - (b - c)", "a/(b*c)/d", "-E2^2", "(-E2)^2", "2*-3", "lam2(Ecal4)^-2"}) {
    ExprPtr once = parse(text);
    std::string printed = print(once);
    ExprPtr twice = parse(printed);
    INFO(text << "  ->  " << printed);
    CHECK(expr_equal(once, twice));
    CHECK(print(twice) == printed);
  }
}

TEST_CASE("round trip across the shipped identity file") {
  std::ifstream in(MODFORMS2_DATA_DIR "/identities.txt");
  REQUIRE(in.good());
  auto defs = parse_identity_file(in);
  REQUIRE(defs.size() == identity_registry().size());
  std::size_t clauses = 0;
  for (std::size_t i = 0; i < defs.size(); ++i) {
    CHECK(defs[i].id == identity_registry()[i].id);
    for (const auto& [lhs, rhs] : defs[i].clauses) {
      ++clauses;
      ExprPtr l = parse(lhs);
      CHECK(expr_equal(l, parse(print(l))));
      ExprPtr r = parse(rhs);
      CHECK(expr_equal(r, parse(print(r))));
    }
  }
  CHECK(clauses >= identity_registry().size());

  // the shipped file is exactly the dump of the built-in registry
  std::ifstream again(MODFORMS2_DATA_DIR "/identities.txt");
  std::string content((std::istreambuf_iterator<char>(again)),
                      std::istreambuf_iterator<char>());
  CHECK(content == dump_identity_file());
}

TEST_CASE("eval against the catalog environment") {
  const Environment& env = test_env();

  // E2 = 3 Ecal2 - 2 Et2
  GradedSeries lhs = eval(parse("3*Ecal2 - 2*Et2"), env);
  GradedSeries e2 = env.get("E2");
  CHECK(eq_to_order(lhs.body(), e2.body(), env.floor24()).equal);

  // (Et2^2 - Ecal4)/64 is the weight-4 form
  GradedSeries d = eval(parse("(Et2^2 - Ecal4)/64"), env);
  CHECK(eq_to_order(d.body(), env.get("Dcal").body(), env.floor24()).equal);

  // compositionality: a subtree evaluates to the same series on its own
  GradedSeries whole = eval(parse("delta(Dcal) - Ecal2*Dcal"), env);
  GradedSeries part1 = eval(parse("delta(Dcal)"), env);
  GradedSeries part2 = eval(parse("Ecal2*Dcal"), env);
  CHECK(eq_to_order(whole.body(), (part1 - part2).body(), env.floor24()).equal);
  CHECK(whole.body().known_zero());
}

TEST_CASE("eval error paths") {
  const Environment& env = test_env();
  CHECK_THROWS_AS(eval(parse("nosuch + E2"), env), eval_error);

  // lambda-degree mismatch at addition: dz raises the degree
  try {
    eval(parse("dz(Dcal) - 2*delta(Dcal)"), env);
    FAIL("expected grading_error");
  } catch (const grading_error& e) {
    CHECK(e.lhs_degree() == 1);
    CHECK(e.rhs_degree() == 0);
  }

  // division precondition failures surface as series errors
  CHECK_THROWS_AS(eval(parse("E2/(Dcal - Dcal)"), env), series_error);
}

TEST_CASE("grading casts") {
  const Environment& env = test_env();
  CHECK(eval(parse("lam(Et2)"), env).lambda_degree() == 1);
  CHECK(eval(parse("lam2(Ecal4)"), env).lambda_degree() == 2);
  CHECK(eval(parse("dz(s)"), env).lambda_degree() == 1);
  CHECK(eval(parse("dlog(theta2)"), env).lambda_degree() == 0);
  // u1 - u3 carries degree 1 and equals lam(Et2)
  GradedSeries diff = eval(parse("u1 - u3"), env);
  GradedSeries cast = eval(parse("lam(Et2)"), env);
  CHECK(diff.lambda_degree() == 1);
  CHECK(eq_to_order(diff.body(), cast.body(),
                    std::min(diff.body().precision(), cast.body().precision()))
            .equal);
}

TEST_CASE("check_identity reports") {
  const Environment& env = test_env();

  IdentityReport pass = check_identity("d1", "delta(Ecal2)", "(Ecal2^2 - Ecal4)/4", env, 8);
  CHECK(pass.status == IdentityReport::Status::pass);
  CHECK(pass.order_checked >= 8);

  IdentityReport fail = check_identity("bad", "E2", "Ecal2", env, 8);
  REQUIRE(fail.status == IdentityReport::Status::fail);
  REQUIRE(fail.mismatch.has_value());
  CHECK(fail.mismatch->exponent24 == 24);
  CHECK(fail.mismatch->lhs == -24);
  CHECK(fail.mismatch->rhs == 8);

  IdentityReport grade = check_identity("grade", "dz(s)/(1-s)", "Et2", env, 8);
  CHECK(grade.status == IdentityReport::Status::error);
  CHECK(grade.message.find("lambda-degree") != std::string::npos);

  // the delta-form of the same relation passes
  IdentityReport s1 = check_identity("s1", "delta(s)/(1-s)", "Et2", env, 8);
  CHECK(s1.status == IdentityReport::Status::pass);

  // exhausting the headroom is an error, not a silent pass
  IdentityReport deep = check_identity("deep", "Dcal^20/Delta^20", "Dcal^20/Delta^20",
                                       env, env.order());
  CHECK(deep.status == IdentityReport::Status::error);
  CHECK(deep.message.find("insufficient order") != std::string::npos);

  IdentityReport syntax = check_identity("syn", "delta(", "0", env, 8);
  CHECK(syntax.status == IdentityReport::Status::error);
}
