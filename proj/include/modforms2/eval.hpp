#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "modforms2/catalog.hpp"
#include "modforms2/expr.hpp"
#include "modforms2/series.hpp"

namespace modforms2 {

class eval_error : public std::runtime_error {
 public:
  eval_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Immutable snapshot binding catalog names to graded series. Every binding
// has body precision >= floor24.
class Environment {
 public:
  Environment(std::map<std::string, GradedSeries> bindings, long order_q)
      : bindings_(std::move(bindings)), order_q_(order_q), floor24_(24 * order_q) {}

  long order() const { return order_q_; }
  long floor24() const { return floor24_; }

  bool contains(const std::string& name) const { return bindings_.count(name) != 0; }

  const GradedSeries& get(const std::string& name) const {
    auto it = bindings_.find(name);
    if (it == bindings_.end())
      throw series_error("unbound name '" + name + "' in environment");
    return it->second;
  }

  const std::map<std::string, GradedSeries>& bindings() const { return bindings_; }

  // Copy with one binding's coefficient bumped (fault-injection support).
  Environment with_perturbed(const std::string& name, long exponent24,
                             const Rational& delta) const {
    Environment e = *this;
    auto it = e.bindings_.find(name);
    if (it == e.bindings_.end())
      throw series_error("unbound name '" + name + "' in environment");
    it->second = GradedSeries(it->second.lambda_degree(),
                              it->second.body().perturbed(exponent24, delta));
    return e;
  }

 private:
  std::map<std::string, GradedSeries> bindings_;
  long order_q_;
  long floor24_;
};

// Builds the full catalog at the given q-order. Constructions chosen here are
// the "primary" ones; the alternative constructions are exercised by the
// identity registry and catalog tests rather than silently substituted.
inline Environment make_environment(long order_q) {
  std::map<std::string, GradedSeries> b;
  auto plain = [&](const std::string& name, LaurentSeries s) {
    b.emplace(name, GradedSeries(0, std::move(s)));
  };

  LaurentSeries e2 = eisenstein_level1(2, order_q);
  LaurentSeries e4 = eisenstein_level1(4, order_q);
  LaurentSeries e6 = eisenstein_level1(6, order_q);
  LaurentSeries e8 = eisenstein_level1(8, order_q);
  LaurentSeries ecal2 = eisenstein_level2(2, order_q);
  LaurentSeries ecal4 = eisenstein_level2(4, order_q);
  LaurentSeries et2 = e_tilde_2(order_q);

  plain("E2", e2);
  plain("E4", e4);
  plain("E6", e6);
  plain("E8", e8);
  plain("P", e2);
  plain("Q", e4);
  plain("R", e6);
  plain("Ecal2", ecal2);
  plain("Ecal4", ecal4);
  plain("Et2", et2);
  plain("Pcal", ecal2);
  plain("Ptilde", et2);
  plain("Qcal", ecal4);
  plain("Delta", delta_fn(order_q, DeltaMode::product));
  plain("Dcal", d_cal(order_q));
  plain("j", j_fn(order_q));
  plain("j2", j2_fn(order_q));
  plain("theta2", theta(2, order_q));
  plain("theta3", theta(3, order_q));
  plain("theta4", theta(4, order_q));
  plain("eta", eta(order_q));
  plain("lambda", lambda_fn(order_q));
  plain("s", s_fn(order_q));
  for (int i = 1; i <= 3; ++i) {
    b.emplace("u" + std::to_string(i), gdh_u(i, order_q));
    b.emplace("v" + std::to_string(i), dh_u(i, order_q));
  }
  return Environment(std::move(b), order_q);
}

// Bottom-up evaluation over the environment. dz raises the lambda-degree;
// additions of unequal degrees are reported as grading errors with both
// degrees and the offending subexpression.
inline GradedSeries eval(const ExprPtr& e, const Environment& env) {
  switch (e->kind) {
    case Expr::Kind::Literal:
      return GradedSeries::constant(e->literal);
    case Expr::Kind::Name: {
      if (!env.contains(e->name))
        throw eval_error("unbound name '" + e->name + "'", e->offset);
      return env.get(e->name);
    }
    case Expr::Kind::Add:
    case Expr::Kind::Sub: {
      GradedSeries l = eval(e->lhs, env);
      GradedSeries r = eval(e->rhs, env);
      if (l.lambda_degree() != r.lambda_degree())
        throw grading_error("lambda-degree mismatch in '" + print(e) + "': " +
                                std::to_string(l.lambda_degree()) + " vs " +
                                std::to_string(r.lambda_degree()),
                            l.lambda_degree(), r.lambda_degree());
      return e->kind == Expr::Kind::Add ? l + r : l - r;
    }
    case Expr::Kind::Mul:
      return eval(e->lhs, env) * eval(e->rhs, env);
    case Expr::Kind::Div:
      return div(eval(e->lhs, env), eval(e->rhs, env));
    case Expr::Kind::Pow:
      return int_pow(eval(e->lhs, env), e->exponent);
    case Expr::Kind::Call: {
      GradedSeries a = eval(e->args[0], env);
      if (e->name == "delta") return delta(a);
      if (e->name == "dlog") return dlog(a);
      if (e->name == "dz") return z_deriv(a);
      if (e->name == "scale2") return scale_arg(a, 2);
      if (e->name == "neg") return -a;
      if (e->name == "lam") return a.with_degree(a.lambda_degree() + 1);
      if (e->name == "lam2") return a.with_degree(a.lambda_degree() + 2);
      throw eval_error("unknown function '" + e->name + "'", e->offset);
    }
  }
  throw eval_error("malformed expression", e->offset);
}

struct IdentityReport {
  std::string id;
  long order_checked = 0;  // whole powers of q actually compared
  enum class Status { pass, fail, error } status = Status::error;
  std::optional<Mismatch> mismatch;
  double ms = 0.0;
  std::string message;
};

// Parses and evaluates both sides, then compares coefficients over the whole
// common window (poles included), which must reach at least order N.
inline IdentityReport check_identity(const std::string& id, const std::string& lhs,
                                     const std::string& rhs, const Environment& env,
                                     long order_q) {
  IdentityReport rep;
  rep.id = id;
  auto t0 = std::chrono::steady_clock::now();
  auto finish = [&](IdentityReport::Status st) {
    rep.status = st;
    rep.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    return rep;
  };
  try {
    GradedSeries l = eval(parse(lhs), env);
    GradedSeries r = eval(parse(rhs), env);
    if (l.lambda_degree() != r.lambda_degree()) {
      rep.message = "lambda-degree mismatch: lhs has degree " +
                    std::to_string(l.lambda_degree()) + ", rhs " +
                    std::to_string(r.lambda_degree());
      return finish(IdentityReport::Status::error);
    }
    long common = std::min(l.body().precision(), r.body().precision());
    if (common < 24 * order_q) {
      rep.message = "insufficient order: comparison window reaches " +
                    std::to_string(common) + "/24 but order " + std::to_string(order_q) +
                    " needs " + std::to_string(24 * order_q) +
                    "/24; rebuild the environment with more headroom";
      return finish(IdentityReport::Status::error);
    }
    rep.order_checked = common / 24;
    EqResult eq = eq_to_order(l.body(), r.body(), common);
    if (eq.equal) return finish(IdentityReport::Status::pass);
    rep.mismatch = eq.mismatch;
    rep.message = "first mismatch at exponent " + std::to_string(eq.mismatch->exponent24) +
                  "/24: " + rational_pretty(eq.mismatch->lhs) + " vs " +
                  rational_pretty(eq.mismatch->rhs);
    return finish(IdentityReport::Status::fail);
  } catch (const parse_error& ex) {
    rep.message = ex.what();
    return finish(IdentityReport::Status::error);
  } catch (const grading_error& ex) {
    rep.message = ex.what();
    return finish(IdentityReport::Status::error);
  } catch (const eval_error& ex) {
    rep.message = ex.what();
    return finish(IdentityReport::Status::error);
  } catch (const series_error& ex) {
    rep.message = ex.what();
    return finish(IdentityReport::Status::error);
  }
}

}  // namespace modforms2
