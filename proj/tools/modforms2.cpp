// Command-line surface: series expansion dumps, exact identity verification,
// numeric cross-checks (ODE integration, transformation laws, the Schwarz
// map, and the numeric shadow of the exact suite), and user-supplied identity
// checks.
//
// Exit codes: 0 all checks passed, 1 at least one check failed, 2 usage or
// parse error.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "modforms2/modforms2.hpp"

namespace mf = modforms2;
using nlohmann::json;

namespace {

constexpr long kDefaultOrder = 64;
constexpr double kDefaultTol = 1e-10;

struct GlobalConfig {
  long order = kDefaultOrder;
  double tol = kDefaultTol;
  std::string format = "text";
  std::string output;
};

std::ostream& open_output(const GlobalConfig& cfg, std::ofstream& file) {
  if (cfg.output.empty() || cfg.output == "-") return std::cout;
  file.open(cfg.output);
  if (!file) throw mf::numeric_error("cannot open output file '" + cfg.output + "'");
  return file;
}

long env_default_order() {
  if (const char* v = std::getenv("MODFORMS2_ORDER")) {
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (end && *end == '\0' && n >= 8) return n;
    std::cerr << "warning: ignoring invalid MODFORMS2_ORDER='" << v << "'\n";
  }
  return kDefaultOrder;
}

std::vector<std::string> environment_names() {
  std::vector<std::string> names;
  for (const auto& d : mf::catalog_descriptors()) names.push_back(d.name);
  return names;
}

std::string suggest_names(const std::string& wanted) {
  std::string out;
  for (const auto& n : environment_names()) {
    if (n.size() >= 1 && wanted.size() >= 1 &&
        std::tolower(n[0]) == std::tolower(wanted[0])) {
      out += out.empty() ? n : ", " + n;
    }
  }
  if (out.empty()) {
    for (const auto& n : environment_names()) out += out.empty() ? n : ", " + n;
  }
  return out;
}

json mismatch_to_json(const std::optional<mf::Mismatch>& m) {
  if (!m) return nullptr;
  return json{{"exponent24", m->exponent24},
              {"lhs", mf::rational_pretty(m->lhs)},
              {"rhs", mf::rational_pretty(m->rhs)}};
}

json report_to_json(const mf::IdentityReport& r) {
  const char* status = r.status == mf::IdentityReport::Status::pass   ? "pass"
                       : r.status == mf::IdentityReport::Status::fail ? "fail"
                                                                      : "error";
  json j{{"id", r.id}, {"order", r.order_checked}, {"status", status},
         {"mismatch", mismatch_to_json(r.mismatch)}, {"ms", r.ms}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

void print_report_text(std::ostream& os, const mf::IdentityReport& r) {
  const char* status = r.status == mf::IdentityReport::Status::pass   ? "pass"
                       : r.status == mf::IdentityReport::Status::fail ? "FAIL"
                                                                      : "ERROR";
  os << r.id << "\t" << status << "\torder=" << r.order_checked << "\t"
     << r.ms << " ms";
  if (!r.message.empty()) os << "\t" << r.message;
  os << "\n";
}

int cmd_expand(const GlobalConfig& cfg, const std::string& name) {
  mf::Environment env = mf::make_environment(cfg.order);
  if (!env.contains(name)) {
    std::cerr << "unknown series '" << name << "'. Known names: " << suggest_names(name)
              << "\n";
    return 2;
  }
  const mf::GradedSeries& g = env.get(name);
  mf::LaurentSeries body = g.body().truncated_to(24 * cfg.order);
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  if (cfg.format == "json") {
    json terms = json::array();
    for (const auto& [e, c] : body.terms())
      terms.push_back({{"exponent24", e}, {"coefficient", mf::rational_dump(c)}});
    os << json{{"name", name},
               {"valuation", body.valuation()},
               {"precision", body.precision()},
               {"lambda", g.lambda_degree()},
               {"terms", terms}}
              .dump(2)
       << "\n";
  } else {
    mf::dump_series(os, body, g.lambda_degree());
  }
  return 0;
}

int cmd_verify(const GlobalConfig& cfg, std::vector<std::string> ids, bool all) {
  if (cfg.order < 8) {
    std::cerr << "insufficient order: the identity engine needs --order >= 8 (got "
              << cfg.order << ")\n";
    return 2;
  }
  if (all) {
    ids.clear();
    for (const auto& d : mf::identity_registry()) ids.push_back(d.id);
  }
  if (ids.empty()) {
    std::cerr << "verify: give identity ids or --all\n";
    return 2;
  }
  for (const auto& id : ids) {
    if (!mf::find_identity(id)) {
      std::cerr << "unknown identity id '" << id << "'\n";
      return 2;
    }
  }
  std::vector<mf::IdentityReport> reports;
  for (const auto& id : ids) reports.push_back(mf::verify(id, cfg.order));

  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  bool ok = mf::all_pass(reports);
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    os << arr.dump(2) << "\n";
  } else {
    os << "# exact identity verification to order " << cfg.order
       << " (evidence, not proof)\n";
    for (const auto& r : reports) print_report_text(os, r);
    os << (ok ? "all pass" : "FAILURES present") << "\n";
  }
  return ok ? 0 : 1;
}

struct NumericOutcome {
  json j;
  bool pass = false;
};

NumericOutcome numeric_ode(const GlobalConfig& cfg, const std::string& kind,
                           mf::Complex z0, mf::Complex z1, double tol) {
  mf::FieldKind k;
  if (kind == "chazy") k = mf::FieldKind::chazy;
  else if (kind == "chazy2") k = mf::FieldKind::chazy2;
  else if (kind == "dh") k = mf::FieldKind::dh;
  else if (kind == "gdh") k = mf::FieldKind::gdh;
  else if (kind == "schwarzian") k = mf::FieldKind::schwarzian;
  else throw mf::numeric_error("unknown ODE kind '" + kind + "' (chazy, chazy2, dh, gdh, schwarzian)");

  mf::ODEField field = mf::make_field(
      k, (k == mf::FieldKind::gdh || k == mf::FieldKind::schwarzian) ? mf::Complex(0.5, 0)
                                                                     : mf::Complex(0, 0));
  mf::Environment env = mf::make_environment(std::max<long>(cfg.order, 60));
  mf::FieldSeries fs = mf::field_series(field, env);
  mf::State y0 = fs.value_at(z0);
  auto res = mf::rk_integrate(field, y0, z0, z1, 1e-11);
  mf::State ref = fs.value_at(z1);
  double rel = 0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    rel = std::max(rel, std::abs(res.state[i] - ref[i]) /
                            std::max(1.0, std::abs(ref[i])));
  NumericOutcome out;
  out.pass = rel <= tol;
  out.j = json{{"check", "ode:" + kind},
               {"z0", mf::complex_to_string(z0)},
               {"z1", mf::complex_to_string(z1)},
               {"matrix", nullptr},
               {"residual", rel},
               {"tol", tol},
               {"pass", out.pass}};
  return out;
}

std::vector<NumericOutcome> numeric_transform(const GlobalConfig& cfg,
                                              const std::string& law_name,
                                              const std::string& matrix_arg,
                                              const std::string& z_arg, int count,
                                              unsigned seed, double tol) {
  mf::TransformLaw law;
  if (law_name == "E2") law = mf::TransformLaw::e2_law;
  else if (law_name == "Ecal2") law = mf::TransformLaw::ecal2_law;
  else if (law_name == "y") law = mf::TransformLaw::y_transform;
  else if (law_name == "u") law = mf::TransformLaw::u_transform;
  else throw mf::numeric_error("unknown law '" + law_name + "' (E2, Ecal2, y, u)");

  mf::Complex z = z_arg.empty()
                      ? ((law == mf::TransformLaw::y_transform ||
                          law == mf::TransformLaw::u_transform)
                             ? mf::Complex(0, 1.1)
                             : mf::Complex(0, 1))
                      : mf::parse_complex(z_arg);

  std::vector<mf::Matrix2> mats;
  if (!matrix_arg.empty()) {
    std::vector<mf::Complex> entries;
    std::stringstream ss(matrix_arg);
    std::string part;
    while (std::getline(ss, part, ',')) entries.push_back(mf::parse_complex(part));
    if (entries.size() != 4)
      throw mf::numeric_error("--matrix needs four comma-separated entries a,b,c,d");
    mats.push_back(mf::Matrix2{entries[0], entries[1], entries[2], entries[3]});
  } else if (law == mf::TransformLaw::e2_law) {
    mats = mf::random_integer_matrices(false, count, seed);
  } else if (law == mf::TransformLaw::ecal2_law) {
    mats = mf::random_integer_matrices(true, count, seed);
  } else {
    mats = mf::random_complex_matrices(count, seed, z);
  }

  mf::Environment env = mf::make_environment(std::max<long>(cfg.order, 60));
  std::vector<NumericOutcome> out;
  for (const auto& m : mats) {
    double r = mf::transform_residual(law, m, z, env);
    NumericOutcome o;
    o.pass = r <= tol;
    o.j = json{{"check", "transform:" + law_name},
               {"z0", mf::complex_to_string(z)},
               {"z1", nullptr},
               {"matrix",
                json::array({mf::complex_to_string(m.a), mf::complex_to_string(m.b),
                             mf::complex_to_string(m.c), mf::complex_to_string(m.d)})},
               {"residual", r},
               {"tol", tol},
               {"pass", o.pass}};
    out.push_back(std::move(o));
  }
  return out;
}

NumericOutcome numeric_schwarz(double tol) {
  auto res = mf::schwarz_map_check({0.1, 0.2, 0.3, 0.4, 0.5, 0.6});
  NumericOutcome out;
  out.pass = res.max_deviation <= tol;
  out.j = json{{"check", "schwarz"},
               {"z0", nullptr},
               {"z1", nullptr},
               {"matrix", nullptr},
               {"residual", res.max_deviation},
               {"tol", tol},
               {"pass", out.pass}};
  return out;
}

std::vector<NumericOutcome> numeric_shadow(const GlobalConfig& cfg, double tol) {
  // numeric shadow of the exact suite: evaluate both sides of every registry
  // clause at z = i and compare, relative to the larger magnitude.
  mf::Environment env = mf::make_environment(std::max<long>(cfg.order, 60));
  mf::Complex zi(0, 1);
  std::vector<NumericOutcome> out;
  for (const auto& def : mf::identity_registry()) {
    double worst = 0;
    for (const auto& [lhs, rhs] : def.clauses) {
      mf::GradedSeries l = mf::eval(mf::parse(lhs), env);
      mf::GradedSeries r = mf::eval(mf::parse(rhs), env);
      mf::Complex lv = mf::eval_series(l, zi).value;
      mf::Complex rv = mf::eval_series(r, zi).value;
      double rel = std::abs(lv - rv) /
                   std::max({1.0, std::abs(lv), std::abs(rv)});
      worst = std::max(worst, rel);
    }
    NumericOutcome o;
    o.pass = worst <= tol;
    o.j = json{{"check", "shadow:" + def.id}, {"z0", "0+1i"},   {"z1", nullptr},
               {"matrix", nullptr},           {"residual", worst}, {"tol", tol},
               {"pass", o.pass}};
    out.push_back(std::move(o));
  }
  return out;
}

int emit_numeric(const GlobalConfig& cfg, const std::vector<NumericOutcome>& results) {
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  bool ok = std::all_of(results.begin(), results.end(),
                        [](const NumericOutcome& o) { return o.pass; });
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& o : results) arr.push_back(o.j);
    os << arr.dump(2) << "\n";
  } else {
    for (const auto& o : results) {
      os << o.j["check"].get<std::string>() << "\tresidual=" << o.j["residual"].get<double>()
         << "\ttol=" << o.j["tol"].get<double>() << "\t"
         << (o.pass ? "pass" : "FAIL") << "\n";
    }
    os << (ok ? "all pass" : "FAILURES present") << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_check(const GlobalConfig& cfg, const std::string& lhs, const std::string& rhs) {
  if (cfg.order < 8) {
    std::cerr << "insufficient order: identity checks need --order >= 8 (got "
              << cfg.order << ")\n";
    return 2;
  }
  mf::Environment env = mf::make_environment(cfg.order + mf::kOrderHeadroom);
  mf::IdentityReport r = mf::check_identity("user", lhs, rhs, env, cfg.order);
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  if (cfg.format == "json")
    os << report_to_json(r).dump(2) << "\n";
  else
    print_report_text(os, r);
  if (r.status == mf::IdentityReport::Status::pass) return 0;
  return r.status == mf::IdentityReport::Status::fail ? 1 : 2;
}

int cmd_catalog(const GlobalConfig& cfg) {
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  if (cfg.format == "json") {
    json names = json::array();
    for (const auto& d : mf::catalog_descriptors())
      names.push_back({{"name", d.name},
                       {"weight", d.weight},
                       {"group", d.group},
                       {"constructions", d.constructions}});
    json ids = json::array();
    for (const auto& def : mf::identity_registry()) {
      json clauses = json::array();
      for (const auto& [l, r] : def.clauses) clauses.push_back(l + " == " + r);
      ids.push_back({{"id", def.id}, {"summary", def.summary}, {"clauses", clauses}});
    }
    os << json{{"series", names}, {"identities", ids}}.dump(2) << "\n";
  } else {
    os << "# series (name, weight, group, constructions)\n";
    for (const auto& d : mf::catalog_descriptors()) {
      os << d.name << "\t" << d.weight << "\t" << d.group << "\t";
      for (std::size_t i = 0; i < d.constructions.size(); ++i)
        os << (i ? "," : "") << d.constructions[i];
      os << "\n";
    }
    os << "# identities\n";
    for (const auto& def : mf::identity_registry())
      os << def.id << "\t" << def.summary << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact and numeric verification for modular q-series of level 2"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalConfig cfg;
  cfg.order = env_default_order();
  app.add_option("--order", cfg.order,
                 "q-expansion order (identity checks need >= 8)")
      ->check(CLI::Range(1L, 100000L))
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "numeric tolerance, in (0, 1e-2]")
      ->check(CLI::Range(1e-300, 1e-2))
      ->capture_default_str();
  app.add_option("--format", cfg.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--output", cfg.output, "output path (default stdout)");

  auto* expand = app.add_subcommand("expand", "print the coefficient dump of a series");
  std::string expand_name;
  expand->add_option("name", expand_name, "catalog series name")->required();

  auto* verify = app.add_subcommand("verify", "check registry identities exactly");
  std::vector<std::string> verify_ids;
  bool verify_all_flag = false;
  verify->add_option("ids", verify_ids, "identity ids");
  verify->add_flag("--all", verify_all_flag, "check the whole registry");

  auto* numeric = app.add_subcommand("numeric", "numeric cross-checks");
  std::string check_name, ode_kind = "chazy", from_arg = "i", to_arg = "0.4+0.8i";
  std::string law_name = "E2", matrix_arg, z_arg;
  int count = 20;
  unsigned seed = 20260808;
  numeric->add_option("--check", check_name, "ode | transform | schwarz | shadow")
      ->required()
      ->check(CLI::IsMember({"ode", "transform", "schwarz", "shadow"}));
  numeric->add_option("--kind", ode_kind, "ODE kind for --check ode");
  numeric->add_option("--from", from_arg, "integration start (complex, Im > 0)");
  numeric->add_option("--to", to_arg, "integration end (complex, Im > 0)");
  numeric->add_option("--law", law_name, "transformation law: E2 | Ecal2 | y | u");
  numeric->add_option("--matrix", matrix_arg, "matrix entries a,b,c,d");
  numeric->add_option("--z", z_arg, "evaluation point");
  numeric->add_option("--count", count, "number of random matrices");
  numeric->add_option("--seed", seed, "random seed");

  auto* check = app.add_subcommand("check", "check a user-supplied identity exactly");
  std::string lhs, rhs;
  check->add_option("--lhs", lhs, "left-hand side expression")->required();
  check->add_option("--rhs", rhs, "right-hand side expression")->required();

  auto* catalog = app.add_subcommand("catalog", "list series and identities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*expand) return cmd_expand(cfg, expand_name);
    if (*verify) return cmd_verify(cfg, verify_ids, verify_all_flag);
    if (*check) return cmd_check(cfg, lhs, rhs);
    if (*catalog) return cmd_catalog(cfg);
    if (*numeric) {
      double tol = cfg.tol;
      if (check_name == "ode") {
        double t = (cfg.tol == kDefaultTol) ? 1e-8 : cfg.tol;
        return emit_numeric(cfg, {numeric_ode(cfg, ode_kind, mf::parse_complex(from_arg),
                                              mf::parse_complex(to_arg), t)});
      }
      if (check_name == "transform") {
        double t = (cfg.tol == kDefaultTol) ? 1e-9 : cfg.tol;
        if (law_name == "y" || law_name == "u") t = (cfg.tol == kDefaultTol) ? 1e-7 : cfg.tol;
        return emit_numeric(
            cfg, numeric_transform(cfg, law_name, matrix_arg, z_arg, count, seed, t));
      }
      if (check_name == "schwarz") {
        double t = (cfg.tol == kDefaultTol) ? 1e-6 : cfg.tol;
        return emit_numeric(cfg, {numeric_schwarz(t)});
      }
      if (check_name == "shadow") return emit_numeric(cfg, numeric_shadow(cfg, tol));
    }
  } catch (const mf::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mf::grading_error& e) {
    std::cerr << "grading error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
