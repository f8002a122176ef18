#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "modforms2/eval.hpp"

// The identity registry: every algebraic and differential relation between
// the catalog series, stated in the expression DSL and checked exactly,
// coefficient by coefficient, over the rationals.
//
// All z-derivative relations are pre-converted to pure delta = q d/dq form
// (or carry explicit lam/lam2 grading casts), so the exact layer never sees
// pi. The normalization note on each entry records the conversion factor
// that was divided out.

namespace modforms2 {

struct IdentityDef {
  std::string id;
  std::string summary;
  std::string normalization;  // lambda/2-power factor removed, if any
  std::vector<std::pair<std::string, std::string>> clauses;  // lhs == rhs
};

inline const std::vector<IdentityDef>& identity_registry() {
  static const std::vector<IdentityDef> reg = {
      {"R1", "level-1 quasimodular system, weight 2", "divided by 2*lam",
       {{"delta(P)", "(P^2 - Q)/12"}}},
      {"R2", "level-1 quasimodular system, weight 4", "divided by 2*lam",
       {{"delta(Q)", "(P*Q - R)/3"}}},
      {"R3", "level-1 quasimodular system, weight 6", "divided by 2*lam",
       {{"delta(R)", "(P*R - Q^2)/2"}}},
      {"M1", "level-2 quasimodular system, weight 2", "divided by 2*lam",
       {{"delta(Pcal)", "(Pcal^2 - Qcal)/4"}}},
      {"M2", "level-2 quasimodular system, tilde weight 2", "divided by 2*lam",
       {{"delta(Ptilde)", "(Ptilde*Pcal - Qcal)/2"}}},
      {"M3", "level-2 quasimodular system, weight 4", "divided by 2*lam",
       {{"delta(Qcal)", "Pcal*Qcal - Ptilde*Qcal"}}},
      {"L1", "E2 as a combination of the level-2 weight-2 series", "",
       {{"E2", "3*Ecal2 - 2*Et2"}}},
      {"L2", "Et2 from E2 at doubled argument", "",
       {{"Et2", "2*scale2(E2) - E2"}}},
      {"L3", "Ecal2 from E2 at doubled argument", "",
       {{"Ecal2", "(4*scale2(E2) - E2)/3"}}},
      {"D1", "delta of Ecal2", "divided by 2*lam",
       {{"delta(Ecal2) - Ecal2^2/4", "-Ecal4/4"}}},
      {"D2", "delta of Et2", "divided by 2*lam",
       {{"delta(Et2) - Ecal2*Et2/2", "-Ecal4/2"}}},
      {"D3", "delta of Ecal4", "divided by 2*lam",
       {{"delta(Ecal4) - Ecal2*Ecal4", "-Et2*Ecal4"}}},
      {"D4", "delta of Dcal is Ecal2 Dcal", "divided by 2*lam",
       {{"delta(Dcal)", "Ecal2*Dcal"}}},
      {"A1", "Dcal cubed against Delta at both arguments", "",
       {{"Dcal^3", "scale2(Delta)^2/Delta"}}},
      {"C1", "Chazy equation for lam*E2, delta form", "divided by 4*lam^4",
       {{"2*delta(delta(delta(E2)))", "2*E2*delta(delta(E2)) - 3*delta(E2)^2"}}},
      {"Y1", "third-order equation for lam*Ecal2, delta form, cleared",
       "divided by lam^6, multiplied through by (2y'-y^2)",
       {{"8*delta(delta(delta(Ecal2)))*(4*delta(Ecal2) - Ecal2^2)",
         "(8*Ecal2*delta(delta(Ecal2)) - 4*delta(Ecal2)^2)*(4*delta(Ecal2) - Ecal2^2) + "
         "2*(4*delta(delta(Ecal2)) - 2*Ecal2*delta(Ecal2))^2"}}},
      {"K1", "degree-4 fourth-order equation for Delta, delta form",
       "divided by (2*lam)^4",
       {{"2*delta(delta(delta(delta(Delta))))*Delta^3 - "
         "10*delta(delta(delta(Delta)))*delta(Delta)*Delta^2 - "
         "3*delta(delta(Delta))^2*Delta^2 + 24*delta(delta(Delta))*delta(Delta)^2*Delta - "
         "13*delta(Delta)^4",
         "0"}}},
      {"K2", "degree-6 fourth-order equation for Dcal, delta form",
       "divided by (2*lam)^6",
       {{"delta(delta(delta(delta(Dcal))))*(8*delta(delta(Dcal))*Dcal^4 - "
         "10*delta(Dcal)^2*Dcal^3) - 8*delta(delta(delta(Dcal)))^2*Dcal^4 + "
         "delta(delta(delta(Dcal)))*(10*delta(Dcal)^3*Dcal^2 + "
         "16*delta(delta(Dcal))*delta(Dcal)*Dcal^3) - 20*delta(delta(Dcal))^3*Dcal^3 + "
         "39*delta(delta(Dcal))^2*delta(Dcal)^2*Dcal^2 - "
         "60*delta(delta(Dcal))*delta(Dcal)^4*Dcal + 25*delta(Dcal)^6",
         "0"}}},
      {"S1", "Et2 from the hauptmodul s", "",
       {{"Et2", "delta(s)/(1 - s)"}}},
      {"S2", "Dcal from the hauptmodul s", "",
       {{"Dcal", "delta(s)^2/(64*s*(s-1)^2)"}}},
      {"S3", "Ecal4 from the hauptmodul s", "",
       {{"Ecal4", "delta(s)^2/(s*(s-1))"}}},
      {"S4", "Ecal2 from the hauptmodul s", "",
       {{"Ecal2", "dlog(delta(s)^2/(s*(s-1)^2))"}}},
      {"S5", "Schwarzian equation for s with angles (1/2,0,0), cleared",
       "divided by 4*lam^2, multiplied through by s^2 (s-1)^2 (delta s)^... cleared form",
       {{"(4*delta(delta(delta(s)))*delta(s) - 6*delta(delta(s))^2)*s^2*(s-1)^2 + "
         "2*delta(s)^4*(3/4*(s-1)^2 + s^2 - 3/4*s*(s-1))",
         "0"}}},
      {"G1", "generalized Darboux-Halphen system for u1,u2,u3 at (1/2,0,0)",
       "tau^2 = 1/4 (u1-u2)(u2-u3)",
       {{"dz(u1)", "u2*u3 - u1*(u2 + u3) + 1/4*(u1-u2)*(u2-u3)"},
        {"dz(u2)", "u3*u1 - u2*(u3 + u1) + 1/4*(u1-u2)*(u2-u3)"},
        {"dz(u3)", "u1*u2 - u3*(u1 + u2) + 1/4*(u1-u2)*(u2-u3)"}}},
      {"G2", "lam Et2 as a difference of gDH variables", "",
       {{"lam(Et2)", "u1 - u3"}}},
      {"G3", "lam Ecal2 as a sum of gDH variables", "",
       {{"lam(Ecal2)", "-(u2 + u3)"}}},
      {"G4", "Ecal4 as a product of gDH differences", "pi^2 = -lam^2",
       {{"-lam2(Ecal4)", "(u1-u3)*(u3-u2)"}}},
      {"G5", "s as the cross-ratio of the gDH variables", "",
       {{"s", "(u1-u3)/(u1-u2)"}}},
      {"H1", "paired-sum Halphen system, first pair", "",
       {{"dz(v1) + dz(v2)", "v1*v2"}}},
      {"H2", "paired-sum Halphen system, second pair", "",
       {{"dz(v2) + dz(v3)", "v2*v3"}}},
      {"H3", "paired-sum Halphen system, third pair", "",
       {{"dz(v3) + dz(v1)", "v3*v1"}}},
      {"H4", "Chazy equation for the Halphen sum v1+v2+v3", "",
       {{"dz(dz(dz(v1 + v2 + v3)))",
         "2*(v1 + v2 + v3)*dz(dz(v1 + v2 + v3)) - 3*dz(v1 + v2 + v3)^2"}}},
      {"T1", "theta fourth-power identity", "",
       {{"theta3^4", "theta2^4 + theta4^4"}}},
      {"T2", "theta logarithmic-derivative difference 2-3", "divided by 2*lam",
       {{"dlog(theta2) - dlog(theta3)", "theta4^4/8"}}},
      {"T3", "theta logarithmic-derivative difference 3-4", "divided by 2*lam",
       {{"dlog(theta3) - dlog(theta4)", "theta2^4/8"}}},
      {"T4", "theta logarithmic-derivative difference 2-4", "divided by 2*lam",
       {{"dlog(theta2) - dlog(theta4)", "theta3^4/8"}}},
      {"T5", "eta cubed as the theta product; 24th power is Delta", "",
       {{"eta^3", "theta2*theta3*theta4/2"}, {"(eta^3)^8", "Delta"}}},
      {"T6", "eta quotient at doubled argument is theta2/2", "",
       {{"scale2(eta)^2/eta", "theta2/2"}}},
      {"T7", "Delta product form equals Eisenstein form", "",
       {{"Delta", "(E4^3 - E6^2)/1728"}}},
      {"B1", "three-way equality for s", "",
       {{"j2/64", "1 + Delta/(64*scale2(Delta))"},
        {"j2/64", "((theta3^4 + theta4^4)/theta2^4)^2"}}},
      {"B2", "s against the degree-2 hauptmodul lambda", "",
       {{"s", "(2/lambda - 1)^2"}}},
      {"B3", "Et2 as logarithmic derivatives of Dcal and Delta", "divided by 2*lam",
       {{"Et2", "3/2*dlog(Dcal) - 1/2*dlog(Delta)"},
        {"Et2", "2*scale2(dlog(Delta)) - dlog(Delta)"}}},
      {"X1", "supplementary: square of E4 is E8", "",
       {{"E4^2", "E8"}}},
  };
  return reg;
}

inline const IdentityDef* find_identity(const std::string& id) {
  for (const auto& d : identity_registry())
    if (d.id == id) return &d;
  return nullptr;
}

// Identities lose precision under Laurent division (worst case: the cleared
// Schwarzian S5 costs 7 whole q-orders), so the working environment is built
// with this much extra order.
inline constexpr long kOrderHeadroom = 8;

namespace detail {
inline const Environment& engine_environment(long order_q) {
  static std::map<long, std::unique_ptr<Environment>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order_q);
  if (it == cache.end())
    it = cache.emplace(order_q,
                       std::make_unique<Environment>(make_environment(order_q + kOrderHeadroom)))
             .first;
  return *it->second;
}
}  // namespace detail

// Checks one registry entry against a prepared environment. Multi-clause
// entries pass only if every clause passes; the first failing clause is
// reported.
inline IdentityReport verify_in(const IdentityDef& def, const Environment& env,
                                long order_q) {
  IdentityReport combined;
  combined.id = def.id;
  combined.status = IdentityReport::Status::pass;
  combined.order_checked = 0;
  bool first = true;
  for (const auto& [lhs, rhs] : def.clauses) {
    IdentityReport r = check_identity(def.id, lhs, rhs, env, order_q);
    combined.ms += r.ms;
    combined.order_checked =
        first ? r.order_checked : std::min(combined.order_checked, r.order_checked);
    first = false;
    if (r.status != IdentityReport::Status::pass) {
      combined.status = r.status;
      combined.mismatch = r.mismatch;
      combined.message = r.message;
      break;
    }
  }
  return combined;
}

inline IdentityReport verify(const std::string& id, long order_q) {
  const IdentityDef* def = find_identity(id);
  if (!def) throw series_error("unknown identity id '" + id + "'");
  return verify_in(*def, detail::engine_environment(order_q), order_q);
}

inline std::vector<IdentityReport> verify_all(long order_q, const Environment& env) {
  std::vector<IdentityReport> out;
  out.reserve(identity_registry().size());
  for (const auto& def : identity_registry()) out.push_back(verify_in(def, env, order_q));
  return out;
}

inline std::vector<IdentityReport> verify_all(long order_q) {
  return verify_all(order_q, detail::engine_environment(order_q));
}

inline bool all_pass(const std::vector<IdentityReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const IdentityReport& r) {
    return r.status == IdentityReport::Status::pass;
  });
}

// --- identity file format ----------------------------------------------
// One clause per line, "id ::= lhs == rhs"; '#' starts a comment; an id
// repeated on consecutive lines accumulates clauses.

inline std::string dump_identity_file() {
  std::string out =
      "# Identity catalog: every relation is checked exactly, coefficient by\n"
      "# coefficient, to the requested q-order. Passing to order N is evidence,\n"
      "# not proof.\n";
  for (const auto& def : identity_registry()) {
    out += "# " + def.summary;
    if (!def.normalization.empty()) out += " [" + def.normalization + "]";
    out += "\n";
    for (const auto& [lhs, rhs] : def.clauses)
      out += def.id + " ::= " + lhs + " == " + rhs + "\n";
  }
  return out;
}

inline std::vector<IdentityDef> parse_identity_file(std::istream& in) {
  std::vector<IdentityDef> defs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    line.erase(0, start);
    if (line.empty()) continue;
    auto sep = line.find("::=");
    if (sep == std::string::npos)
      throw parse_error("identity line " + std::to_string(lineno) + ": missing '::='", 0);
    auto eq = line.find("==", sep + 3);
    if (eq == std::string::npos)
      throw parse_error("identity line " + std::to_string(lineno) + ": missing '=='", 0);
    std::string id = line.substr(0, sep);
    while (!id.empty() && is_space(id.back())) id.pop_back();
    std::string lhs = line.substr(sep + 3, eq - sep - 3);
    std::string rhs = line.substr(eq + 2);
    if (!defs.empty() && defs.back().id == id)
      defs.back().clauses.emplace_back(lhs, rhs);
    else
      defs.push_back(IdentityDef{id, "", "", {{lhs, rhs}}});
  }
  return defs;
}

}  // namespace modforms2
