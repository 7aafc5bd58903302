// recurlab -- exact finite-scale multiple-recurrence toolkit.
//
// Subcommands run one verification scenario each and write a machine-readable
// report (JSON by default, CSV for the tabular outputs).  Exit status: 0 when
// every asserted property holds, 1 on a property or convergence failure,
// 2 on a parse/input error, 3 when a precondition rejects the input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "recurlab/coupling.hpp"
#include "recurlab/cube.hpp"
#include "recurlab/density.hpp"
#include "recurlab/json_io.hpp"
#include "recurlab/mps.hpp"
#include "recurlab/random_systems.hpp"
#include "recurlab/reiter.hpp"
#include "recurlab/rotation.hpp"
#include "recurlab/roth.hpp"
#include "recurlab/symbolic.hpp"
#include "recurlab/vdc.hpp"
#include "recurlab/weights.hpp"

namespace rl = recurlab;
using rl::Json;
using rl::Rat;

namespace {

constexpr int kSchemaVersion = 1;

Json base_report(const std::string& command) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

Json rats_to_json(const std::vector<Rat>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(rl::rat_str(r));
  return a;
}

Json mask_to_json(const std::vector<char>& v) {
  Json a = Json::array();
  for (char c : v) a.push_back(c ? 1 : 0);
  return a;
}

Json witness_to_json(const rl::SyndeticityWitness& w) {
  Json j;
  j["left_cover"] = w.left_cover;
  j["right_cover"] = w.right_cover;
  j["left_exact"] = w.left_exact;
  j["right_exact"] = w.right_exact;
  j["verified"] = w.verified;
  return j;
}

/// Decimal rendering of an exact rational, rounded down or up at the last
/// digit so a printed pair still encloses the true value.
std::string decimal_str(const Rat& r, int digits, bool round_up) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class num = r.get_num() * scale;
  mpz_class q, rem;
  mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), r.get_den().get_mpz_t());
  if (round_up && rem != 0) q += 1;
  bool neg = q < 0;
  mpz_class a = neg ? mpz_class(-q) : q;
  std::string ds = a.get_str();
  if (static_cast<int>(ds.size()) <= digits) ds.insert(0, digits + 1 - ds.size(), '0');
  ds.insert(ds.size() - digits, ".");
  return (neg ? "-" : "") + ds;
}

/// Rational parser that also accepts decimal literals such as "3.19".
Rat parse_rat_flexible(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) return rl::parse_rat(s);
  std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
  if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
    throw rl::ParseError("rational '" + s + "'", "not a valid decimal literal");
  bool neg = !head.empty() && head[0] == '-';
  if (!head.empty() && (head[0] == '+' || head[0] == '-')) head = head.substr(1);
  if (head.find_first_not_of("0123456789") != std::string::npos)
    throw rl::ParseError("rational '" + s + "'", "not a valid decimal literal");
  Rat scale(1), value = head.empty() ? Rat(0) : rl::parse_rat(head);
  for (char c : tail) {
    scale /= 10;
    value += Rat(c - '0') * scale;
  }
  return neg ? Rat(-value) : value;
}

struct Output {
  std::string path;           // empty means stdout
  std::string format = "json";
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw rl::ParseError(path, "cannot open output file");
  os << text;
}

std::string csv_text(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

int emit(const Json& report, bool pass, const Output& out,
         const std::vector<std::vector<std::string>>& csv_rows = {}) {
  if (out.format == "csv") {
    if (csv_rows.empty())
      throw rl::ParseError("--format", "csv output is not available for this subcommand");
    write_text(out.path, csv_text(csv_rows));
  } else {
    write_text(out.path, report.dump(2) + "\n");
  }
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// subcommand runners
// ---------------------------------------------------------------------------

int run_roth(const std::string& system_path, const std::string& set_path, const Rat& eps,
             const Output& out) {
  rl::FiniteMPS X = rl::system_from_json(rl::load_json_file(system_path));
  std::vector<char> A = rl::set_from_json(rl::load_json_file(set_path), X);
  auto rep = rl::roth_verify(X, A, eps);
  const rl::FiniteGroup& G = *X.group();

  Json j = base_report("roth-verify");
  j["statement"] =
      "correlations above mu(A)^4 - epsilon occur on a syndetic set realized by "
      "translate intersections";
  j["group"] = Json{{"name", G.name()}, {"order", G.order()}};
  j["mu_A"] = rl::rat_str(rep.mu_A);
  j["epsilon"] = rl::rat_str(rep.epsilon);
  j["threshold"] = rl::rat_str(rep.threshold);
  j["c"] = rats_to_json(rep.c);
  Json r = Json::array();
  for (int g = 0; g < G.order(); ++g)
    if (rep.in_R[g]) r.push_back(g);
  j["R_epsilon"] = r;
  j["syndeticity"] = witness_to_json(rep.syndetic);
  j["checks"] = Json{{"id_in_R", rep.id_in_R},
                     {"c_id_matches", rep.c_id_matches},
                     {"bounds_ok", rep.bounds_ok},
                     {"identity_ok", rep.identity_ok},
                     {"r_nonempty", rep.r_nonempty},
                     {"cover_verified", rep.syndetic.verified}};
  bool pass = rep.id_in_R && rep.c_id_matches && rep.bounds_ok && rep.identity_ok &&
              rep.r_nonempty && rep.syndetic.verified;
  j["pass"] = pass;

  std::vector<std::vector<std::string>> csv{{"g", "c_g", "in_R_epsilon"}};
  for (int g = 0; g < G.order(); ++g)
    csv.push_back({std::to_string(g), rl::rat_str(rep.c[g]), rep.in_R[g] ? "1" : "0"});
  return emit(j, pass, out, csv);
}

int run_cube(const std::string& system_path, std::uint64_t seed, int trials, const Output& out) {
  rl::Rng rng(seed);
  std::vector<std::pair<std::string, rl::FiniteMPS>> cases;
  if (!system_path.empty())
    cases.emplace_back("input", rl::system_from_json(rl::load_json_file(system_path)));
  if (system_path.empty() && trials == 0) trials = 10;
  for (int t = 0; t < trials; ++t)
    cases.emplace_back("random" + std::to_string(t), rl::random_pair_catalog(rng));

  Json j = base_report("cube-check");
  j["statement"] =
      "the cube measure has unit mass, base marginals, invariant commuting sides, and "
      "does not depend on the averaging descriptor";
  j["seed"] = seed;
  Json arr = Json::array();
  bool pass = true;
  for (auto& [label, X] : cases) {
    rl::CubeSystem C(X);
    auto v = rl::verify_cube(C);
    rl::Observable f0 = rl::random_unit_observable(X, rng);
    rl::Observable f1 = rl::random_unit_observable(X, rng);
    rl::Observable f2 = rl::random_unit_observable(X, rng);
    rl::Observable f3 = rl::random_unit_observable(X, rng);
    bool route = C.integral(f0, f1, f2, f3) == C.direct_double_average(f0, f1, f2, f3);
    // two distinct validated descriptors must give one Cesaro value
    std::vector<std::vector<Rat>> u(X.group()->order());
    for (int g = 0; g < X.group()->order(); ++g) {
      rl::Observable moved = rl::pointwise_mul(
          f0, rl::pointwise_mul(rl::pullback(f1, X.perm(0, g)), rl::pullback(f3, X.perm(0, g))));
      u[g] = {rl::integral(X, moved)};
    }
    auto lim_a = rl::cesaro_limit(u, rl::ReiterSequence::uniform(X.group()));
    auto lim_b = rl::cesaro_limit(u, rl::ReiterSequence::perturbed_uniform(X.group()));
    bool descriptor = lim_a == lim_b;
    bool ok = v.ok() && route && descriptor;
    pass = pass && ok;
    Json c;
    c["label"] = label;
    c["group"] = X.group()->name();
    c["points"] = X.points();
    c["total_mass_one"] = v.total_mass_one;
    c["marginals_match"] = v.marginals_match;
    c["invariant"] = v.invariant;
    c["sides_commute"] = v.sides_commute;
    c["integral_matches_double_average"] = route;
    c["descriptor_independent"] = descriptor;
    if (!v.detail.empty()) c["detail"] = v.detail;
    c["pass"] = ok;
    arr.push_back(std::move(c));
  }
  j["cases"] = std::move(arr);
  j["pass"] = pass;
  return emit(j, pass, out);
}

int run_k3(const std::string& system_path, std::uint64_t seed, int trials, const Output& out) {
  rl::Rng rng(seed);
  std::vector<std::pair<std::string, rl::FiniteMPS>> cases;
  if (!system_path.empty())
    cases.emplace_back("input", rl::system_from_json(rl::load_json_file(system_path)));
  if (system_path.empty() && trials == 0) trials = 5;
  for (int t = 0; t < trials; ++t) {
    int sizes[3];
    do {
      for (int& s : sizes) s = 2 + rng.below(2);
    } while (sizes[0] * sizes[1] * sizes[2] > 12);
    cases.emplace_back("random" + std::to_string(t),
                       rl::triple_product_translation_system(rl::FiniteGroup::cyclic(sizes[0]),
                                                             rl::FiniteGroup::cyclic(sizes[1]),
                                                             rl::FiniteGroup::cyclic(sizes[2])));
  }

  Json j = base_report("k3-check");
  j["statement"] =
      "the three-fold coupling is an invariant coupling with commuting actions and the "
      "triple average norm matches its coupled conditional expectation";
  j["seed"] = seed;
  Json arr = Json::array();
  bool pass = true;
  for (auto& [label, X] : cases) {
    rl::CoupledSystem C(X);
    auto v = rl::verify_coupling(C);
    rl::Observable f1 = rl::random_unit_observable(X, rng);
    rl::Observable f2 = rl::random_unit_observable(X, rng);
    rl::Observable f3 = rl::random_unit_observable(X, rng);
    auto k3 = rl::k3_average(X, f1, f2, f3);
    bool ok = v.ok() && k3.routes_agree && k3.lift_implication_ok;
    pass = pass && ok;
    Json c;
    c["label"] = label;
    c["group"] = X.group()->name();
    c["points"] = X.points();
    c["coupling"] = Json{{"total_mass_one", v.total_mass_one},
                         {"marginals_match", v.marginals_match},
                         {"invariant", v.invariant},
                         {"actions_commute", v.actions_commute},
                         {"projection_intertwines", v.projection_intertwines}};
    c["norm_sq_direct"] = rl::rat_str(k3.norm_sq_direct);
    c["norm_sq_coupling"] = rl::rat_str(k3.norm_sq_coupling);
    c["routes_agree"] = k3.routes_agree;
    c["lift_implication_ok"] = k3.lift_implication_ok;
    if (!v.detail.empty()) c["detail"] = v.detail;
    c["pass"] = ok;
    arr.push_back(std::move(c));
  }
  j["cases"] = std::move(arr);
  j["pass"] = pass;
  return emit(j, pass, out);
}

int run_vdc(std::uint64_t seed, int trials, const Output& out) {
  rl::Rng rng(seed);
  if (trials == 0) trials = 20;
  Json j = base_report("vdc-check");
  j["statement"] =
      "the squared norm of a Cesaro average is bounded by the double average of "
      "shifted inner products";
  j["seed"] = seed;
  Json arr = Json::array();
  bool pass = true;
  for (int t = 0; t < trials; ++t) {
    rl::GroupPtr G = rl::random_small_group(rng, 12);
    int dim = 1 + rng.below(3);
    std::vector<std::vector<Rat>> u(G->order(), std::vector<Rat>(dim));
    for (auto& row : u)
      for (Rat& x : row) x = rng.unit_rat() - rl::rat_of(1, 2);
    rl::ReiterSequence F = rng.flip() ? rl::ReiterSequence::uniform(G)
                                      : rl::ReiterSequence::perturbed_uniform(G);
    rl::GroupMeasure H = rl::random_group_measure(G, rng);
    auto rep = rl::vdc_verify(u, F, H);
    pass = pass && rep.holds;
    Json c;
    c["group"] = G->name();
    c["dim"] = dim;
    c["lhs"] = rl::rat_str(rep.lhs);
    c["rhs"] = rl::rat_str(rep.rhs);
    c["corollary_rhs"] = rats_to_json(rep.corollary_rhs);
    c["holds"] = rep.holds;
    arr.push_back(std::move(c));
  }
  j["cases"] = std::move(arr);
  j["pass"] = pass;
  return emit(j, pass, out);
}

int run_weights(const std::string& system_path, const std::string& set_path, const Rat& eps,
                std::uint64_t seed, int trials, const Output& out) {
  rl::Rng rng(seed);
  Json j = base_report("weights-check");
  j["statement"] =
      "the normalized plateau weight has unit mean and the weighted correlation "
      "average clears (integral f)^4 - epsilon";
  j["seed"] = seed;
  j["epsilon"] = rl::rat_str(eps);
  Json arr = Json::array();
  bool pass = true;

  std::vector<std::pair<std::string, rl::FiniteMPS>> cases;
  if (!system_path.empty())
    cases.emplace_back("input", rl::system_from_json(rl::load_json_file(system_path)));
  if (system_path.empty() && trials == 0) trials = 10;
  for (int t = 0; t < trials; ++t) {
    int a = 2 + rng.below(3), b = 2 + rng.below(2);
    cases.emplace_back(
        "random" + std::to_string(t),
        rl::product_translation_system(rl::FiniteGroup::cyclic(a), rl::FiniteGroup::cyclic(b)));
  }

  for (auto& [label, X] : cases) {
    rl::Observable f;
    if (label == "input" && !set_path.empty())
      f = rl::indicator_mask(X, rl::set_from_json(rl::load_json_file(set_path), X));
    else
      f = rl::indicator_mask(X, rl::random_set(X, rng));
    auto rep = rl::weighted_lower_bound_check(X, f, eps);
    Rat mean = rep.weight.mean();
    bool ok = (rep.advisory ? rep.kappa_bound_holds : rep.holds && rep.kappa_bound_holds) &&
              mean == 1;
    pass = pass && ok;
    Json c;
    c["label"] = label;
    c["group"] = X.group()->name();
    c["B"] = rl::rat_str(rep.B);
    c["bound"] = rl::rat_str(rep.bound);
    c["weighted_value"] = rl::rat_str(rep.weighted_value);
    c["weighted_kappa"] = rl::rat_str(rep.weighted_kappa);
    c["weight_mean"] = rl::rat_str(mean);
    c["chi"] = rats_to_json(rep.weight.chi);
    c["holds"] = rep.holds;
    c["kappa_bound_holds"] = rep.kappa_bound_holds;
    c["advisory"] = rep.advisory;
    c["pass"] = ok;
    arr.push_back(std::move(c));
  }
  j["cases"] = std::move(arr);
  j["pass"] = pass;
  return emit(j, pass, out);
}

int run_bernoulli(const Rat& exponent, const Output& out) {
  rl::ShiftGroup Z2 = rl::ShiftGroup::zd(2);
  rl::ShiftGroup D3 = rl::ShiftGroup::finite(rl::FiniteGroup::dihedral(3));

  Rat expected_mu = rl::rat_of(2, 9), expected_c = rl::rat_of(2, 243);
  int checked = 0;
  bool all_match = true;
  for (const auto& g : Z2.elements_upto(2)) {
    if (g == Z2.id()) continue;
    all_match = all_match && rl::triple_correlation(Z2, g) == expected_c;
    ++checked;
  }
  int finite_checked = 0;
  for (const auto& g : D3.elements_upto(1)) {
    if (g == D3.id()) continue;
    all_match = all_match && rl::triple_correlation(D3, g) == expected_c;
    ++finite_checked;
  }
  all_match = all_match && rl::small_correlation_set_measure(Z2) == expected_mu &&
              rl::small_correlation_set_measure(D3) == expected_mu;

  auto rep = rl::exponent_gap_check(Z2, {1, 0}, exponent);
  bool pass = rep.holds && all_match;

  Json j = base_report("counterexample-bernoulli");
  j["statement"] =
      "every off-identity triple correlation of the three-letter product system lies "
      "strictly below the set measure raised to the requested exponent";
  j["mu_A"] = rl::rat_str(rep.mu_A);
  j["c_off_identity"] = rl::rat_str(rep.c_off_identity);
  j["elements_checked_zd"] = checked;
  j["elements_checked_finite"] = finite_checked;
  j["all_correlations_match"] = all_match;
  j["exponent"] = rl::rat_str(rep.exponent);
  j["holds"] = pass;
  Rat lo = rep.critical_exponent.lower(), hi = rep.critical_exponent.upper();
  j["critical_exponent"] = Json::array({decimal_str(lo, 9, false), decimal_str(hi, 9, true)});
  j["critical_exponent_exact"] = Json::array({rl::rat_str(lo), rl::rat_str(hi)});
  j["enclosure_width"] = decimal_str(hi - lo, 12, true);
  j["precision_bits"] = static_cast<long>(rep.comparison.precision);
  j["pass"] = pass;
  return emit(j, pass, out);
}

int run_rotation(const Rat& delta, const Output& out) {
  auto rep = rl::rotation_counterexample(delta);
  bool pass = rep.strictly_less && (rep.beyond_formula_region || rep.closed_form_matches);

  Json j = base_report("counterexample-rotation");
  j["statement"] =
      "the triple-intersection Cesaro limit for the complement of a short arc falls "
      "strictly below the cube of its measure";
  j["delta"] = rl::rat_str(rep.delta);
  j["limit"] = rl::rat_str(rep.limit);
  j["cube_bound"] = rl::rat_str(rep.cube_bound);
  j["strictly_less"] = rep.strictly_less;
  j["integral_m"] = rl::rat_str(rep.integral_m);
  j["closed_form_matches"] = rep.closed_form_matches;
  j["beyond_formula_region"] = rep.beyond_formula_region;
  Json bp = Json::array();
  const auto& xs = rep.m.breakpoints();
  const auto& ys = rep.m.values();
  for (size_t i = 0; i < xs.size(); ++i)
    bp.push_back(Json{{"x", rl::rat_str(xs[i])}, {"m", rl::rat_str(ys[i])}});
  j["m"] = std::move(bp);
  j["pass"] = pass;

  std::vector<std::vector<std::string>> csv{{"x", "m_x"}};
  for (size_t i = 0; i < xs.size(); ++i) csv.push_back({rl::rat_str(xs[i]), rl::rat_str(ys[i])});
  return emit(j, pass, out, csv);
}

int run_corners(const std::string& set_path, const Rat& eps, std::uint64_t seed, int trials,
                const Output& out) {
  Json j = base_report("density-corners");
  j["statement"] =
      "corner configurations above d(E)^4 - epsilon occur for a syndetic set of shifts, "
      "matching the recurrence analysis of the translation system";
  j["epsilon"] = rl::rat_str(eps);
  Json arr = Json::array();
  bool pass = true;

  std::vector<std::pair<rl::GroupPtr, std::vector<char>>> cases;
  std::vector<std::string> labels;
  if (!set_path.empty()) {
    Json in = rl::load_json_file(set_path);
    if (!in.is_object() || !in.contains("group") || !in.contains("cells"))
      throw rl::ParseError(set_path, "expected an object with 'group' and 'cells'");
    rl::GroupPtr G = rl::group_from_json(in["group"]);
    std::vector<char> E(static_cast<size_t>(G->order()) * G->order(), 0);
    if (!in["cells"].is_array()) throw rl::ParseError(set_path, "'cells' must be an array");
    for (const auto& cell : in["cells"]) {
      if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number_integer() ||
          !cell[1].is_number_integer())
        throw rl::ParseError(set_path, "each cell must be a pair of group indices");
      int a = cell[0].get<int>(), b = cell[1].get<int>();
      if (a < 0 || a >= G->order() || b < 0 || b >= G->order())
        throw rl::ParseError(set_path, "cell index out of range");
      E[static_cast<size_t>(a) * G->order() + b] = 1;
    }
    cases.emplace_back(G, std::move(E));
    labels.push_back("input");
  } else {
    if (trials == 0) trials = 5;
    rl::Rng rng(seed);
    j["seed"] = seed;
    for (int t = 0; t < trials; ++t) {
      rl::GroupPtr G = rl::FiniteGroup::cyclic(4 + rng.below(2));
      std::vector<char> E(static_cast<size_t>(G->order()) * G->order());
      for (char& c : E) c = rng.flip() ? 1 : 0;
      cases.emplace_back(G, std::move(E));
      labels.push_back("random" + std::to_string(t));
    }
  }

  std::vector<std::vector<std::string>> csv{{"g", "corner_density", "good"}};
  for (size_t i = 0; i < cases.size(); ++i) {
    const auto& [G, E] = cases[i];
    auto rep = rl::corners_check(G, E, eps);
    bool ok = rep.id_good && rep.cross_validated && rep.syndetic.verified;
    pass = pass && ok;
    Json c;
    c["label"] = labels[i];
    c["group"] = G->name();
    c["density"] = rl::rat_str(rep.density);
    c["threshold"] = rl::rat_str(rep.threshold);
    c["corner_density"] = rats_to_json(rep.corner_density);
    c["good"] = mask_to_json(rep.good);
    c["strictly_good"] = mask_to_json(rep.strictly_good);
    c["id_good"] = rep.id_good;
    c["syndeticity"] = witness_to_json(rep.syndetic);
    c["cross_validated"] = rep.cross_validated;
    c["pass"] = ok;
    arr.push_back(std::move(c));
    if (i == 0)
      for (int g = 0; g < G->order(); ++g)
        csv.push_back({std::to_string(g), rl::rat_str(rep.corner_density[g]),
                       rep.good[g] ? "1" : "0"});
  }
  j["cases"] = std::move(arr);
  j["pass"] = pass;
  return emit(j, pass, out, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact finite-scale multiple-recurrence toolkit"};
  app.require_subcommand(1);

  std::string system_path, set_path;
  std::string epsilon = "1/100", delta = "1/5", exponent = "3.19";
  std::uint64_t seed = 1;
  int trials = 0;
  Output out;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", out.path, "write the report to this file instead of stdout");
    cmd->add_option("--format", out.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* roth = app.add_subcommand("roth-verify", "verify the large-correlation set");
  roth->add_option("--system", system_path, "system JSON file")->required();
  roth->add_option("--set", set_path, "set JSON file")->required();
  roth->add_option("--epsilon", epsilon, "slack below mu(A)^4");
  add_output(roth);

  CLI::App* cube = app.add_subcommand("cube-check", "verify cube-measure properties");
  cube->add_option("--system", system_path, "system JSON file");
  cube->add_option("--seed", seed, "seed for randomized cases");
  cube->add_option("--trials", trials, "number of randomized cases");
  add_output(cube);

  CLI::App* k3 = app.add_subcommand("k3-check", "verify three-fold coupling properties");
  k3->add_option("--system", system_path, "system JSON file (three actions)");
  k3->add_option("--seed", seed, "seed for randomized cases");
  k3->add_option("--trials", trials, "number of randomized cases");
  add_output(k3);

  CLI::App* vdc = app.add_subcommand("vdc-check", "verify the difference inequality");
  vdc->add_option("--seed", seed, "seed for randomized cases");
  vdc->add_option("--trials", trials, "number of randomized cases");
  add_output(vdc);

  CLI::App* weights = app.add_subcommand("weights-check", "verify the weighted lower bound");
  weights->add_option("--system", system_path, "system JSON file");
  weights->add_option("--set", set_path, "set JSON file (used with --system)");
  weights->add_option("--epsilon", epsilon, "slack below (integral f)^4");
  weights->add_option("--seed", seed, "seed for randomized cases");
  weights->add_option("--trials", trials, "number of randomized cases");
  add_output(weights);

  CLI::App* cx = app.add_subcommand("counterexample", "exact counterexample computations");
  cx->require_subcommand(1);
  CLI::App* bern = cx->add_subcommand("bernoulli", "product-system correlation gap");
  bern->add_option("--exponent", exponent, "exponent to certify (rational or decimal)");
  add_output(bern);
  CLI::App* rot = cx->add_subcommand("rotation", "circle-rotation triple recurrence");
  rot->add_option("--delta", delta, "arc length (rational in (0,1))");
  add_output(rot);

  CLI::App* corners = app.add_subcommand("density-corners", "corner-density bridge");
  corners->add_option("--set", set_path, "JSON file with 'group' and 'cells'");
  corners->add_option("--epsilon", epsilon, "slack below d(E)^4");
  corners->add_option("--seed", seed, "seed for randomized cases");
  corners->add_option("--trials", trials, "number of randomized cases");
  add_output(corners);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (roth->parsed()) return run_roth(system_path, set_path, rl::parse_rat(epsilon), out);
    if (cube->parsed()) return run_cube(system_path, seed, trials, out);
    if (k3->parsed()) return run_k3(system_path, seed, trials, out);
    if (vdc->parsed()) return run_vdc(seed, trials, out);
    if (weights->parsed())
      return run_weights(system_path, set_path, rl::parse_rat(epsilon), seed, trials, out);
    if (bern->parsed()) return run_bernoulli(parse_rat_flexible(exponent), out);
    if (rot->parsed()) return run_rotation(parse_rat_flexible(delta), out);
    if (corners->parsed()) return run_corners(set_path, rl::parse_rat(epsilon), seed, trials, out);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const rl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const rl::PreconditionError& e) {
    std::cerr << "precondition rejected: " << e.what() << "\n";
    return 3;
  } catch (const rl::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 1;
  } catch (const rl::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  }
}
