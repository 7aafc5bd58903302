#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "recurlab/json_io.hpp"
#include "recurlab/roth.hpp"
#include "test_support.hpp"

using namespace recurlab;

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_file(const std::string& tag) {
  static int counter = 0;
  auto p = std::filesystem::temp_directory_path() /
           ("recurlab_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
  return p.string();
}

RunResult run_cli(const std::string& args) {
  std::string capture = temp_file("out");
  std::string cmd = std::string(RECURLAB_CLI_PATH) + " " + args + " >" + capture + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  if (rc != -1 && WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
  r.out = slurp(capture);
  std::filesystem::remove(capture);
  return r;
}

}  // namespace

TEST_CASE("rationals from JSON") {
  REQUIRE(rat_from_json(Json(3), "here") == 3);
  REQUIRE(rat_from_json(Json("2/5"), "here") == rat_of(2, 5));
  REQUIRE(rat_from_json(Json("-7"), "here") == -7);
  REQUIRE_THROWS_AS(rat_from_json(Json("x"), "here"), ParseError);
  REQUIRE_THROWS_AS(rat_from_json(Json::array(), "here"), ParseError);
  REQUIRE(rat_to_json(rat_of(2, 5)) == Json("2/5"));
}

TEST_CASE("groups from JSON descriptors") {
  REQUIRE(group_from_json(Json{{"kind", "cyclic"}, {"n", 4}})->order() == 4);
  REQUIRE(group_from_json(Json{{"kind", "dihedral"}, {"m", 3}})->order() == 6);
  REQUIRE(group_from_json(Json{{"kind", "quaternion"}})->order() == 8);
  Json prod{{"kind", "product"},
            {"factors", Json::array({Json{{"kind", "cyclic"}, {"n", 2}},
                                     Json{{"kind", "cyclic"}, {"n", 3}}})}};
  REQUIRE(group_from_json(prod)->order() == 6);

  GroupPtr D3 = FiniteGroup::dihedral(3);
  GroupPtr back = group_from_json(group_to_json(*D3));
  REQUIRE(back->same_table(*D3));

  REQUIRE_THROWS_AS(group_from_json(Json{{"kind", "icosahedral"}}), ParseError);
  REQUIRE_THROWS_AS(group_from_json(Json{{"kind", "cyclic"}}), ParseError);
  REQUIRE_THROWS_AS(group_from_json(Json("cyclic")), ParseError);
}

TEST_CASE("systems round-trip through JSON") {
  FiniteMPS X = ts::two_point_swap();
  FiniteMPS back = system_from_json(system_to_json(X));
  REQUIRE(back.points() == X.points());
  REQUIRE(back.k() == X.k());
  REQUIRE(back.labels() == X.labels());
  REQUIRE(back.mass() == X.mass());
  REQUIRE(back.group()->same_table(*X.group()));
  for (int i = 0; i < X.k(); ++i)
    for (int g = 0; g < X.group()->order(); ++g) REQUIRE(back.perm(i, g) == X.perm(i, g));

  Json j = system_to_json(X);
  j.erase("group");
  REQUIRE_THROWS_AS(system_from_json(j), ParseError);

  Json misnamed = system_to_json(X);
  Json acts = Json::object();
  acts["T2"] = misnamed["actions"]["T1"];
  misnamed["actions"] = acts;
  REQUIRE_THROWS_AS(system_from_json(misnamed), ParseError);

  Json nomass = system_to_json(X);
  nomass["points"][0].erase("mass");
  REQUIRE_THROWS_AS(system_from_json(nomass), ParseError);
}

TEST_CASE("sets and observables from JSON") {
  FiniteMPS X = ts::two_point_swap();
  REQUIRE(set_from_json(Json::array({"a"}), X) == std::vector<char>{1, 0});
  REQUIRE(set_from_json(Json{{"a", 0}, {"b", 1}}, X) == std::vector<char>{0, 1});
  REQUIRE_THROWS_AS(set_from_json(Json::array({"z"}), X), ParseError);
  REQUIRE_THROWS_AS(set_from_json(Json(7), X), ParseError);

  Observable f = observable_from_json(Json{{"a", "1/2"}}, X);
  REQUIRE(f == Observable{rat_of(1, 2), Rat(0)});
  REQUIRE_THROWS_AS(observable_from_json(Json::array(), X), ParseError);
  REQUIRE_THROWS_AS(observable_from_json(Json{{"z", 1}}, X), ParseError);
}

TEST_CASE("JSON files load with located errors") {
  Json j = load_json_file(ts::data_path("two_point.json"));
  REQUIRE(j.contains("group"));
  REQUIRE_THROWS_AS(load_json_file(ts::data_path("broken.json")), ParseError);
  REQUIRE_THROWS_AS(load_json_file(ts::data_path("no_such_file.json")), ParseError);
}

TEST_CASE("fixture system reproduces the hand-checked analysis") {
  FiniteMPS X = system_from_json(load_json_file(ts::data_path("two_point.json")));
  std::vector<char> A = set_from_json(load_json_file(ts::data_path("A.json")), X);
  CorrelationReport rep = roth_verify(X, A, rat_of(1, 100));
  REQUIRE(rep.c == std::vector<Rat>{rat_of(1, 2), Rat(0)});
  REQUIRE(rep.in_R == std::vector<char>{1, 0});
}

TEST_CASE("cli: recurrence verification on the fixture") {
  std::string args = "roth-verify --system " + ts::data_path("two_point.json") + " --set " +
                     ts::data_path("A.json") + " --epsilon 1/100";
  RunResult r = run_cli(args);
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j["schema_version"] == 1);
  REQUIRE(j["command"] == "roth-verify");
  REQUIRE(j["mu_A"] == "1/2");
  REQUIRE(j["threshold"] == "21/400");
  REQUIRE(j["c"] == Json::array({"1/2", "0"}));
  REQUIRE(j["R_epsilon"] == Json::array({0}));
  REQUIRE(j["syndeticity"]["left_cover"].size() == 2);
  REQUIRE(j["syndeticity"]["verified"] == true);
  REQUIRE(j["checks"]["id_in_R"] == true);
  REQUIRE(j["checks"]["identity_ok"] == true);
  REQUIRE(j["pass"] == true);

  // byte-identical reports for identical invocations
  std::string f1 = temp_file("det1"), f2 = temp_file("det2");
  REQUIRE(run_cli(args + " --out " + f1).status == 0);
  REQUIRE(run_cli(args + " --out " + f2).status == 0);
  REQUIRE(slurp(f1) == slurp(f2));
  REQUIRE(slurp(f1) == r.out);
  std::filesystem::remove(f1);
  std::filesystem::remove(f2);

  RunResult csv = run_cli(args + " --format csv");
  REQUIRE(csv.status == 0);
  REQUIRE(csv.out == "g,c_g,in_R_epsilon\n0,1/2,1\n1,0,0\n");
}

TEST_CASE("cli: randomized subcommands are deterministic under a seed") {
  RunResult a = run_cli("cube-check --seed 7 --trials 3");
  RunResult b = run_cli("cube-check --seed 7 --trials 3");
  REQUIRE(a.status == 0);
  REQUIRE(a.out == b.out);
  Json j = Json::parse(a.out);
  REQUIRE(j["pass"] == true);
  REQUIRE(j["cases"].size() == 3);

  RunResult v = run_cli("vdc-check --seed 3 --trials 5");
  REQUIRE(v.status == 0);
  REQUIRE(Json::parse(v.out)["pass"] == true);

  RunResult k = run_cli("k3-check --seed 5 --trials 2");
  REQUIRE(k.status == 0);
  REQUIRE(Json::parse(k.out)["pass"] == true);

  RunResult w = run_cli("weights-check --seed 9 --trials 2 --epsilon 1/10");
  REQUIRE(w.status == 0);
  REQUIRE(Json::parse(w.out)["pass"] == true);

  RunResult d = run_cli("density-corners --seed 11 --trials 2 --epsilon 1/50");
  REQUIRE(d.status == 0);
  REQUIRE(Json::parse(d.out)["pass"] == true);
}

TEST_CASE("cli: product-system counterexample") {
  RunResult r = run_cli("counterexample bernoulli --exponent 3.19");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j["mu_A"] == "2/9");
  REQUIRE(j["c_off_identity"] == "2/243");
  REQUIRE(j["elements_checked_zd"] == 24);
  REQUIRE(j["elements_checked_finite"] == 5);
  REQUIRE(j["holds"] == true);
  double lo = std::stod(j["critical_exponent"][0].get<std::string>());
  double hi = std::stod(j["critical_exponent"][1].get<std::string>());
  REQUIRE(lo >= 3.191);
  REQUIRE(hi <= 3.192);
  REQUIRE(lo <= hi);

  // an exponent beyond the critical value fails honestly
  REQUIRE(run_cli("counterexample bernoulli --exponent 3.2").status == 1);
}

TEST_CASE("cli: rotation counterexample") {
  RunResult r = run_cli("counterexample rotation --delta 1/5");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j["limit"] == "1/2");
  REQUIRE(j["cube_bound"] == "64/125");
  REQUIRE(j["strictly_less"] == true);
  REQUIRE(j["closed_form_matches"] == true);

  RunResult csv = run_cli("counterexample rotation --delta 1/5 --format csv");
  REQUIRE(csv.status == 0);
  REQUIRE(csv.out.rfind("x,m_x\n0,1/5\n", 0) == 0);

  // at delta = 1/2 the limit ties the cube bound: reported, not passed
  REQUIRE(run_cli("counterexample rotation --delta 1/2").status == 1);
}

TEST_CASE("cli: exit statuses") {
  REQUIRE(run_cli("--help").status == 0);
  REQUIRE(run_cli("roth-verify --help").status == 0);
  REQUIRE(run_cli("no-such-command").status == 2);
  REQUIRE(run_cli("roth-verify --set " + ts::data_path("A.json")).status == 2);  // missing flag

  std::string fixture = " --system " + ts::data_path("two_point.json") + " --set " +
                        ts::data_path("A.json");
  REQUIRE(run_cli("roth-verify --system " + ts::data_path("broken.json") + " --set " +
                  ts::data_path("A.json"))
              .status == 2);
  REQUIRE(run_cli("roth-verify --system " + ts::data_path("no_such.json") + " --set " +
                  ts::data_path("A.json"))
              .status == 2);
  REQUIRE(run_cli("roth-verify" + fixture + " --epsilon 0").status == 3);
  REQUIRE(run_cli("roth-verify --system " + ts::data_path("nonergodic.json") + " --set " +
                  ts::data_path("A.json"))
              .status == 3);
  REQUIRE(run_cli("counterexample rotation --delta 2").status == 3);
  REQUIRE(run_cli("cube-check --trials 1 --format csv").status == 2);  // no csv form
}

TEST_CASE("cli: corners subcommand reads cell files") {
  RunResult r = run_cli("density-corners --set " + ts::data_path("corners_z4.json") +
                        " --epsilon 1/50");
  REQUIRE(r.status == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j["command"] == "density-corners");
  REQUIRE(j["pass"] == true);

  RunResult csv = run_cli("density-corners --set " + ts::data_path("corners_z4.json") +
                          " --epsilon 1/50 --format csv");
  REQUIRE(csv.status == 0);
  REQUIRE(csv.out.rfind("g,corner_density,good\n", 0) == 0);
}
