#include "doctest_main.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fmwb/cli.hpp"
#include "fmwb/config.hpp"
#include "fmwb/errors.hpp"
#include "fmwb/io.hpp"
#include "fmwb/tour.hpp"

using namespace fmwb;

namespace {

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p.string();
}

}  // namespace

TEST_CASE("documented command examples") {
  const auto fr = run({"fraisse", "check", "--age", "graphs", "--bound", "5", "--format", "json"});
  REQUIRE(fr.code == 0);
  const auto j = fr.json();
  CHECK(j["formatVersion"] == kFormatVersion);
  CHECK(j["command"] == "fraisse check");
  CHECK(j["result"]["hp"] == true);
  CHECK(j["result"]["jep"] == true);
  CHECK(j["result"]["ap"] == true);

  const auto sr = run({"ord", "space-rank", "--alpha", "w^2", "--k", "3"});
  CHECK(sr.code == 0);
  CHECK(sr.out == "(w^2, 3)\n");
  const auto srj = run({"--format", "json", "ord", "space-rank", "--alpha", "2", "--k", "3"}).json();
  CHECK(srj["result"]["rank"] == "2");
  CHECK(srj["result"]["degree"] == 3);

  const auto ef = run({"ef", "distinguish", "--a", "matching:6", "--b", "edgeless:6", "-r", "2", "--format", "json"});
  REQUIRE(ef.code == 0);
  CHECK(ef.json()["result"]["sentence"] == "(E x (E y (rel E x y)))");
  CHECK(ef.json()["evidence"]["holds_in_a"] == true);
  CHECK(ef.json()["evidence"]["holds_in_b"] == false);
}

TEST_CASE("negative findings exit zero") {
  const auto r = run({"fraisse", "check", "--age", "maxdeg2", "--bound", "5", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(r.json()["result"]["ap"] == false);
  CHECK(r.json()["evidence"]["ap"]["verified"] == true);
  const auto am = run({"fm", "amorphous", "--backend", "DenseOrder", "--format", "json"});
  CHECK(am.code == 0);
  CHECK(am.json()["result"]["amorphous"] == false);
  CHECK(am.json()["evidence"]["verified"] == true);
  CHECK(run({"ef", "play", "--a", "order:3", "--b", "order:4", "-r", "3"}).out.find("Spoiler wins") == 0);
  CHECK(run({"ef", "check", "--a", "edgeless:3", "--formula", "(E x (E y (rel E x y)))"}).out == "false\n");
}

TEST_CASE("commands across modules") {
  CHECK(run({"ord", "add", "w", "3"}).out == "w + 3\n");
  CHECK(run({"ord", "add", "3", "w"}).out == "w\n");
  CHECK(run({"ord", "mul", "w+1", "2"}).out == "w*2 + 1\n");
  CHECK(run({"ord", "cmp", "w^w", "w^3*5"}).out == "w^{w} > w^3*5\n");
  CHECK(run({"ord", "cbrank", "--gamma", "w^2+w"}).out == "1\n");
  CHECK(run({"ord", "cbrank", "--clopen", "[[null, \"w*2\"]]", "--alpha", "1", "--k", "3"}).out == "(1, 2)\n");

  const auto orb = run({"atoms", "orbits", "--backend", "PureSet", "--support", "[0, 1]", "--format", "json"}).json();
  CHECK(orb["result"]["orbits"].size() == 3);
  CHECK(orb["result"]["infinite_orbits"] == 1);
  CHECK(run({"atoms", "types", "--backend", "DenseOrder", "--n", "3"}).out == "13\n");
  CHECK(run({"atoms", "types", "--backend", "NamedPairs", "--n", "1"}).out.rfind("infinite", 0) == 0);

  const auto w = run({"atoms", "witness", "--backend", "DenseOrder", "--support", "[0]", "--x", "1/2", "--y", "7",
                      "--format", "json"})
                     .json();
  CHECK(w["result"]["same_orbit"] == true);
  CHECK(w["evidence"]["verified"] == true);
  const auto sep = run({"atoms", "witness", "--backend", "DenseOrder", "--support", "[0]", "--x", "-1", "--y", "7",
                        "--format", "json"})
                       .json();
  CHECK(sep["result"]["same_orbit"] == false);
  CHECK(!sep["evidence"]["separation"].get<std::string>().empty());

  CHECK(run({"fm", "dedekind", "--backend", "Rigid"}).out.find("NotDF") != std::string::npos);
  CHECK(run({"fm", "dedekind", "--backend", "NamedPairs"}).out.find("DFnotWeakly") != std::string::npos);
  const auto g = run({"fm", "gauge", "--backend", "PairedAtoms", "--format", "json"}).json();
  CHECK(g["result"]["table"] == Json{{"1", {0}}, {"2", {0}}});
  const auto pg = run({"fm", "gauge", "--format", "json", "--partition",
                       R"({"backend":"PairedAtoms","support":{"atoms":[[0,0]]},"scheme":{"rule":"pairs","exceptional":[[[0,0]]]}})"})
                      .json();
  CHECK(pg["result"]["gauge"] == 2);
  CHECK(pg["result"]["leftover"] == 0);
  CHECK(pg["evidence"]["odd_blocks"].size() == 2);

  const auto rk = run({"fm", "rank", "--oracle", "--format", "json", "--set", R"({"backend":"PureSet","selection":[0]})"}).json();
  CHECK(rk["result"]["rank"] == Json{{"rank", "1"}, {"degree", 1}});
  CHECK(rk["evidence"]["oracle"]["consistent"] == true);
  CHECK(run({"fm", "sizeclass", "--set", R"({"backend":"PureSet","support":{"atoms":[3]},"selection":[0]})"}).out ==
        "class: Finite(1)\n");

  const auto v = run({"fm", "vennchain", "--x-size", "4", "--subsets", "[[0,1],[1,2]]", "--format", "json"}).json();
  CHECK(v["result"]["m_sequence"] == Json{0, 1});
  CHECK(v["evidence"]["cells"].size() == 4);

  const auto h = run({"ef", "hintikka", "--a", "complete:1", "-r", "1"});
  CHECK(h.out == "(and (E x (not (rel E x x))) (A x (not (rel E x x))))\n");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"fm", "amorphous"}).code == 2);                         // missing --backend
  CHECK(run({"fm", "amorphous", "--backend", "Bogus"}).code == 2);
  CHECK(run({"fraisse", "check", "--age", "no_such_class"}).code == 2);
  CHECK(run({"ord", "add", "w^", "2"}).code == 2);
  CHECK(run({"ef", "play", "--a", "order:3", "--b", "cycle:3"}).code == 2);  // signature mismatch
  CHECK(run({"ef", "check", "--a", "path:3", "--formula", "(rel E x y)"}).code == 2);
  CHECK(run({"fm", "rank", "--set", "{\"backend\": "}).code == 2);
  CHECK(run({"ef", "play", "--a", "order:13", "--b", "order:3"}).code == 3);
  CHECK(run({"ef", "play", "--a", "order:3", "--b", "order:3", "-r", "5"}).code == 3);
  CHECK(run({"fm", "amorphous", "--backend", "PureSet", "--s-max", "9"}).code == 3);
  CHECK(run({"atoms", "orbits", "--backend", "OrdinalSpace:4:1"}).code == 3);
  CHECK(run({"ef", "hintikka", "--a", "edgeless:9", "-r", "1"}).code == 3);
  CHECK(run({"fraisse", "check", "--bound", "9"}).code == 3);
  CHECK(run({"--help"}).code == 0);
  const auto e = run({"fm", "amorphous", "--backend", "Bogus"});
  CHECK(e.err.find("Bogus") != std::string::npos);
  const auto field = run({"fm", "sizeclass", "--set", R"({"backend":"PureSet","selection":[0],"colour":1})"});
  CHECK(field.code == 2);
  CHECK(field.err.find("set.colour") != std::string::npos);
}

TEST_CASE("formats") {
  const auto dot = run({"fraisse", "build", "--age", "graphs", "--n", "6", "--format", "dot"});
  CHECK(dot.code == 0);
  CHECK(dot.out.rfind("graph", 0) == 0);
  CHECK(run({"ord", "add", "1", "2", "--format", "dot"}).code == 2);
  const auto a = run({"fraisse", "build", "--age", "graphs", "--n", "20", "--format", "json"});
  const auto b = run({"fraisse", "build", "--age", "graphs", "--n", "20", "--format", "json"});
  CHECK(a.out == b.out);
  CHECK(a.json()["result"]["unmet"] == 0);
  // The structure in the report reads back.
  const auto s = structure_from_json(a.json()["result"]["structure"]);
  CHECK(s.size() == 20);
}

TEST_CASE("configuration file and environment override") {
  const auto small = temp_file("fmwb_small.json", R"({"ef": {"size_max": 4}})");
  CHECK(run({"ef", "play", "--a", "order:5", "--b", "order:5", "--config", small}).code == 3);
  CHECK(run({"ef", "play", "--a", "order:4", "--b", "order:4", "--config", small}).code == 0);
  const auto bad = temp_file("fmwb_bad.json", R"({"ef": {"size_mx": 4}})");
  const auto r = run({"config", "--config", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("ef.size_mx") != std::string::npos);

  ::setenv("FMWB_CONFIG", small.c_str(), 1);
  CHECK(run({"ef", "play", "--a", "order:5", "--b", "order:5"}).code == 3);
  CHECK(run({"config", "--format", "json"}).json()["input"]["source"] == small);
  ::unsetenv("FMWB_CONFIG");
  CHECK(run({"ef", "play", "--a", "order:5", "--b", "order:5"}).code == 0);

  // The shipped file holds the defaults.
  const auto shipped = std::filesystem::path(FMWB_SOURCE_DIR) / "config" / "desk.json";
  const auto c = load_config(shipped.string());
  CHECK(config_to_json(c) == config_to_json(DeskConfig{}));
}

TEST_CASE("exchange formats round trip") {
  const auto g = make_cycle(5);
  CHECK(structure_from_json(structure_to_json(g)) == g);
  CHECK_THROWS_AS(structure_from_json(Json::parse(R"({"signature":[{"name":"E","arity":2}],"domain":["a"],"relations":{"E":[["a","b"]]}})")),
                  InputError);
  const auto age = builtin_age("maxdeg2");
  const auto age2 = age_from_json(age_to_json(age));
  CHECK(age2.name == age.name);
  CHECK(age2.structures.size() == age.structures.size());

  for (const char* t : {"0", "w", "w^{w + 1}*3 + w^2 + 7"}) {
    const auto o = Ordinal::parse(t);
    CHECK(ordinal_from_json(ordinal_to_json(o)) == o);
  }
  const auto w2 = BackendSpec::ordinal_space(2, 3);
  CHECK(backend_from_json(backend_to_json(w2)) == w2);
  CHECK(backend_from_json(backend_to_json(BackendSpec::vector_space(4))) == BackendSpec::vector_space(4));

  Support s;
  s.atoms = {Atom::ordinal(Ordinal::parse("w + 2"))};
  s.clopens = {ClopenSet::interval(w2.space(), std::nullopt, Ordinal::parse("w^2"))};
  s = normalize_support(w2, s);
  CHECK(support_from_json(w2, support_to_json(w2, s)) == s);

  const auto dn = BackendSpec::dense_order();
  const auto half = Atom::rational(Rational(1) / 2);
  CHECK(atom_to_json(dn, half) == "1/2");
  CHECK(atom_from_json(dn, "1/2") == half);
  CHECK_THROWS_AS(atom_from_json(BackendSpec::vector_space(2), Json::array({0, 2})), InputError);

  const auto np = BackendSpec::named_pairs();
  const auto a = make_symset(np, {}, {}, IndexSet::residue(3, 1));
  CHECK(symset_from_json(symset_to_json(a)) == a);

  SymPartition p;
  p.backend = BackendSpec::paired_atoms();
  p.rule = BlockRule::Pairs;
  const auto pj = partition_to_json(p);
  CHECK(partition_to_json(partition_from_json(pj)) == pj);
}

TEST_CASE("tour bundle") {
  DeskConfig cfg;
  const auto one = run_tour_suite("orbits", cfg);
  CHECK(one.pass);
  CHECK_THROWS_AS(run_tour_suite("nope", cfg), InputError);

  const auto a = dump_json(demo_tour(cfg));
  const auto b = dump_json(demo_tour(cfg));
  CHECK(a == b);
  const auto bundle = Json::parse(a);
  CHECK(bundle["pass"] == true);
  CHECK(bundle["formatVersion"] == kFormatVersion);
  bool not_df = false;
  for (const auto& s : bundle["suites"])
    if (s["name"] == "dedekind") not_df = s["details"]["Rigid"]["class"] == "NotDF";
  CHECK(not_df);

  const auto without = demo_tour(cfg, TourOptions{false});
  for (const auto& s : without["suites"])
    if (s["name"] == "dedekind") CHECK(!s["details"].contains("Rigid"));

  const auto cli = run({"tour", "--suite", "cb"});
  CHECK(cli.code == 0);
  CHECK(cli.out.rfind("PASS cb", 0) == 0);
}
