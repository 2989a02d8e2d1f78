#include "doctest_main.hpp"

#include <chrono>
#include <numeric>
#include <random>

#include "fmwb/fraisse.hpp"

using namespace fmwb;

namespace {

// Independent membership predicates on plain structures.
bool pred_graph(const FinStructure& a, int e = 0) {
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (a.holds(e, x, y) != a.holds(e, y, x) || (x == y && a.holds(e, x, x))) return false;
  return true;
}

bool pred_strict_order(const FinStructure& a, int r) {
  const int n = a.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        if (a.holds(r, x, x)) return false;
        if (a.holds(r, x, y) && a.holds(r, y, z) && !a.holds(r, x, z)) return false;
      }
  return true;
}

bool pred_total(const FinStructure& a, int r) {
  for (int x = 0; x < a.size(); ++x)
    for (int y = 0; y < a.size(); ++y)
      if (x != y && !a.holds(r, x, y) && !a.holds(r, y, x)) return false;
  return true;
}

int degree(const FinStructure& a, int x) {
  int d = 0;
  for (int y = 0; y < a.size(); ++y) d += a.holds(0, x, y);
  return d;
}

bool oracle(const std::string& name, const FinStructure& a) {
  if (name == "finite_sets") return true;
  if (name == "graphs") return pred_graph(a);
  if (name == "linear_orders") return pred_strict_order(a, 0) && pred_total(a, 0);
  if (name == "posets") return pred_strict_order(a, 0);
  if (name == "posets_linext") {
    if (!pred_strict_order(a, 0) || !pred_strict_order(a, 1) || !pred_total(a, 1)) return false;
    for (const auto& t : a.tuples(0))
      if (!a.holds(1, t)) return false;
    return true;
  }
  if (name == "maxdeg2") {
    if (!pred_graph(a)) return false;
    for (int x = 0; x < a.size(); ++x)
      if (degree(a, x) > 2) return false;
    return true;
  }
  if (name == "triangle_free") {
    if (!pred_graph(a)) return false;
    for (int x = 0; x < a.size(); ++x)
      for (int y = 0; y < a.size(); ++y)
        for (int z = 0; z < a.size(); ++z)
          if (a.holds(0, x, y) && a.holds(0, y, z) && a.holds(0, x, z)) return false;
    return true;
  }
  if (name == "bipartite") {
    if (!pred_graph(a, 2)) return false;
    for (int x = 0; x < a.size(); ++x) {
      if (a.holds(0, x) == a.holds(1, x)) return false;
      for (int y = 0; y < a.size(); ++y)
        if (a.holds(2, x, y) && a.holds(0, x) == a.holds(0, y)) return false;
    }
    return true;
  }
  return false;
}

FinStructure random_structure(const Signature& sig, int n, std::mt19937& rng, int density) {
  FinStructure a(sig, n);
  for (std::size_t r = 0; r < sig.size(); ++r) {
    const int k = sig.relations[r].arity;
    Tuple t(static_cast<std::size_t>(k), 0);
    while (n > 0) {
      if (static_cast<int>(rng() % 100) < density) a.add_tuple(static_cast<int>(r), t);
      int j = k - 1;
      while (j >= 0 && t[static_cast<std::size_t>(j)] == n - 1) t[static_cast<std::size_t>(j--)] = 0;
      if (j < 0) break;
      ++t[static_cast<std::size_t>(j)];
    }
  }
  return a;
}

FinStructure random_graph(int n, std::mt19937& rng, int density) {
  FinStructure g(graph_signature(), n);
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (static_cast<int>(rng() % 100) < density) g.add_edge(0, x, y);
  return g;
}

}  // namespace

TEST_CASE("builtin ages agree with their defining predicates") {
  std::mt19937 rng(7);
  for (const auto& name : builtin_age_names()) {
    AgeSpec spec = builtin_age(name);
    CHECK_NOTHROW(check_age_spec(spec));
    for (int trial = 0; trial < 300; ++trial) {
      const int n = static_cast<int>(rng() % 6);
      // Bias toward near-valid inputs so that members occur too.
      FinStructure a = random_structure(spec.sig, n, rng, static_cast<int>(rng() % 40));
      CHECK_MESSAGE(in_age(spec, a) == oracle(name, a), name);
    }
  }
}

TEST_CASE("forbidden lists") {
  CHECK(builtin_age("finite_sets").structures.empty());
  // A graph is forbidden by a loop and by a one-way edge.
  CHECK(builtin_age("graphs").structures.size() == 2);
  auto tf = builtin_age("triangle_free");
  CHECK_FALSE(in_age(tf, make_complete(3)));
  CHECK(in_age(tf, make_cycle(5)));
  CHECK(in_age(builtin_age("posets"), make_linear_order(4)));
  CHECK(in_age(builtin_age("graphs"), make_complete(6)));
  CHECK_FALSE(in_age(builtin_age("maxdeg2"), make_graph(4, {{0, 1}, {0, 2}, {0, 3}})));
}

TEST_CASE("member counts") {
  // Graphs: 1,1,2,4,11,34 ; posets: 1,1,2,5,16 ; linear orders: all 1.
  auto g = builtin_age("graphs");
  std::vector<std::size_t> gc;
  for (int s = 0; s <= 5; ++s) gc.push_back(age_members(g, s).size());
  CHECK(gc == std::vector<std::size_t>{1, 1, 2, 4, 11, 34});
  auto p = builtin_age("posets");
  std::vector<std::size_t> pc;
  for (int s = 0; s <= 4; ++s) pc.push_back(age_members(p, s).size());
  CHECK(pc == std::vector<std::size_t>{1, 1, 2, 5, 16});
  for (int s = 0; s <= 5; ++s) CHECK(age_members(builtin_age("linear_orders"), s).size() == 1);
  // Posets with a chosen linear extension are naturally labelled posets:
  // 1,1,2,7,40.
  auto pl = builtin_age("posets_linext");
  std::vector<std::size_t> plc;
  for (int s = 0; s <= 4; ++s) plc.push_back(age_members(pl, s).size());
  CHECK(plc == std::vector<std::size_t>{1, 1, 2, 7, 40});
  // Triangle-free graphs: 1,1,2,3,7,14.
  auto tf = builtin_age("triangle_free");
  std::vector<std::size_t> tfc;
  for (int s = 0; s <= 5; ++s) tfc.push_back(age_members(tf, s).size());
  CHECK(tfc == std::vector<std::size_t>{1, 1, 2, 3, 7, 14});
}

TEST_CASE("amalgamation reports") {
  for (const std::string name : {"finite_sets", "graphs", "linear_orders", "posets", "triangle_free"}) {
    auto rep = check_age_properties(builtin_age(name), 4);
    CHECK_MESSAGE(rep.hp, name);
    CHECK_MESSAGE(rep.jep, name);
    CHECK_MESSAGE(rep.ap, name);
    CHECK(rep.countable == "not checked");
  }
  auto rep = check_age_properties(builtin_age("maxdeg2"), 5);
  CHECK(rep.hp);
  CHECK(rep.jep);
  CHECK_FALSE(rep.ap);
  REQUIRE(rep.ap_witness);
  // The witness really has no amalgam.
  const auto& w = *rep.ap_witness;
  CHECK_FALSE(amalgamate(builtin_age("maxdeg2"), w.b, w.c, w.d, w.p1, w.p2));
}

TEST_CASE("bipartite graphs with named sides amalgamate") {
  auto rep = check_age_properties(builtin_age("bipartite"), 4);
  CHECK(rep.hp);
  CHECK(rep.jep);
  CHECK(rep.ap);
}

TEST_CASE("explicit mode") {
  AgeSpec spec;
  spec.name = "small";
  spec.sig = graph_signature();
  spec.mode = AgeMode::Explicit;
  spec.k_max = 2;
  spec.structures = {make_graph(0, {}), make_graph(1, {}), make_graph(2, {})};
  CHECK(in_age(spec, make_graph(2, {})));
  CHECK_FALSE(in_age(spec, make_graph(2, {{0, 1}})));
  auto rep = check_age_properties(spec, 2);
  CHECK(rep.hp);
  CHECK(rep.jep);
  CHECK(rep.ap);  // the amalgam may identify the two new points
  // With the edge too, an edge and a non-edge over a point need three points.
  spec.structures.push_back(make_graph(2, {{0, 1}}));
  auto r3 = check_age_properties(spec, 2);
  CHECK(r3.hp);
  CHECK_FALSE(r3.jep);
  CHECK_FALSE(r3.ap);
  // Not hereditary: edge present without its one-point pieces.
  AgeSpec bad = spec;
  bad.structures = {make_graph(2, {{0, 1}})};
  auto r2 = check_age_properties(bad, 2);
  CHECK_FALSE(r2.hp);
}

TEST_CASE("duplicate forbidden structures are rejected") {
  AgeSpec spec = builtin_age("triangle_free");
  spec.structures.push_back(make_complete(3));
  CHECK_THROWS_AS(check_age_spec(spec), InputError);
}

TEST_CASE("amalgamate agrees with brute force on maxdeg2") {
  // Oracle: look for any structure of size <= |C|+|D|-|B| in the class into
  // which C and D embed over B.
  auto spec = builtin_age("maxdeg2");
  std::mt19937 rng(11);
  int found = 0, none = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int cn = 1 + static_cast<int>(rng() % 4), dn = 1 + static_cast<int>(rng() % 4);
    FinStructure c = random_graph(cn, rng, 50), d = random_graph(dn, rng, 50);
    if (!in_age(spec, c) || !in_age(spec, d)) continue;
    // B: first b elements of C, required to embed identically into D.
    const int b = static_cast<int>(rng() % (std::min(cn, dn) + 1));
    std::vector<int> pre(static_cast<std::size_t>(b));
    std::iota(pre.begin(), pre.end(), 0);
    FinStructure bs = c.induced(pre);
    if (!is_embedding(bs, d, Embedding{pre})) continue;
    auto got = amalgamate(spec, bs, c, d, Embedding{pre}, Embedding{pre});
    bool exists = false;
    const int limit = cn + dn - b;
    for (int s = std::max(cn, dn); s <= limit && !exists; ++s) {
      for (const auto& e : age_members(spec, s)) {
        for (const auto& f : find_embeddings(c, e)) {
          std::vector<int> head(f.map.begin(), f.map.begin() + b);
          if (!find_embeddings_extending(d, e, head, 1).empty()) {
            exists = true;
            break;
          }
        }
        if (exists) break;
      }
    }
    CHECK(got.has_value() == exists);
    if (got) {
      ++found;
      CHECK(in_age(spec, got->e));
      CHECK(is_embedding(c, got->e, got->p3));
      CHECK(is_embedding(d, got->e, got->p4));
      for (int i = 0; i < b; ++i) CHECK(got->p3.map[static_cast<std::size_t>(i)] == got->p4.map[static_cast<std::size_t>(i)]);
      CHECK(got->e.size() <= limit);
    } else {
      ++none;
    }
  }
  CHECK(found > 10);
  CHECK(none > 0);
}

TEST_CASE("amalgamate validates its maps") {
  auto spec = builtin_age("graphs");
  auto b = make_graph(2, {{0, 1}});
  auto c = make_graph(2, {});
  CHECK_THROWS_AS(amalgamate(spec, b, c, c, Embedding{{0, 1}}, Embedding{{0, 1}}), InputError);
}

TEST_CASE("disjoint amalgam is tried first") {
  auto spec = builtin_age("graphs");
  auto b = make_graph(1, {});
  auto c = make_graph(2, {{0, 1}});
  auto res = amalgamate(spec, b, c, c, Embedding{{0}}, Embedding{{0}});
  REQUIRE(res);
  CHECK(res->e.size() == 3);
}

namespace {

// Extension property up to the bound, checked directly on the structure.
bool satisfies_extensions(const AgeSpec& spec, const FinStructure& m, int e_bound) {
  for (const auto& t : extension_tasks(spec, e_bound)) {
    for (const auto& f : find_embeddings(t.small, m)) {
      if (find_embeddings_extending(t.big, m, f.map, 1).empty()) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("generic structures") {
  auto g = builtin_age("graphs");
  auto r1 = build_generic(g, 32, 3);
  CHECK_FALSE(r1.stalled);
  CHECK(r1.structure.size() == 32);
  CHECK(in_age(g, r1.structure));
  CHECK(satisfies_extensions(g, r1.structure, 3));
  for (const auto& st : r1.tasks) CHECK(st.unmet == 0);
  auto r2 = build_generic(g, 32, 3);
  CHECK(r1.hash == r2.hash);
  CHECK(r1.structure == r2.structure);

  auto lo = build_generic(builtin_age("linear_orders"), 10, 2);
  CHECK(in_age(builtin_age("linear_orders"), lo.structure));
  CHECK(lo.structure.size() == 10);

  auto pl = build_generic(builtin_age("posets_linext"), 12, 3);
  CHECK(in_age(builtin_age("posets_linext"), pl.structure));
  for (const auto& t : pl.structure.tuples(0)) CHECK(pl.structure.holds(1, t));

  CHECK_THROWS_AS(build_generic(builtin_age("maxdeg2"), 10, 5), InputError);
}

TEST_CASE("explicit classes stall at their size cap") {
  AgeSpec spec;
  spec.name = "upto3";
  spec.sig = graph_signature();
  spec.mode = AgeMode::Explicit;
  spec.k_max = 3;
  for (int s = 0; s <= 3; ++s) spec.structures.push_back(make_graph(s, {}));
  auto res = build_generic(spec, 6, 2);
  CHECK(res.stalled);
  CHECK(res.structure.size() == 3);
  CHECK(in_age(spec, res.structure));
}

TEST_CASE("extension tasks") {
  // Graphs, bound 2: over the empty graph one task, over a point two.
  auto tasks = extension_tasks(builtin_age("graphs"), 2);
  CHECK(tasks.size() == 3);
  // Linear orders, bound 2: over a point the new element goes below or above.
  CHECK(extension_tasks(builtin_age("linear_orders"), 2).size() == 3);
}

TEST_CASE("homogeneity") {
  CHECK(check_homogeneity(make_cycle(5), 1).homogeneous);
  CHECK(check_homogeneity(make_cycle(5), 2).homogeneous);
  auto p3 = check_homogeneity(make_path(3), 1);
  CHECK_FALSE(p3.homogeneous);
  CHECK(p3.from.size() == 1);
  CHECK(check_homogeneity(make_complete(4), 4).homogeneous);
  // In C6 non-adjacent pairs at distance 2 and 3 have the same type.
  CHECK(check_homogeneity(make_cycle(6), 1).homogeneous);
  CHECK_FALSE(check_homogeneity(make_cycle(6), 2).homogeneous);
}

TEST_CASE("timing of the n=5 checks") {
  auto t0 = std::chrono::steady_clock::now();
  for (const std::string name : {"finite_sets", "linear_orders", "graphs", "posets", "posets_linext", "bipartite", "maxdeg2"}) {
    auto ts = std::chrono::steady_clock::now();
    auto rep = check_age_properties(builtin_age(name), 5);
    auto te = std::chrono::steady_clock::now();
    MESSAGE(name << " ap=" << rep.ap << " checked=" << rep.ap_checked << " "
                 << std::chrono::duration<double>(te - ts).count() << "s");
    if (name != "maxdeg2") CHECK_MESSAGE(rep.ap, name);
  }
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(dt < 60.0);
}
