#include "doctest_main.hpp"

#include <map>
#include <set>

#include "fmwb/efgames.hpp"
#include "fmwb/errors.hpp"

using namespace fmwb;

namespace {

std::vector<FinStructure> small_graphs(int max_n) {
  std::vector<FinStructure> out;
  for (int n = 0; n <= max_n; ++n)
    for (auto& g : all_graphs(n)) out.push_back(std::move(g));
  return out;
}

// Rank-r type of a tuple, computed semantically: the atomic diagram of the
// tuple together with the set of rank r-1 types of its one-point extensions.
std::string semantic_type(const FinStructure& a, std::vector<int>& t, int r) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < t.size(); ++j) {
      s += t[i] == t[j] ? '=' : '.';
      s += a.holds(0, t[i], t[j]) ? 'E' : '-';
    }
  s += "]";
  if (r == 0) return s;
  std::set<std::string> ext;
  for (int e = 0; e < a.size(); ++e) {
    t.push_back(e);
    ext.insert(semantic_type(a, t, r - 1));
    t.pop_back();
  }
  s += "{";
  for (const auto& x : ext) s += x + ";";
  return s + "}";
}

std::string sentence_theory(const FinStructure& a, int r) {
  std::vector<int> t;
  return semantic_type(a, t, r);
}

FinStructure matching(int pairs) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < pairs; ++i) e.emplace_back(2 * i, 2 * i + 1);
  return make_graph(2 * pairs, e);
}

}  // namespace

TEST_CASE("formula text round trip and ranks") {
  const std::vector<std::string> texts = {
      "true",
      "(E x (E y (rel E x y)))",
      "(A x (= x x))",
      "(and (not (= x y)) (or (rel E x y) (rel E y x)))",
      "(A x (E y (and (rel E x y) (A z (or (= z x) (not (rel E z y)))))))",
  };
  for (const auto& t : texts) CHECK(formula_str(parse_formula(t)) == t);
  CHECK(qrank(parse_formula(texts[4])) == 3);
  CHECK(qrank(parse_formula(texts[3])) == 0);
  CHECK(free_vars(parse_formula(texts[3])) == std::vector<int>{0, 1});
  CHECK(free_vars(parse_formula(texts[1])).empty());
  CHECK(parse_formula("(E x (rel E x x))") == parse_formula("(exists x (rel E x x))"));
  CHECK(formula_str(parse_formula("(and true (rel E x y))")) == "(rel E x y)");
  CHECK(formula_str(parse_formula("(and false (rel E x y))")) == "false");
  CHECK(formula_str(parse_formula("(or true (rel E x y))")) == "true");
  CHECK_THROWS_AS(parse_formula("(E x"), InputError);
  CHECK_THROWS_AS(parse_formula("(foo x)"), InputError);
  CHECK_THROWS_AS(parse_formula("(= x y) extra"), InputError);
}

TEST_CASE("model checking") {
  const auto tri = make_complete(3);
  const auto empty3 = make_graph(3, {});
  CHECK(model_check(tri, parse_formula("(A x (= x x))")));
  CHECK(model_check(empty3, parse_formula("(A x (= x x))")));
  const auto clique = parse_formula("(E x (E y (E z (and (rel E x y) (rel E y z) (rel E x z)))))");
  CHECK(model_check(tri, clique));
  CHECK(!model_check(make_path(3), clique));
  CHECK(!model_check(empty3, parse_formula("(E x (E y (rel E x y)))")));
  CHECK_THROWS_AS(model_check(tri, parse_formula("(rel E x y)")), InputError);
  CHECK_THROWS_AS(model_check(tri, parse_formula("(E x (rel P x))")), InputError);
  CHECK_THROWS_AS(model_check(tri, parse_formula("(E x (rel E x))")), InputError);
  CHECK(evaluate(tri, parse_formula("(rel E x y)"), {0, 1}));
  CHECK(!evaluate(tri, parse_formula("(rel E x y)"), {1, 1}));
}

TEST_CASE("game examples") {
  const auto c5 = make_cycle(5);
  for (int r = 0; r <= 4; ++r) CHECK(ef_equivalent(c5, c5, r));
  const auto p = make_path(4);
  const auto q = canonical_form(p);
  for (int r = 0; r <= 4; ++r) CHECK(ef_equivalent(p, q, r));
  CHECK(ef_equivalent(make_linear_order(3), make_linear_order(4), 2));
  CHECK(!ef_equivalent(make_linear_order(3), make_linear_order(4), 3));
  CHECK(!ef_equivalent(matching(3), make_graph(6, {}), 2));
  CHECK(ef_equivalent(matching(3), make_graph(6, {}), 1));
  const auto res = ef_play(matching(3), make_graph(6, {}), 2);
  CHECK(!res.equivalent);
  REQUIRE(res.opening);
  CHECK_THROWS_AS(ef_equivalent(make_cycle(3), make_linear_order(3), 1), InputError);
  CHECK_THROWS_AS(ef_equivalent(make_graph(13, {}), make_graph(3, {}), 1), BoundExceeded);
  CHECK_THROWS_AS(ef_equivalent(c5, c5, 5), BoundExceeded);
}

TEST_CASE("linear order threshold") {
  for (int r = 0; r <= 3; ++r) {
    const int t = (1 << r) - 1;
    for (int m = 1; m <= 10; ++m)
      for (int n = 1; n <= 10; ++n) {
        INFO(m, " ", n, " ", r);
        CHECK(ef_equivalent(make_linear_order(m), make_linear_order(n), r) == (m == n || std::min(m, n) >= t));
      }
  }
}

TEST_CASE("games agree with semantic types on small graphs") {
  const auto gs = small_graphs(4);
  for (int r = 0; r <= 2; ++r) {
    std::vector<std::string> th;
    for (const auto& g : gs) th.push_back(sentence_theory(g, r));
    std::vector<std::vector<bool>> eq(gs.size(), std::vector<bool>(gs.size()));
    for (std::size_t i = 0; i < gs.size(); ++i)
      for (std::size_t j = 0; j < gs.size(); ++j) {
        eq[i][j] = ef_equivalent(gs[i], gs[j], r);
        CHECK(eq[i][j] == (th[i] == th[j]));
      }
    // An equivalence relation.
    for (std::size_t i = 0; i < gs.size(); ++i) {
      CHECK(eq[i][i]);
      for (std::size_t j = 0; j < gs.size(); ++j) {
        CHECK(eq[i][j] == eq[j][i]);
        for (std::size_t k = 0; k < gs.size(); ++k)
          if (eq[i][j] && eq[j][k]) CHECK(eq[i][k]);
      }
    }
  }
}

TEST_CASE("distinguishing sentences") {
  const auto phi = distinguishing_sentence(matching(3), make_graph(6, {}), 2);
  REQUIRE(phi);
  CHECK(formula_str(*phi) == "(E x (E y (rel E x y)))");
  CHECK(!distinguishing_sentence(make_cycle(4), canonical_form(make_cycle(4)), 3));

  const auto lo = distinguishing_sentence(make_linear_order(4), make_linear_order(3), 3);
  REQUIRE(lo);
  CHECK(qrank(*lo) <= 3);
  CHECK(model_check(make_linear_order(4), *lo));
  CHECK(!model_check(make_linear_order(3), *lo));
  CHECK(model_check(make_linear_order(9), *lo));

  // Soundness over every non-equivalent pair of small graphs.
  const auto gs = small_graphs(4);
  std::size_t found = 0;
  for (int r = 1; r <= 2; ++r)
    for (const auto& a : gs)
      for (const auto& b : gs) {
        const auto s = distinguishing_sentence(a, b, r);
        CHECK(s.has_value() == !ef_equivalent(a, b, r));
        if (!s) continue;
        ++found;
        CHECK(qrank(*s) <= r);
        CHECK(model_check(a, *s));
        CHECK(!model_check(b, *s));
      }
  CHECK(found > 300);
}

TEST_CASE("hintikka sentences") {
  const auto gs = small_graphs(4);
  auto sweep = [&](const FinStructure& a, int r, int max_b) {
    const Formula th = hintikka(a, r);
    CHECK(qrank(th) <= r);
    CHECK(free_vars(th).empty());
    for (const auto& b : gs) {
      if (b.size() > max_b) continue;
      CHECK(model_check(b, th) == ef_equivalent(a, b, r));
    }
  };
  sweep(make_graph(1, {}), 1, 3);
  sweep(make_graph(2, {{0, 1}}), 2, 4);
  for (const auto& a : small_graphs(3))
    for (int r = 0; r <= 2; ++r) sweep(a, r, 4);
  CHECK(formula_str(hintikka(make_graph(2, {{0, 1}}), 0)) == "true");
  const auto big = hintikka(make_cycle(5), 3);
  CHECK(dag_size(big) < 2000);
  CHECK(tree_size(big) > dag_size(big));
  CHECK_THROWS_AS(hintikka(make_graph(9, {}), 1), BoundExceeded);
  CHECK_THROWS_AS(hintikka(make_graph(2, {}), 4), BoundExceeded);
}
