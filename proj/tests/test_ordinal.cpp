#include "doctest_main.hpp"

#include <array>
#include <map>
#include <random>

#include "fmwb/clopen.hpp"
#include "fmwb/ordinal.hpp"

using namespace fmwb;

namespace {

Ordinal O(const char* s) { return Ordinal::parse(s); }

// ---------------------------------------------------------------------------
// Order-type oracle for ordinals below w^3. An ordinal is expanded into the
// ordered list of its blocks w^e (e in 0..2): w^2*a + w*b + c is a blocks of
// w^2, then b of w, then c single points. Concatenating well-orders
// concatenates block lists; a block followed later by a strictly larger one
// is swallowed by it (w^e + w^f = w^f for e < f). This never touches the
// library's normal-form code.

using Triple = std::array<std::uint64_t, 3>;  // coefficients of w^2, w^1, w^0

std::vector<int> blocks(const Triple& t) {
  std::vector<int> out;
  for (std::uint64_t i = 0; i < t[0]; ++i) out.push_back(2);
  for (std::uint64_t i = 0; i < t[1]; ++i) out.push_back(1);
  for (std::uint64_t i = 0; i < t[2]; ++i) out.push_back(0);
  return out;
}

Triple order_type(const std::vector<int>& bl) {
  Triple t{0, 0, 0};
  int running = -1;
  for (auto it = bl.rbegin(); it != bl.rend(); ++it) {
    if (*it >= running) {
      ++t[2 - *it];
      running = *it;
    }
  }
  return t;
}

Triple oracle_add(const Triple& a, const Triple& b) {
  auto bl = blocks(a);
  auto rb = blocks(b);
  bl.insert(bl.end(), rb.begin(), rb.end());
  return order_type(bl);
}

int lead_exp(const Triple& t) { return t[0] ? 2 : t[1] ? 1 : t[2] ? 0 : -1; }

// a*b is b copies of a laid end to end. A single block w^e of b (e >= 1)
// contributes w^e copies of a; since w^d <= a < w^(d+1) that sandwich has
// type w^(d+e).
std::optional<Triple> oracle_mul(const Triple& a, const Triple& b) {
  if (lead_exp(a) < 0 || lead_exp(b) < 0) return Triple{0, 0, 0};
  std::vector<int> bl;
  for (int e : blocks(b)) {
    if (e == 0) {
      auto ab = blocks(a);
      bl.insert(bl.end(), ab.begin(), ab.end());
    } else {
      int f = lead_exp(a) + e;
      if (f > 2) return std::nullopt;
      bl.push_back(f);
    }
  }
  return order_type(bl);
}

Ordinal from_triple(const Triple& t) {
  return ord_add(ord_add(Ordinal::omega_power(Ordinal::natural(2), t[0]),
                         Ordinal::omega_power(Ordinal::natural(1), t[1])),
                 Ordinal::natural(t[2]));
}

std::vector<Triple> small_triples(std::uint64_t max_coeff) {
  std::vector<Triple> out;
  for (std::uint64_t a = 0; a <= max_coeff; ++a)
    for (std::uint64_t b = 0; b <= max_coeff; ++b)
      for (std::uint64_t c = 0; c <= max_coeff; ++c) out.push_back({a, b, c});
  return out;
}

// ---------------------------------------------------------------------------
// Truncation oracle: ordinals below w^3 whose coefficients are <= N, compared
// lexicographically as triples. Counting points of a clopen set at two
// truncation depths separates finite counts from infinite ones.

bool triple_less(const Triple& x, const Triple& y) { return x < y; }

std::optional<std::uint64_t> truncated_count(const Interval& iv, int min_rank, std::uint64_t n) {
  std::uint64_t count = 0;
  for (const auto& t : small_triples(n)) {
    Ordinal g = from_triple(t);
    if (!iv.contains(g)) continue;
    int rank = t[2] ? 0 : t[1] ? 1 : t[0] ? 2 : 0;
    if (rank >= min_rank) ++count;
  }
  return count;
}

std::optional<std::uint64_t> oracle_count(const Interval& iv, int min_rank) {
  auto a = truncated_count(iv, min_rank, 7);
  auto b = truncated_count(iv, min_rank, 10);
  if (*a != *b) return std::nullopt;
  return a;
}

}  // namespace

TEST_CASE("parse and print round trip") {
  CHECK(O("0").is_zero());
  CHECK(O("w").str() == "w");
  CHECK(O("w^2*3 + w*2 + 5").str() == "w^2*3 + w*2 + 5");
  CHECK(O("w^{w+1}*2 + 1").str() == "w^{w + 1}*2 + 1");
  CHECK(O("w^w") == Ordinal::omega_power(Ordinal::omega()));
  CHECK_THROWS_AS(O("w^"), OrdinalError);
  CHECK_THROWS_AS(O("3 +"), OrdinalError);
  CHECK_THROWS_AS(Ordinal::from_terms({{Ordinal::natural(1), 1}, {Ordinal::natural(2), 1}}), OrdinalError);
}

TEST_CASE("addition absorbs and is not commutative") {
  CHECK(ord_add(O("1"), O("w")) == O("w"));
  CHECK(ord_add(O("w"), O("1")) == O("w + 1"));
  CHECK(ord_add(ord_add(O("w^2*3"), O("w*2")), O("w^2")) == O("w^2*4"));
  CHECK(ord_mul(O("w + 1"), O("2")) == O("w*2 + 1"));
  CHECK(ord_mul(O("2"), O("w")) == O("w"));
  CHECK(ord_mul(O("w"), O("w")) == O("w^2"));
}

TEST_CASE("normal-form arithmetic matches the order-type oracle below w^3") {
  const auto ts = small_triples(3);
  int add_pairs = 0, mul_pairs = 0;
  for (const auto& a : ts) {
    for (const auto& b : ts) {
      const Ordinal oa = from_triple(a), ob = from_triple(b);
      CHECK(ord_add(oa, ob) == from_triple(oracle_add(a, b)));
      ++add_pairs;
      if (auto p = oracle_mul(a, b)) {
        CHECK(ord_mul(oa, ob) == from_triple(*p));
        ++mul_pairs;
      }
    }
  }
  CHECK(add_pairs >= 200);
  CHECK(mul_pairs >= 200);
}

TEST_CASE("associativity and left distributivity") {
  const auto ts = small_triples(2);
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, ts.size() - 1);
  for (int i = 0; i < 400; ++i) {
    Ordinal a = from_triple(ts[pick(rng)]), b = from_triple(ts[pick(rng)]), c = from_triple(ts[pick(rng)]);
    CHECK(ord_add(ord_add(a, b), c) == ord_add(a, ord_add(b, c)));
    CHECK(ord_mul(ord_mul(a, b), c) == ord_mul(a, ord_mul(b, c)));
    CHECK(ord_mul(a, ord_add(b, c)) == ord_add(ord_mul(a, b), ord_mul(a, c)));
  }
}

TEST_CASE("left subtraction inverts addition") {
  const auto ts = small_triples(2);
  for (const auto& a : ts)
    for (const auto& b : ts) {
      Ordinal s = ord_add(from_triple(a), from_triple(b));
      CHECK(ord_add(from_triple(a), ord_sub_left(s, from_triple(a))) == s);
    }
}

TEST_CASE("element CB-rank") {
  CHECK(element_cb_rank(O("5")) == O("0"));
  CHECK(element_cb_rank(O("w")) == O("1"));
  CHECK(element_cb_rank(O("w^2*3 + w")) == O("1"));
  CHECK(element_cb_rank(O("w^{w}")) == O("w"));
  CHECK_THROWS_AS(element_cb_rank(O("0")), OrdinalError);
  CHECK(point_cb_rank(O("0")) == O("0"));
}

TEST_CASE("element CB-rank agrees with iterated derivatives on a truncation") {
  // Points (a,b,c) with coefficients <= N. A point survives a derivative when
  // it is a limit and the tail of its fundamental sequence survived the
  // previous one.
  constexpr std::uint64_t N = 6;
  std::map<Triple, bool> alive;
  for (const auto& t : small_triples(N)) alive[t] = true;
  std::map<Triple, int> survived;
  for (int round = 1; round <= 3; ++round) {
    std::map<Triple, bool> next;
    for (const auto& [t, in] : alive) {
      bool keep = false;
      if (in && t[2] == 0 && (t[0] || t[1])) {
        keep = true;
        for (std::uint64_t n = N - 2; n <= N; ++n) {
          Triple f = t[1] ? Triple{t[0], t[1] - 1, n} : Triple{t[0] - 1, n, 0};
          if (!alive[f]) keep = false;
        }
      }
      next[t] = keep;
      if (keep) survived[t] = round;
    }
    alive = next;
  }
  for (const auto& t : small_triples(N)) {
    if (t == Triple{0, 0, 0}) continue;
    auto r = element_cb_rank(from_triple(t)).as_natural();
    REQUIRE(r);
    CHECK(static_cast<int>(*r) == survived[t]);
  }
}

TEST_CASE("clopen boolean operations") {
  SpaceSpec s21{O("2"), 1};
  SpaceSpec s12{O("1"), 2};
  auto c = ClopenSet::interval(s21, std::nullopt, O("w"));
  CHECK(clopen_union(c, clopen_complement(c)) == ClopenSet::whole(s21));
  CHECK(clopen_complement(c) == ClopenSet::interval(s21, O("w"), O("w^2")));
  CHECK(clopen_intersection(ClopenSet::interval(s12, O("0"), O("w")),
                            ClopenSet::interval(s12, O("w"), O("w*2")))
            .is_empty());
  // adjacent intervals merge
  auto merged = clopen_union(ClopenSet::interval(s12, O("0"), O("w")), ClopenSet::interval(s12, O("w"), O("w*2")));
  CHECK(merged.intervals().size() == 1);
  CHECK_THROWS(clopen_union(c, ClopenSet::whole(s12)));
  for (const char* p : {"0", "1", "w", "w + 1", "w*5 + 3", "w^2"}) {
    CHECK(clopen_complement(c).contains(O(p)) != c.contains(O(p)));
  }
}

TEST_CASE("ideal membership") {
  SpaceSpec s21{O("2"), 1};
  CHECK(ideal_member(ClopenSet::interval(s21, O("2"), O("3")), O("0")));
  CHECK_FALSE(ideal_member(ClopenSet::interval(s21, O("0"), O("w*5")), O("0")));
  CHECK(ideal_member(ClopenSet::interval(s21, O("0"), O("w*5")), O("1")));
  CHECK_FALSE(ideal_member(ClopenSet::interval(s21, O("0"), O("w^2")), O("0")));
  CHECK_FALSE(ideal_member(ClopenSet::interval(s21, O("0"), O("w^2")), O("1")));
  CHECK(ideal_member(ClopenSet::interval(s21, O("0"), O("w^2")), O("2")));
  for (std::uint64_t a = 1; a <= 3; ++a)
    for (std::uint64_t k = 1; k <= 3; ++k) {
      auto whole = ClopenSet::whole(SpaceSpec{Ordinal::natural(a), k});
      CHECK(ideal_member(whole, Ordinal::natural(a)));
      CHECK_FALSE(ideal_member(whole, Ordinal::natural(a - 1)));
    }
}

TEST_CASE("CB rank and degree of clopen sets") {
  SpaceSpec s21{O("2"), 1};
  CHECK(cb_rank_degree(ClopenSet::empty(s21)).minus_one);
  CHECK(cb_rank_degree(ClopenSet::interval(s21, O("0"), O("w*2"))) == CbRankDegree{false, O("1"), 2});
  for (std::uint64_t a = 0; a <= 3; ++a)
    for (std::uint64_t k = 1; k <= 3; ++k) {
      SpaceSpec sp{Ordinal::natural(a), k};
      CHECK(cb_rank_degree(ClopenSet::whole(sp)) == CbRankDegree{false, Ordinal::natural(a), k});
      auto rep = space_rank_degree(sp);
      CHECK(rep.rank == Ordinal::natural(a));
      CHECK(rep.degree == k);
      // the chain stabilises one step past the rank
      REQUIRE(rep.chain.size() == a + 2);
      CHECK(rep.chain[a].whole_space_member);
      if (a > 0) CHECK_FALSE(rep.chain[a - 1].whole_space_member);
    }
  auto r11 = space_rank_degree(SpaceSpec{O("1"), 1});
  CHECK(r11.chain[1].quotient_atoms == std::optional<std::uint64_t>(1));  // B/I_0 is the 2-element algebra
  CHECK(space_rank_degree(SpaceSpec{O("0"), 4}).degree == 4);
  auto inf = space_rank_degree(SpaceSpec{O("w"), 2});
  CHECK(inf.symbolic);
  CHECK(inf.rank == O("w"));
  CHECK(inf.degree == 2);
}

TEST_CASE("endpoint counting agrees with truncation enumeration") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::uint64_t> coef(0, 3);
  SpaceSpec s{O("2"), 3};
  for (int i = 0; i < 300; ++i) {
    Triple lo{coef(rng) % 3, coef(rng), coef(rng)};
    Triple hi{coef(rng) % 3, coef(rng), coef(rng)};
    if (!triple_less(lo, hi)) std::swap(lo, hi);
    if (lo == hi) continue;
    bool bottom = coef(rng) == 0;
    Interval iv{bottom ? LowerBound{} : LowerBound{from_triple(lo)}, from_triple(hi)};
    for (int e = 0; e <= 2; ++e) {
      CHECK(count_rank_at_least(iv, Ordinal::natural(e)) == oracle_count(iv, e));
    }
    (void)s;
  }
}

TEST_CASE("ideal membership is monotone and its least level is the CB rank") {
  std::mt19937 rng(3);
  for (std::uint64_t a = 1; a <= 3; ++a)
    for (std::uint64_t k = 1; k <= 3; ++k) {
      SpaceSpec sp{Ordinal::natural(a), k};
      std::uniform_int_distribution<std::uint64_t> coef(0, 3);
      for (int i = 0; i < 100; ++i) {
        std::vector<Interval> ivs;
        int n = 1 + static_cast<int>(coef(rng) % 3);
        for (int j = 0; j < n; ++j) {
          // random ordinals below w^a * k
          auto rnd = [&] {
            Ordinal o = Ordinal::omega_power(Ordinal::natural(a - 1), coef(rng) % k + 0);
            for (std::uint64_t e = a - 1; e-- > 0;)
              o = ord_add(o, Ordinal::omega_power(Ordinal::natural(e), coef(rng)));
            return o;
          };
          Ordinal x = rnd(), y = rnd();
          if (y < x) std::swap(x, y);
          if (coef(rng) == 0) y = sp.top();
          ivs.push_back(Interval{coef(rng) == 0 ? LowerBound{} : LowerBound{x}, y});
        }
        ClopenSet c(sp, ivs);
        auto rd = cb_rank_degree(c);
        if (rd.minus_one) {
          CHECK(ideal_member(c, O("0")));
          continue;
        }
        bool prev = false;
        std::optional<std::uint64_t> least;
        for (std::uint64_t b = 0; b <= a; ++b) {
          bool in = ideal_member(c, Ordinal::natural(b));
          CHECK((!prev || in));
          if (in && !least) least = b;
          prev = in;
        }
        REQUIRE(least);
        CHECK(Ordinal::natural(*least) == rd.rank);
      }
    }
}
