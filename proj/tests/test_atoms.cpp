#include "doctest_main.hpp"

#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "fmwb/atoms.hpp"

using namespace fmwb;

namespace {

using Perm = std::vector<int>;

// Closure of a generating set under composition; small groups only.
std::vector<Perm> generate_group(const std::vector<Perm>& gens) {
  const std::size_t n = gens.front().size();
  Perm id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<Perm> seen{id};
  std::vector<Perm> queue{id};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      Perm h(n);
      for (std::size_t x = 0; x < n; ++x) h[x] = g[static_cast<std::size_t>(queue[i][x])];
      if (seen.insert(h).second) queue.push_back(h);
    }
  }
  return queue;
}

// Orbit labels of points 0..n-1 under the elements of a group fixing `fixed`.
std::vector<int> stabilizer_orbits(const std::vector<Perm>& group, const std::vector<int>& fixed) {
  const std::size_t n = group.front().size();
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (label[x] >= 0) continue;
    for (const auto& g : group) {
      bool ok = true;
      for (int f : fixed) ok = ok && g[static_cast<std::size_t>(f)] == f;
      if (ok) label[static_cast<std::size_t>(g[x])] = next;
    }
    ++next;
  }
  return label;
}

// Number of orbits of a group on tuples of length k over n points.
std::size_t tuple_orbit_count(const std::vector<Perm>& gens, std::size_t n, int k) {
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= n;
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t t = 0; t < total; ++t) {
    for (const auto& g : gens) {
      std::size_t rest = t, image = 0, mult = 1;
      for (int i = 0; i < k; ++i) {
        image += static_cast<std::size_t>(g[rest % n]) * mult;
        rest /= n;
        mult *= n;
      }
      parent[find(t)] = find(image);
    }
  }
  std::size_t roots = 0;
  for (std::size_t t = 0; t < total; ++t) roots += find(t) == t;
  return roots;
}

bool same_orbit(const Decomposition& d, const Atom& x, const Atom& y) { return orbit_of(d, x) == orbit_of(d, y); }

std::vector<BackendSpec> all_backends() {
  return {BackendSpec::pure_set(),         BackendSpec::dense_order(),        BackendSpec::paired_atoms(),
          BackendSpec::named_pairs(),      BackendSpec::vector_space(2),      BackendSpec::vector_space(3),
          BackendSpec::ordinal_space(1, 2), BackendSpec::ordinal_space(2, 1), BackendSpec::ordinal_space(0, 3),
          BackendSpec::rigid()};
}

Support random_support(const BackendSpec& b, std::mt19937_64& rng, std::size_t atoms, std::size_t clopens) {
  Support s;
  for (std::size_t i = 0; i < atoms; ++i) s.atoms.push_back(random_atom(b, rng));
  const auto cat = clopen_catalog(b);
  for (std::size_t i = 0; i < clopens && !cat.empty(); ++i) s.clopens.push_back(cat[rng() % cat.size()]);
  return normalize_support(b, s);
}

Ordinal w(std::uint64_t e, std::uint64_t c = 1) { return Ordinal::omega_power(Ordinal::natural(e), c); }

}  // namespace

TEST_CASE("field arithmetic is a field for every supported order") {
  for (int q : {2, 3, 4, 5, 7, 8}) {
    Field f(q);
    for (int a = 0; a < q; ++a) {
      CHECK(f.add(a, f.neg(a)) == 0);
      if (a) CHECK(f.mul(a, f.inv(a)) == 1);
      for (int b = 0; b < q; ++b)
        for (int c = 0; c < q; ++c) CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
    }
  }
  CHECK_THROWS_AS(Field(6), InputError);
}

TEST_CASE("PureSet orbits match the symmetric group on a truncation") {
  const auto b = BackendSpec::pure_set();
  const auto d = orbits(b, {{Atom::id(0), Atom::id(1)}, {}});
  CHECK(d.orbits.size() == 3);
  // S_6 acting on atoms 0..5.
  const auto group = generate_group({{1, 0, 2, 3, 4, 5}, {1, 2, 3, 4, 5, 0}});
  CHECK(group.size() == 720);
  for (const auto& fixed : std::vector<std::vector<int>>{{}, {0}, {0, 1}, {2, 4, 5}}) {
    Support s;
    for (int f : fixed) s.atoms.push_back(Atom::id(static_cast<std::uint64_t>(f)));
    const auto dec = orbits(b, s);
    const auto label = stabilizer_orbits(group, fixed);
    for (int x = 0; x < 6; ++x)
      for (int y = 0; y < 6; ++y)
        CHECK((label[x] == label[y]) == same_orbit(dec, Atom::id(x), Atom::id(y)));
  }
}

TEST_CASE("PairedAtoms orbits match the wreath product Z2 wr S5") {
  // Atom (n, side) is point 2n + side.
  const auto group = generate_group({{1, 0, 2, 3, 4, 5, 6, 7, 8, 9},
                                     {2, 3, 0, 1, 4, 5, 6, 7, 8, 9},
                                     {2, 3, 4, 5, 6, 7, 8, 9, 0, 1}});
  CHECK(group.size() == 3840);
  const auto b = BackendSpec::paired_atoms();
  auto atom = [](int p) { return Atom::pair(static_cast<std::uint64_t>(p / 2), p % 2); };
  for (const auto& fixed : std::vector<std::vector<int>>{{}, {0}, {0, 3}, {1, 2, 5}}) {
    Support s;
    for (int f : fixed) s.atoms.push_back(atom(f));
    const auto dec = orbits(b, s);
    const auto label = stabilizer_orbits(group, fixed);
    for (int x = 0; x < 10; ++x)
      for (int y = 0; y < 10; ++y) CHECK((label[x] == label[y]) == same_orbit(dec, atom(x), atom(y)));
  }
  // The partner of a fixed atom is fixed.
  const Support s{{Atom::pair(0, 0)}, {}};
  CHECK(!same_orbit_witness(b, s, Atom::pair(0, 1), Atom::pair(3, 0)).witness);
  CHECK(dcl(b, s).atoms == std::vector<Atom>{Atom::pair(0, 0), Atom::pair(0, 1)});
  CHECK(acl(b, s).atoms == dcl(b, s).atoms);
  CHECK(fixed_atoms(b, s).atoms.size() == 2);
}

TEST_CASE("VectorSpace(2) orbits match GL(3,2) on F_2^3") {
  const Field f(2);
  std::vector<Matrix> gl;
  for (int bits = 0; bits < 512; ++bits) {
    Matrix m(3, std::vector<int>(3));
    for (int i = 0; i < 9; ++i) m[static_cast<std::size_t>(i / 3)][static_cast<std::size_t>(i % 3)] = bits >> i & 1;
    if (mat_inverse(f, m)) gl.push_back(m);
  }
  CHECK(gl.size() == 168);
  auto vec_of = [](int x) { return Atom::vec({x & 1, x >> 1 & 1, x >> 2 & 1}); };
  const auto b = BackendSpec::vector_space(2);
  CHECK(orbits(b, {{vec_of(1)}, {}}).orbits.size() == 3);
  for (const auto& fixed : std::vector<std::vector<int>>{{}, {1}, {1, 2}, {3, 5, 6}}) {
    Support s;
    for (int x : fixed) s.atoms.push_back(vec_of(x));
    const auto dec = orbits(b, s);
    for (int x = 0; x < 8; ++x)
      for (int y = 0; y < 8; ++y) {
        bool joined = false;
        for (const auto& m : gl) {
          bool fixes = true;
          for (int v : fixed) fixes = fixes && mat_apply(f, m, vec_of(v).as_vec()) == vec_of(v).as_vec();
          if (fixes && mat_apply(f, m, vec_of(x).as_vec()) == vec_of(y).as_vec()) joined = true;
        }
        CHECK(joined == same_orbit(dec, vec_of(x), vec_of(y)));
      }
  }
}

TEST_CASE("documented orbit decompositions") {
  const auto np = orbits(BackendSpec::named_pairs(), {{Atom::pair(0, 1)}, {}});
  CHECK(np.orbits.size() == 2);
  REQUIRE(np.family);
  CHECK(np.family->first_index() == 1);
  CHECK(np.family->member(4).size() == 2);

  const auto dense = orbits(BackendSpec::dense_order(), {{Atom::rational(1), Atom::rational(Rational(5, 2))}, {}});
  CHECK(dense.orbits.size() == 5);
  CHECK(dense.infinite_orbit_count() == 3);

  // w*2+1 with no support: isolated points form one orbit, the two limits another.
  const auto ord = orbits(BackendSpec::ordinal_space(1, 2), {});
  CHECK(ord.orbits.size() == 2);
  CHECK(ord.orbits[1].finite());
  CHECK(ord.orbits[1].atoms == std::vector<Atom>{Atom::ordinal(w(1)), Atom::ordinal(w(1, 2))});

  const auto fixed = fixed_atoms(BackendSpec::ordinal_space(1, 1), {});
  CHECK(fixed.atoms == std::vector<Atom>{Atom::ordinal(w(1))});
  CHECK(!fixed.infinite);

  const auto rigid = fixed_atoms(BackendSpec::rigid(), {});
  CHECK(rigid.all);
  CHECK(rigid.infinite);

  const auto named_acl = acl(BackendSpec::named_pairs(), {{Atom::pair(2, 0)}, {}});
  CHECK(named_acl.all);
  const auto named_dcl = dcl(BackendSpec::named_pairs(), {{Atom::pair(2, 0)}, {}});
  CHECK(!named_dcl.all);
  CHECK(named_dcl.atoms == std::vector<Atom>{Atom::pair(2, 0), Atom::pair(2, 1)});
  CHECK(dcl(BackendSpec::pure_set(), {{Atom::id(3), Atom::id(7)}, {}}).atoms.size() == 2);
}

TEST_CASE("witness examples") {
  const auto d = BackendSpec::dense_order();
  const Support s{{Atom::rational(0)}, {}};
  const auto r = same_orbit_witness(d, s, Atom::rational(1), Atom::rational(2));
  REQUIRE(r.witness);
  CHECK(!verify_witness(d, s, *r.witness));
  // Replay on sampled rationals: order preserved, 0 fixed, 1 -> 2.
  std::vector<Rational> pts;
  for (int n = -12; n <= 12; ++n) pts.push_back(Rational(n, 4));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    CHECK(apply_witness(d, *r.witness, Atom::rational(pts[i])).as_rational() <
          apply_witness(d, *r.witness, Atom::rational(pts[i + 1])).as_rational());
  CHECK(apply_witness(d, *r.witness, Atom::rational(0)) == Atom::rational(0));
  CHECK(!same_orbit_witness(d, s, Atom::rational(-1), Atom::rational(2)).witness);

  for (const auto& b : all_backends()) {
    std::mt19937_64 rng(3);
    const Atom a = random_atom(b, rng);
    const auto id = same_orbit_witness(b, {}, a, a);
    REQUIRE(id.witness);
    CHECK(witness_str(*id.witness) == "identity");
  }

  // Ordinal interval exchange respecting a clopen cell.
  const auto o = BackendSpec::ordinal_space(2, 1);
  const Support cs{{}, {ClopenSet::interval(o.space(), std::nullopt, w(1, 2))}};
  const auto same = same_orbit_witness(o, cs, Atom::ordinal(Ordinal::natural(3)),
                                       Atom::ordinal(ord_add(w(1), Ordinal::natural(5))));
  REQUIRE(same.witness);
  CHECK(!verify_witness(o, cs, *same.witness));
  const auto other = same_orbit_witness(o, cs, Atom::ordinal(Ordinal::natural(3)),
                                        Atom::ordinal(ord_add(w(1, 3), Ordinal::natural(1))));
  CHECK(!other.witness);
  CHECK(other.separation.find("clopen") != std::string::npos);
  const auto ranks = same_orbit_witness(o, cs, Atom::ordinal(Ordinal::natural(3)), Atom::ordinal(w(1)));
  CHECK(ranks.separation.find("CB-rank") != std::string::npos);
  // Two limits of rank 1 inside the cell swap.
  const auto lim = same_orbit_witness(o, cs, Atom::ordinal(w(1)), Atom::ordinal(w(1, 2)));
  REQUIRE(lim.witness);
  CHECK(apply_witness(o, *lim.witness, Atom::ordinal(w(1, 2))) == Atom::ordinal(w(1)));
}

TEST_CASE("verifier rejects broken witnesses") {
  const auto p = BackendSpec::paired_atoms();
  PermWitness bad{{{Atom::pair(1, 0), Atom::pair(2, 0)}, {Atom::pair(2, 0), Atom::pair(1, 0)}}};
  CHECK(verify_witness(p, {}, bad));  // pairs split
  const auto d = BackendSpec::dense_order();
  CHECK(verify_witness(d, {}, PlWitness{{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}}));
  CHECK(verify_witness(d, {{Atom::rational(0)}, {}}, PlWitness{{{Rational(0), Rational(1)}}}));
  const auto v = BackendSpec::vector_space(2);
  CHECK(verify_witness(v, {}, MatrixWitness{{{1, 1}, {1, 1}}}));
  const auto o = BackendSpec::ordinal_space(1, 1);
  const auto sp = o.space();
  // (0, w] onto [0, 0] has the wrong length.
  ExchangeWitness ex{{{{Ordinal{}, w(1)}, {std::nullopt, Ordinal{}}}, {{std::nullopt, Ordinal{}}, {Ordinal{}, w(1)}}}};
  CHECK(verify_witness(o, {}, ex));
  (void)sp;
}

TEST_CASE("partition, witness coherence and monotonicity on sampled supports") {
  std::mt19937_64 rng(11);
  for (const auto& b : all_backends()) {
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t na = static_cast<std::size_t>(trial % 5);
      const Support s = random_support(b, rng, na, b.kind == BackendKind::OrdinalSpace ? trial % 3 : 0);
      const auto d = orbits(b, s);
      const auto sample = sample_atoms(b, s, rng, 200);
      for (const auto& a : sample) {
        int hits = 0;
        for (const auto& o : d.orbits) hits += o.contains(a);
        if (hits == 0 && d.family) hits = 1;
        CHECK_MESSAGE(hits == 1, b.str() << " " << s.str() << " " << a.str());
      }
      for (std::size_t i = 0; i < 200; ++i) {
        const Atom& x = sample[rng() % sample.size()];
        const Atom& y = sample[rng() % sample.size()];
        const auto r = same_orbit_witness(b, s, x, y);
        CHECK(r.witness.has_value() == same_orbit(d, x, y));
        if (r.witness) {
          CHECK(!verify_witness(b, d.support, *r.witness));
          CHECK(apply_witness(b, *r.witness, x) == y);
        }
      }
      // A larger support refines the decomposition.
      Support bigger = s;
      bigger.atoms.push_back(random_atom(b, rng));
      const auto d2 = orbits(b, bigger);
      for (std::size_t i = 0; i < 100; ++i) {
        const Atom& x = sample[rng() % sample.size()];
        const Atom& y = sample[rng() % sample.size()];
        if (same_orbit(d2, x, y)) CHECK(same_orbit(d, x, y));
      }
    }
  }
}

TEST_CASE("tuple orbit counts") {
  const auto ps = BackendSpec::pure_set();
  const std::vector<std::uint64_t> bell{1, 2, 5, 15}, ordered_bell{1, 3, 13, 75};
  // S_8 on an 8-atom truncation.
  const std::vector<Perm> s8{{1, 0, 2, 3, 4, 5, 6, 7}, {1, 2, 3, 4, 5, 6, 7, 0}};
  for (int n = 1; n <= 4; ++n) {
    CHECK(count_tuple_orbits(ps, n, {}).count == bell[n - 1]);
    CHECK(tuple_orbit_count(s8, 8, n) == bell[n - 1]);
  }
  // Order/equality patterns of tuples over a 5-point chain.
  for (int n = 1; n <= 4; ++n) {
    CHECK(count_tuple_orbits(BackendSpec::dense_order(), n, {}).count == ordered_bell[n - 1]);
    std::set<std::vector<int>> patterns;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 5;
    for (std::size_t t = 0; t < total; ++t) {
      std::vector<int> v;
      for (std::size_t r = t, i = 0; i < static_cast<std::size_t>(n); ++i, r /= 5) v.push_back(static_cast<int>(r % 5));
      std::vector<int> p;
      for (int x : v)
        for (int y : v) p.push_back((x > y) - (x < y));
      patterns.insert(p);
    }
    CHECK(patterns.size() == ordered_bell[n - 1]);
  }
  CHECK(!count_tuple_orbits(BackendSpec::named_pairs(), 1, {}).count);
  CHECK(!count_tuple_orbits(BackendSpec::rigid(), 1, {}).count);
  // Wreath product on pairs: orbits on pairs of atoms are equal, partners, unrelated.
  CHECK(count_tuple_orbits(BackendSpec::paired_atoms(), 2, {}).count == 3);
  const std::vector<Perm> wr{{1, 0, 2, 3, 4, 5, 6, 7, 8, 9}, {2, 3, 0, 1, 4, 5, 6, 7, 8, 9}, {2, 3, 4, 5, 6, 7, 8, 9, 0, 1}};
  for (int n = 1; n <= 3; ++n)
    CHECK(count_tuple_orbits(BackendSpec::paired_atoms(), n, {}).count == tuple_orbit_count(wr, 10, n));
}

TEST_CASE("oligomorphic backends have finitely many types over small supports") {
  for (const auto& b : {BackendSpec::pure_set(), BackendSpec::dense_order(), BackendSpec::paired_atoms(),
                        BackendSpec::vector_space(2), BackendSpec::ordinal_space(1, 2)}) {
    const auto cat = support_catalog(b, 3, 0);
    CHECK(!cat.truncated);
    for (const auto& s : cat.supports) {
      for (int n = 1; n <= (s.atoms.size() >= 2 ? 2 : 3); ++n) CHECK(count_tuple_orbits(b, n, s).count.has_value());
      if (b.kind != BackendKind::OrdinalSpace) CHECK(!acl(b, s).infinite);
    }
  }
  CHECK(acl(BackendSpec::named_pairs(), {}).all);
}

TEST_CASE("support validation") {
  CHECK_THROWS_AS(orbits(BackendSpec::pure_set(), {{Atom::rational(1)}, {}}), InputError);
  CHECK_THROWS_AS(orbits(BackendSpec::vector_space(6), {}), InputError);
  CHECK_THROWS_AS(orbits(BackendSpec::paired_atoms(), {{Atom::pair(0, 2)}, {}}), InputError);
  const auto o = BackendSpec::ordinal_space(1, 1);
  CHECK_THROWS_AS(orbits(o, {{Atom::ordinal(w(1, 2))}, {}}), InputError);
  BackendSpec inf = o;
  inf.alpha = Ordinal::omega();
  CHECK_THROWS_AS(orbits(inf, {}), BoundExceeded);
  CHECK(parse_rational("-6/4") == Rational(-3, 2));
  CHECK(rational_str(Rational(5, 10)) == "1/2");
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("x"), InputError);
}
