#include "fmwb/tour.hpp"

#include <functional>
#include <map>
#include <sstream>

#include "fmwb/clopen.hpp"
#include "fmwb/efgames.hpp"
#include "fmwb/errors.hpp"
#include "fmwb/fmsets.hpp"
#include "fmwb/fraisse.hpp"

namespace fmwb {

namespace {

class Checker {
 public:
  explicit Checker(SuiteResult& r) : r_(r) {}
  bool operator()(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok) {
      r_.pass = false;
      r_.failures.push_back(what);
    }
    return ok;
  }

 private:
  SuiteResult& r_;
};

template <class T>
std::string show(const T& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

// Every (|S| + |T| <= 2) extension axiom of the random graph, read directly
// off the adjacency relation.
std::size_t extension_axiom_failures(const FinStructure& g) {
  const int n = g.size();
  auto ok = [&](const std::vector<int>& s, const std::vector<int>& t) {
    for (int z = 0; z < n; ++z) {
      bool good = true;
      for (int x : s) good = good && x != z && g.holds(0, z, x);
      for (int x : t) good = good && x != z && !g.holds(0, z, x);
      if (good) return true;
    }
    return false;
  };
  std::size_t bad = 0;
  bad += !ok({}, {});
  for (int a = 0; a < n; ++a) {
    bad += !ok({a}, {});
    bad += !ok({}, {a});
    for (int b = a + 1; b < n; ++b) {
      bad += !ok({a, b}, {});
      bad += !ok({}, {a, b});
      bad += !ok({a}, {b});
      bad += !ok({b}, {a});
    }
  }
  return bad;
}

FinStructure matching_graph(int pairs) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < pairs; ++i) e.emplace_back(2 * i, 2 * i + 1);
  return make_graph(2 * pairs, e);
}

// Isolated points of the space lying in [0, high].
SymSet isolated_below(const BackendSpec& b, const Ordinal& high) {
  Support s;
  const ClopenSet c = ClopenSet::interval(b.space(), std::nullopt, high);
  if (c != ClopenSet::whole(b.space())) s.clopens.push_back(c);
  s = normalize_support(b, s);
  const auto d = orbits(b, s);
  std::set<int> sel;
  for (const auto& o : d.orbits)
    if (o.kind == OrbitKind::RankClass && o.rank == Ordinal::natural(0) && clopen_subset(o.cell, c)) sel.insert(o.id);
  return make_symset(b, s, sel);
}

void suite_fraisse(SuiteResult& r, Checker& check, const DeskConfig& cfg) {
  const int n = cfg.fraisse_bound;
  for (const std::string name : {"graphs", "linear_orders", "posets", "posets_linext", "bipartite"}) {
    const auto rep = check_age_properties(builtin_age(name), n);
    check(rep.hp && rep.jep && rep.ap, name + " should satisfy HP, JEP and AP up to size " + std::to_string(n));
    r.details[name] = {{"hp", rep.hp}, {"jep", rep.jep}, {"ap", rep.ap}, {"ap_checked", rep.ap_checked}};
  }
  const auto spec = builtin_age("maxdeg2");
  const auto rep = check_age_properties(spec, n);
  check(rep.hp && rep.jep && !rep.ap, "maxdeg2 should satisfy HP and JEP but fail AP");
  Json jw = nullptr;
  if (check(rep.ap_witness.has_value(), "maxdeg2 AP failure needs a witness")) {
    const auto& w = *rep.ap_witness;
    check(is_embedding(w.b, w.c, w.p1) && is_embedding(w.b, w.d, w.p2), "AP witness maps are embeddings");
    check(!amalgamate(spec, w.b, w.c, w.d, w.p1, w.p2), "AP witness has no amalgam in the class");
    const auto again = check_age_properties(spec, n);
    check(again.ap_witness && again.ap_witness->b == w.b && again.ap_witness->c == w.c && again.ap_witness->d == w.d &&
              again.ap_witness->p1 == w.p1 && again.ap_witness->p2 == w.p2,
          "AP witness is reproducible");
    jw = {{"b", structure_key(w.b)}, {"c", structure_key(w.c)}, {"d", structure_key(w.d)}};
  }
  r.details["maxdeg2"] = {{"hp", rep.hp}, {"jep", rep.jep}, {"ap", rep.ap}, {"witness", jw}};
}

void suite_generic(SuiteResult& r, Checker& check, const DeskConfig& cfg) {
  const auto spec = builtin_age("graphs");
  const auto g1 = build_generic(spec, cfg.generic_n, cfg.generic_e_bound);
  const auto g2 = build_generic(spec, cfg.generic_n, cfg.generic_e_bound);
  check(!g1.stalled && g1.structure.size() == cfg.generic_n, "generic graph reaches the requested size");
  std::size_t unmet = 0;
  for (const auto& t : g1.tasks) unmet += t.unmet;
  check(unmet == 0, "every extension task is met");
  const auto bad = extension_axiom_failures(g1.structure);
  check(bad == 0, show(bad) + " extension axioms with |S|+|T| <= 2 fail");
  check(g1.hash == g2.hash && g1.structure == g2.structure, "build is deterministic");
  check(structure_hash(g1.structure) == g1.hash, "reported hash matches the structure");
  r.details = {{"n", g1.structure.size()}, {"edges", g1.structure.tuples(0).size() / 2}, {"hash", show(g1.hash)},
               {"axiom_failures", bad}};
}

void suite_orbits(SuiteResult& r, Checker& check, const DeskConfig&) {
  const std::vector<std::uint64_t> bell = {1, 2, 5, 15}, fubini = {1, 3, 13, 75};
  Json ps = Json::array(), dn = Json::array();
  for (int n = 1; n <= 4; ++n) {
    const auto a = count_tuple_orbits(BackendSpec::pure_set(), n, {});
    const auto b = count_tuple_orbits(BackendSpec::dense_order(), n, {});
    check(a.count == bell[n - 1], "PureSet " + std::to_string(n) + "-orbits");
    check(b.count == fubini[n - 1], "DenseOrder " + std::to_string(n) + "-orbits");
    ps.push_back(a.count ? Json(*a.count) : Json(nullptr));
    dn.push_back(b.count ? Json(*b.count) : Json(nullptr));
  }
  r.details = {{"PureSet", ps}, {"DenseOrder", dn}};
}

std::vector<BackendSpec> catalog_backends(const TourOptions& opt) {
  std::vector<BackendSpec> out = {BackendSpec::pure_set(),    BackendSpec::paired_atoms(),     BackendSpec::vector_space(2),
                                  BackendSpec::dense_order(), BackendSpec::named_pairs(),      BackendSpec::ordinal_space(1, 2)};
  if (opt.include_rigid) out.push_back(BackendSpec::rigid());
  return out;
}

void suite_amorphous(SuiteResult& r, Checker& check, const DeskConfig& cfg, const TourOptions& opt) {
  for (const auto& b : catalog_backends(opt)) {
    const bool want = b.kind == BackendKind::PureSet || b.kind == BackendKind::PairedAtoms ||
                      b.kind == BackendKind::VectorSpace;
    const auto res = is_amorphous(b, cfg.s_max);
    check(res.amorphous == want, b.str() + (want ? " should be amorphous" : " should not be amorphous"));
    Json j = {{"amorphous", res.amorphous}, {"reason", res.reason}};
    if (!want) {
      const bool valid = res.witness && size_class(*res.witness).kind == SizeClass::Kind::InfiniteCoinfinite;
      check(valid, b.str() + " needs an infinite coinfinite witness");
      if (res.witness) j["witness"] = res.witness->str();
    }
    r.details[b.str()] = j;
  }
}

void suite_gauge(SuiteResult& r, Checker& check, const DeskConfig& cfg) {
  using Table = std::map<std::uint64_t, std::set<std::uint64_t>>;
  const std::vector<std::pair<BackendSpec, Table>> cases = {
      {BackendSpec::pure_set(), {{1, {0}}}},
      {BackendSpec::paired_atoms(), {{1, {0}}, {2, {0}}}},
      {BackendSpec::vector_space(2), {{1, {0}}, {2, {0}}, {4, {0}}}},
  };
  for (const auto& [b, want] : cases) {
    const auto t = check_gauge_invariance(b, cfg.gauge_s_max, cfg.gauge_b_max);
    check(t.single_valued && t.leftovers == want, b.str() + " gauge table");
    Json tab = Json::object();
    for (const auto& [g, ls] : t.leftovers) tab[std::to_string(g)] = ls;
    r.details[b.str()] = {{"table", tab}, {"partitions", t.partitions}, {"supports", t.supports}};
  }
  const auto pa = check_gauge_invariance(BackendSpec::paired_atoms(), cfg.gauge_s_max, cfg.gauge_b_max);
  const auto it = pa.leftovers.find(2);
  check(it != pa.leftovers.end() && !it->second.count(1), "no PairedAtoms partition of gauge 2 leaves one atom over");
}

void suite_rank(SuiteResult& r, Checker& check, const DeskConfig& cfg) {
  struct Entry {
    std::string name;
    SymSet set;
    RankDegree want;
  };
  const auto ps = BackendSpec::pure_set();
  const auto w3 = BackendSpec::ordinal_space(3, 1);
  std::vector<Entry> entries = {
      {"empty", sym_empty(ps), RankDegree::minus_one()},
      {"finite 3-set", sym_atoms(ps, {Atom::id(0), Atom::id(1), Atom::id(2)}), RankDegree::of(Ordinal::natural(0), 3)},
      {"PureSet", sym_universe(ps), RankDegree::of(Ordinal::natural(1), 1)},
      {"PairedAtoms", sym_universe(BackendSpec::paired_atoms()), RankDegree::of(Ordinal::natural(1), 1)},
      {"VectorSpace(2)", sym_universe(BackendSpec::vector_space(2)), RankDegree::of(Ordinal::natural(1), 1)},
  };
  for (std::uint64_t beta = 1; beta <= 3; ++beta)
    entries.push_back({"isolated points below w^" + std::to_string(beta),
                       isolated_below(w3, Ordinal::omega_power(Ordinal::natural(beta))),
                       RankDegree::of(Ordinal::natural(beta), 1)});
  entries.push_back({"DenseOrder", sym_universe(BackendSpec::dense_order()), RankDegree::no_rank()});
  for (const auto& e : entries) {
    const auto got = mt_rank(e.set);
    check(got == e.want, e.name + ": rank " + got.str() + ", expected " + e.want.str());
    Json j = {{"rank", rank_to_json(got)}};
    const bool small = e.want.kind != RankDegree::Kind::NoRank &&
                       (e.want.kind == RankDegree::Kind::MinusOne || e.want.rank <= Ordinal::natural(2));
    if (small) {
      const auto bounds = mt_rank_oracle(e.set, cfg.rank_s_max, cfg.rank_depth);
      check(rank_consistent(got, bounds), e.name + ": oracle bounds inconsistent with " + got.str());
      j["oracle_lower"] = rank_to_json(bounds.lower);
      if (bounds.upper) j["oracle_upper"] = rank_to_json(*bounds.upper);
      if (bounds.evidence) j["oracle_evidence"] = rank_to_json(*bounds.evidence);
    }
    r.details[e.name] = j;
  }
}

void suite_cb(SuiteResult& r, Checker& check, const DeskConfig&) {
  for (std::uint64_t a = 0; a <= 3; ++a)
    for (std::uint64_t k = 1; k <= 3; ++k) {
      const SpaceSpec sp{Ordinal::natural(a), k};
      const auto chain = space_rank_degree(sp);
      const auto elem = cb_rank_degree(ClopenSet::whole(sp));
      const std::string name = "w^" + std::to_string(a) + "*" + std::to_string(k) + "+1";
      check(chain.rank == Ordinal::natural(a) && chain.degree == k, name + ": ideal chain");
      check(!elem.minus_one && elem.rank == chain.rank && elem.degree == chain.degree, name + ": elementwise");
      r.details[name] = {{"rank", chain.rank.str()}, {"degree", chain.degree}, {"chain_levels", chain.chain.size()}};
    }
}

void suite_dedekind(SuiteResult& r, Checker& check, const DeskConfig& cfg, const TourOptions& opt) {
  std::vector<std::pair<BackendSpec, DedekindClass>> cases = {
      {BackendSpec::pure_set(), DedekindClass::WeaklyDF},         {BackendSpec::dense_order(), DedekindClass::WeaklyDF},
      {BackendSpec::paired_atoms(), DedekindClass::WeaklyDF},     {BackendSpec::vector_space(2), DedekindClass::WeaklyDF},
      {BackendSpec::ordinal_space(1, 1), DedekindClass::WeaklyDF}, {BackendSpec::ordinal_space(2, 1), DedekindClass::WeaklyDF},
      {BackendSpec::ordinal_space(3, 1), DedekindClass::WeaklyDF}, {BackendSpec::named_pairs(), DedekindClass::DFnotWeakly},
  };
  if (opt.include_rigid) cases.emplace_back(BackendSpec::rigid(), DedekindClass::NotDF);
  for (const auto& [b, want] : cases) {
    const auto res = dedekind_class(b, cfg.s_max);
    check(res.cls == want, b.str() + " should be " + dedekind_class_name(want));
    // The evidence support must reproduce the finding.
    const auto d = orbits(b, res.evidence);
    bool ok = true;
    if (want == DedekindClass::WeaklyDF) ok = !d.family && d.infinite_orbit_count() >= 1;
    if (want == DedekindClass::DFnotWeakly) ok = d.family && d.family->kind == FamilyKind::NamedPairs;
    if (want == DedekindClass::NotDF) ok = d.family && d.family->kind == FamilyKind::RigidSingletons;
    check(ok, b.str() + ": evidence support does not reproduce the class");
    r.details[b.str()] = {{"class", dedekind_class_name(res.cls)}, {"evidence", res.evidence.str()}, {"detail", res.detail}};
  }
}

void suite_venn(SuiteResult& r, Checker& check, const DeskConfig&) {
  constexpr int n = 6;
  constexpr std::uint64_t all = (1u << n) - 1;
  std::size_t runs = 0, violations = 0;
  std::vector<std::uint64_t> fam;
  std::function<void(std::uint64_t)> rec = [&](std::uint64_t next) {
    if (!fam.empty()) {
      ++runs;
      const auto v = venn_chain(n, fam);
      bool ok = true;
      for (std::size_t i = 1; i < v.m_sequence.size(); ++i) ok = ok && v.m_sequence[i - 1] < v.m_sequence[i];
      std::size_t prev = v.signatures.size();
      for (const auto& y : v.chain) {
        ok = ok && y.size() < prev;
        prev = y.size();
      }
      std::uint64_t cover = 0;
      for (auto c : v.cells) {
        ok = ok && c != 0 && (cover & c) == 0;
        cover |= c;
      }
      ok = ok && cover == all;
      violations += !ok;
    }
    if (fam.size() == 4) return;
    for (std::uint64_t s = next; s <= all; ++s) {
      fam.push_back(s);
      rec(s + 1);
      fam.pop_back();
    }
  };
  rec(0);
  check(runs == 64 + 2016 + 41664 + 635376, "every family of at most 4 distinct subsets was run");
  check(violations == 0, show(violations) + " families violate the chain properties");
  r.details = {{"runs", runs}, {"violations", violations}};
}

void suite_ef(SuiteResult& r, Checker& check, const DeskConfig& cfg) {
  const EfLimits lim{cfg.ef_size_max, cfg.ef_rounds_max};
  std::size_t grid = 0;
  for (int rounds = 0; rounds <= 3; ++rounds)
    for (int m = 1; m <= 10; ++m)
      for (int n = 1; n <= 10; ++n) {
        const bool want = m == n || std::min(m, n) >= (1 << rounds) - 1;
        grid += check(ef_equivalent(make_linear_order(m), make_linear_order(n), rounds, lim) == want,
                      "linear orders " + std::to_string(m) + ", " + std::to_string(n) + " at rank " + std::to_string(rounds));
      }
  const auto a = matching_graph(3), b = make_graph(6, {});
  const auto phi = distinguishing_sentence(a, b, 2, lim);
  Json sentence = nullptr;
  if (check(phi.has_value(), "matching and edgeless graphs are distinguished at rank 2")) {
    sentence = formula_str(*phi);
    check(qrank(*phi) <= 2 && model_check(a, *phi) && !model_check(b, *phi), "extracted sentence separates them");
  }
  // Game side against the logic side: B satisfies A's Hintikka sentence.
  std::vector<FinStructure> gs;
  for (int k = 0; k <= 4; ++k)
    for (auto& g : all_graphs(k)) gs.push_back(std::move(g));
  std::size_t pairs = 0, disagreements = 0;
  for (int rounds = 0; rounds <= 2; ++rounds)
    for (const auto& x : gs) {
      const Formula th = hintikka(x, rounds);
      for (const auto& y : gs) {
        ++pairs;
        disagreements += ef_equivalent(x, y, rounds, lim) != model_check(y, th);
      }
    }
  check(disagreements == 0, show(disagreements) + " game/logic disagreements on small graphs");
  r.details = {{"threshold_cases", grid}, {"matching_sentence", sentence}, {"agreement_pairs", pairs}};
}

}  // namespace

const std::vector<std::string>& tour_suite_names() {
  static const std::vector<std::string> names = {"fraisse", "generic", "orbits", "amorphous", "gauge",
                                                 "rank",    "cb",      "dedekind", "venn",     "ef"};
  return names;
}

SuiteResult run_tour_suite(const std::string& name, const DeskConfig& config, const TourOptions& options) {
  SuiteResult r;
  r.name = name;
  Checker check(r);
  try {
    if (name == "fraisse") suite_fraisse(r, check, config);
    else if (name == "generic") suite_generic(r, check, config);
    else if (name == "orbits") suite_orbits(r, check, config);
    else if (name == "amorphous") suite_amorphous(r, check, config, options);
    else if (name == "gauge") suite_gauge(r, check, config);
    else if (name == "rank") suite_rank(r, check, config);
    else if (name == "cb") suite_cb(r, check, config);
    else if (name == "dedekind") suite_dedekind(r, check, config, options);
    else if (name == "venn") suite_venn(r, check, config);
    else if (name == "ef") suite_ef(r, check, config);
    else throw InputError("unknown tour suite '" + name + "'");
  } catch (const BoundExceeded& e) {
    check(false, std::string("bound exceeded: ") + e.what());
  }
  return r;
}

Json suite_to_json(const SuiteResult& r) {
  return {{"name", r.name}, {"pass", r.pass}, {"checks", r.checks}, {"failures", r.failures}, {"details", r.details}};
}

Json demo_tour(const DeskConfig& config, const TourOptions& options) {
  Json suites = Json::array();
  bool pass = true;
  for (const auto& name : tour_suite_names()) {
    const auto r = run_tour_suite(name, config, options);
    pass = pass && r.pass;
    suites.push_back(suite_to_json(r));
  }
  return {{"formatVersion", kFormatVersion}, {"pass", pass}, {"include_rigid", options.include_rigid}, {"suites", suites}};
}

}  // namespace fmwb
