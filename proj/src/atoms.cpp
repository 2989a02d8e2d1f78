#include "fmwb/atoms.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace fmwb {

namespace mp = boost::multiprecision;

// ---------------------------------------------------------------------------
// Rationals

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) throw InputError("malformed rational '" + text + "'");
    for (std::size_t j = i; j < s.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw InputError("malformed rational '" + text + "'");
    return mp::cpp_int(s[0] == '+' ? s.substr(1) : s);
  };
  const auto slash = text.find('/');
  if (slash == std::string::npos) return Rational(parse_int(text));
  const auto num = parse_int(text.substr(0, slash));
  const auto den = parse_int(text.substr(slash + 1));
  if (den == 0) throw InputError("zero denominator in '" + text + "'");
  return Rational(num, den);
}

std::string rational_str(const Rational& r) {
  const auto num = mp::numerator(r), den = mp::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

// ---------------------------------------------------------------------------
// Backends and atoms

std::string backend_kind_name(BackendKind k) {
  switch (k) {
    case BackendKind::PureSet: return "PureSet";
    case BackendKind::DenseOrder: return "DenseOrder";
    case BackendKind::PairedAtoms: return "PairedAtoms";
    case BackendKind::NamedPairs: return "NamedPairs";
    case BackendKind::VectorSpace: return "VectorSpace";
    case BackendKind::OrdinalSpace: return "OrdinalSpace";
    case BackendKind::Rigid: return "Rigid";
  }
  return "?";
}

BackendKind parse_backend_kind(const std::string& name) {
  for (auto k : {BackendKind::PureSet, BackendKind::DenseOrder, BackendKind::PairedAtoms, BackendKind::NamedPairs,
                 BackendKind::VectorSpace, BackendKind::OrdinalSpace, BackendKind::Rigid}) {
    std::string a = backend_kind_name(k), b = name;
    std::transform(a.begin(), a.end(), a.begin(), ::tolower);
    std::transform(b.begin(), b.end(), b.begin(), ::tolower);
    if (a == b) return k;
  }
  throw InputError("unknown backend kind '" + name + "'");
}

BackendSpec BackendSpec::vector_space(int q) {
  BackendSpec b = of(BackendKind::VectorSpace);
  b.q = q;
  return b;
}

BackendSpec BackendSpec::ordinal_space(std::uint64_t alpha, std::uint64_t k) {
  BackendSpec b = of(BackendKind::OrdinalSpace);
  b.alpha = Ordinal::natural(alpha);
  b.k = k;
  return b;
}

std::string BackendSpec::str() const {
  switch (kind) {
    case BackendKind::VectorSpace: return "VectorSpace(" + std::to_string(q) + ")";
    case BackendKind::OrdinalSpace:
      return "OrdinalSpace(" + ord_mul(Ordinal::omega_power(alpha), Ordinal::natural(k)).str() + ")";
    default: return backend_kind_name(kind);
  }
}

void validate_backend(const BackendSpec& b) {
  if (b.kind == BackendKind::VectorSpace && !Field::valid_order(b.q))
    throw InputError("VectorSpace field order must be a prime power <= 8, got " + std::to_string(b.q));
  if (b.kind == BackendKind::OrdinalSpace) {
    if (b.k < 1) throw InputError("OrdinalSpace k must be positive");
    if (b.k > 64) throw BoundExceeded("OrdinalSpace k above 64");
    const auto a = b.alpha.as_natural();
    if (!a) throw BoundExceeded("OrdinalSpace atoms need a finite alpha (got " + b.alpha.str() + ")");
    if (*a > 8) throw BoundExceeded("OrdinalSpace alpha above 8");
  }
}

Atom Atom::vec(FVec v) {
  trim(v);
  return {std::move(v)};
}

std::string Atom::str() const {
  struct V {
    std::string operator()(std::uint64_t n) const { return std::to_string(n); }
    std::string operator()(const Rational& r) const { return rational_str(r); }
    std::string operator()(const PairAtom& p) const {
      return "(" + std::to_string(p.pair) + "," + std::to_string(p.side) + ")";
    }
    std::string operator()(const FVec& v) const {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + "]";
    }
    std::string operator()(const Ordinal& o) const { return o.str(); }
  };
  return std::visit(V{}, value);
}

bool in_universe(const BackendSpec& b, const Atom& a) {
  switch (b.kind) {
    case BackendKind::PureSet:
    case BackendKind::Rigid: return std::holds_alternative<std::uint64_t>(a.value);
    case BackendKind::DenseOrder: return std::holds_alternative<Rational>(a.value);
    case BackendKind::PairedAtoms:
    case BackendKind::NamedPairs:
      return std::holds_alternative<PairAtom>(a.value) && (a.as_pair().side == 0 || a.as_pair().side == 1);
    case BackendKind::VectorSpace: {
      if (!std::holds_alternative<FVec>(a.value)) return false;
      const auto& v = a.as_vec();
      if (!v.empty() && v.back() == 0) return false;
      return std::all_of(v.begin(), v.end(), [&](int x) { return x >= 0 && x < b.q; });
    }
    case BackendKind::OrdinalSpace:
      return std::holds_alternative<Ordinal>(a.value) && b.space().contains(a.as_ordinal());
  }
  return false;
}

std::string Support::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < atoms.size(); ++i) s += (i ? "," : "") + atoms[i].str();
  if (!clopens.empty()) {
    s += " | ";
    for (std::size_t i = 0; i < clopens.size(); ++i) s += (i ? "," : "") + clopens[i].str();
  }
  return s + "}";
}

Support normalize_support(const BackendSpec& b, Support s) {
  validate_backend(b);
  for (auto& a : s.atoms) {
    if (b.kind == BackendKind::VectorSpace && std::holds_alternative<FVec>(a.value)) trim(std::get<FVec>(a.value));
    if (!in_universe(b, a)) throw InputError("support atom " + a.str() + " is not in the universe of " + b.str());
  }
  if (!s.clopens.empty() && b.kind != BackendKind::OrdinalSpace)
    throw InputError("clopen supports only exist for OrdinalSpace");
  for (const auto& c : s.clopens)
    if (!(c.space() == b.space())) throw InputError("support clopen " + c.str() + " belongs to another space");
  std::sort(s.atoms.begin(), s.atoms.end());
  s.atoms.erase(std::unique(s.atoms.begin(), s.atoms.end()), s.atoms.end());
  std::sort(s.clopens.begin(), s.clopens.end());
  s.clopens.erase(std::unique(s.clopens.begin(), s.clopens.end()), s.clopens.end());
  return s;
}

Support support_union(const BackendSpec& b, const Support& x, const Support& y) {
  Support s = x;
  s.atoms.insert(s.atoms.end(), y.atoms.begin(), y.atoms.end());
  s.clopens.insert(s.clopens.end(), y.clopens.begin(), y.clopens.end());
  return normalize_support(b, std::move(s));
}

// ---------------------------------------------------------------------------
// Ordinal helpers

namespace {

/// p with p + w^beta == x, where beta is the CB-rank of x; empty for x == 0.
LowerBound strip_last(const Ordinal& x) {
  if (x.is_zero()) return std::nullopt;
  auto terms = x.terms();
  if (terms.back().coeff > 1) {
    --terms.back().coeff;
  } else {
    terms.pop_back();
  }
  return Ordinal::from_terms(terms);
}

/// Least point above m whose CB-rank is exactly beta.
Ordinal next_rank_point(const LowerBound& m, const Ordinal& beta) {
  if (!m) return beta.is_zero() ? Ordinal{} : Ordinal::omega_power(beta);
  return ord_add(floor_to_power(*m, beta), Ordinal::omega_power(beta));
}

bool bound_eq(const LowerBound& a, const LowerBound& b) { return !bound_less(a, b) && !bound_less(b, a); }

/// Points of c with CB-rank beta, skipping the excluded ones, stopping at limit.
std::vector<Ordinal> rank_points(const ClopenSet& c, const Ordinal& beta, const std::vector<Atom>& excluded,
                                 std::size_t limit) {
  std::vector<Ordinal> out;
  for (const auto& iv : c.intervals()) {
    for (Ordinal g = next_rank_point(iv.low, beta); g <= iv.high; g = next_rank_point(g, beta)) {
      if (std::find(excluded.begin(), excluded.end(), Atom::ordinal(g)) != excluded.end()) continue;
      out.push_back(g);
      if (out.size() >= limit) return out;
    }
  }
  return out;
}

/// Offset of delta inside an interval starting above low: 1 for its first point.
Ordinal offset_in(const LowerBound& low, const Ordinal& delta) {
  return low ? ord_sub_left(delta, *low) : ord_add(Ordinal::natural(1), delta);
}

Ordinal point_at(const LowerBound& low, const Ordinal& u) {
  return low ? ord_add(*low, u) : ord_sub_left(u, Ordinal::natural(1));
}

Ordinal interval_length(const Interval& iv) { return offset_in(iv.low, iv.high); }

}  // namespace

// ---------------------------------------------------------------------------
// Orbits

bool Orbit::contains(const Atom& a) const {
  switch (kind) {
    case OrbitKind::Finite: return std::find(atoms.begin(), atoms.end(), a) != atoms.end();
    case OrbitKind::CoFinite: return std::find(atoms.begin(), atoms.end(), a) == atoms.end();
    case OrbitKind::Interval: {
      const auto& r = a.as_rational();
      return (!lo || *lo < r) && (!hi || r < *hi);
    }
    case OrbitKind::RankClass: {
      const auto& g = a.as_ordinal();
      return cell.contains(g) && point_cb_rank(g) == rank &&
             std::find(atoms.begin(), atoms.end(), a) == atoms.end();
    }
  }
  return false;
}

namespace {

std::string atom_list(const std::vector<Atom>& as) {
  std::string s = "{";
  for (std::size_t i = 0; i < as.size(); ++i) s += (i ? "," : "") + as[i].str();
  return s + "}";
}

}  // namespace

std::string Orbit::str() const {
  switch (kind) {
    case OrbitKind::Finite: return atom_list(atoms);
    case OrbitKind::CoFinite: return atoms.empty() ? "U" : "U minus " + atom_list(atoms);
    case OrbitKind::Interval:
      return "(" + (lo ? rational_str(*lo) : "-inf") + ", " + (hi ? rational_str(*hi) : "+inf") + ")";
    case OrbitKind::RankClass: {
      std::string s = "rank " + rank.str() + " points of " + cell.str();
      if (!atoms.empty()) s += " minus " + atom_list(atoms);
      return s;
    }
  }
  return "?";
}

bool OrbitFamily::has_index(std::uint64_t n) const {
  return std::find(excluded.begin(), excluded.end(), n) == excluded.end();
}

std::vector<Atom> OrbitFamily::member(std::uint64_t n) const {
  if (kind == FamilyKind::NamedPairs) return {Atom::pair(n, 0), Atom::pair(n, 1)};
  return {Atom::id(n)};
}

std::uint64_t OrbitFamily::first_index() const {
  std::uint64_t n = 0;
  while (!has_index(n)) ++n;
  return n;
}

std::string OrbitFamily::str() const {
  std::string s = kind == FamilyKind::NamedPairs ? "pairs P_n" : "singletons {u_n}";
  s += " for all n";
  if (!excluded.empty()) {
    s += " outside {";
    for (std::size_t i = 0; i < excluded.size(); ++i) s += (i ? "," : "") + std::to_string(excluded[i]);
    s += "}";
  }
  return s;
}

std::size_t Decomposition::finite_orbit_count() const {
  return static_cast<std::size_t>(std::count_if(orbits.begin(), orbits.end(), [](const Orbit& o) { return o.finite(); }));
}

std::size_t Decomposition::infinite_orbit_count() const { return orbits.size() - finite_orbit_count(); }

namespace {

Orbit finite_orbit(std::vector<Atom> atoms) {
  Orbit o;
  o.kind = OrbitKind::Finite;
  o.representative = atoms.front();
  o.atoms = std::move(atoms);
  return o;
}

void orbits_ordinal(const BackendSpec& b, const Support& s, Decomposition& d) {
  const SpaceSpec space = b.space();
  for (const auto& a : s.atoms) d.orbits.push_back(finite_orbit({a}));
  std::vector<ClopenSet> cells{ClopenSet::whole(space)};
  for (const auto& c : s.clopens) {
    std::vector<ClopenSet> next;
    for (const auto& cell : cells) {
      for (auto part : {clopen_intersection(cell, c), clopen_difference(cell, c)})
        if (!part.is_empty()) next.push_back(std::move(part));
    }
    cells = std::move(next);
  }
  std::sort(cells.begin(), cells.end(), [](const ClopenSet& x, const ClopenSet& y) {
    return bound_less(x.intervals().front().low, y.intervals().front().low);
  });
  for (const auto& cell : cells) {
    const auto top = max_point_rank(cell);
    const std::uint64_t max_rank = *top->as_natural();
    for (std::uint64_t r = 0; r <= max_rank; ++r) {
      const Ordinal beta = Ordinal::natural(r);
      std::vector<Atom> excluded;
      for (const auto& a : s.atoms)
        if (cell.contains(a.as_ordinal()) && point_cb_rank(a.as_ordinal()) == beta) excluded.push_back(a);
      if (!count_rank_at_least(cell, beta)) {
        Orbit o;
        o.kind = OrbitKind::RankClass;
        o.cell = cell;
        o.rank = beta;
        o.atoms = excluded;
        o.representative = Atom::ordinal(rank_points(cell, beta, excluded, 1).front());
        d.orbits.push_back(std::move(o));
      } else {
        std::vector<Atom> members;
        for (const auto& g : rank_points(cell, beta, excluded, SIZE_MAX)) members.push_back(Atom::ordinal(g));
        if (!members.empty()) d.orbits.push_back(finite_orbit(std::move(members)));
      }
    }
  }
}

}  // namespace

Decomposition orbits(const BackendSpec& b, const Support& s0) {
  Decomposition d;
  d.backend = b;
  d.support = normalize_support(b, s0);
  const Support& s = d.support;
  switch (b.kind) {
    case BackendKind::PureSet: {
      for (const auto& a : s.atoms) d.orbits.push_back(finite_orbit({a}));
      Orbit rest;
      rest.kind = OrbitKind::CoFinite;
      rest.atoms = s.atoms;
      std::uint64_t n = 0;
      while (std::find(s.atoms.begin(), s.atoms.end(), Atom::id(n)) != s.atoms.end()) ++n;
      rest.representative = Atom::id(n);
      d.orbits.push_back(std::move(rest));
      break;
    }
    case BackendKind::Rigid: {
      for (const auto& a : s.atoms) d.orbits.push_back(finite_orbit({a}));
      OrbitFamily f{FamilyKind::RigidSingletons, {}};
      for (const auto& a : s.atoms) f.excluded.push_back(a.as_id());
      d.family = f;
      break;
    }
    case BackendKind::DenseOrder: {
      std::optional<Rational> prev;
      auto add_interval = [&](const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
        Orbit o;
        o.kind = OrbitKind::Interval;
        o.lo = lo;
        o.hi = hi;
        Rational rep = lo && hi ? (*lo + *hi) / 2 : lo ? *lo + 1 : hi ? *hi - 1 : Rational(0);
        o.representative = Atom::rational(rep);
        d.orbits.push_back(std::move(o));
      };
      for (const auto& a : s.atoms) {
        add_interval(prev, a.as_rational());
        d.orbits.push_back(finite_orbit({a}));
        prev = a.as_rational();
      }
      add_interval(prev, std::nullopt);
      break;
    }
    case BackendKind::PairedAtoms:
    case BackendKind::NamedPairs: {
      std::vector<std::uint64_t> touched;
      for (const auto& a : s.atoms) touched.push_back(a.as_pair().pair);
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      std::vector<Atom> fixed;
      for (auto n : touched) {
        for (int side : {0, 1}) {
          d.orbits.push_back(finite_orbit({Atom::pair(n, side)}));
          fixed.push_back(Atom::pair(n, side));
        }
      }
      if (b.kind == BackendKind::PairedAtoms) {
        Orbit rest;
        rest.kind = OrbitKind::CoFinite;
        rest.atoms = fixed;
        std::uint64_t n = 0;
        while (std::binary_search(touched.begin(), touched.end(), n)) ++n;
        rest.representative = Atom::pair(n, 0);
        d.orbits.push_back(std::move(rest));
      } else {
        d.family = OrbitFamily{FamilyKind::NamedPairs, touched};
      }
      break;
    }
    case BackendKind::VectorSpace: {
      const Field f(b.q);
      std::vector<FVec> vs;
      for (const auto& a : s.atoms) vs.push_back(a.as_vec());
      const auto span = span_elements(f, vs);
      std::vector<Atom> fixed;
      std::size_t width = 0;
      for (const auto& v : span) {
        d.orbits.push_back(finite_orbit({Atom::vec(v)}));
        fixed.push_back(Atom::vec(v));
        width = std::max(width, v.size());
      }
      Orbit rest;
      rest.kind = OrbitKind::CoFinite;
      rest.atoms = fixed;
      FVec e(width + 1, 0);
      e[width] = 1;
      rest.representative = Atom::vec(e);
      d.orbits.push_back(std::move(rest));
      break;
    }
    case BackendKind::OrdinalSpace: orbits_ordinal(b, s, d); break;
  }
  for (std::size_t i = 0; i < d.orbits.size(); ++i) d.orbits[i].id = static_cast<int>(i);
  return d;
}

OrbitRef orbit_of(const Decomposition& d, const Atom& a) {
  if (!in_universe(d.backend, a)) throw InputError("atom " + a.str() + " is not in the universe of " + d.backend.str());
  for (const auto& o : d.orbits)
    if (o.contains(a)) return {false, static_cast<std::uint64_t>(o.id)};
  if (d.family) {
    const std::uint64_t n = d.family->kind == FamilyKind::NamedPairs ? a.as_pair().pair : a.as_id();
    if (d.family->has_index(n)) return {true, n};
  }
  throw std::logic_error("atom " + a.str() + " lies in no orbit");
}

Atom orbit_representative(const Decomposition& d, const OrbitRef& r) {
  if (r.family) return d.family->member(r.index).front();
  return d.orbits[static_cast<std::size_t>(r.index)].representative;
}

// ---------------------------------------------------------------------------
// Witnesses

namespace {

Rational pl_apply(const PlWitness& w, const Rational& t) {
  const auto& bp = w.breakpoints;
  if (bp.empty()) return t;
  if (t <= bp.front().first) return t + (bp.front().second - bp.front().first);
  if (t >= bp.back().first) return t + (bp.back().second - bp.back().first);
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const auto& [a0, b0] = bp[i];
    const auto& [a1, b1] = bp[i + 1];
    if (t <= a1) return b0 + (t - a0) * (b1 - b0) / (a1 - a0);
  }
  return t;
}

Ordinal exchange_apply(const ExchangeWitness& w, const Ordinal& g) {
  for (const auto& p : w.pieces)
    if (p.src.contains(g)) return point_at(p.dst.low, offset_in(p.src.low, g));
  throw std::logic_error("interval exchange does not cover " + g.str());
}

std::string lower_str(const LowerBound& l) { return l ? l->str() : "bottom"; }

std::string interval_str(const Interval& iv) {
  return iv.low ? "(" + iv.low->str() + ", " + iv.high.str() + "]" : "[0, " + iv.high.str() + "]";
}

}  // namespace

Atom apply_witness(const BackendSpec& b, const Witness& w, const Atom& a) {
  if (const auto* p = std::get_if<PermWitness>(&w)) {
    for (const auto& [from, to] : p->moves)
      if (from == a) return to;
    return a;
  }
  if (const auto* p = std::get_if<PlWitness>(&w)) return Atom::rational(pl_apply(*p, a.as_rational()));
  if (const auto* m = std::get_if<MatrixWitness>(&w)) return Atom::vec(mat_apply(Field(b.q), m->m, a.as_vec()));
  return Atom::ordinal(exchange_apply(std::get<ExchangeWitness>(w), a.as_ordinal()));
}

std::string witness_str(const Witness& w) {
  std::ostringstream os;
  if (const auto* p = std::get_if<PermWitness>(&w)) {
    if (p->moves.empty()) return "identity";
    os << "permutation";
    for (const auto& [a, b] : p->moves) os << " " << a.str() << "->" << b.str();
  } else if (const auto* p = std::get_if<PlWitness>(&w)) {
    os << "piecewise-linear through";
    for (const auto& [a, b] : p->breakpoints) os << " " << rational_str(a) << "->" << rational_str(b);
  } else if (const auto* m = std::get_if<MatrixWitness>(&w)) {
    os << "matrix";
    for (const auto& row : m->m) {
      os << " [";
      for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
      os << "]";
    }
  } else {
    os << "interval exchange";
    for (const auto& p : std::get<ExchangeWitness>(w).pieces) os << " " << interval_str(p.src) << "->" << interval_str(p.dst);
  }
  return os.str();
}

namespace {

std::optional<std::string> check_partition(const SpaceSpec& space, std::vector<Interval> ivs, const char* side) {
  std::sort(ivs.begin(), ivs.end(), [](const Interval& x, const Interval& y) { return bound_less(x.low, y.low); });
  LowerBound at = space.bottom();
  for (const auto& iv : ivs) {
    if (!bound_eq(iv.low, at)) return std::string(side) + " pieces leave a gap or overlap at " + lower_str(at);
    if (iv.low && !(*iv.low < iv.high)) return std::string(side) + " piece is empty";
    at = iv.high;
  }
  if (!bound_eq(at, space.top())) return std::string(side) + " pieces do not reach the top point";
  return std::nullopt;
}

ClopenSet exchange_image(const ExchangeWitness& w, const ClopenSet& c) {
  std::vector<Interval> out;
  for (const auto& p : w.pieces) {
    const auto part = clopen_intersection(c, ClopenSet::interval(c.space(), p.src.low, p.src.high));
    for (const auto& iv : part.intervals()) {
      const LowerBound low = bound_eq(iv.low, p.src.low) ? p.dst.low : LowerBound(exchange_apply(w, *iv.low));
      out.push_back({low, exchange_apply(w, iv.high)});
    }
  }
  return ClopenSet(c.space(), out);
}

PairAtom partner(const PairAtom& p) { return {p.pair, 1 - p.side}; }

}  // namespace

std::optional<std::string> verify_witness(const BackendSpec& b, const Support& s, const Witness& w) {
  if (const auto* p = std::get_if<PermWitness>(&w)) {
    std::set<Atom> from, to;
    for (const auto& [x, y] : p->moves) {
      if (!in_universe(b, x) || !in_universe(b, y)) return "permutation moves an atom outside U";
      if (!from.insert(x).second || !to.insert(y).second) return "permutation is not injective";
    }
    if (from != to) return "permutation does not have finite support";
    auto g = [&](const Atom& a) { return apply_witness(b, w, a); };
    for (const auto& [x, y] : p->moves) {
      if (x == y) continue;
      switch (b.kind) {
        case BackendKind::PureSet: break;
        case BackendKind::NamedPairs:
          if (x.as_pair().pair != y.as_pair().pair) return "named pair moved to another pair";
          [[fallthrough]];
        case BackendKind::PairedAtoms:
          if (!(g(Atom{partner(x.as_pair())}) == Atom{partner(y.as_pair())})) return "pairing not preserved";
          break;
        case BackendKind::OrdinalSpace:
          if (!point_cb_rank(x.as_ordinal()).is_zero() || !point_cb_rank(y.as_ordinal()).is_zero())
            return "only isolated points may be swapped";
          for (const auto& c : s.clopens)
            if (c.contains(x.as_ordinal()) != c.contains(y.as_ordinal())) return "clopen not preserved";
          break;
        default: return "backend admits no non-identity finite permutation";
      }
    }
  } else if (const auto* p = std::get_if<PlWitness>(&w)) {
    if (b.kind != BackendKind::DenseOrder) return "piecewise-linear witness for a non-order backend";
    for (std::size_t i = 0; i + 1 < p->breakpoints.size(); ++i)
      if (!(p->breakpoints[i].first < p->breakpoints[i + 1].first) ||
          !(p->breakpoints[i].second < p->breakpoints[i + 1].second))
        return "breakpoints not strictly increasing";
  } else if (const auto* m = std::get_if<MatrixWitness>(&w)) {
    if (b.kind != BackendKind::VectorSpace) return "matrix witness for a non-vector backend";
    const Field f(b.q);
    for (const auto& row : m->m) {
      if (row.size() != m->m.size()) return "matrix not square";
      for (int x : row)
        if (x < 0 || x >= b.q) return "matrix entry outside the field";
    }
    if (!mat_inverse(f, m->m)) return "matrix not invertible";
  } else {
    if (b.kind != BackendKind::OrdinalSpace) return "interval exchange for a non-ordinal backend";
    const auto& ex = std::get<ExchangeWitness>(w);
    const SpaceSpec space = b.space();
    std::vector<Interval> src, dst;
    for (const auto& piece : ex.pieces) {
      if (!(interval_length(piece.src) == interval_length(piece.dst))) return "piece lengths differ";
      src.push_back(piece.src);
      dst.push_back(piece.dst);
    }
    if (auto e = check_partition(space, src, "source")) return e;
    if (auto e = check_partition(space, dst, "target")) return e;
    for (const auto& c : s.clopens)
      if (!(exchange_image(ex, c) == c)) return "clopen " + c.str() + " not mapped onto itself";
  }
  for (const auto& a : s.atoms)
    if (!(apply_witness(b, w, a) == a)) return "support atom " + a.str() + " moved";
  return std::nullopt;
}

namespace {

/// (m, x] inside x's support cell, avoiding support points, of order type
/// w^beta (+1) with x its only point of rank >= beta.
Interval ordinal_neighbourhood(const SpaceSpec& space, const Support& s, const Ordinal& x) {
  LowerBound m = strip_last(x);
  if (!m) m = space.bottom();
  for (const auto& c : s.clopens) {
    const ClopenSet side = c.contains(x) ? c : clopen_complement(c);
    for (const auto& iv : side.intervals())
      if (iv.contains(x) && bound_less(m, iv.low)) m = iv.low;
  }
  for (const auto& a : s.atoms) {
    const auto& g = a.as_ordinal();
    if (g < x && bound_less(m, g)) m = g;
  }
  return {m, x};
}

std::optional<Witness> build_witness(const BackendSpec& b, const Support& s, const Atom& x, const Atom& y) {
  switch (b.kind) {
    case BackendKind::PureSet: return PermWitness{{{x, y}, {y, x}}};
    case BackendKind::Rigid: return std::nullopt;
    case BackendKind::PairedAtoms: {
      const auto px = x.as_pair(), py = y.as_pair();
      if (px.pair == py.pair) return PermWitness{{{x, y}, {y, x}}};
      return PermWitness{{{x, y}, {Atom{partner(px)}, Atom{partner(py)}}, {y, x}, {Atom{partner(py)}, Atom{partner(px)}}}};
    }
    case BackendKind::NamedPairs: return PermWitness{{{x, y}, {y, x}}};
    case BackendKind::DenseOrder: {
      PlWitness w;
      for (const auto& a : s.atoms) w.breakpoints.emplace_back(a.as_rational(), a.as_rational());
      w.breakpoints.emplace_back(x.as_rational(), y.as_rational());
      std::sort(w.breakpoints.begin(), w.breakpoints.end());
      return w;
    }
    case BackendKind::VectorSpace: {
      const Field f(b.q);
      std::size_t n = std::max(x.as_vec().size(), y.as_vec().size());
      std::vector<FVec> vs;
      for (const auto& a : s.atoms) {
        vs.push_back(a.as_vec());
        n = std::max(n, a.as_vec().size());
      }
      const auto w = reduced_basis(f, vs);
      auto complete = [&](FVec v) {
        std::vector<FVec> cols = w;
        cols.push_back(std::move(v));
        for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
          FVec e(i + 1, 0);
          e[i] = 1;
          if (!in_span(f, cols, e)) cols.push_back(e);
        }
        Matrix m(n, std::vector<int>(n, 0));
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t i = 0; i < cols[j].size(); ++i) m[i][j] = cols[j][i];
        return m;
      };
      const Matrix p = complete(x.as_vec()), q = complete(y.as_vec());
      return MatrixWitness{mat_mul(f, q, *mat_inverse(f, p))};
    }
    case BackendKind::OrdinalSpace: {
      const SpaceSpec space = b.space();
      const Interval nx = ordinal_neighbourhood(space, s, x.as_ordinal());
      const Interval ny = ordinal_neighbourhood(space, s, y.as_ordinal());
      ExchangeWitness w{{{nx, ny}, {ny, nx}}};
      const auto rest = clopen_difference(
          clopen_difference(ClopenSet::whole(space), ClopenSet::interval(space, nx.low, nx.high)),
          ClopenSet::interval(space, ny.low, ny.high));
      for (const auto& iv : rest.intervals()) w.pieces.push_back({iv, iv});
      std::sort(w.pieces.begin(), w.pieces.end(),
                [](const Piece& p, const Piece& q) { return bound_less(p.src.low, q.src.low); });
      return w;
    }
  }
  return std::nullopt;
}

std::string orbit_label(const Decomposition& d, const OrbitRef& r) {
  if (r.family) return "family member " + std::to_string(r.index) + " of " + d.family->str();
  return "orbit " + std::to_string(r.index) + " " + d.orbits[r.index].str();
}

}  // namespace

WitnessResult same_orbit_witness(const BackendSpec& b, const Support& s0, const Atom& x, const Atom& y) {
  const Decomposition d = orbits(b, s0);
  const OrbitRef ox = orbit_of(d, x), oy = orbit_of(d, y);
  if (x == y) return {PermWitness{}, ""};
  if (ox != oy) {
    std::string why = x.str() + " lies in " + orbit_label(d, ox) + ", " + y.str() + " in " + orbit_label(d, oy);
    if (b.kind == BackendKind::OrdinalSpace) {
      const auto rx = point_cb_rank(x.as_ordinal()), ry = point_cb_rank(y.as_ordinal());
      if (!(rx == ry)) {
        why += "; CB-rank " + rx.str() + " vs " + ry.str();
      } else {
        bool cell_split = false;
        for (const auto& c : d.support.clopens)
          if (c.contains(x.as_ordinal()) != c.contains(y.as_ordinal())) {
            why += "; separated by support clopen " + c.str();
            cell_split = true;
            break;
          }
        if (!cell_split) why += "; a support point is fixed";
      }
    }
    return {std::nullopt, why};
  }
  if (!ox.family && d.orbits[ox.index].finite() && d.orbits[ox.index].size() == 1)
    return {std::nullopt, "singleton orbit"};
  auto w = build_witness(b, d.support, x, y);
  if (!w) return {std::nullopt, "no symmetry moves " + x.str()};
  if (auto err = verify_witness(b, d.support, *w))
    throw std::logic_error("constructed witness rejected: " + *err);
  if (!(apply_witness(b, *w, x) == y)) throw std::logic_error("constructed witness misses its target");
  return {w, ""};
}

// ---------------------------------------------------------------------------
// Types, closures

TupleCount count_tuple_orbits(const BackendSpec& b, int n, const Support& s) {
  if (n < 1) throw InputError("tuple length must be at least 1");
  if (n > 4) throw BoundExceeded("tuple length above 4");
  std::function<TupleCount(const Support&, int)> rec = [&](const Support& sup, int left) -> TupleCount {
    if (left == 0) return {1, ""};
    const Decomposition d = orbits(b, sup);
    if (d.family) return {std::nullopt, "one orbit for each of the " + d.family->str()};
    std::uint64_t total = 0;
    for (const auto& o : d.orbits) {
      Support next = sup;
      next.atoms.push_back(o.representative);
      auto sub = rec(normalize_support(b, next), left - 1);
      if (!sub.count) return sub;
      total += *sub.count;
    }
    return {total, ""};
  };
  return rec(normalize_support(b, s), n);
}

std::string AtomSet::str() const {
  if (all) return infinite ? "all of U (infinite)" : "all of U " + atom_list(atoms);
  return atom_list(atoms);
}

namespace {

AtomSet closure(const BackendSpec& b, const Support& s, std::size_t max_orbit) {
  const Decomposition d = orbits(b, s);
  AtomSet out;
  bool everything = true;
  for (const auto& o : d.orbits) {
    if (o.finite() && o.size() <= max_orbit) {
      out.atoms.insert(out.atoms.end(), o.atoms.begin(), o.atoms.end());
    } else {
      everything = false;
    }
  }
  if (d.family) {
    if (d.family->member_size() <= max_orbit) {
      out.infinite = true;
    } else {
      everything = false;
    }
  }
  out.all = everything;
  std::sort(out.atoms.begin(), out.atoms.end());
  return out;
}

}  // namespace

AtomSet dcl(const BackendSpec& b, const Support& s) { return closure(b, s, 1); }
AtomSet acl(const BackendSpec& b, const Support& s) { return closure(b, s, SIZE_MAX); }
AtomSet fixed_atoms(const BackendSpec& b, const Support& s) { return dcl(b, s); }

// ---------------------------------------------------------------------------
// Sampling and catalogs

Atom random_atom(const BackendSpec& b, std::mt19937_64& rng) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng); };
  switch (b.kind) {
    case BackendKind::PureSet:
    case BackendKind::Rigid: return Atom::id(pick(0, 24));
    case BackendKind::DenseOrder: {
      const long long num = static_cast<long long>(pick(0, 60)) - 30;
      const long long den = static_cast<long long>(pick(1, 6));
      return Atom::rational(Rational(num, den));
    }
    case BackendKind::PairedAtoms:
    case BackendKind::NamedPairs: return Atom::pair(pick(0, 12), static_cast<int>(pick(0, 1)));
    case BackendKind::VectorSpace: {
      FVec v(pick(0, 5));
      for (auto& x : v) x = static_cast<int>(pick(0, static_cast<std::uint64_t>(b.q - 1)));
      return Atom::vec(v);
    }
    case BackendKind::OrdinalSpace: {
      const std::uint64_t alpha = *b.alpha.as_natural();
      if (alpha == 0) return Atom::ordinal(Ordinal::natural(pick(1, b.k)));
      for (;;) {
        std::vector<OrdinalTerm> terms;
        for (std::uint64_t e = alpha + 1; e-- > 0;) {
          const std::uint64_t c = pick(0, e == alpha ? b.k : 3);
          if (c) terms.push_back({Ordinal::natural(e), c});
        }
        const Ordinal g = Ordinal::from_terms(terms);
        if (b.space().contains(g)) return Atom::ordinal(g);
      }
    }
  }
  return Atom{};
}

std::vector<Atom> sample_atoms(const BackendSpec& b, const Support& s, std::mt19937_64& rng, std::size_t count) {
  std::vector<Atom> out = s.atoms;
  for (const auto& a : s.atoms) {
    switch (b.kind) {
      case BackendKind::PureSet:
      case BackendKind::Rigid: out.push_back(Atom::id(a.as_id() + 1)); break;
      case BackendKind::DenseOrder:
        out.push_back(Atom::rational(a.as_rational() + Rational(1, 3)));
        out.push_back(Atom::rational(a.as_rational() - Rational(1, 2)));
        break;
      case BackendKind::PairedAtoms:
      case BackendKind::NamedPairs: out.push_back(Atom{partner(a.as_pair())}); break;
      case BackendKind::VectorSpace: {
        const Field f(b.q);
        for (const auto& c : s.atoms) out.push_back(Atom::vec(vec_add(f, a.as_vec(), c.as_vec())));
        break;
      }
      case BackendKind::OrdinalSpace: {
        const auto g = ord_add(a.as_ordinal(), Ordinal::natural(1));
        if (b.space().contains(g)) out.push_back(Atom::ordinal(g));
        break;
      }
    }
  }
  if (b.kind == BackendKind::OrdinalSpace) {
    for (const auto& c : s.clopens)
      for (const auto& iv : c.intervals()) {
        out.push_back(Atom::ordinal(iv.high));
        const auto g = ord_add(iv.high, Ordinal::natural(1));
        if (b.space().contains(g)) out.push_back(Atom::ordinal(g));
      }
  }
  out.resize(std::min(out.size(), count));
  while (out.size() < count) out.push_back(random_atom(b, rng));
  return out;
}

std::vector<ClopenSet> clopen_catalog(const BackendSpec& b, const Support& base) {
  if (b.kind != BackendKind::OrdinalSpace) return {};
  validate_backend(b);
  const SpaceSpec space = b.space();
  const std::uint64_t alpha = *b.alpha.as_natural();
  std::set<Ordinal> points;
  if (alpha == 0) {
    for (std::uint64_t i = 1; i <= b.k; ++i) points.insert(Ordinal::natural(i));
  } else {
    points = {Ordinal::natural(0), Ordinal::natural(1)};
    for (std::uint64_t j = 1; j <= alpha; ++j)
      for (std::uint64_t c = 1; c <= (j == alpha ? b.k : 3); ++c) points.insert(Ordinal::omega_power(Ordinal::natural(j), c));
  }
  // Landmarks just above the low end of every interval of the base clopens.
  for (const auto& c : base.clopens)
    for (const auto& side : {c, clopen_complement(c)})
      for (const auto& iv : side.intervals())
        for (std::uint64_t j = 0; j <= alpha; ++j)
          for (std::uint64_t m = 1; m <= 2; ++m) {
            const Ordinal p = ord_add(iv.low.value_or(Ordinal{}), Ordinal::omega_power(Ordinal::natural(j), m));
            if (iv.contains(p) && p < iv.high) points.insert(p);
          }
  std::vector<ClopenSet> out;
  for (const auto& p : points) {
    auto c = ClopenSet::interval(space, std::nullopt, p);
    if (!c.is_empty() && !(c == ClopenSet::whole(space))) out.push_back(std::move(c));
  }
  return out;
}

SupportCatalog support_catalog(const BackendSpec& b, std::size_t max_atoms, std::size_t max_clopens,
                               const Support& base) {
  SupportCatalog cat;
  std::set<std::string> seen;
  const auto clopens = clopen_catalog(b, base);
  std::function<void(const Support&, std::size_t)> grow = [&](const Support& s, std::size_t left) {
    if (!seen.insert(s.str()).second) return;
    cat.supports.push_back(s);
    if (left == 0) return;
    const Decomposition d = orbits(b, s);
    for (const auto& o : d.orbits) {
      if (o.finite() && o.size() == 1 && std::binary_search(s.atoms.begin(), s.atoms.end(), o.atoms.front())) continue;
      Support next = s;
      next.atoms.push_back(o.representative);
      grow(normalize_support(b, next), left - 1);
    }
    if (d.family) {
      cat.truncated = true;
      Support next = s;
      next.atoms.push_back(d.family->member(d.family->first_index()).front());
      grow(normalize_support(b, next), left - 1);
    }
  };
  std::function<void(std::size_t, Support, std::size_t)> pick = [&](std::size_t from, Support s, std::size_t left) {
    grow(normalize_support(b, s), max_atoms);
    if (left == 0) return;
    for (std::size_t i = from; i < clopens.size(); ++i) {
      Support next = s;
      next.clopens.push_back(clopens[i]);
      pick(i + 1, next, left - 1);
    }
  };
  pick(0, base, max_clopens);
  return cat;
}

}  // namespace fmwb
