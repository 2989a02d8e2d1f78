#include "fmwb/fmsets.hpp"

#include <algorithm>
#include <numeric>

namespace fmwb {

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet() : period_{false} {}

IndexSet::IndexSet(std::vector<bool> head, std::vector<bool> period) : head_(std::move(head)), period_(std::move(period)) {
  normalize();
}

void IndexSet::normalize() {
  if (period_.empty()) period_ = {false};
  const std::size_t p = period_.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < p && ok; ++i) ok = period_[i] == period_[i % d];
    if (ok) {
      period_.resize(d);
      break;
    }
  }
  while (!head_.empty() && head_.back() == period_.back()) {
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    head_.pop_back();
  }
}

IndexSet IndexSet::finite(const std::vector<std::uint64_t>& members) {
  std::vector<bool> head;
  for (auto n : members) {
    if (n >= head.size()) head.resize(n + 1, false);
    head[n] = true;
  }
  return {std::move(head), {false}};
}

IndexSet IndexSet::all() { return {{}, {true}}; }

IndexSet IndexSet::residue(std::uint64_t modulus, std::uint64_t residue) {
  if (modulus == 0) throw InputError("residue modulus must be positive");
  std::vector<bool> period(modulus, false);
  period[residue % modulus] = true;
  return {{}, std::move(period)};
}

bool IndexSet::contains(std::uint64_t n) const {
  if (n < head_.size()) return head_[n];
  return period_[(n - head_.size()) % period_.size()];
}

bool IndexSet::is_finite() const { return period_.size() == 1 && !period_[0]; }
bool IndexSet::is_cofinite() const { return period_.size() == 1 && period_[0]; }

std::vector<std::uint64_t> IndexSet::listed() const {
  std::vector<std::uint64_t> out;
  const bool want = !is_cofinite();
  for (std::size_t i = 0; i < head_.size(); ++i)
    if (head_[i] == want) out.push_back(i);
  return out;
}

std::string IndexSet::str() const {
  auto list = [](const std::vector<std::uint64_t>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
  };
  if (is_finite()) return list(listed());
  if (is_cofinite()) return head_.empty() ? "N" : "N minus " + list(listed());
  auto bits = [](const std::vector<bool>& v) {
    std::string s;
    for (bool b : v) s += b ? '1' : '0';
    return s;
  };
  return "periodic(" + bits(head_) + "|" + bits(period_) + ")";
}

IndexSet index_boolean(BoolOp op, const IndexSet& a, const IndexSet& b) {
  auto apply = [op](bool x, bool y) {
    switch (op) {
      case BoolOp::Union: return x || y;
      case BoolOp::Intersection: return x && y;
      case BoolOp::Difference: return x && !y;
      case BoolOp::Complement: return !x;
    }
    return false;
  };
  const std::size_t h = std::max(a.head().size(), b.head().size());
  const std::size_t p = std::lcm(a.period().size(), b.period().size());
  std::vector<bool> head(h), period(p);
  for (std::size_t i = 0; i < h; ++i) head[i] = apply(a.contains(i), b.contains(i));
  for (std::size_t i = 0; i < p; ++i) period[i] = apply(a.contains(h + i), b.contains(h + i));
  return {std::move(head), std::move(period)};
}

IndexSet index_without(const IndexSet& a, const std::vector<std::uint64_t>& removed) {
  return index_boolean(BoolOp::Difference, a, IndexSet::finite(removed));
}

// ---------------------------------------------------------------------------
// SymSet

std::string SymSet::str() const {
  std::string s = backend.str() + " support " + support.str() + " orbits {";
  bool first = true;
  for (int id : selection) {
    s += (first ? "" : ",") + std::to_string(id);
    first = false;
  }
  s += "}";
  if (!tail.is_finite() || !tail.head().empty()) s += " tail " + tail.str();
  return s;
}

namespace {

std::vector<std::uint64_t> touched(const Decomposition& d) { return d.family ? d.family->excluded : std::vector<std::uint64_t>{}; }

}  // namespace

SymSet make_symset(const BackendSpec& b, const Support& s, std::set<int> selection, IndexSet tail) {
  validate_backend(b);
  SymSet out{b, normalize_support(b, s), std::move(selection), {}};
  const auto d = orbits(b, out.support);
  for (int id : out.selection)
    if (id < 0 || static_cast<std::size_t>(id) >= d.orbits.size())
      throw InputError("orbit id " + std::to_string(id) + " out of range for support " + out.support.str());
  if (d.family) {
    out.tail = index_without(tail, d.family->excluded);
  } else if (!(tail == IndexSet{})) {
    throw InputError("tail selection given but " + b.str() + " has no orbit family here");
  }
  return out;
}

SymSet sym_empty(const BackendSpec& b) { return make_symset(b, {}, {}); }

SymSet sym_universe(const BackendSpec& b) {
  validate_backend(b);
  const auto d = orbits(b, {});
  std::set<int> all;
  for (const auto& o : d.orbits) all.insert(o.id);
  return make_symset(b, {}, all, d.family ? IndexSet::all() : IndexSet{});
}

SymSet sym_atoms(const BackendSpec& b, const std::vector<Atom>& atoms) {
  validate_backend(b);
  Support s;
  s.atoms = atoms;
  s = normalize_support(b, s);
  const auto d = orbits(b, s);
  std::set<int> selection;
  for (const auto& o : d.orbits)
    if (o.finite() && o.size() == 1 && std::find(s.atoms.begin(), s.atoms.end(), o.atoms[0]) != s.atoms.end())
      selection.insert(o.id);
  return make_symset(b, s, selection);
}

bool sym_contains(const SymSet& a, const Decomposition& d, const Atom& x) {
  const auto ref = orbit_of(d, x);
  if (ref.family) return a.tail.contains(ref.index);
  return a.selection.count(static_cast<int>(ref.index)) > 0;
}

bool sym_contains(const SymSet& a, const Atom& x) { return sym_contains(a, orbits(a.backend, a.support), x); }

SymSet reexpress(const SymSet& a, const Support& s) {
  const auto da = orbits(a.backend, a.support);
  SymSet out{a.backend, normalize_support(a.backend, s), {}, {}};
  const auto d = orbits(a.backend, out.support);
  for (const auto& o : d.orbits)
    if (sym_contains(a, da, o.representative)) out.selection.insert(o.id);
  if (d.family) {
    std::vector<std::uint64_t> extra;
    for (auto n : touched(da))
      if (d.family->has_index(n) && sym_contains(a, da, d.family->member(n).front())) extra.push_back(n);
    out.tail = index_boolean(BoolOp::Union, index_without(a.tail, d.family->excluded), IndexSet::finite(extra));
  }
  return out;
}

SymSet complement(const SymSet& a) {
  const auto d = orbits(a.backend, a.support);
  SymSet out{a.backend, a.support, {}, {}};
  for (const auto& o : d.orbits)
    if (!a.selection.count(o.id)) out.selection.insert(o.id);
  if (d.family) out.tail = index_without(index_boolean(BoolOp::Complement, a.tail, {}), d.family->excluded);
  return out;
}

SymSet combine(BoolOp op, const SymSet& a, const SymSet& b) {
  if (op == BoolOp::Complement) return complement(a);
  if (!(a.backend == b.backend)) throw InputError("backend mismatch: " + a.backend.str() + " vs " + b.backend.str());
  const Support s = support_union(a.backend, a.support, b.support);
  const SymSet ra = reexpress(a, s), rb = reexpress(b, s);
  SymSet out{a.backend, s, {}, index_boolean(op, ra.tail, rb.tail)};
  const auto d = orbits(a.backend, s);
  for (const auto& o : d.orbits) {
    const bool x = ra.selection.count(o.id) > 0, y = rb.selection.count(o.id) > 0;
    const bool in = op == BoolOp::Union ? (x || y) : op == BoolOp::Intersection ? (x && y) : (x && !y);
    if (in) out.selection.insert(o.id);
  }
  return out;
}

bool supports(const SymSet& a, const Support& s) {
  const auto da = orbits(a.backend, a.support);
  const auto coarse = orbits(a.backend, s);
  const auto fine = orbits(a.backend, support_union(a.backend, a.support, s));
  std::map<OrbitRef, bool> seen;
  for (const auto& o : fine.orbits) {
    const bool in = sym_contains(a, da, o.representative);
    const auto [it, fresh] = seen.emplace(orbit_of(coarse, o.representative), in);
    if (!fresh && it->second != in) return false;
  }
  return true;
}

Support minimize(const SymSet& a) {
  Support cur = normalize_support(a.backend, a.support);
  for (std::size_t i = 0; i < cur.atoms.size();) {
    Support trial = cur;
    trial.atoms.erase(trial.atoms.begin() + static_cast<std::ptrdiff_t>(i));
    if (supports(a, trial)) cur = std::move(trial);
    else ++i;
  }
  for (std::size_t i = 0; i < cur.clopens.size();) {
    Support trial = cur;
    trial.clopens.erase(trial.clopens.begin() + static_cast<std::ptrdiff_t>(i));
    if (supports(a, trial)) cur = std::move(trial);
    else ++i;
  }
  return cur;
}

SymSet canonical(const SymSet& a) { return reexpress(a, minimize(a)); }

// ---------------------------------------------------------------------------
// Size

std::string SizeClass::str() const {
  switch (kind) {
    case Kind::Finite: return "Finite(" + std::to_string(n) + ")";
    case Kind::Cofinite: return "Cofinite(" + std::to_string(n) + ")";
    case Kind::InfiniteCoinfinite: return "InfiniteCoinfinite";
  }
  return "";
}

SizeClass size_class(const SymSet& a) {
  const auto d = orbits(a.backend, a.support);
  std::uint64_t in = 0, out = 0;
  bool in_finite = true, out_finite = true;
  for (const auto& o : d.orbits) {
    const bool sel = a.selection.count(o.id) > 0;
    auto& count = sel ? in : out;
    auto& fin = sel ? in_finite : out_finite;
    if (o.finite()) count += o.size();
    else fin = false;
  }
  if (d.family) {
    const IndexSet rest = complement(a).tail;
    const auto m = d.family->member_size();
    if (a.tail.is_finite()) in += a.tail.listed().size() * m;
    else in_finite = false;
    if (rest.is_finite()) out += rest.listed().size() * m;
    else out_finite = false;
  }
  if (in_finite) return {SizeClass::Kind::Finite, in};
  if (out_finite) return {SizeClass::Kind::Cofinite, out};
  return {SizeClass::Kind::InfiniteCoinfinite, 0};
}

// ---------------------------------------------------------------------------
// Amorphousness and Dedekind classes

namespace {

std::size_t search_clopens(const BackendSpec& b) { return b.kind == BackendKind::OrdinalSpace ? 1 : 0; }

}  // namespace

AmorphousResult is_amorphous(const BackendSpec& b, std::size_t s_max) {
  validate_backend(b);
  AmorphousResult r;
  const auto cat = support_catalog(b, s_max, search_clopens(b));
  for (const auto& s : cat.supports) {
    ++r.supports_checked;
    const auto d = orbits(b, s);
    if (d.family) {
      r.witness = make_symset(b, s, {}, IndexSet::residue(2, 0));
      r.reason = "support " + s.str() + " leaves the family " + d.family->str() +
                 "; the even-indexed members form an infinite coinfinite set";
      return r;
    }
    std::vector<int> infinite;
    for (const auto& o : d.orbits)
      if (!o.finite()) infinite.push_back(o.id);
    if (infinite.empty()) {
      r.reason = "U is finite";
      return r;
    }
    if (infinite.size() >= 2) {
      r.witness = make_symset(b, s, {infinite.front()});
      r.reason = "support " + s.str() + " has " + std::to_string(infinite.size()) + " infinite orbits";
      return r;
    }
  }
  r.amorphous = true;
  r.reason = "every support with at most " + std::to_string(s_max) + " atoms" +
             (search_clopens(b) ? " and one clopen" : "") + " leaves exactly one infinite orbit";
  return r;
}

std::string dedekind_class_name(DedekindClass c) {
  switch (c) {
    case DedekindClass::WeaklyDF: return "WeaklyDF";
    case DedekindClass::DFnotWeakly: return "DFnotWeakly";
    case DedekindClass::NotDF: return "NotDF";
  }
  return "";
}

DedekindResult dedekind_class(const BackendSpec& b, std::size_t s_max) {
  validate_backend(b);
  DedekindResult r;
  std::optional<DedekindResult> family_seen;
  std::size_t most = 0;
  const auto cat = support_catalog(b, s_max, search_clopens(b));
  for (const auto& s : cat.supports) {
    ++r.supports_checked;
    const auto fixed = fixed_atoms(b, s);
    if (fixed.infinite) {
      r.cls = DedekindClass::NotDF;
      r.evidence = s;
      r.detail = "support " + s.str() + " fixes infinitely many atoms (" + fixed.str() + ")";
      return r;
    }
    const auto d = orbits(b, s);
    if (d.family && !family_seen) {
      family_seen = DedekindResult{DedekindClass::DFnotWeakly, s,
                                   "support " + s.str() + " leaves infinitely many orbits: " + d.family->str(), 0};
    }
    if (!d.family && d.orbits.size() > most) {
      most = d.orbits.size();
      r.evidence = s;
    }
  }
  if (family_seen) {
    family_seen->supports_checked = r.supports_checked;
    return *family_seen;
  }
  r.cls = DedekindClass::WeaklyDF;
  r.detail = "every support has finitely many orbits (at most " + std::to_string(most) + ", at " + r.evidence.str() + ")";
  return r;
}

}  // namespace fmwb
