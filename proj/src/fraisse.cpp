#include "fmwb/fraisse.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace fmwb {

namespace {

// ---------------------------------------------------------------------------
// Compact form for signatures of arity <= 2. Each element carries a "self"
// pattern (unary bits, then loop bits) and each ordered pair (x, y) a pair
// pattern: bit 2r is R_r(x, y), bit 2r+1 is R_r(y, x). The code of an ordered
// element list concatenates the self patterns and then the pair patterns of
// i < j, so small configurations index lookup tables directly.

struct Layout {
  std::vector<int> unary, binary;  // signature indices
  int self_bits = 0, pair_bits = 0;

  explicit Layout(const Signature& sig) {
    for (std::size_t r = 0; r < sig.size(); ++r) {
      if (sig.relations[r].arity == 1) unary.push_back(static_cast<int>(r));
      if (sig.relations[r].arity == 2) binary.push_back(static_cast<int>(r));
    }
    self_bits = static_cast<int>(unary.size() + binary.size());
    pair_bits = 2 * static_cast<int>(binary.size());
  }
  int bits(int s) const { return s * self_bits + s * (s - 1) / 2 * pair_bits; }
};

std::uint32_t swap_pair(std::uint32_t p, int nbin) {
  std::uint32_t q = 0;
  for (int r = 0; r < nbin; ++r) {
    q |= ((p >> (2 * r)) & 1u) << (2 * r + 1);
    q |= ((p >> (2 * r + 1)) & 1u) << (2 * r);
  }
  return q;
}

class Compact {
 public:
  Compact() = default;
  Compact(int nbin, int cap) : nbin_(nbin), cap_(cap), self_(static_cast<std::size_t>(cap), 0),
                               pair_(static_cast<std::size_t>(cap * cap), 0) {
    swap_.resize(std::size_t{1} << (2 * nbin));
    for (std::uint32_t p = 0; p < swap_.size(); ++p) swap_[p] = static_cast<std::uint8_t>(swap_pair(p, nbin));
  }

  int size() const { return n_; }
  int capacity() const { return cap_; }
  void resize(int n) { n_ = n; }
  int add() {
    if (n_ >= cap_) throw BoundExceeded("compact structure capacity exceeded");
    self_[static_cast<std::size_t>(n_)] = 0;
    for (int x = 0; x <= n_; ++x) {
      pair_[static_cast<std::size_t>(x * cap_ + n_)] = 0;
      pair_[static_cast<std::size_t>(n_ * cap_ + x)] = 0;
    }
    return n_++;
  }

  std::uint32_t self(int x) const { return self_[static_cast<std::size_t>(x)]; }
  std::uint32_t pair(int x, int y) const { return pair_[static_cast<std::size_t>(x * cap_ + y)]; }
  void set_self(int x, std::uint32_t p) { self_[static_cast<std::size_t>(x)] = static_cast<std::uint8_t>(p); }
  void set_pair(int x, int y, std::uint32_t p) {
    pair_[static_cast<std::size_t>(x * cap_ + y)] = static_cast<std::uint8_t>(p);
    pair_[static_cast<std::size_t>(y * cap_ + x)] = swap_[p];
  }

  // Copies the first n elements of other (same layout, capacity may differ).
  void assign_prefix(const Compact& other, int n) {
    n_ = n;
    for (int x = 0; x < n; ++x) {
      self_[static_cast<std::size_t>(x)] = other.self_[static_cast<std::size_t>(x)];
      for (int y = 0; y < n; ++y)
        pair_[static_cast<std::size_t>(x * cap_ + y)] = other.pair_[static_cast<std::size_t>(x * other.cap_ + y)];
    }
  }

 private:
  int nbin_ = 0, cap_ = 0, n_ = 0;
  std::vector<std::uint8_t> self_, pair_, swap_;
};

std::uint32_t code_of(const Layout& L, const Compact& m, const int* e, int s) {
  std::uint32_t c = 0;
  int shift = 0;
  for (int i = 0; i < s; ++i) {
    c |= m.self(e[i]) << shift;
    shift += L.self_bits;
  }
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) {
      c |= m.pair(e[i], e[j]) << shift;
      shift += L.pair_bits;
    }
  return c;
}

Compact decode(const Layout& L, std::uint32_t c, int s) {
  Compact m(static_cast<int>(L.binary.size()), std::max(s, 1));
  for (int i = 0; i < s; ++i) m.add();
  const std::uint32_t smask = (1u << L.self_bits) - 1, pmask = (1u << L.pair_bits) - 1;
  int shift = 0;
  for (int i = 0; i < s; ++i) {
    m.set_self(i, (c >> shift) & smask);
    shift += L.self_bits;
  }
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) {
      m.set_pair(i, j, (c >> shift) & pmask);
      shift += L.pair_bits;
    }
  return m;
}

Compact to_compact(const Layout& L, const FinStructure& a, int cap) {
  const int nbin = static_cast<int>(L.binary.size());
  Compact m(nbin, std::max(cap, a.size()));
  for (int x = 0; x < a.size(); ++x) m.add();
  const int nu = static_cast<int>(L.unary.size());
  for (int x = 0; x < a.size(); ++x) {
    std::uint32_t p = 0;
    for (int k = 0; k < nu; ++k)
      if (a.holds(L.unary[static_cast<std::size_t>(k)], x)) p |= 1u << k;
    for (int r = 0; r < nbin; ++r)
      if (a.holds(L.binary[static_cast<std::size_t>(r)], x, x)) p |= 1u << (nu + r);
    m.set_self(x, p);
    for (int y = x + 1; y < a.size(); ++y) {
      std::uint32_t q = 0;
      for (int r = 0; r < nbin; ++r) {
        if (a.holds(L.binary[static_cast<std::size_t>(r)], x, y)) q |= 1u << (2 * r);
        if (a.holds(L.binary[static_cast<std::size_t>(r)], y, x)) q |= 1u << (2 * r + 1);
      }
      m.set_pair(x, y, q);
    }
  }
  return m;
}

FinStructure from_compact(const Layout& L, const Signature& sig, const Compact& m) {
  FinStructure a(sig, m.size());
  const int nu = static_cast<int>(L.unary.size());
  const int nbin = static_cast<int>(L.binary.size());
  for (int x = 0; x < m.size(); ++x) {
    const std::uint32_t p = m.self(x);
    for (int k = 0; k < nu; ++k)
      if (p >> k & 1) a.add_tuple(L.unary[static_cast<std::size_t>(k)], {x});
    for (int r = 0; r < nbin; ++r)
      if (p >> (nu + r) & 1) a.add_tuple(L.binary[static_cast<std::size_t>(r)], {x, x});
    for (int y = 0; y < m.size(); ++y) {
      if (y == x) continue;
      const std::uint32_t q = m.pair(x, y);
      for (int r = 0; r < nbin; ++r)
        if (q >> (2 * r) & 1) a.add_tuple(L.binary[static_cast<std::size_t>(r)], {x, y});
    }
  }
  return a;
}

// Lookup tables of allowed configurations of every size up to the largest
// forbidden structure. A structure is in the class iff all its subsets of that
// size (or the whole structure, when smaller) are allowed.
class FastAge {
 public:
  static std::unique_ptr<FastAge> make(const AgeSpec& spec) {
    if (spec.mode != AgeMode::Forbidden) return nullptr;
    for (const auto& r : spec.sig.relations)
      if (r.arity > 2) return nullptr;
    Layout L(spec.sig);
    if (L.binary.size() > 4 || L.self_bits > 8) return nullptr;
    int k = 0;
    for (const auto& f : spec.structures) k = std::max(k, f.size());
    if (k > 4 || L.bits(k) > 22) return nullptr;
    return std::unique_ptr<FastAge>(new FastAge(spec, L, k));
  }

  const Layout& layout() const { return L_; }
  int k() const { return k_; }
  bool empty_allowed() const { return good_[0][0] != 0; }
  int nbin() const { return static_cast<int>(L_.binary.size()); }

  bool allowed(const Compact& m, const int* e, int s) const {
    return good_[static_cast<std::size_t>(s)][code_of(L_, m, e, s)] != 0;
  }

  bool member(const Compact& m) const {
    if (!empty_allowed()) return false;
    const int n = m.size();
    const int s = std::min(k_, n);
    if (s == 0) return true;
    int e[4];
    bool ok = true;
    auto rec = [&](auto&& self, int depth, int start) -> void {
      if (!ok) return;
      if (depth == s) {
        if (!allowed(m, e, s)) ok = false;
        return;
      }
      for (int x = start; x < n && ok; ++x) {
        e[depth] = x;
        self(self, depth + 1, x + 1);
      }
    };
    rec(rec, 0, 0);
    return ok;
  }

  // All subsets of `region` of the relevant size that contain x and j.
  bool check_local(const Compact& m, std::uint64_t region, int x, int j) const {
    if (k_ == 0) return true;
    const int cnt = std::popcount(region);
    const int s = std::min(k_, cnt);
    const int base = x == j ? 1 : 2;
    if (s < base) return true;
    int e[4];
    e[0] = x;
    if (base == 2) {
      e[1] = j;
      if (!good_[2][code_of(L_, m, e, 2)]) return false;  // cheap early exit
    } else if (!good_[1][code_of(L_, m, e, 1)]) {
      return false;
    }
    const int need = s - base;
    if (need == 0) return true;
    std::uint64_t others = region & ~(std::uint64_t{1} << x) & ~(std::uint64_t{1} << j);
    int pool[64];
    int np = 0;
    while (others) {
      pool[np++] = std::countr_zero(others);
      others &= others - 1;
    }
    if (need == 1) {
      for (int a = 0; a < np; ++a) {
        e[base] = pool[a];
        if (!good_[static_cast<std::size_t>(s)][code_of(L_, m, e, s)]) return false;
      }
      return true;
    }
    for (int a = 0; a < np; ++a) {
      e[base] = pool[a];
      if (need == 2) {
        for (int b = a + 1; b < np; ++b) {
          e[base + 1] = pool[b];
          if (!good_[static_cast<std::size_t>(s)][code_of(L_, m, e, s)]) return false;
        }
      } else {
        for (int b = a + 1; b < np; ++b) {
          e[base + 1] = pool[b];
          for (int c = b + 1; c < np; ++c) {
            e[base + 2] = pool[c];
            if (!good_[static_cast<std::size_t>(s)][code_of(L_, m, e, s)]) return false;
          }
        }
      }
    }
    return true;
  }

 private:
  Layout L_;
  int k_;
  std::vector<std::vector<std::uint8_t>> good_;

  FastAge(const AgeSpec& spec, Layout L, int k) : L_(std::move(L)), k_(k) {
    good_.resize(static_cast<std::size_t>(std::max(k_, 2) + 1));
    good_[0] = {1};
    for (const auto& f : spec.structures)
      if (f.size() == 0) good_[0][0] = 0;
    for (int s = 1; s < static_cast<int>(good_.size()); ++s) {
      const std::size_t total = std::size_t{1} << L_.bits(s);
      auto& g = good_[static_cast<std::size_t>(s)];
      g.assign(total, 1);
      // All orderings of every forbidden structure of this size.
      for (const auto& f : spec.structures) {
        if (f.size() != s) continue;
        Compact cf = to_compact(L_, f, s);
        std::vector<int> perm(static_cast<std::size_t>(s));
        std::iota(perm.begin(), perm.end(), 0);
        do {
          g[code_of(L_, cf, perm.data(), s)] = 0;
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
      const auto& prev = good_[static_cast<std::size_t>(s - 1)];
      for (std::size_t c = 0; c < total; ++c) {
        if (!g[c]) continue;
        if (s == 1) {
          g[c] = prev[0];
          continue;
        }
        Compact m = decode(L_, static_cast<std::uint32_t>(c), s);
        int e[4];
        for (int drop = 0; drop < s && g[c]; ++drop) {
          int t = 0;
          for (int i = 0; i < s; ++i)
            if (i != drop) e[t++] = i;
          if (!prev[code_of(L_, m, e, s - 1)]) g[c] = 0;
        }
      }
    }
  }
};

// A step of a completion search: choose the pattern of pair (x, j), or the
// self pattern of j when x == j, then check the configurations inside region.
struct Slot {
  int x = 0, j = 0;
  std::uint64_t region = 0;
  const std::vector<std::uint32_t>* order = nullptr;
};

void apply_slot(Compact& m, const Slot& s, std::uint32_t p) {
  if (s.x == s.j) {
    m.set_self(s.x, p);
  } else {
    m.set_pair(s.x, s.j, p);
  }
}

// Depth-first completion; on_done returns true to stop the search.
template <class F>
bool complete(const FastAge& age, Compact& m, const std::vector<Slot>& slots, std::size_t i, F& on_done) {
  if (i == slots.size()) return on_done(m);
  const Slot& s = slots[i];
  for (std::uint32_t p : *s.order) {
    apply_slot(m, s, p);
    if (age.check_local(m, s.region, s.x, s.j) && complete(age, m, slots, i + 1, on_done)) return true;
  }
  apply_slot(m, s, 0);
  return false;
}

std::vector<std::uint32_t> identity_order(int bits) {
  std::vector<std::uint32_t> v(std::size_t{1} << bits);
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

std::uint64_t low_bits(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }
std::uint64_t bit(int x) { return std::uint64_t{1} << x; }

// Amalgamation of compact C and D that share B on positions 0..b-1.
class FastAmalgamator {
 public:
  explicit FastAmalgamator(const FastAge& age)
      : age_(age), all_pairs_(identity_order(age.layout().pair_bits)) {}

  // On success, e holds the amalgam: C on 0..|C|-1, and dmap[y] is the
  // position of D's element y.
  bool run(const Compact& c, const Compact& d, int b) {
    c_ = &c;
    d_ = &d;
    b_ = b;
    const int dn = d.size();
    sigma_.assign(static_cast<std::size_t>(dn), -1);
    used_.assign(static_cast<std::size_t>(c.size()), false);
    if (e_.capacity() < c.size() + d.size()) e_ = Compact(age_.nbin(), c.size() + d.size() + 8);
    return assign(b);
  }

  const Compact& e() const { return e_; }
  const std::vector<int>& dmap() const { return dmap_; }

 private:
  const FastAge& age_;
  std::vector<std::uint32_t> all_pairs_;
  const Compact* c_ = nullptr;
  const Compact* d_ = nullptr;
  int b_ = 0;
  std::vector<int> sigma_;  // D-only element -> C-only element, or -1 for new
  std::vector<bool> used_;
  Compact e_;
  std::vector<int> dmap_;
  std::vector<Slot> slots_;

  bool consistent(int y, int x) const {
    const Compact& c = *c_;
    const Compact& d = *d_;
    if (c.self(x) != d.self(y)) return false;
    for (int z = 0; z < b_; ++z)
      if (c.pair(x, z) != d.pair(y, z)) return false;
    for (int z = b_; z < y; ++z) {
      const int w = sigma_[static_cast<std::size_t>(z)];
      if (w >= 0 && c.pair(x, w) != d.pair(y, z)) return false;
    }
    return true;
  }

  // Identification choices for D-only elements, disjoint first.
  bool assign(int y) {
    if (y == d_->size()) return solve();
    sigma_[static_cast<std::size_t>(y)] = -1;
    if (assign(y + 1)) return true;
    for (int x = b_; x < c_->size(); ++x) {
      if (used_[static_cast<std::size_t>(x)] || !consistent(y, x)) continue;
      used_[static_cast<std::size_t>(x)] = true;
      sigma_[static_cast<std::size_t>(y)] = x;
      if (assign(y + 1)) return true;
      used_[static_cast<std::size_t>(x)] = false;
    }
    sigma_[static_cast<std::size_t>(y)] = -1;
    return false;
  }

  bool solve() {
    const Compact& c = *c_;
    const Compact& d = *d_;
    const int cn = c.size(), dn = d.size();
    e_.assign_prefix(c, cn);
    dmap_.assign(static_cast<std::size_t>(dn), -1);
    for (int y = 0; y < b_; ++y) dmap_[static_cast<std::size_t>(y)] = y;
    for (int y = b_; y < dn; ++y) {
      const int w = sigma_[static_cast<std::size_t>(y)];
      dmap_[static_cast<std::size_t>(y)] = w >= 0 ? w : e_.add();
    }
    for (int y = b_; y < dn; ++y) {
      if (sigma_[static_cast<std::size_t>(y)] >= 0) continue;
      const int ey = dmap_[static_cast<std::size_t>(y)];
      e_.set_self(ey, d.self(y));
      for (int z = 0; z < dn; ++z)
        if (z != y) e_.set_pair(ey, dmap_[static_cast<std::size_t>(z)], d.pair(y, z));
    }
    // Free pairs: C-only elements not identified x D-only elements not identified.
    std::vector<int> cfree, dnew;
    for (int x = b_; x < cn; ++x)
      if (!used_[static_cast<std::size_t>(x)]) cfree.push_back(x);
    for (int y = b_; y < dn; ++y)
      if (sigma_[static_cast<std::size_t>(y)] < 0) dnew.push_back(dmap_[static_cast<std::size_t>(y)]);
    if (cfree.empty() || dnew.empty()) return true;
    const std::uint64_t all = low_bits(e_.size());
    slots_.clear();
    for (int j : dnew) {
      std::uint64_t later_d = 0;
      for (int j2 : dnew)
        if (j2 > j) later_d |= bit(j2);
      for (int x : cfree) {
        std::uint64_t later_c = 0;
        for (int x2 : cfree)
          if (x2 > x) later_c |= bit(x2);
        slots_.push_back(Slot{x, j, all & ~later_c & ~later_d, &all_pairs_});
      }
    }
    auto done = [](Compact&) { return true; };
    return complete(age_, e_, slots_, 0, done);
  }
};

// ---------------------------------------------------------------------------
// Built-in classes, described by hereditary predicates on compact structures.

struct Builtin {
  std::string name;
  Signature sig;
  int max_forbidden;
  std::function<bool(const Layout&, const Compact&)> ok;
};

bool bin_at(const Compact& m, int nu, int r, int x, int y) {
  if (x == y) return m.self(x) >> (nu + r) & 1;
  return m.pair(x, y) >> (2 * r) & 1;
}

bool is_graph(const Compact& m, int nu, int r) {
  for (int x = 0; x < m.size(); ++x) {
    if (bin_at(m, nu, r, x, x)) return false;
    for (int y = 0; y < m.size(); ++y)
      if (bin_at(m, nu, r, x, y) != bin_at(m, nu, r, y, x)) return false;
  }
  return true;
}

bool is_strict_order(const Compact& m, int nu, int r) {
  const int n = m.size();
  for (int x = 0; x < n; ++x) {
    if (bin_at(m, nu, r, x, x)) return false;
    for (int y = 0; y < n; ++y) {
      if (!bin_at(m, nu, r, x, y)) continue;
      if (bin_at(m, nu, r, y, x)) return false;
      for (int z = 0; z < n; ++z)
        if (bin_at(m, nu, r, y, z) && !bin_at(m, nu, r, x, z)) return false;
    }
  }
  return true;
}

bool is_total(const Compact& m, int nu, int r) {
  for (int x = 0; x < m.size(); ++x)
    for (int y = x + 1; y < m.size(); ++y)
      if (!bin_at(m, nu, r, x, y) && !bin_at(m, nu, r, y, x)) return false;
  return true;
}

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> list = [] {
    std::vector<Builtin> v;
    v.push_back({"finite_sets", Signature{}, 0, [](const Layout&, const Compact&) { return true; }});
    v.push_back({"linear_orders", Signature{{RelSymbol{"<", 2}}}, 3, [](const Layout&, const Compact& m) {
                   return is_strict_order(m, 0, 0) && is_total(m, 0, 0);
                 }});
    v.push_back({"graphs", graph_signature(), 2, [](const Layout&, const Compact& m) { return is_graph(m, 0, 0); }});
    v.push_back({"posets", Signature{{RelSymbol{"<", 2}}}, 3,
                 [](const Layout&, const Compact& m) { return is_strict_order(m, 0, 0); }});
    v.push_back({"posets_linext", Signature{{RelSymbol{"<", 2}, RelSymbol{"prec", 2}}}, 3,
                 [](const Layout&, const Compact& m) {
                   if (!is_strict_order(m, 0, 0) || !is_strict_order(m, 0, 1) || !is_total(m, 0, 1)) return false;
                   for (int x = 0; x < m.size(); ++x)
                     for (int y = 0; y < m.size(); ++y)
                       if (bin_at(m, 0, 0, x, y) && !bin_at(m, 0, 1, x, y)) return false;
                   return true;
                 }});
    v.push_back({"bipartite", Signature{{RelSymbol{"L", 1}, RelSymbol{"R", 1}, RelSymbol{"E", 2}}}, 2,
                 [](const Layout&, const Compact& m) {
                   if (!is_graph(m, 2, 0)) return false;
                   for (int x = 0; x < m.size(); ++x) {
                     const std::uint32_t side = m.self(x) & 3u;
                     if (side != 1u && side != 2u) return false;
                     for (int y = 0; y < m.size(); ++y)
                       if (y != x && bin_at(m, 2, 0, x, y) && (m.self(y) & 3u) == side) return false;
                   }
                   return true;
                 }});
    v.push_back({"maxdeg2", graph_signature(), 4, [](const Layout&, const Compact& m) {
                   if (!is_graph(m, 0, 0)) return false;
                   for (int x = 0; x < m.size(); ++x) {
                     int deg = 0;
                     for (int y = 0; y < m.size(); ++y) deg += y != x && bin_at(m, 0, 0, x, y);
                     if (deg > 2) return false;
                   }
                   return true;
                 }});
    v.push_back({"triangle_free", graph_signature(), 3, [](const Layout&, const Compact& m) {
                   if (!is_graph(m, 0, 0)) return false;
                   for (int x = 0; x < m.size(); ++x)
                     for (int y = x + 1; y < m.size(); ++y)
                       for (int z = y + 1; z < m.size(); ++z)
                         if (bin_at(m, 0, 0, x, y) && bin_at(m, 0, 0, y, z) && bin_at(m, 0, 0, x, z)) return false;
                   return true;
                 }});
    return v;
  }();
  return list;
}

// ---------------------------------------------------------------------------
// Engine: the compact tables when the class allows them, plain structures
// otherwise.

constexpr int kGenericTupleBits = 20;

class AgeEngine {
 public:
  explicit AgeEngine(const AgeSpec& spec) : spec_(spec), fast_(FastAge::make(spec)) {
    if (spec.mode == AgeMode::Explicit) {
      for (const auto& s : spec.structures) {
        if (s.size() > spec.k_max) continue;
        explicit_keys_.insert(structure_key(canonical_form(s)));
      }
    }
  }

  const AgeSpec& spec() const { return spec_; }
  const FastAge* fast() const { return fast_.get(); }

  bool member(const FinStructure& a) const {
    require_same_signature(FinStructure(spec_.sig), a);
    if (spec_.mode == AgeMode::Explicit) {
      return a.size() <= spec_.k_max && explicit_keys_.count(structure_key(canonical_form(a))) != 0;
    }
    if (fast_ && a.size() <= 64) return fast_->member(to_compact(fast_->layout(), a, a.size()));
    for (const auto& f : spec_.structures)
      if (embeds(f, a)) return false;
    return true;
  }

  // One-point extensions of a member that stay in the class (not deduplicated).
  std::vector<FinStructure> extensions(const FinStructure& m) const {
    std::vector<FinStructure> out;
    if (fast_) {
      const Layout& L = fast_->layout();
      Compact c = to_compact(L, m, m.size() + 1);
      const int z = c.add();
      const auto self_order = identity_order(L.self_bits);
      const auto pair_order = identity_order(L.pair_bits);
      std::vector<Slot> slots;
      slots.push_back(Slot{z, z, bit(z), &self_order});
      for (int x = 0; x < z; ++x) slots.push_back(Slot{x, z, low_bits(x + 1) | bit(z), &pair_order});
      auto done = [&](Compact& e) {
        out.push_back(from_compact(L, spec_.sig, e));
        return false;
      };
      complete(*fast_, c, slots, 0, done);
      return out;
    }
    // Enumerate every set of new tuples through the new element.
    FinStructure base = m;
    const int z = base.add_element();
    std::vector<std::pair<int, Tuple>> slots;
    for (std::size_t r = 0; r < spec_.sig.size(); ++r) {
      const int k = spec_.sig.relations[r].arity;
      Tuple t(static_cast<std::size_t>(k), 0);
      while (true) {
        if (std::find(t.begin(), t.end(), z) != t.end()) slots.emplace_back(static_cast<int>(r), t);
        int j = k - 1;
        while (j >= 0 && t[static_cast<std::size_t>(j)] == z) t[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
        ++t[static_cast<std::size_t>(j)];
      }
    }
    if (slots.size() > kGenericTupleBits)
      throw BoundExceeded("one-point extension has " + std::to_string(slots.size()) + " free tuples");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
      FinStructure e = base;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (mask >> s & 1) e.add_tuple(slots[s].first, slots[s].second);
      if (member(e)) out.push_back(std::move(e));
    }
    return out;
  }

  // Members of each size 0..n, canonical and sorted.
  std::vector<std::vector<FinStructure>> members_upto(int n) const {
    std::vector<std::vector<FinStructure>> levels(static_cast<std::size_t>(n + 1));
    if (spec_.mode == AgeMode::Explicit) {
      std::map<std::string, FinStructure> seen;
      for (const auto& s : spec_.structures) {
        if (s.size() > std::min(n, spec_.k_max)) continue;
        FinStructure f = canonical_form(s);
        seen.emplace(structure_key(f), f);
      }
      for (auto& [k, f] : seen) levels[static_cast<std::size_t>(f.size())].push_back(f);
    } else {
      FinStructure empty(spec_.sig);
      if (member(empty)) levels[0].push_back(empty);
      for (int s = 0; s < n; ++s) {
        std::map<std::string, FinStructure> seen;
        for (const auto& m : levels[static_cast<std::size_t>(s)])
          for (auto& e : extensions(m)) {
            FinStructure f = canonical_form(e);
            seen.emplace(structure_key(f), std::move(f));
          }
        for (auto& [k, f] : seen) levels[static_cast<std::size_t>(s + 1)].push_back(std::move(f));
      }
    }
    for (auto& lv : levels) std::sort(lv.begin(), lv.end(), structure_less);
    return levels;
  }

  // Amalgam of C and D sharing B on positions 0..b-1.
  std::optional<Amalgam> amalgam_prefixed(const FinStructure& c, const FinStructure& d, int b) const {
    if (fast_ && c.size() + d.size() <= 64) {
      const Layout& L = fast_->layout();
      Compact cc = to_compact(L, c, c.size()), dc = to_compact(L, d, d.size());
      FastAmalgamator am(*fast_);
      if (!am.run(cc, dc, b)) return std::nullopt;
      Amalgam out;
      out.e = from_compact(L, spec_.sig, am.e());
      out.p3.map.resize(static_cast<std::size_t>(c.size()));
      std::iota(out.p3.map.begin(), out.p3.map.end(), 0);
      out.p4.map = am.dmap();
      return out;
    }
    return generic_amalgam(c, d, b);
  }

 private:
  const AgeSpec& spec_;
  std::unique_ptr<FastAge> fast_;
  std::set<std::string> explicit_keys_;

  std::optional<Amalgam> generic_amalgam(const FinStructure& c, const FinStructure& d, int b) const {
    const int cn = c.size(), dn = d.size();
    std::vector<int> sigma(static_cast<std::size_t>(dn), -1);
    std::vector<bool> used(static_cast<std::size_t>(cn), false);
    std::optional<Amalgam> found;

    auto try_sigma = [&]() -> bool {
      // Domain: C, then the D-only elements that are not identified.
      std::vector<int> dmap(static_cast<std::size_t>(dn));
      for (int y = 0; y < b; ++y) dmap[static_cast<std::size_t>(y)] = y;
      int next = cn;
      std::vector<bool> dnew(static_cast<std::size_t>(cn + dn), false);
      for (int y = b; y < dn; ++y) {
        const int w = sigma[static_cast<std::size_t>(y)];
        if (w >= 0) {
          dmap[static_cast<std::size_t>(y)] = w;
        } else {
          dnew[static_cast<std::size_t>(next)] = true;
          dmap[static_cast<std::size_t>(y)] = next++;
        }
      }
      // Tuples fixed by C and by D must agree where both speak.
      FinStructure e(spec_.sig, next);
      std::vector<bool> in_d(static_cast<std::size_t>(next), false);
      for (int y = 0; y < dn; ++y) in_d[static_cast<std::size_t>(dmap[static_cast<std::size_t>(y)])] = true;
      for (std::size_t r = 0; r < spec_.sig.size(); ++r) {
        for (const auto& t : c.tuples(static_cast<int>(r))) e.add_tuple(static_cast<int>(r), t);
        for (const auto& t : d.tuples(static_cast<int>(r))) {
          Tuple u;
          for (int x : t) u.push_back(dmap[static_cast<std::size_t>(x)]);
          e.add_tuple(static_cast<int>(r), u);
        }
      }
      // Consistency on tuples inside C n image(D).
      for (std::size_t r = 0; r < spec_.sig.size(); ++r) {
        for (const auto& t : e.tuples(static_cast<int>(r))) {
          bool inside_c = std::all_of(t.begin(), t.end(), [&](int x) { return x < cn; });
          bool inside_d = std::all_of(t.begin(), t.end(), [&](int x) { return in_d[static_cast<std::size_t>(x)]; });
          if (!inside_c || !inside_d) continue;
          if (!c.holds(static_cast<int>(r), t)) return false;
          // and D must hold it too
          Tuple back;
          for (int x : t) {
            int y = static_cast<int>(std::find(dmap.begin(), dmap.end(), x) - dmap.begin());
            back.push_back(y);
          }
          if (!d.holds(static_cast<int>(r), back)) return false;
        }
      }
      // Free tuples: mention an unidentified C-only element and a new D element.
      std::vector<std::pair<int, Tuple>> free;
      for (std::size_t r = 0; r < spec_.sig.size(); ++r) {
        const int k = spec_.sig.relations[r].arity;
        Tuple t(static_cast<std::size_t>(k), 0);
        while (next > 0) {
          bool has_c = false, has_d = false;
          for (int x : t) {
            if (x >= b && x < cn && !used[static_cast<std::size_t>(x)]) has_c = true;
            if (dnew[static_cast<std::size_t>(x)]) has_d = true;
          }
          if (has_c && has_d) free.emplace_back(static_cast<int>(r), t);
          int j = k - 1;
          while (j >= 0 && t[static_cast<std::size_t>(j)] == next - 1) t[static_cast<std::size_t>(j--)] = 0;
          if (j < 0) break;
          ++t[static_cast<std::size_t>(j)];
        }
      }
      if (free.size() > kGenericTupleBits)
        throw BoundExceeded("amalgam search has " + std::to_string(free.size()) + " free tuples");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()); ++mask) {
        FinStructure cand = e;
        for (std::size_t s = 0; s < free.size(); ++s)
          if (mask >> s & 1) cand.add_tuple(free[s].first, free[s].second);
        if (member(cand)) {
          Amalgam a;
          a.e = std::move(cand);
          a.p3.map.resize(static_cast<std::size_t>(cn));
          std::iota(a.p3.map.begin(), a.p3.map.end(), 0);
          a.p4.map = dmap;
          found = std::move(a);
          return true;
        }
      }
      return false;
    };

    std::function<bool(int)> assign = [&](int y) -> bool {
      if (y == dn) return try_sigma();
      sigma[static_cast<std::size_t>(y)] = -1;
      if (assign(y + 1)) return true;
      for (int x = b; x < cn; ++x) {
        if (used[static_cast<std::size_t>(x)]) continue;
        used[static_cast<std::size_t>(x)] = true;
        sigma[static_cast<std::size_t>(y)] = x;
        if (assign(y + 1)) return true;
        used[static_cast<std::size_t>(x)] = false;
      }
      sigma[static_cast<std::size_t>(y)] = -1;
      return false;
    };
    assign(b);
    return found;
  }
};

std::vector<int> iota_vec(int n) {
  std::vector<int> v(static_cast<std::size_t>(std::max(n, 0)));
  std::iota(v.begin(), v.end(), 0);
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> builtin_age_names() {
  std::vector<std::string> out;
  for (const auto& b : builtins()) out.push_back(b.name);
  return out;
}

AgeSpec builtin_age(const std::string& name) {
  for (const auto& b : builtins()) {
    if (b.name != name) continue;
    AgeSpec spec;
    spec.name = b.name;
    spec.sig = b.sig;
    spec.mode = AgeMode::Forbidden;
    Layout L(b.sig);
    // Minimal violations: bad structures all of whose proper induced
    // substructures are good (checking one-point deletions suffices, the
    // predicates being hereditary).
    std::map<std::string, FinStructure> forbidden;
    for (int s = 1; s <= b.max_forbidden; ++s) {
      const std::uint32_t total = 1u << L.bits(s);
      for (std::uint32_t c = 0; c < total; ++c) {
        Compact m = decode(L, c, s);
        if (b.ok(L, m)) continue;
        bool minimal = true;
        int e[4];
        for (int drop = 0; drop < s && minimal; ++drop) {
          int t = 0;
          for (int i = 0; i < s; ++i)
            if (i != drop) e[t++] = i;
          Compact sub(static_cast<int>(L.binary.size()), std::max(s - 1, 1));
          for (int i = 0; i < s - 1; ++i) sub.add();
          for (int i = 0; i < s - 1; ++i) {
            sub.set_self(i, m.self(e[i]));
            for (int j = i + 1; j < s - 1; ++j) sub.set_pair(i, j, m.pair(e[i], e[j]));
          }
          if (!b.ok(L, sub)) minimal = false;
        }
        if (!minimal) continue;
        FinStructure f = canonical_form(from_compact(L, b.sig, m));
        forbidden.emplace(structure_key(f), std::move(f));
      }
    }
    for (auto& [k, f] : forbidden) spec.structures.push_back(std::move(f));
    std::sort(spec.structures.begin(), spec.structures.end(), structure_less);
    return spec;
  }
  throw InputError("unknown age '" + name + "'");
}

void check_age_spec(const AgeSpec& spec) {
  std::set<std::string> keys;
  for (const auto& s : spec.structures) {
    if (!(s.signature() == spec.sig))
      throw InputError("age '" + spec.name + "': member signature " + s.signature().str() + " differs from " +
                       spec.sig.str());
    if (spec.mode == AgeMode::Forbidden && !keys.insert(structure_key(canonical_form(s))).second)
      throw InputError("age '" + spec.name + "': forbidden structures are not pairwise non-isomorphic");
  }
  if (spec.mode == AgeMode::Explicit && spec.k_max < 0) throw InputError("k_max must be >= 0");
}

bool in_age(const AgeSpec& spec, const FinStructure& a) { return AgeEngine(spec).member(a); }

std::vector<FinStructure> age_members(const AgeSpec& spec, int size) {
  if (size < 0) return {};
  AgeEngine eng(spec);
  return eng.members_upto(size)[static_cast<std::size_t>(size)];
}

std::optional<Amalgam> amalgamate(const AgeSpec& spec, const FinStructure& b, const FinStructure& c,
                                  const FinStructure& d, const Embedding& p1, const Embedding& p2) {
  require_same_signature(b, c);
  require_same_signature(b, d);
  if (!is_embedding(b, c, p1)) throw InputError("p1 is not an embedding of B into C");
  if (!is_embedding(b, d, p2)) throw InputError("p2 is not an embedding of B into D");
  AgeEngine eng(spec);
  if (!eng.member(c) || !eng.member(d)) throw InputError("C and D must belong to the class");
  // Reorder C and D so that the images of B come first, in B's order.
  auto reorder = [&](const FinStructure& x, const Embedding& p) {
    std::vector<int> order = p.map;
    for (int v = 0; v < x.size(); ++v)
      if (std::find(p.map.begin(), p.map.end(), v) == p.map.end()) order.push_back(v);
    return order;
  };
  const auto oc = reorder(c, p1), od = reorder(d, p2);
  auto res = eng.amalgam_prefixed(c.induced(oc), d.induced(od), b.size());
  if (!res) return std::nullopt;
  Amalgam out;
  out.e = res->e;
  out.p3.map.assign(static_cast<std::size_t>(c.size()), -1);
  out.p4.map.assign(static_cast<std::size_t>(d.size()), -1);
  for (std::size_t i = 0; i < oc.size(); ++i) out.p3.map[static_cast<std::size_t>(oc[i])] = res->p3.map[i];
  for (std::size_t i = 0; i < od.size(); ++i) out.p4.map[static_cast<std::size_t>(od[i])] = res->p4.map[i];
  return out;
}

AmalgamationReport check_age_properties(const AgeSpec& spec, int n) {
  if (n < 1) throw InputError("bound must be >= 1");
  check_age_spec(spec);
  AgeEngine eng(spec);
  AmalgamationReport rep;
  rep.bound = n;
  const auto levels = eng.members_upto(n);
  for (const auto& lv : levels) rep.members_by_size.push_back(lv.size());

  // HP: one-point deletions of members are members (this gives all induced
  // substructures by induction).
  for (const auto& lv : levels) {
    for (const auto& m : lv) {
      ++rep.hp_checked;
      for (int v = 0; v < m.size() && rep.hp; ++v) {
        std::vector<int> keep;
        for (int u = 0; u < m.size(); ++u)
          if (u != v) keep.push_back(u);
        FinStructure sub = m.induced(keep);
        if (!eng.member(sub)) {
          rep.hp = false;
          rep.hp_witness = HpWitness{m, canonical_form(sub)};
        }
      }
    }
  }

  // Members that do not extend to size n inside the class are maximal and
  // must be checked themselves; all others are covered by an extension.
  std::set<std::string> extends_to_n;
  for (const auto& m : levels[static_cast<std::size_t>(n)]) extends_to_n.insert(structure_key(m));
  for (int s = n; s >= 1; --s) {
    for (const auto& m : levels[static_cast<std::size_t>(s)]) {
      if (!extends_to_n.count(structure_key(m))) continue;
      for (int v = 0; v < m.size(); ++v) {
        std::vector<int> keep;
        for (int u = 0; u < m.size(); ++u)
          if (u != v) keep.push_back(u);
        extends_to_n.insert(structure_key(canonical_form(m.induced(keep))));
      }
    }
  }
  std::vector<FinStructure> relevant;
  for (const auto& lv : levels)
    for (const auto& m : lv)
      if (m.size() == n || !extends_to_n.count(structure_key(m))) relevant.push_back(m);

  const FastAge* fast = eng.fast();
  std::optional<FastAmalgamator> fam;
  if (fast) fam.emplace(*fast);

  // Runs every unordered pair of extension classes over b; returns a failing
  // pair if any.
  auto run_pairs = [&](const FinStructure& b, std::size_t& counter) -> std::optional<std::pair<FinStructure, FinStructure>> {
    std::map<std::string, FinStructure> classes;
    for (const auto& c : relevant) {
      if (c.size() <= b.size()) continue;
      for (const auto& e : find_embeddings(b, c)) {
        FinStructure f = canonical_labeling(c, e.map).form;
        classes.emplace(structure_key(f), std::move(f));
      }
    }
    std::vector<FinStructure> list;
    for (auto& [k, f] : classes) list.push_back(std::move(f));
    std::sort(list.begin(), list.end(), structure_less);
    const int bs = b.size();
    if (fast) {
      std::vector<Compact> comp;
      for (const auto& f : list) comp.push_back(to_compact(fast->layout(), f, f.size()));
      for (std::size_t i = 0; i < comp.size(); ++i)
        for (std::size_t j = i + 1; j < comp.size(); ++j) {
          ++counter;
          if (!fam->run(comp[i], comp[j], bs)) return std::make_pair(list[i], list[j]);
        }
    } else {
      for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          ++counter;
          if (!eng.amalgam_prefixed(list[i], list[j], bs)) return std::make_pair(list[i], list[j]);
        }
    }
    return std::nullopt;
  };

  // JEP is amalgamation over the empty structure.
  FinStructure empty(spec.sig);
  if (eng.member(empty)) {
    if (auto bad = run_pairs(empty, rep.jep_checked)) {
      rep.jep = false;
      rep.jep_witness = JepWitness{bad->first, bad->second};
      rep.ap = false;
      rep.ap_witness = ApWitness{empty, bad->first, bad->second, Embedding{}, Embedding{}};
    }
  } else {
    // Without the empty structure JEP is checked directly on member pairs.
    const std::vector<FinStructure>& all = relevant;
    const auto wide = eng.members_upto(2 * n);
    for (std::size_t i = 0; i < all.size() && rep.jep; ++i)
      for (std::size_t j = i; j < all.size() && rep.jep; ++j) {
        ++rep.jep_checked;
        bool ok = false;
        for (int s = 0; s <= all[i].size() + all[j].size() && !ok; ++s)
          for (const auto& e : wide[static_cast<std::size_t>(s)])
            if (embeds(all[i], e) && embeds(all[j], e)) {
              ok = true;
              break;
            }
        if (!ok) {
          rep.jep = false;
          rep.jep_witness = JepWitness{all[i], all[j]};
        }
      }
  }
  rep.ap_checked = rep.jep_checked;
  for (int b = 1; b < n && rep.ap; ++b) {
    for (const auto& base : levels[static_cast<std::size_t>(b)]) {
      if (auto bad = run_pairs(base, rep.ap_checked)) {
        rep.ap = false;
        rep.ap_witness = ApWitness{base, bad->first, bad->second, Embedding{iota_vec(b)}, Embedding{iota_vec(b)}};
        break;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Generic structures.

std::vector<ExtensionTask> extension_tasks(const AgeSpec& spec, int e_bound) {
  AgeEngine eng(spec);
  const auto levels = eng.members_upto(std::max(e_bound, 0));
  std::vector<ExtensionTask> tasks;
  for (int s = 0; s + 1 <= e_bound; ++s) {
    for (const auto& small : levels[static_cast<std::size_t>(s)]) {
      std::map<std::string, FinStructure> bigs;
      for (const auto& big : levels[static_cast<std::size_t>(s + 1)]) {
        for (const auto& e : find_embeddings(small, big)) {
          FinStructure f = canonical_labeling(big, e.map).form;
          bigs.emplace(structure_key(f), std::move(f));
        }
      }
      std::vector<FinStructure> list;
      for (auto& [k, f] : bigs) list.push_back(std::move(f));
      std::sort(list.begin(), list.end(), structure_less);
      for (auto& big : list) tasks.push_back(ExtensionTask{small, std::move(big)});
    }
  }
  return tasks;
}

std::uint64_t structure_hash(const FinStructure& a) {
  // FNV-1a over the index-based key.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : structure_key(a)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

// Deterministic shuffle (std::shuffle's algorithm is not pinned down).
void det_shuffle(std::vector<std::uint32_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

struct CompiledTask {
  int s = 0;
  Compact small;
  std::uint32_t new_self = 0;
  std::vector<std::uint32_t> new_pairs;  // pattern of (i, new) for i < s
};

class GenericBuilder {
 public:
  GenericBuilder(const FastAge& age, const std::vector<ExtensionTask>& tasks, int cap)
      : age_(age), m_(age.nbin(), cap) {
    const Layout& L = age.layout();
    for (const auto& t : tasks) {
      CompiledTask ct;
      ct.s = t.small.size();
      Compact big = to_compact(L, t.big, t.big.size());
      ct.small = to_compact(L, t.small, ct.s);
      ct.new_self = big.self(ct.s);
      for (int i = 0; i < ct.s; ++i) ct.new_pairs.push_back(big.pair(i, ct.s));
      tasks_.push_back(std::move(ct));
    }
  }

  Compact& structure() { return m_; }

  bool extendable(const CompiledTask& t, const Compact& m, const int* f) const {
    for (int z = 0; z < m.size(); ++z) {
      bool in_f = false;
      for (int i = 0; i < t.s; ++i) in_f = in_f || f[i] == z;
      if (in_f || m.self(z) != t.new_self) continue;
      bool ok = true;
      for (int i = 0; i < t.s && ok; ++i) ok = m.pair(f[i], z) == t.new_pairs[static_cast<std::size_t>(i)];
      if (ok) return true;
    }
    return false;
  }

  // Visits embeddings of the task's small structure, lexicographically.
  template <class F>
  void for_embeddings(const CompiledTask& t, const Compact& m, F&& f) const {
    int e[8];
    auto rec = [&](auto&& self, int depth) -> bool {
      if (depth == t.s) return f(e);
      for (int x = 0; x < m.size(); ++x) {
        if (m.self(x) != t.small.self(depth)) continue;
        bool bad = false;
        for (int i = 0; i < depth && !bad; ++i) bad = e[i] == x || m.pair(e[i], x) != t.small.pair(i, depth);
        if (bad) continue;
        e[depth] = x;
        if (self(self, depth + 1)) return true;
      }
      return false;
    };
    rec(rec, 0);
  }

  std::size_t total_unmet(const Compact& m) const {
    std::size_t unmet = 0;
    for (const auto& t : tasks_)
      for_embeddings(t, m, [&](const int* f) {
        if (!extendable(t, m, f)) ++unmet;
        return false;
      });
    return unmet;
  }

  // First unmet (task, embedding), in scan order.
  std::optional<std::pair<std::size_t, std::vector<int>>> first_unmet(const Compact& m) const {
    for (std::size_t ti = 0; ti < tasks_.size(); ++ti) {
      const auto& t = tasks_[ti];
      std::optional<std::vector<int>> hit;
      for_embeddings(t, m, [&](const int* f) {
        if (extendable(t, m, f)) return false;
        hit = std::vector<int>(f, f + t.s);
        return true;
      });
      if (hit) return std::make_pair(ti, *hit);
    }
    return std::nullopt;
  }

  // Adds one element realizing task ti over f. Returns false when no
  // completion stays in the class.
  bool add_for(std::size_t ti, const std::vector<int>& f, int candidates) {
    const auto& t = tasks_[ti];
    const Layout& L = age_.layout();
    const int z = m_.add();
    std::vector<std::vector<std::uint32_t>> orders;
    orders.reserve(static_cast<std::size_t>(z) + 1);
    std::vector<Slot> slots;
    orders.push_back({t.new_self});
    slots.push_back(Slot{z, z, bit(z), &orders.back()});
    std::vector<int> fixed_pattern(static_cast<std::size_t>(z), -1);
    for (int i = 0; i < t.s; ++i) fixed_pattern[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])] = static_cast<int>(t.new_pairs[static_cast<std::size_t>(i)]);
    const auto all = identity_order(L.pair_bits);
    for (int x = 0; x < z; ++x) {
      if (fixed_pattern[static_cast<std::size_t>(x)] >= 0) {
        orders.push_back({static_cast<std::uint32_t>(fixed_pattern[static_cast<std::size_t>(x)])});
      } else {
        orders.push_back(all);
      }
      slots.push_back(Slot{x, z, low_bits(x + 1) | bit(z), &orders.back()});
    }
    std::optional<std::size_t> best_score;
    std::vector<std::uint32_t> best;
    for (int k = 0; k < candidates; ++k) {
      if (k > 0) {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(z));
        for (std::size_t s = 1; s < orders.size(); ++s)
          if (orders[s].size() > 1) det_shuffle(orders[s], rng);
      }
      std::vector<std::uint32_t> got;
      auto done = [&](Compact& e) {
        got.clear();
        got.push_back(e.self(z));
        for (int x = 0; x < z; ++x) got.push_back(e.pair(x, z));
        return true;
      };
      if (!complete(age_, m_, slots, 0, done)) {
        if (k == 0) {
          m_.resize(z);
          return false;  // exhaustive: no completion at all
        }
        continue;
      }
      apply_row(z, got);
      const std::size_t score = total_unmet(m_);
      if (!best_score || score < *best_score) {
        best_score = score;
        best = got;
      }
      if (score == 0) break;
    }
    apply_row(z, best);
    return true;
  }

  const std::vector<CompiledTask>& tasks() const { return tasks_; }

 private:
  const FastAge& age_;
  Compact m_;
  std::vector<CompiledTask> tasks_;

  void apply_row(int z, const std::vector<std::uint32_t>& row) {
    m_.set_self(z, row[0]);
    for (int x = 0; x < z; ++x) m_.set_pair(x, z, row[static_cast<std::size_t>(x) + 1]);
  }
};

constexpr int kGenericCandidates = 48;

// Same scan on plain structures, for explicit classes and higher arities. The
// new element takes the first admissible set of free tuples.
GenericResult build_generic_plain(const AgeSpec& spec, int n, int e_bound) {
  AgeEngine eng(spec);
  const auto tasks = extension_tasks(spec, e_bound);
  auto unmet_of = [&](const ExtensionTask& t, const FinStructure& m, const Embedding& f) {
    return find_embeddings_extending(t.big, m, f.map, 1).empty();
  };
  FinStructure m(spec.sig);
  GenericResult out;
  while (m.size() < n) {
    const ExtensionTask* task = nullptr;
    Embedding f;
    for (const auto& t : tasks) {
      for (const auto& e : find_embeddings(t.small, m))
        if (unmet_of(t, m, e)) {
          task = &t;
          f = e;
          break;
        }
      if (task) break;
    }
    if (!task) {
      for (const auto& t : tasks) {
        auto es = find_embeddings(t.small, m, 1);
        if (!es.empty()) {
          task = &t;
          f = es.front();
          break;
        }
      }
    }
    if (!task) {
      out.stalled = true;
      break;
    }
    FinStructure base = m;
    const int z = base.add_element();
    const int s = task->small.size();
    std::vector<int> to_big(static_cast<std::size_t>(z + 1), -1);
    for (int i = 0; i < s; ++i) to_big[static_cast<std::size_t>(f.map[static_cast<std::size_t>(i)])] = i;
    to_big[static_cast<std::size_t>(z)] = s;
    std::vector<std::pair<int, Tuple>> free;
    for (std::size_t r = 0; r < spec.sig.size(); ++r) {
      const int k = spec.sig.relations[r].arity;
      Tuple t(static_cast<std::size_t>(k), 0);
      while (true) {
        if (std::find(t.begin(), t.end(), z) != t.end()) {
          bool inside = true;
          Tuple img;
          for (int x : t) {
            inside = inside && to_big[static_cast<std::size_t>(x)] >= 0;
            img.push_back(to_big[static_cast<std::size_t>(x)]);
          }
          if (!inside) {
            free.emplace_back(static_cast<int>(r), t);
          } else if (task->big.holds(static_cast<int>(r), img)) {
            base.add_tuple(static_cast<int>(r), t);
          }
        }
        int j = k - 1;
        while (j >= 0 && t[static_cast<std::size_t>(j)] == z) t[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
        ++t[static_cast<std::size_t>(j)];
      }
    }
    if (free.size() > kGenericTupleBits)
      throw BoundExceeded("new element has " + std::to_string(free.size()) + " free tuples");
    std::optional<FinStructure> next;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free.size()) && !next; ++mask) {
      FinStructure cand = base;
      for (std::size_t i = 0; i < free.size(); ++i)
        if (mask >> i & 1) cand.add_tuple(free[i].first, free[i].second);
      if (eng.member(cand)) next = std::move(cand);
    }
    if (!next) {
      out.stalled = true;
      break;
    }
    m = std::move(*next);
  }
  out.structure = m;
  for (const auto& t : tasks) {
    TaskStatus st;
    st.task = t;
    for (const auto& e : find_embeddings(t.small, m)) {
      ++st.embeddings;
      if (unmet_of(t, m, e)) ++st.unmet;
    }
    out.tasks.push_back(std::move(st));
  }
  out.hash = structure_hash(out.structure);
  return out;
}

}  // namespace

GenericResult build_generic(const AgeSpec& spec, int n, int e_bound) {
  if (n < 0 || e_bound < 1) throw InputError("build_generic needs n >= 0 and e_bound >= 1");
  auto rep = check_age_properties(spec, e_bound);
  if (!rep.hp || !rep.jep || !rep.ap)
    throw InputError("age '" + spec.name + "' fails amalgamation at bound " + std::to_string(e_bound));
  auto fast = FastAge::make(spec);
  if (!fast) return build_generic_plain(spec, n, e_bound);
  if (n > 64) throw BoundExceeded("build_generic supports at most 64 elements");
  if (e_bound > 8 || fast->layout().bits(e_bound - 1) > 32)
    throw BoundExceeded("extension bound too large for this signature");
  const auto tasks = extension_tasks(spec, e_bound);
  GenericBuilder gb(*fast, tasks, std::max(n, 1));
  GenericResult out;
  while (gb.structure().size() < n) {
    auto unmet = gb.first_unmet(gb.structure());
    bool ok;
    if (unmet) {
      ok = gb.add_for(unmet->first, unmet->second, kGenericCandidates);
    } else {
      // Saturated below n: grow by realizing the first task over its first
      // embedding anyway.
      std::optional<std::size_t> grow;
      std::vector<int> f;
      for (std::size_t ti = 0; ti < gb.tasks().size() && !grow; ++ti) {
        gb.for_embeddings(gb.tasks()[ti], gb.structure(), [&](const int* e) {
          grow = ti;
          f.assign(e, e + gb.tasks()[ti].s);
          return true;
        });
      }
      ok = grow && gb.add_for(*grow, f, kGenericCandidates);
    }
    if (!ok) {
      out.stalled = true;
      break;
    }
  }
  out.structure = from_compact(fast->layout(), spec.sig, gb.structure());
  for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
    TaskStatus st;
    st.task = tasks[ti];
    gb.for_embeddings(gb.tasks()[ti], gb.structure(), [&](const int* f) {
      ++st.embeddings;
      if (!gb.extendable(gb.tasks()[ti], gb.structure(), f)) ++st.unmet;
      return false;
    });
    out.tasks.push_back(std::move(st));
  }
  out.hash = structure_hash(out.structure);
  return out;
}

HomogeneityResult check_homogeneity(const FinStructure& a, int m) {
  HomogeneityResult res;
  const int n = a.size();
  m = std::min(m, n);
  for (int k = 1; k <= m; ++k) {
    // All injective k-tuples, in lexicographic order.
    std::vector<std::vector<int>> tuples;
    std::vector<int> cur;
    auto rec = [&](auto&& self) -> void {
      if (static_cast<int>(cur.size()) == k) {
        tuples.push_back(cur);
        return;
      }
      for (int x = 0; x < n; ++x) {
        if (std::find(cur.begin(), cur.end(), x) != cur.end()) continue;
        cur.push_back(x);
        self(self);
        cur.pop_back();
      }
    };
    rec(rec);
    std::vector<std::string> type(tuples.size());
    for (std::size_t i = 0; i < tuples.size(); ++i) type[i] = structure_key(a.induced(tuples[i]));
    std::vector<int> orbit(tuples.size(), -1);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      if (orbit[i] >= 0) continue;
      orbit[i] = static_cast<int>(i);
      for (std::size_t j = i + 1; j < tuples.size(); ++j) {
        if (orbit[j] >= 0 || type[j] != type[i]) continue;
        if (find_automorphism_extending(a, tuples[i], tuples[j])) {
          orbit[j] = static_cast<int>(i);
        } else {
          res.homogeneous = false;
          res.from = tuples[i];
          res.to = tuples[j];
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace fmwb
