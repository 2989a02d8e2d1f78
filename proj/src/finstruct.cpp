#include "fmwb/finstruct.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fmwb {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid structure:";
  for (const auto& s : issues) out += "\n  " + s;
  return out;
}

constexpr std::size_t kDenseLimit = std::size_t{1} << 22;

}  // namespace

StructureError::StructureError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

int Signature::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  return -1;
}

std::string Signature::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < relations.size(); ++i) {
    if (i) out += ", ";
    out += relations[i].name + "/" + std::to_string(relations[i].arity);
  }
  return out + "}";
}

FinStructure::FinStructure(Signature sig, int n) : FinStructure(std::move(sig)) {
  for (int i = 0; i < n; ++i) add_element(std::to_string(i));
}

std::optional<int> FinStructure::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FinStructure::add_element(const std::string& id) {
  if (index_.count(id)) throw StructureError({"duplicate element id '" + id + "'"});
  const int i = size();
  ids_.push_back(id);
  index_[id] = i;
  rebuild_dense();
  return i;
}

int FinStructure::add_element() {
  int n = size();
  std::string id = std::to_string(n);
  while (index_.count(id)) id = std::to_string(++n);
  return add_element(id);
}

std::size_t FinStructure::dense_index(const Tuple& t) const {
  std::size_t idx = 0;
  const std::size_t n = ids_.size();
  for (int x : t) idx = idx * n + static_cast<std::size_t>(x);
  return idx;
}

void FinStructure::rebuild_dense() {
  const std::size_t n = ids_.size();
  for (std::size_t r = 0; r < sig_.size(); ++r) {
    std::size_t cells = 1;
    bool fits = true;
    for (int j = 0; j < sig_.relations[r].arity; ++j) {
      cells *= std::max<std::size_t>(n, 1);
      if (cells > kDenseLimit) fits = false;
    }
    dense_[r].assign(fits ? cells : 0, 0);
    if (!fits) continue;
    for (const auto& t : tuples_[r]) dense_[r][dense_index(t)] = 1;
  }
}

void FinStructure::add_tuple(int rel, const Tuple& t) {
  if (rel < 0 || static_cast<std::size_t>(rel) >= sig_.size())
    throw StructureError({"relation index " + std::to_string(rel) + " out of range"});
  const auto& sym = sig_.relations[static_cast<std::size_t>(rel)];
  if (static_cast<int>(t.size()) != sym.arity)
    throw StructureError({"arity mismatch for " + sym.name + ": expected " + std::to_string(sym.arity) +
                          ", got " + std::to_string(t.size())});
  for (int x : t)
    if (x < 0 || x >= size()) throw StructureError({"element index " + std::to_string(x) + " out of range"});
  tuples_[static_cast<std::size_t>(rel)].insert(t);
  auto& d = dense_[static_cast<std::size_t>(rel)];
  if (!d.empty()) d[dense_index(t)] = 1;
}

void FinStructure::add_tuple(const std::string& rel, const Tuple& t) {
  int r = sig_.index_of(rel);
  if (r < 0) throw StructureError({"unknown relation symbol '" + rel + "'"});
  add_tuple(r, t);
}

void FinStructure::add_edge(int rel, int a, int b) {
  add_tuple(rel, {a, b});
  add_tuple(rel, {b, a});
}

bool FinStructure::holds(int rel, const Tuple& t) const {
  const auto r = static_cast<std::size_t>(rel);
  if (!dense_[r].empty()) return dense_[r][dense_index(t)] != 0;
  return tuples_[r].count(t) != 0;
}

bool FinStructure::holds(int rel, int a, int b) const {
  const auto r = static_cast<std::size_t>(rel);
  if (!dense_[r].empty())
    return dense_[r][static_cast<std::size_t>(a) * ids_.size() + static_cast<std::size_t>(b)] != 0;
  return tuples_[r].count(Tuple{a, b}) != 0;
}

FinStructure FinStructure::induced(const std::vector<int>& elems) const {
  FinStructure out(sig_);
  std::vector<int> pos(ids_.size(), -1);
  for (int e : elems) pos[static_cast<std::size_t>(e)] = out.add_element(ids_[static_cast<std::size_t>(e)]);
  for (std::size_t r = 0; r < sig_.size(); ++r) {
    for (const auto& t : tuples_[r]) {
      Tuple u;
      bool inside = true;
      for (int x : t) {
        if (pos[static_cast<std::size_t>(x)] < 0) {
          inside = false;
          break;
        }
        u.push_back(pos[static_cast<std::size_t>(x)]);
      }
      if (inside) out.add_tuple(static_cast<int>(r), u);
    }
  }
  return out;
}

bool operator==(const FinStructure& a, const FinStructure& b) {
  return a.sig_ == b.sig_ && a.ids_ == b.ids_ && a.tuples_ == b.tuples_;
}

FinStructure validate(const RawStructure& raw) {
  std::vector<std::string> issues;
  Signature sig;
  std::set<std::string> names;
  for (const auto& [name, arity] : raw.signature) {
    if (name.empty()) issues.push_back("relation with empty name");
    if (!names.insert(name).second) issues.push_back("duplicate relation symbol '" + name + "'");
    if (arity < 1) issues.push_back("relation '" + name + "' has arity " + std::to_string(arity) + " (must be >= 1)");
    sig.relations.push_back(RelSymbol{name, static_cast<int>(std::max<long long>(arity, 1))});
  }
  std::map<std::string, int> index;
  for (const auto& id : raw.domain) {
    if (index.count(id)) {
      issues.push_back("duplicate element id '" + id + "'");
      continue;
    }
    const int i = static_cast<int>(index.size());
    index[id] = i;
  }
  std::vector<std::pair<int, Tuple>> tuples;
  for (const auto& [name, list] : raw.relations) {
    const int r = sig.index_of(name);
    if (r < 0) {
      issues.push_back("relation '" + name + "' not declared in signature");
      continue;
    }
    const int arity = sig.relations[static_cast<std::size_t>(r)].arity;
    for (const auto& t : list) {
      std::string shown = "(";
      for (std::size_t j = 0; j < t.size(); ++j) shown += (j ? "," : "") + t[j];
      shown += ")";
      bool ok = true;
      if (static_cast<int>(t.size()) != arity) {
        issues.push_back("arity mismatch: tuple " + shown + " under " + name + "/" + std::to_string(arity));
        ok = false;
      }
      Tuple u;
      for (const auto& x : t) {
        auto it = index.find(x);
        if (it == index.end()) {
          issues.push_back("unknown element id '" + x + "' in " + name + " tuple " + shown);
          ok = false;
        } else {
          u.push_back(it->second);
        }
      }
      if (ok) tuples.emplace_back(r, u);
    }
  }
  if (!issues.empty()) throw StructureError(issues);
  FinStructure out(sig);
  for (const auto& id : raw.domain) out.add_element(id);
  for (const auto& [r, t] : tuples) out.add_tuple(r, t);
  return out;
}

void require_same_signature(const FinStructure& a, const FinStructure& b) {
  if (!(a.signature() == b.signature()))
    throw std::invalid_argument("signature mismatch: " + a.signature().str() + " vs " + b.signature().str());
}

namespace {

// Calls f on every tuple of the given arity over {0..top} that contains top.
template <class F>
void for_tuples_with_top(int arity, int top, F&& f) {
  Tuple t(static_cast<std::size_t>(arity), 0);
  while (true) {
    if (std::find(t.begin(), t.end(), top) != t.end()) f(t);
    int j = arity - 1;
    while (j >= 0 && t[static_cast<std::size_t>(j)] == top) {
      t[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) return;
    ++t[static_cast<std::size_t>(j)];
  }
}

class EmbeddingSearch {
 public:
  EmbeddingSearch(const FinStructure& a, const FinStructure& b, std::size_t limit)
      : a_(a), b_(b), limit_(limit), map_(static_cast<std::size_t>(a.size()), -1),
        used_(static_cast<std::size_t>(b.size()), false) {
    // For each element i of a, the tuples over {0..i} whose largest entry is i.
    checks_.resize(static_cast<std::size_t>(a.size()));
    for (int i = 0; i < a.size(); ++i) {
      for (std::size_t r = 0; r < a.signature().size(); ++r) {
        for_tuples_with_top(a.signature().relations[r].arity, i, [&](const Tuple& t) {
          checks_[static_cast<std::size_t>(i)].push_back(Check{static_cast<int>(r), t, a.holds(static_cast<int>(r), t)});
        });
      }
    }
  }

  void set_candidates(std::vector<std::vector<int>> c) { candidates_ = std::move(c); }

  std::vector<Embedding> run(const std::vector<int>& prefix) {
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      const int y = prefix[i];
      if (y < 0 || y >= b_.size() || used_[static_cast<std::size_t>(y)]) return {};
      map_[i] = y;
      used_[static_cast<std::size_t>(y)] = true;
      if (!consistent(static_cast<int>(i))) return {};
    }
    extend(static_cast<int>(prefix.size()));
    return std::move(out_);
  }

 private:
  struct Check {
    int rel;
    Tuple t;
    bool value;
  };

  const FinStructure& a_;
  const FinStructure& b_;
  std::size_t limit_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::vector<std::vector<Check>> checks_;
  std::vector<std::vector<int>> candidates_;
  std::vector<Embedding> out_;
  Tuple scratch_;

  bool consistent(int i) {
    for (const auto& c : checks_[static_cast<std::size_t>(i)]) {
      scratch_.resize(c.t.size());
      for (std::size_t j = 0; j < c.t.size(); ++j) scratch_[j] = map_[static_cast<std::size_t>(c.t[j])];
      if (b_.holds(c.rel, scratch_) != c.value) return false;
    }
    return true;
  }

  bool done() const { return limit_ != 0 && out_.size() >= limit_; }

  void try_value(int i, int y) {
    if (used_[static_cast<std::size_t>(y)]) return;
    map_[static_cast<std::size_t>(i)] = y;
    if (!consistent(i)) return;
    used_[static_cast<std::size_t>(y)] = true;
    extend(i + 1);
    used_[static_cast<std::size_t>(y)] = false;
  }

  void extend(int i) {
    if (done()) return;
    if (i == a_.size()) {
      out_.push_back(Embedding{map_});
      return;
    }
    if (!candidates_.empty()) {
      for (int y : candidates_[static_cast<std::size_t>(i)]) {
        try_value(i, y);
        if (done()) return;
      }
    } else {
      for (int y = 0; y < b_.size(); ++y) {
        try_value(i, y);
        if (done()) return;
      }
    }
  }
};

}  // namespace

bool is_embedding(const FinStructure& a, const FinStructure& b, const Embedding& e) {
  if (!(a.signature() == b.signature())) return false;
  if (static_cast<int>(e.map.size()) != a.size()) return false;
  std::set<int> image;
  for (int y : e.map) {
    if (y < 0 || y >= b.size() || !image.insert(y).second) return false;
  }
  EmbeddingSearch s(a, b, 1);
  return !s.run(e.map).empty();
}

std::vector<Embedding> find_embeddings(const FinStructure& a, const FinStructure& b, std::size_t limit) {
  require_same_signature(a, b);
  if (a.size() > b.size()) return {};
  EmbeddingSearch s(a, b, limit);
  return s.run({});
}

std::vector<Embedding> find_embeddings_extending(const FinStructure& a, const FinStructure& b,
                                                 const std::vector<int>& prefix, std::size_t limit) {
  require_same_signature(a, b);
  if (a.size() > b.size() || static_cast<int>(prefix.size()) > a.size()) return {};
  EmbeddingSearch s(a, b, limit);
  return s.run(prefix);
}

bool embeds(const FinStructure& a, const FinStructure& b) { return !find_embeddings(a, b, 1).empty(); }

std::vector<std::vector<int>> degree_profile(const FinStructure& a) {
  std::size_t width = 0;
  for (const auto& r : a.signature().relations) width += static_cast<std::size_t>(r.arity);
  std::vector<std::vector<int>> prof(static_cast<std::size_t>(a.size()), std::vector<int>(width, 0));
  std::size_t base = 0;
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    for (const auto& t : a.tuples(static_cast<int>(r)))
      for (std::size_t p = 0; p < t.size(); ++p) ++prof[static_cast<std::size_t>(t[p])][base + p];
    base += static_cast<std::size_t>(a.signature().relations[r].arity);
  }
  return prof;
}

namespace {

std::vector<std::vector<int>> profile_candidates(const FinStructure& a, const FinStructure& b) {
  auto pa = degree_profile(a);
  auto pb = degree_profile(b);
  std::vector<std::vector<int>> cand(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j)
      if (pa[i] == pb[j]) cand[i].push_back(static_cast<int>(j));
  return cand;
}

}  // namespace

IsoResult are_isomorphic(const FinStructure& a, const FinStructure& b) {
  require_same_signature(a, b);
  IsoResult res;
  if (a.size() != b.size()) {
    res.invariant = "size " + std::to_string(a.size()) + " vs " + std::to_string(b.size());
    return res;
  }
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    if (a.tuples(static_cast<int>(r)).size() != b.tuples(static_cast<int>(r)).size()) {
      res.invariant = "number of " + a.signature().relations[r].name + " tuples " +
                      std::to_string(a.tuples(static_cast<int>(r)).size()) + " vs " +
                      std::to_string(b.tuples(static_cast<int>(r)).size());
      return res;
    }
  }
  auto pa = degree_profile(a);
  auto pb = degree_profile(b);
  auto sa = pa, sb = pb;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) {
    res.invariant = "relation-degree multisets differ";
    return res;
  }
  EmbeddingSearch s(a, b, 1);
  s.set_candidates(profile_candidates(a, b));
  auto found = s.run({});
  if (!found.empty()) {
    res.isomorphic = true;
    res.witness = found.front();
  }
  return res;
}

std::vector<Embedding> automorphisms(const FinStructure& a, std::size_t limit) {
  EmbeddingSearch s(a, a, limit);
  s.set_candidates(profile_candidates(a, a));
  return s.run({});
}

std::optional<Embedding> find_automorphism_extending(const FinStructure& a, const std::vector<int>& from,
                                                     const std::vector<int>& to) {
  if (from.size() != to.size()) return std::nullopt;
  // Reorder a so that `from` comes first; an embedding of the reordered copy
  // into a with prefix `to` is the automorphism sought.
  std::vector<int> order = from;
  std::vector<bool> seen(static_cast<std::size_t>(a.size()), false);
  for (int x : from) {
    if (x < 0 || x >= a.size() || seen[static_cast<std::size_t>(x)]) return std::nullopt;
    seen[static_cast<std::size_t>(x)] = true;
  }
  for (int x = 0; x < a.size(); ++x)
    if (!seen[static_cast<std::size_t>(x)]) order.push_back(x);
  FinStructure r = a.induced(order);
  EmbeddingSearch s(r, a, 1);
  s.set_candidates(profile_candidates(r, a));
  auto found = s.run(to);
  if (found.empty()) return std::nullopt;
  Embedding g;
  g.map.assign(static_cast<std::size_t>(a.size()), -1);
  for (std::size_t i = 0; i < order.size(); ++i) g.map[static_cast<std::size_t>(order[i])] = found.front().map[i];
  return g;
}

// ---------------------------------------------------------------------------
// Canonical labelling by colour refinement and individualisation, keeping the
// lexicographically least relabelled tuple list. Subtrees are pruned with
// automorphisms discovered from equal leaves and with transpositions that are
// automorphisms.

namespace {

using Encoding = std::vector<int>;

class Canonizer {
 public:
  explicit Canonizer(const FinStructure& a) : a_(a), n_(a.size()) {}

  std::vector<int> run(const std::vector<int>& prefix) {
    std::vector<int> colors(static_cast<std::size_t>(n_), static_cast<int>(prefix.size()));
    for (std::size_t i = 0; i < prefix.size(); ++i) colors[static_cast<std::size_t>(prefix[i])] = static_cast<int>(i);
    search(colors, prefix);
    return best_order_;
  }

 private:
  const FinStructure& a_;
  int n_;
  bool have_best_ = false;
  Encoding best_;
  std::vector<int> best_order_;
  std::vector<std::vector<int>> autos_;

  // Stable refinement; colours are renumbered 0..c-1 and refine the input order.
  void refine(std::vector<int>& colors) const {
    int count = distinct(colors);
    while (true) {
      std::vector<std::vector<int>> sig(static_cast<std::size_t>(n_));
      for (std::size_t r = 0; r < a_.signature().size(); ++r) {
        for (const auto& t : a_.tuples(static_cast<int>(r))) {
          for (std::size_t p = 0; p < t.size(); ++p) {
            auto& s = sig[static_cast<std::size_t>(t[p])];
            s.push_back(-1 - static_cast<int>(r));
            s.push_back(static_cast<int>(p));
            for (int x : t) s.push_back(colors[static_cast<std::size_t>(x)]);
          }
        }
      }
      // Entries are fixed-width per relation, so sort them as records.
      std::vector<std::pair<int, std::vector<std::vector<int>>>> keys(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) {
        auto& s = sig[static_cast<std::size_t>(v)];
        std::vector<std::vector<int>> recs;
        std::size_t i = 0;
        while (i < s.size()) {
          const int r = -1 - s[i];
          const std::size_t w = 2 + static_cast<std::size_t>(a_.signature().relations[static_cast<std::size_t>(r)].arity);
          recs.emplace_back(s.begin() + static_cast<long>(i), s.begin() + static_cast<long>(i + w));
          i += w;
        }
        std::sort(recs.begin(), recs.end());
        keys[static_cast<std::size_t>(v)] = {colors[static_cast<std::size_t>(v)], std::move(recs)};
      }
      std::vector<int> idx(static_cast<std::size_t>(n_));
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int x, int y) { return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)]; });
      std::vector<int> next(static_cast<std::size_t>(n_));
      int c = -1;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i == 0 || keys[static_cast<std::size_t>(idx[i])] != keys[static_cast<std::size_t>(idx[i - 1])]) ++c;
        next[static_cast<std::size_t>(idx[i])] = c;
      }
      colors = std::move(next);
      const int now = c + 1;
      if (now == count) return;
      count = now;
    }
  }

  static int distinct(const std::vector<int>& colors) {
    std::set<int> s(colors.begin(), colors.end());
    return static_cast<int>(s.size());
  }

  Encoding encode(const std::vector<int>& order) const {
    std::vector<int> pos(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    Encoding enc;
    for (std::size_t r = 0; r < a_.signature().size(); ++r) {
      std::vector<Tuple> ts;
      for (const auto& t : a_.tuples(static_cast<int>(r))) {
        Tuple u;
        for (int x : t) u.push_back(pos[static_cast<std::size_t>(x)]);
        ts.push_back(std::move(u));
      }
      std::sort(ts.begin(), ts.end());
      enc.push_back(static_cast<int>(ts.size()));
      for (const auto& u : ts) enc.insert(enc.end(), u.begin(), u.end());
    }
    return enc;
  }

  bool swap_is_automorphism(int v, int w) const {
    auto img = [&](int x) { return x == v ? w : x == w ? v : x; };
    for (std::size_t r = 0; r < a_.signature().size(); ++r) {
      for (const auto& t : a_.tuples(static_cast<int>(r))) {
        if (std::find(t.begin(), t.end(), v) == t.end() && std::find(t.begin(), t.end(), w) == t.end()) continue;
        Tuple u;
        for (int x : t) u.push_back(img(x));
        if (!a_.holds(static_cast<int>(r), u)) return false;
      }
    }
    return true;
  }

  int find(std::vector<int>& uf, int x) const {
    while (uf[static_cast<std::size_t>(x)] != x) x = uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
    return x;
  }

  bool same_orbit(const std::vector<int>& fixed, int v, int w) const {
    std::vector<int> uf(static_cast<std::size_t>(n_));
    std::iota(uf.begin(), uf.end(), 0);
    bool any = false;
    for (const auto& g : autos_) {
      bool fixes = std::all_of(fixed.begin(), fixed.end(), [&](int x) { return g[static_cast<std::size_t>(x)] == x; });
      if (!fixes) continue;
      any = true;
      for (int x = 0; x < n_; ++x) {
        int p = find(uf, x), q = find(uf, g[static_cast<std::size_t>(x)]);
        if (p != q) uf[static_cast<std::size_t>(p)] = q;
      }
    }
    return any && find(uf, v) == find(uf, w);
  }

  void search(std::vector<int> colors, const std::vector<int>& fixed) {
    refine(colors);
    // Cells by colour.
    std::vector<std::vector<int>> cells(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) cells[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])].push_back(v);
    const std::vector<int>* target = nullptr;
    for (const auto& c : cells)
      if (c.size() > 1) {
        target = &c;
        break;
      }
    if (!target) {
      std::vector<int> order(static_cast<std::size_t>(n_));
      for (int v = 0; v < n_; ++v) order[static_cast<std::size_t>(colors[static_cast<std::size_t>(v)])] = v;
      Encoding enc = encode(order);
      if (!have_best_ || enc < best_) {
        have_best_ = true;
        best_ = std::move(enc);
        best_order_ = order;
      } else if (enc == best_) {
        std::vector<int> g(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) g[static_cast<std::size_t>(best_order_[static_cast<std::size_t>(i)])] = order[static_cast<std::size_t>(i)];
        autos_.push_back(std::move(g));
      }
      return;
    }
    const std::vector<int> cell = *target;
    std::vector<int> tried;
    for (int w : cell) {
      bool skip = false;
      for (int v : tried) {
        if (swap_is_automorphism(v, w) || same_orbit(fixed, v, w)) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      std::vector<int> next(colors.size());
      for (int u = 0; u < n_; ++u) {
        const int c = colors[static_cast<std::size_t>(u)];
        next[static_cast<std::size_t>(u)] = 2 * c + ((c == colors[static_cast<std::size_t>(w)] && u != w) ? 1 : 0);
      }
      std::vector<int> fx = fixed;
      fx.push_back(w);
      search(std::move(next), fx);
      tried.push_back(w);
    }
  }
};

}  // namespace

CanonicalLabeling canonical_labeling(const FinStructure& a, const std::vector<int>& prefix) {
  CanonicalLabeling out;
  if (a.size() == 0) {
    out.form = FinStructure(a.signature());
    return out;
  }
  Canonizer c(a);
  out.order = c.run(prefix);
  std::vector<int> pos(out.order.size());
  for (std::size_t i = 0; i < out.order.size(); ++i) pos[static_cast<std::size_t>(out.order[i])] = static_cast<int>(i);
  out.form = FinStructure(a.signature(), a.size());
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    for (const auto& t : a.tuples(static_cast<int>(r))) {
      Tuple u;
      for (int x : t) u.push_back(pos[static_cast<std::size_t>(x)]);
      out.form.add_tuple(static_cast<int>(r), u);
    }
  }
  return out;
}

FinStructure canonical_form(const FinStructure& a) { return canonical_labeling(a).form; }

std::string structure_key(const FinStructure& a) {
  std::string out = std::to_string(a.size());
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    out += "|";
    bool first = true;
    for (const auto& t : a.tuples(static_cast<int>(r))) {
      if (!first) out += ";";
      first = false;
      for (std::size_t j = 0; j < t.size(); ++j) out += (j ? "," : "") + std::to_string(t[j]);
    }
  }
  return out;
}

bool structure_less(const FinStructure& x, const FinStructure& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  for (std::size_t r = 0; r < x.signature().size(); ++r) {
    const auto& a = x.tuples(static_cast<int>(r));
    const auto& b = y.tuples(static_cast<int>(r));
    if (a != b) return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
  return false;
}

std::vector<FinStructure> induced_substructures(const FinStructure& a, int k) {
  std::map<std::string, FinStructure> seen;
  const int n = a.size();
  k = std::min(k, n);
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start) -> void {
    FinStructure f = canonical_form(a.induced(pick));
    seen.emplace(structure_key(f), std::move(f));
    if (static_cast<int>(pick.size()) == k) return;
    for (int v = start; v < n; ++v) {
      pick.push_back(v);
      self(self, v + 1);
      pick.pop_back();
    }
  };
  if (k >= 0) rec(rec, 0);
  std::vector<FinStructure> out;
  for (auto& [key, f] : seen) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), structure_less);
  return out;
}

std::string to_dot(const FinStructure& a, const std::string& name) {
  const auto& sig = a.signature();
  bool symmetric = true;
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (sig.relations[r].arity != 2) continue;
    for (const auto& t : a.tuples(static_cast<int>(r)))
      if (!a.holds(static_cast<int>(r), t[1], t[0])) symmetric = false;
  }
  std::ostringstream os;
  os << (symmetric ? "graph " : "digraph ") << '"' << name << "\" {\n";
  for (int v = 0; v < a.size(); ++v) {
    std::string label = a.id(v);
    for (std::size_t r = 0; r < sig.size(); ++r)
      if (sig.relations[r].arity == 1 && a.holds(static_cast<int>(r), v)) label += " " + sig.relations[r].name;
    os << "  n" << v << " [label=\"" << label << "\"];\n";
  }
  for (std::size_t r = 0; r < sig.size(); ++r) {
    if (sig.relations[r].arity != 2) continue;
    for (const auto& t : a.tuples(static_cast<int>(r))) {
      if (symmetric && t[0] > t[1]) continue;
      os << "  n" << t[0] << (symmetric ? " -- " : " -> ") << "n" << t[1];
      if (sig.size() > 1) os << " [label=\"" << sig.relations[r].name << "\"]";
      os << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

Signature graph_signature() { return Signature{{RelSymbol{"E", 2}}}; }

FinStructure make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  FinStructure g(graph_signature(), n);
  for (auto [x, y] : edges) g.add_edge(0, x, y);
  return g;
}

FinStructure make_path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return make_graph(n, e);
}

FinStructure make_cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return make_graph(n, e);
}

FinStructure make_complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return make_graph(n, e);
}

Signature order_signature() { return Signature{{RelSymbol{"<", 2}}}; }

FinStructure make_linear_order(int n) {
  FinStructure o(order_signature(), n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) o.add_tuple(0, {i, j});
  return o;
}

std::vector<FinStructure> all_graphs(int n) {
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::map<std::string, FinStructure> seen;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask >> s & 1) e.push_back(slots[s]);
    FinStructure f = canonical_form(make_graph(n, e));
    seen.emplace(structure_key(f), std::move(f));
  }
  std::vector<FinStructure> out;
  for (auto& [k, f] : seen) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), structure_less);
  return out;
}

}  // namespace fmwb
