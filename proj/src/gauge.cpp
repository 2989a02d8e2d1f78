#include <algorithm>
#include <functional>

#include "fmwb/fmsets.hpp"

namespace fmwb {

std::string block_rule_name(BlockRule r) {
  switch (r) {
    case BlockRule::Singletons: return "singletons";
    case BlockRule::Pairs: return "pairs";
    case BlockRule::Cosets: return "cosets";
  }
  return "";
}

BlockRule parse_block_rule(const std::string& name) {
  for (auto r : {BlockRule::Singletons, BlockRule::Pairs, BlockRule::Cosets})
    if (block_rule_name(r) == name) return r;
  throw InputError("unknown block rule '" + name + "' (expected singletons, pairs or cosets)");
}

namespace {

std::string block_str(const std::vector<Atom>& block) {
  std::string s = "{";
  for (std::size_t i = 0; i < block.size(); ++i) s += (i ? "," : "") + block[i].str();
  return s + "}";
}

bool fixed_by(const Decomposition& d, const Atom& a) {
  const auto ref = orbit_of(d, a);
  if (ref.family) return d.family->member_size() == 1;
  const auto& o = d.orbits[ref.index];
  return o.finite() && o.size() == 1;
}

std::uint64_t rule_block_size(const SymPartition& p) {
  switch (p.rule) {
    case BlockRule::Singletons: return 1;
    case BlockRule::Pairs: return 2;
    case BlockRule::Cosets: {
      std::uint64_t n = 1;
      for (std::size_t i = 0; i < reduced_basis(Field(p.backend.q), p.basis).size(); ++i) n *= static_cast<std::uint64_t>(p.backend.q);
      return n;
    }
  }
  return 1;
}

}  // namespace

std::string SymPartition::str() const {
  std::string s = backend.str() + " support " + support.str() + " rule " + block_rule_name(rule);
  if (rule == BlockRule::Cosets) {
    s += " of span{";
    for (std::size_t i = 0; i < basis.size(); ++i) s += (i ? "," : "") + Atom::vec(basis[i]).str();
    s += "}";
  }
  if (!exceptional.empty()) {
    s += " exceptional ";
    for (const auto& b : exceptional) s += block_str(b);
  }
  if (!removed.empty()) s += " removed " + block_str(removed);
  return s;
}

void validate_partition(const SymPartition& p) {
  validate_backend(p.backend);
  const auto& b = p.backend;
  if (b.kind == BackendKind::OrdinalSpace && *b.alpha.as_natural() == 0)
    throw InputError("U is finite, so every partition has finitely many blocks; use size classes instead");
  if (p.rule == BlockRule::Pairs && b.kind != BackendKind::PairedAtoms && b.kind != BackendKind::NamedPairs)
    throw InputError("pair blocks need a PairedAtoms or NamedPairs backend");
  if (p.rule == BlockRule::Cosets && b.kind != BackendKind::VectorSpace) throw InputError("coset blocks need a VectorSpace backend");
  const Support s = normalize_support(b, p.support);
  const auto d = orbits(b, s);
  if (p.rule == BlockRule::Cosets) {
    const Field f(b.q);
    std::vector<FVec> span_s;
    for (const auto& a : s.atoms) span_s.push_back(a.as_vec());
    span_s = reduced_basis(f, span_s);
    for (auto v : p.basis) {
      trim(v);
      if (std::any_of(v.begin(), v.end(), [&](int c) { return c < 0 || c >= b.q; })) throw InputError("coset basis vector has bad coordinates");
      if (!in_span(f, span_s, v))
        throw InputError("coset subspace must lie in the span of the support, else the partition is not invariant");
    }
  }
  std::vector<Atom> seen;
  auto take = [&](const Atom& a) {
    if (!in_universe(b, a)) throw InputError("atom " + a.str() + " is not in U");
    if (!fixed_by(d, a)) throw InputError("atom " + a.str() + " is not fixed by the stabilizer of " + s.str());
    seen.push_back(a);
  };
  for (const auto& a : p.removed) take(a);
  for (const auto& block : p.exceptional) {
    if (block.empty()) throw InputError("empty exceptional block");
    for (const auto& a : block) take(a);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw InputError("exceptional blocks and removed atoms must be disjoint");
}

GaugeResult gauge(const SymPartition& p) {
  validate_partition(p);
  GaugeResult r;
  r.gauge = rule_block_size(p);
  std::vector<Atom> taken = p.removed;
  for (const auto& block : p.exceptional) taken.insert(taken.end(), block.begin(), block.end());
  std::sort(taken.begin(), taken.end());
  auto is_taken = [&](const Atom& a) { return std::binary_search(taken.begin(), taken.end(), a); };

  std::vector<std::vector<Atom>> odd;
  for (auto block : p.exceptional) {
    std::sort(block.begin(), block.end());
    if (block.size() != r.gauge) odd.push_back(block);
  }
  std::vector<std::vector<Atom>> truncated;
  for (const auto& e : taken) {
    std::vector<Atom> rest;
    if (p.rule == BlockRule::Pairs) {
      const auto& pa = e.as_pair();
      const Atom partner = Atom::pair(pa.pair, 1 - pa.side);
      if (!is_taken(partner)) rest.push_back(partner);
    } else if (p.rule == BlockRule::Cosets) {
      const Field f(p.backend.q);
      for (const auto& w : span_elements(f, p.basis)) {
        const Atom x = Atom::vec(vec_add(f, e.as_vec(), w));
        if (!is_taken(x)) rest.push_back(x);
      }
      std::sort(rest.begin(), rest.end());
    }
    if (!rest.empty() && std::find(truncated.begin(), truncated.end(), rest) == truncated.end()) truncated.push_back(rest);
  }
  odd.insert(odd.end(), truncated.begin(), truncated.end());
  std::sort(odd.begin(), odd.end());
  r.odd_blocks = odd;

  std::vector<Atom> mass;
  for (const auto& block : odd) mass.insert(mass.end(), block.begin(), block.end());
  std::sort(mass.begin(), mass.end());
  for (std::size_t i = 0; i < mass.size(); i += r.gauge)
    r.standard_blocks.emplace_back(mass.begin() + static_cast<std::ptrdiff_t>(i),
                                   mass.begin() + static_cast<std::ptrdiff_t>(std::min(mass.size(), i + r.gauge)));
  r.leftover = mass.size() % r.gauge;
  return r;
}

namespace {

/// Set partitions of items into blocks of at most cap elements.
void for_each_partition(const std::vector<Atom>& items, std::size_t cap,
                        const std::function<void(const std::vector<std::vector<Atom>>&)>& visit) {
  std::vector<std::vector<Atom>> blocks;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == items.size()) {
      visit(blocks);
      return;
    }
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (blocks[j].size() >= cap) continue;
      blocks[j].push_back(items[i]);
      go(i + 1);
      blocks[j].pop_back();
    }
    blocks.push_back({items[i]});
    go(i + 1);
    blocks.pop_back();
  };
  go(0);
}

std::vector<std::vector<FVec>> subspaces(const BackendSpec& b, const Support& s, std::size_t b_max) {
  const Field f(b.q);
  std::vector<FVec> gens;
  for (const auto& a : s.atoms) gens.push_back(a.as_vec());
  const auto elems = span_elements(f, gens);
  std::set<std::vector<FVec>> found, frontier{{}};
  while (!frontier.empty()) {
    std::set<std::vector<FVec>> next;
    for (const auto& basis : frontier)
      for (const auto& v : elems) {
        if (in_span(f, basis, v)) continue;
        auto bigger = basis;
        bigger.push_back(v);
        bigger = reduced_basis(f, bigger);
        std::size_t size = 1;
        for (std::size_t i = 0; i < bigger.size(); ++i) size *= static_cast<std::size_t>(b.q);
        if (size <= b_max && found.insert(bigger).second) next.insert(bigger);
      }
    frontier = std::move(next);
  }
  return {found.begin(), found.end()};
}

}  // namespace

GaugeTable check_gauge_invariance(const BackendSpec& b, std::size_t s_max, std::size_t b_max) {
  const auto am = is_amorphous(b, s_max);
  if (!am.amorphous) throw InputError(b.str() + " is not amorphous: " + am.reason);
  if (b_max == 0) throw InputError("block size bound must be positive");
  GaugeTable t;
  t.scope = "partitions of U given by a uniform rule (singletons";
  if (b.kind == BackendKind::PairedAtoms) t.scope += ", pairs";
  if (b.kind == BackendKind::VectorSpace) t.scope += ", cosets of subspaces of the span of the support";
  t.scope += ") with exceptional blocks of atoms fixed by the support; support size <= " + std::to_string(s_max) +
             ", block size <= " + std::to_string(b_max);

  const auto cat = support_catalog(b, s_max, b.kind == BackendKind::OrdinalSpace ? 1 : 0);
  for (const auto& s : cat.supports) {
    ++t.supports;
    const auto fixed = dcl(b, s);
    if (fixed.infinite || fixed.atoms.size() > 10)
      throw BoundExceeded("support " + s.str() + " fixes too many atoms to enumerate partitions");
    std::vector<SymPartition> schemes;
    schemes.push_back({b, s, BlockRule::Singletons, {}, {}, {}});
    if (b.kind == BackendKind::PairedAtoms && b_max >= 2) schemes.push_back({b, s, BlockRule::Pairs, {}, {}, {}});
    if (b.kind == BackendKind::VectorSpace)
      for (const auto& w : subspaces(b, s, b_max)) schemes.push_back({b, s, BlockRule::Cosets, w, {}, {}});

    const auto& f = fixed.atoms;
    for (const auto& scheme : schemes)
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << f.size()); ++mask) {
        std::vector<Atom> items;
        for (std::size_t i = 0; i < f.size(); ++i)
          if (mask >> i & 1) items.push_back(f[i]);
        for_each_partition(items, b_max, [&](const std::vector<std::vector<Atom>>& blocks) {
          SymPartition p = scheme;
          p.exceptional = blocks;
          const auto g = gauge(p);
          ++t.partitions;
          auto& seen = t.leftovers[g.gauge];
          seen.insert(g.leftover);
          if (seen.size() > 1 && t.single_valued) {
            t.single_valued = false;
            t.conflict = p;
          }
        });
      }
  }
  return t;
}

}  // namespace fmwb
