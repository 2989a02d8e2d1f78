#include <algorithm>

#include "fmwb/fmsets.hpp"

namespace fmwb {

std::string RankDegree::str() const {
  switch (kind) {
    case Kind::MinusOne: return "-1";
    case Kind::NoRank: return "NoRank";
    case Kind::Ordinal: return "(" + rank.str() + ", " + std::to_string(degree) + ")";
  }
  return "";
}

bool rank_less(const RankDegree& a, const RankDegree& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  if (a.kind != RankDegree::Kind::Ordinal) return false;
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.degree < b.degree;
}

namespace {

RankDegree rank_max(const RankDegree& a, const RankDegree& b) {
  if (a.kind == RankDegree::Kind::Ordinal && b.kind == RankDegree::Kind::Ordinal && a.rank == b.rank)
    return RankDegree::of(a.rank, a.degree + b.degree);
  return rank_less(a, b) ? b : a;
}

}  // namespace

RankDegree mt_rank(const SymSet& a) {
  const auto sc = size_class(a);
  if (sc.kind == SizeClass::Kind::Finite)
    return sc.n == 0 ? RankDegree::minus_one() : RankDegree::of(Ordinal::natural(0), sc.n);
  switch (a.backend.kind) {
    case BackendKind::PureSet:
    case BackendKind::PairedAtoms:
    case BackendKind::VectorSpace: return RankDegree::of(Ordinal::natural(1), 1);
    case BackendKind::DenseOrder:
    case BackendKind::NamedPairs:
    case BackendKind::Rigid: return RankDegree::no_rank();
    case BackendKind::OrdinalSpace: break;
  }
  // Points of CB-rank r in a cell whose top rank is m form a set of rank
  // m - r, one piece per top point.
  const auto d = orbits(a.backend, a.support);
  RankDegree best = RankDegree::minus_one();
  for (const auto& o : d.orbits) {
    if (!a.selection.count(o.id)) continue;
    if (o.finite()) {
      best = rank_max(best, RankDegree::of(Ordinal::natural(0), o.size()));
      continue;
    }
    const auto cb = cb_rank_degree(o.cell);
    const std::uint64_t m = *cb.rank.as_natural(), r = *o.rank.as_natural();
    best = rank_max(best, RankDegree::of(Ordinal::natural(m - r), cb.degree));
  }
  return best;
}

namespace {

/// Number of infinite pieces A falls into over the support t.
std::uint64_t infinite_pieces(const SymSet& a, const Support& t, std::vector<int>* ids = nullptr) {
  const SymSet ra = reexpress(a, t);
  if (!ra.tail.is_finite()) return kUnbounded;
  const auto d = orbits(a.backend, ra.support);
  std::uint64_t n = 0;
  for (const auto& o : d.orbits)
    if (!o.finite() && ra.selection.count(o.id)) {
      ++n;
      if (ids) ids->push_back(o.id);
    }
  return n;
}

struct Splits {
  std::vector<std::uint64_t> counts;
  Support best;
};

Splits split_counts(const SymSet& a, std::size_t s_max) {
  // Extra atoms never split an OrdinalSpace rank class, so only clopens are
  // searched there; elsewhere only atoms are available.
  const bool ordinal = a.backend.kind == BackendKind::OrdinalSpace;
  const auto cat = support_catalog(a.backend, ordinal ? 0 : s_max, ordinal ? s_max : 0, a.support);
  const std::size_t base = normalize_support(a.backend, a.support).size();
  Splits s;
  s.counts.assign(s_max + 1, 0);
  std::uint64_t top = 0;
  for (const auto& t : cat.supports) {
    const std::size_t extra = t.size() - std::min(t.size(), base);
    if (extra > s_max) continue;
    const auto n = infinite_pieces(a, t);
    s.counts[extra] = std::max(s.counts[extra], n);
    if (n > top || s.best.size() == 0) {
      if (n > top) top = n;
      s.best = t;
    }
  }
  for (std::size_t i = 1; i <= s_max; ++i) s.counts[i] = std::max(s.counts[i], s.counts[i - 1]);
  return s;
}

}  // namespace

RankBounds mt_rank_oracle(const SymSet& a, std::size_t s_max, int depth) {
  RankBounds r;
  const auto sc = size_class(a);
  if (sc.kind == SizeClass::Kind::Finite) {
    r.lower = sc.n == 0 ? RankDegree::minus_one() : RankDegree::of(Ordinal::natural(0), sc.n);
    r.upper = r.lower;
    r.note = sc.n == 0 ? "empty" : "finite: every split has finite pieces";
    return r;
  }
  r.lower = RankDegree::of(Ordinal::natural(1), 1);
  r.note = "infinite";
  if (depth <= 0) return r;

  const auto splits = split_counts(a, s_max);
  r.splits = splits.counts;
  const std::uint64_t most = splits.counts.back();
  if (most == kUnbounded) {
    r.unbounded = true;
    r.lower = RankDegree::of(Ordinal::natural(2), 1);
    r.note = "splits into any number of infinite pieces over " + splits.best.str();
    return r;
  }
  r.lower = RankDegree::of(Ordinal::natural(1), most);
  if (s_max >= 1 && splits.counts[s_max] == splits.counts[s_max - 1]) {
    r.upper = r.lower;
    r.note = "at most " + std::to_string(most) + " infinite pieces, stable within the search";
    return r;
  }
  r.note = "split count still growing";
  if (depth < 2) return r;

  // Classify the pieces of the best split: a piece splitting exactly like A
  // is self-similar; two of those mean no rank.
  std::vector<int> ids;
  infinite_pieces(a, splits.best, &ids);
  const SymSet over = reexpress(a, splits.best);
  std::size_t similar = 0, high = 0;
  for (int id : ids) {
    const SymSet piece = make_symset(a.backend, over.support, {id});
    const auto sub = mt_rank_oracle(piece, s_max, depth - 1);
    if (sub.splits == r.splits) ++similar;
    if (!sub.upper) ++high;
  }
  if (similar >= 2) {
    r.evidence = RankDegree::no_rank();
    r.note = std::to_string(similar) + " pieces split like the whole set (self-similar)";
  } else if (high > 0) {
    r.evidence = RankDegree::of(Ordinal::natural(2), high);
    r.note = std::to_string(high) + " of " + std::to_string(ids.size()) + " pieces keep splitting";
  }
  return r;
}

bool rank_consistent(const RankDegree& exact, const RankBounds& b) {
  if (rank_less(exact, b.lower)) return false;
  if (b.upper && rank_less(*b.upper, exact)) return false;
  if (b.evidence && rank_less(exact, *b.evidence)) return false;
  return true;
}

}  // namespace fmwb
