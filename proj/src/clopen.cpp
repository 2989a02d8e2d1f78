#include "fmwb/clopen.hpp"

#include <algorithm>

namespace fmwb {

Ordinal SpaceSpec::top() const {
  return ord_mul(Ordinal::omega_power(alpha), Ordinal::natural(k));
}

LowerBound SpaceSpec::bottom() const {
  if (alpha.is_zero()) return Ordinal{};
  return std::nullopt;
}

bool SpaceSpec::contains(const Ordinal& gamma) const {
  if (gamma > top()) return false;
  if (auto b = bottom(); b && !(*b < gamma)) return false;
  return true;
}

std::string SpaceSpec::str() const { return "(" + alpha.str() + ", " + std::to_string(k) + ")"; }

bool bound_less(const LowerBound& a, const LowerBound& b) {
  if (!b) return false;
  if (!a) return true;
  return *a < *b;
}

namespace {

bool below_point(const LowerBound& low, const Ordinal& gamma) { return !low || *low < gamma; }

LowerBound bound_max(const LowerBound& a, const LowerBound& b) { return bound_less(a, b) ? b : a; }

// Ordinal as a lower bound: (h, ...] starts above h.
LowerBound as_bound(const Ordinal& h) { return h; }

std::vector<Interval> normalize(const SpaceSpec& space, std::vector<Interval> ivs) {
  const Ordinal top = space.top();
  const LowerBound bottom = space.bottom();
  std::vector<Interval> clipped;
  for (auto& iv : ivs) {
    iv.low = bound_max(iv.low, bottom);
    if (iv.high > top) iv.high = top;
    if (below_point(iv.low, iv.high)) clipped.push_back(iv);
  }
  std::sort(clipped.begin(), clipped.end(), [](const Interval& a, const Interval& b) {
    return bound_less(a.low, b.low) || (!bound_less(b.low, a.low) && a.high < b.high);
  });
  std::vector<Interval> out;
  for (auto& iv : clipped) {
    // Adjacent (a,b] (b,c] and overlapping intervals merge.
    if (!out.empty() && !bound_less(as_bound(out.back().high), iv.low)) {
      if (out.back().high < iv.high) out.back().high = iv.high;
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

}  // namespace

bool Interval::contains(const Ordinal& gamma) const { return below_point(low, gamma) && gamma <= high; }

ClopenSet::ClopenSet(SpaceSpec space, std::vector<Interval> intervals)
    : space_(std::move(space)), intervals_(normalize(space_, std::move(intervals))) {}

ClopenSet ClopenSet::empty(const SpaceSpec& space) { return ClopenSet(space, {}); }

ClopenSet ClopenSet::whole(const SpaceSpec& space) {
  return ClopenSet(space, {Interval{space.bottom(), space.top()}});
}

ClopenSet ClopenSet::interval(const SpaceSpec& space, LowerBound low, const Ordinal& high) {
  return ClopenSet(space, {Interval{std::move(low), high}});
}

bool ClopenSet::contains(const Ordinal& gamma) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [&](const Interval& iv) { return iv.contains(gamma); });
}

std::string ClopenSet::str() const {
  if (intervals_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i > 0) out += " u ";
    const auto& iv = intervals_[i];
    out += iv.low ? "(" + iv.low->str() : "[0";
    out += ", " + iv.high.str() + "]";
  }
  return out;
}

bool operator<(const ClopenSet& a, const ClopenSet& b) {
  const auto& x = a.intervals_;
  const auto& y = b.intervals_;
  return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(),
                                      [](const Interval& p, const Interval& q) {
                                        if (bound_less(p.low, q.low)) return true;
                                        if (bound_less(q.low, p.low)) return false;
                                        return p.high < q.high;
                                      });
}

namespace {

void require_same_space(const ClopenSet& c, const ClopenSet& d) {
  if (!(c.space() == d.space()))
    throw std::invalid_argument("clopen sets live in different spaces " + c.space().str() +
                                " and " + d.space().str());
}

}  // namespace

ClopenSet clopen_union(const ClopenSet& c, const ClopenSet& d) {
  require_same_space(c, d);
  std::vector<Interval> all = c.intervals();
  all.insert(all.end(), d.intervals().begin(), d.intervals().end());
  return ClopenSet(c.space(), std::move(all));
}

ClopenSet clopen_intersection(const ClopenSet& c, const ClopenSet& d) {
  require_same_space(c, d);
  std::vector<Interval> out;
  for (const auto& p : c.intervals()) {
    for (const auto& q : d.intervals()) {
      LowerBound low = bound_max(p.low, q.low);
      Ordinal high = std::min(p.high, q.high);
      if (below_point(low, high)) out.push_back(Interval{low, high});
    }
  }
  return ClopenSet(c.space(), std::move(out));
}

ClopenSet clopen_complement(const ClopenSet& c) {
  const SpaceSpec& s = c.space();
  std::vector<Interval> gaps;
  LowerBound cursor = s.bottom();
  for (const auto& iv : c.intervals()) {
    if (iv.low && below_point(cursor, *iv.low)) gaps.push_back(Interval{cursor, *iv.low});
    cursor = iv.high;
  }
  if (below_point(cursor, s.top())) gaps.push_back(Interval{cursor, s.top()});
  return ClopenSet(s, std::move(gaps));
}

ClopenSet clopen_difference(const ClopenSet& c, const ClopenSet& d) {
  return clopen_intersection(c, clopen_complement(d));
}

ClopenSet clopen_boolean(BoolOp op, const ClopenSet& c, const ClopenSet& d) {
  switch (op) {
    case BoolOp::Union: return clopen_union(c, d);
    case BoolOp::Intersection: return clopen_intersection(c, d);
    case BoolOp::Difference: return clopen_difference(c, d);
    case BoolOp::Complement: return clopen_complement(c);
  }
  return c;
}

bool clopen_subset(const ClopenSet& c, const ClopenSet& d) { return clopen_difference(c, d).is_empty(); }

std::optional<std::uint64_t> count_rank_at_least(const Interval& iv, const Ordinal& e) {
  if (e.is_zero()) {
    // Every point counts; (l, h] has h - l points, [0, h] one more.
    const Ordinal span = iv.low ? ord_sub_left(iv.high, *iv.low) : iv.high;
    auto n = span.as_natural();
    if (!n) return std::nullopt;
    return iv.low ? *n : *n + 1;
  }
  // Points of rank >= e are the nonzero multiples of w^e.
  const Ordinal lo = iv.low ? *iv.low : Ordinal{};
  const Ordinal qh = quotient_by_power(iv.high, e);
  const Ordinal ql = quotient_by_power(lo, e);
  if (qh < ql) return 0;
  return ord_sub_left(qh, ql).as_natural();
}

std::optional<std::uint64_t> count_rank_at_least(const ClopenSet& c, const Ordinal& e) {
  std::uint64_t total = 0;
  for (const auto& iv : c.intervals()) {
    auto n = count_rank_at_least(iv, e);
    if (!n) return std::nullopt;
    total += *n;
  }
  return total;
}

namespace {

// The point of largest rank in (l, h] is the shortest prefix of h's normal
// form that exceeds l.
Ordinal interval_max_rank(const Interval& iv) {
  const Ordinal lo = iv.low ? *iv.low : Ordinal{};
  const auto& ht = iv.high.terms();
  std::vector<OrdinalTerm> prefix;
  for (const auto& t : ht) {
    prefix.push_back(t);
    Ordinal p = Ordinal::from_terms(prefix);
    if (p > lo) return t.exponent;
  }
  return Ordinal{};  // only reachable for [0, 0]
}

}  // namespace

std::optional<Ordinal> max_point_rank(const ClopenSet& c) {
  if (c.is_empty()) return std::nullopt;
  Ordinal best;
  for (const auto& iv : c.intervals()) best = std::max(best, interval_max_rank(iv));
  return best;
}

bool ideal_member(const ClopenSet& c, const Ordinal& beta) {
  auto n = count_rank_at_least(c, ord_add(beta, Ordinal::natural(1)));
  return n && *n == 0;
}

CbRankDegree cb_rank_degree(const ClopenSet& c) {
  auto r = max_point_rank(c);
  if (!r) return CbRankDegree{true, Ordinal{}, 0};
  auto d = count_rank_at_least(c, *r);
  if (!d) throw OrdinalError("clopen set has infinitely many maximal-rank points");
  return CbRankDegree{false, *r, *d};
}

SpaceRankReport space_rank_degree(const SpaceSpec& space) {
  const ClopenSet whole = ClopenSet::whole(space);
  SpaceRankReport report;
  auto level = [&](const Ordinal& beta) {
    IdealLevel lv;
    lv.beta = beta;
    lv.whole_space_member = ideal_member(whole, beta);
    // Atoms of B / I_{beta-1}: points of rank exactly beta.
    auto ge = count_rank_at_least(whole, beta);
    auto gt = count_rank_at_least(whole, ord_add(beta, Ordinal::natural(1)));
    if (ge && gt) lv.quotient_atoms = *ge - *gt;
    return lv;
  };

  if (auto a = space.alpha.as_natural()) {
    for (std::uint64_t b = 0;; ++b) {
      IdealLevel lv = level(Ordinal::natural(b));
      report.chain.push_back(lv);
      if (lv.whole_space_member) {
        report.rank = lv.beta;
        if (!lv.quotient_atoms) throw OrdinalError("ideal chain stabilised with an infinite quotient");
        report.degree = *lv.quotient_atoms;
        // The chain is constant from here on: I_beta == I_{beta+1}.
        report.chain.push_back(level(Ordinal::natural(b + 1)));
        break;
      }
      if (b > *a) throw OrdinalError("ideal chain failed to stabilise");
    }
    return report;
  }

  // Infinite alpha: the finite levels are listed, the top level is symbolic.
  report.symbolic = true;
  for (std::uint64_t b = 0; b < 4; ++b) report.chain.push_back(level(Ordinal::natural(b)));
  IdealLevel top = level(space.alpha);
  report.chain.push_back(top);
  if (!top.whole_space_member || !top.quotient_atoms)
    throw OrdinalError("ideal chain failed to stabilise at alpha");
  report.rank = space.alpha;
  report.degree = *top.quotient_atoms;
  return report;
}

}  // namespace fmwb
