#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fmwb/ordinal.hpp"

namespace fmwb {

/// Lower interval end. An empty value sits below 0, so (bottom, h] == [0, h].
using LowerBound = std::optional<Ordinal>;

/// The compact ordinal space w^alpha * k + 1, i.e. the points [0, w^alpha*k].
/// For alpha == 0 the space is the discrete set {1, ..., k}, so that it has
/// exactly k isolated points and Cantor-Bendixson rank/degree (0, k).
struct SpaceSpec {
  Ordinal alpha;
  std::uint64_t k = 1;

  Ordinal top() const;
  LowerBound bottom() const;
  bool contains(const Ordinal& gamma) const;
  std::string str() const;

  friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

/// Half-open interval (low, high] of a space.
struct Interval {
  LowerBound low;
  Ordinal high;

  bool contains(const Ordinal& gamma) const;
  friend bool operator==(const Interval&, const Interval&) = default;
};

bool bound_less(const LowerBound& a, const LowerBound& b);

/// A clopen subset of a SpaceSpec: a finite, sorted, disjoint union of
/// intervals, with adjacent intervals merged.
class ClopenSet {
 public:
  ClopenSet() = default;
  ClopenSet(SpaceSpec space, std::vector<Interval> intervals);

  static ClopenSet empty(const SpaceSpec& space);
  static ClopenSet whole(const SpaceSpec& space);
  /// (low, high] clipped to the space.
  static ClopenSet interval(const SpaceSpec& space, LowerBound low, const Ordinal& high);

  const SpaceSpec& space() const { return space_; }
  const std::vector<Interval>& intervals() const { return intervals_; }

  bool is_empty() const { return intervals_.empty(); }
  bool contains(const Ordinal& gamma) const;
  std::string str() const;

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;
  friend bool operator<(const ClopenSet& a, const ClopenSet& b);

 private:
  SpaceSpec space_;
  std::vector<Interval> intervals_;
};

enum class BoolOp { Union, Intersection, Difference, Complement };

ClopenSet clopen_union(const ClopenSet& c, const ClopenSet& d);
ClopenSet clopen_intersection(const ClopenSet& c, const ClopenSet& d);
ClopenSet clopen_complement(const ClopenSet& c);
ClopenSet clopen_difference(const ClopenSet& c, const ClopenSet& d);
/// Complement ignores d.
ClopenSet clopen_boolean(BoolOp op, const ClopenSet& c, const ClopenSet& d);
bool clopen_subset(const ClopenSet& c, const ClopenSet& d);

/// Number of points of C whose CB-rank is >= e; empty when infinite.
std::optional<std::uint64_t> count_rank_at_least(const ClopenSet& c, const Ordinal& e);
std::optional<std::uint64_t> count_rank_at_least(const Interval& iv, const Ordinal& e);

/// Largest CB-rank of a point of C; empty for the empty set.
std::optional<Ordinal> max_point_rank(const ClopenSet& c);

/// Membership of C in the ideal I_beta of the clopen algebra: every point of
/// C has CB-rank <= beta (equivalently, C has only finitely many points of
/// rank >= beta).
bool ideal_member(const ClopenSet& c, const Ordinal& beta);

struct CbRankDegree {
  bool minus_one = false;  // the empty set
  Ordinal rank;
  std::uint64_t degree = 0;
  friend bool operator==(const CbRankDegree&, const CbRankDegree&) = default;
};

CbRankDegree cb_rank_degree(const ClopenSet& c);

/// One level of the ideal chain I_0 <= I_1 <= ... of the clopen algebra.
struct IdealLevel {
  Ordinal beta;
  bool whole_space_member = false;  // whole space in I_beta
  std::optional<std::uint64_t> quotient_atoms;  // atoms of B / I_{beta-1} (empty = infinite)
};

struct SpaceRankReport {
  Ordinal rank;
  std::uint64_t degree = 0;
  std::vector<IdealLevel> chain;
  bool symbolic = false;  // chain for infinite alpha given by its finite levels plus the top
};

/// Rank and degree of the clopen algebra of the space, by walking the ideal
/// chain: the atoms of B/I_{beta-1} are the rank-beta points, and the chain
/// stabilises one step past the rank.
SpaceRankReport space_rank_degree(const SpaceSpec& space);

}  // namespace fmwb
