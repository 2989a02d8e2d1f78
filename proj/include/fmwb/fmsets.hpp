#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmwb/atoms.hpp"

namespace fmwb {

/// An eventually periodic subset of the naturals: head bits, then the
/// period repeated forever. Always kept in its shortest form.
class IndexSet {
 public:
  IndexSet();  // empty
  IndexSet(std::vector<bool> head, std::vector<bool> period);

  static IndexSet finite(const std::vector<std::uint64_t>& members);
  static IndexSet all();
  /// n with n % modulus == residue.
  static IndexSet residue(std::uint64_t modulus, std::uint64_t residue);

  bool contains(std::uint64_t n) const;
  bool is_finite() const;
  bool is_cofinite() const;
  /// Members (finite) or non-members (cofinite).
  std::vector<std::uint64_t> listed() const;

  const std::vector<bool>& head() const { return head_; }
  const std::vector<bool>& period() const { return period_; }
  std::string str() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  void normalize();
  std::vector<bool> head_, period_;
};

IndexSet index_boolean(BoolOp op, const IndexSet& a, const IndexSet& b);
IndexSet index_without(const IndexSet& a, const std::vector<std::uint64_t>& removed);

/// A subset of U supported by `support`: the union of the selected orbits of
/// orbits(backend, support), plus the family members whose index is in tail.
struct SymSet {
  BackendSpec backend;
  Support support;
  std::set<int> selection;
  IndexSet tail;

  std::string str() const;
  friend bool operator==(const SymSet&, const SymSet&) = default;
};

SymSet sym_empty(const BackendSpec& b);
SymSet sym_universe(const BackendSpec& b);
/// Validates ids and clears tail bits of indices the support touches.
SymSet make_symset(const BackendSpec& b, const Support& s, std::set<int> selection, IndexSet tail = {});
/// The finite set of the given atoms.
SymSet sym_atoms(const BackendSpec& b, const std::vector<Atom>& atoms);

bool sym_contains(const SymSet& a, const Atom& x);
bool sym_contains(const SymSet& a, const Decomposition& d, const Atom& x);

/// Re-expresses A over a support under which it is symmetric (a superset of
/// its support, or one that minimize accepted).
SymSet reexpress(const SymSet& a, const Support& s);

/// Complement ignores b.
SymSet combine(BoolOp op, const SymSet& a, const SymSet& b);
SymSet complement(const SymSet& a);

/// Whether A is a union of orbits of orbits(backend, s).
bool supports(const SymSet& a, const Support& s);
/// Greedy removal in canonical order, atoms first, then clopens.
Support minimize(const SymSet& a);
/// A re-expressed over its minimized support.
SymSet canonical(const SymSet& a);

struct SizeClass {
  enum class Kind { Finite, Cofinite, InfiniteCoinfinite } kind = Kind::Finite;
  std::uint64_t n = 0;
  std::string str() const;
  friend bool operator==(const SizeClass&, const SizeClass&) = default;
};

SizeClass size_class(const SymSet& a);

struct AmorphousResult {
  bool amorphous = false;
  std::optional<SymSet> witness;  // infinite and coinfinite when not amorphous
  std::string reason;
  std::size_t supports_checked = 0;
};

AmorphousResult is_amorphous(const BackendSpec& b, std::size_t s_max);

enum class DedekindClass { WeaklyDF, DFnotWeakly, NotDF };
std::string dedekind_class_name(DedekindClass c);

struct DedekindResult {
  DedekindClass cls = DedekindClass::WeaklyDF;
  Support evidence;
  std::string detail;
  std::size_t supports_checked = 0;
};

DedekindResult dedekind_class(const BackendSpec& b, std::size_t s_max);

// Partitions.

enum class BlockRule { Singletons, Pairs, Cosets };
std::string block_rule_name(BlockRule r);
BlockRule parse_block_rule(const std::string& name);

/// All blocks given by the rule (pairs of PairedAtoms or NamedPairs, cosets
/// v + W of VectorSpace, singletons), except that the removed atoms and the
/// atoms of the exceptional blocks are taken out, and the exceptional blocks
/// are added. Rule blocks losing some atoms survive truncated.
struct SymPartition {
  BackendSpec backend;
  Support support;
  BlockRule rule = BlockRule::Singletons;
  std::vector<FVec> basis;  // Cosets: spanning set of W
  std::vector<std::vector<Atom>> exceptional;
  std::vector<Atom> removed;

  std::string str() const;
};

/// Throws InputError when the scheme is malformed or not invariant under
/// G_(support), and when the partition has finitely many blocks.
void validate_partition(const SymPartition& p);

struct GaugeResult {
  std::uint64_t gauge = 1;
  std::uint64_t leftover = 0;
  /// Blocks of size != gauge (including truncated rule blocks).
  std::vector<std::vector<Atom>> odd_blocks;
  /// Their atoms re-partitioned greedily into gauge-sized blocks plus one
  /// smaller block of leftover atoms.
  std::vector<std::vector<Atom>> standard_blocks;
};

GaugeResult gauge(const SymPartition& p);

struct GaugeTable {
  std::map<std::uint64_t, std::set<std::uint64_t>> leftovers;  // gauge -> leftovers seen
  bool single_valued = true;
  std::size_t partitions = 0;
  std::size_t supports = 0;
  std::optional<SymPartition> conflict;
  std::string scope;
};

/// Throws InputError when the backend is not amorphous at s_max.
GaugeTable check_gauge_invariance(const BackendSpec& b, std::size_t s_max, std::size_t b_max);

// Morley-Tarski rank.

struct RankDegree {
  enum class Kind { MinusOne, Ordinal, NoRank } kind = Kind::MinusOne;
  Ordinal rank;
  std::uint64_t degree = 0;

  static RankDegree minus_one() { return {}; }
  static RankDegree no_rank() { return {Kind::NoRank, {}, 0}; }
  static RankDegree of(Ordinal rank, std::uint64_t degree) { return {Kind::Ordinal, std::move(rank), degree}; }

  std::string str() const;
  friend bool operator==(const RankDegree&, const RankDegree&) = default;
};

/// MinusOne < (rank, degree) lexicographically < NoRank.
bool rank_less(const RankDegree& a, const RankDegree& b);

RankDegree mt_rank(const SymSet& a);

struct RankBounds {
  RankDegree lower;                     // certified
  std::optional<RankDegree> upper;      // exact within the searched supports
  std::optional<RankDegree> evidence;   // search suggests at least this (NoRank: no rank)
  std::vector<std::uint64_t> splits;    // best split into infinite pieces per extra budget
  bool unbounded = false;               // splits into arbitrarily many infinite pieces
  std::string note;
};

inline constexpr std::uint64_t kUnbounded = ~std::uint64_t{0};

/// Searches splittings of A by supports extending its own by up to s_max
/// catalog elements, recursing into the pieces up to depth.
RankBounds mt_rank_oracle(const SymSet& a, std::size_t s_max, int depth);
bool rank_consistent(const RankDegree& exact, const RankBounds& bounds);

// The finite shadow of the Venn-cell argument.

struct VennChain {
  std::vector<std::uint64_t> signatures;  // nonempty cells: which subsets contain them
  std::vector<std::uint64_t> cells;       // members of X in each cell
  std::vector<int> m_sequence;
  std::vector<std::vector<std::uint64_t>> chain;  // signatures of Y_0, Y_1, ...
  std::vector<int> level;                 // per element of X, onto 0..m_sequence.size()
};

/// X = {0, ..., x_size-1} (at most 64), subsets as bitmasks (at most 64).
/// Throws InputError when subsets repeat or leave X.
VennChain venn_chain(int x_size, const std::vector<std::uint64_t>& subsets);

}  // namespace fmwb
