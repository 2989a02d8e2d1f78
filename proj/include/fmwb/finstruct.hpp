#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmwb {

struct RelSymbol {
  std::string name;
  int arity = 1;
  friend bool operator==(const RelSymbol&, const RelSymbol&) = default;
  friend auto operator<=>(const RelSymbol&, const RelSymbol&) = default;
};

/// Finite relational signature. Relation indices follow declaration order.
struct Signature {
  std::vector<RelSymbol> relations;

  std::size_t size() const { return relations.size(); }
  /// Index of a relation symbol, or -1.
  int index_of(const std::string& name) const;
  std::string str() const;

  friend bool operator==(const Signature&, const Signature&) = default;
  friend auto operator<=>(const Signature&, const Signature&) = default;
};

using Tuple = std::vector<int>;

class StructureError : public std::runtime_error {
 public:
  explicit StructureError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// A finite structure. Elements are indices 0..n-1 carrying opaque string ids;
/// tuples are stored over indices. Lookups go through a dense table per
/// relation, kept in sync by the mutators.
class FinStructure {
 public:
  FinStructure() = default;
  explicit FinStructure(Signature sig) : sig_(std::move(sig)), tuples_(sig_.size()), dense_(sig_.size()) {}
  /// Elements named "0".."n-1".
  FinStructure(Signature sig, int n);

  const Signature& signature() const { return sig_; }
  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(int i) const { return ids_[static_cast<std::size_t>(i)]; }
  std::optional<int> index_of(const std::string& id) const;

  int add_element(const std::string& id);
  int add_element();
  void add_tuple(int rel, const Tuple& t);
  void add_tuple(const std::string& rel, const Tuple& t);
  /// Convenience for symmetric binary relations: adds (a,b) and (b,a).
  void add_edge(int rel, int a, int b);

  bool holds(int rel, const Tuple& t) const;
  bool holds(int rel, int a) const { return holds(rel, Tuple{a}); }
  bool holds(int rel, int a, int b) const;
  const std::set<Tuple>& tuples(int rel) const { return tuples_[static_cast<std::size_t>(rel)]; }

  /// Substructure induced on the given elements, in the given order.
  FinStructure induced(const std::vector<int>& elems) const;

  /// Equality of signatures, ids and tuples (not isomorphism).
  friend bool operator==(const FinStructure& a, const FinStructure& b);

 private:
  Signature sig_;
  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
  std::vector<std::set<Tuple>> tuples_;
  std::vector<std::vector<std::uint8_t>> dense_;

  std::size_t dense_index(const Tuple& t) const;
  void rebuild_dense();
};

/// Unchecked description as it arrives from the exchange format.
struct RawStructure {
  std::vector<std::pair<std::string, long long>> signature;
  std::vector<std::string> domain;
  std::vector<std::pair<std::string, std::vector<std::vector<std::string>>>> relations;
};

/// Checks every invariant and throws StructureError listing all violations.
FinStructure validate(const RawStructure& raw);

struct Embedding {
  std::vector<int> map;  // source element -> target element
  friend bool operator==(const Embedding&, const Embedding&) = default;
  friend auto operator<=>(const Embedding&, const Embedding&) = default;
};

void require_same_signature(const FinStructure& a, const FinStructure& b);

/// Checks injectivity and that relations are preserved and reflected.
bool is_embedding(const FinStructure& a, const FinStructure& b, const Embedding& e);

/// All embeddings of a into b in lexicographic order of the image vector,
/// truncated at limit (0 means no limit).
std::vector<Embedding> find_embeddings(const FinStructure& a, const FinStructure& b, std::size_t limit = 0);

/// Embeddings of a into b that extend a fixed partial map given for the first
/// prefix.size() elements of a.
std::vector<Embedding> find_embeddings_extending(const FinStructure& a, const FinStructure& b,
                                                 const std::vector<int>& prefix, std::size_t limit = 0);

bool embeds(const FinStructure& a, const FinStructure& b);

/// Per-element relation degrees: for each relation and argument position the
/// number of tuples holding the element there.
std::vector<std::vector<int>> degree_profile(const FinStructure& a);

struct IsoResult {
  bool isomorphic = false;
  std::optional<Embedding> witness;
  std::string invariant;  // why not, when an invariant separates them
};

IsoResult are_isomorphic(const FinStructure& a, const FinStructure& b);

/// Result of canonical labelling: order[i] is the original element placed at
/// position i of the canonical form.
struct CanonicalLabeling {
  std::vector<int> order;
  FinStructure form;
};

/// Isomorphism-invariant relabelling to ids 0..n-1. With a prefix, those
/// elements are pinned (in that order) to positions 0..|prefix|-1, which gives
/// a canonical form for structures with distinguished tuples.
CanonicalLabeling canonical_labeling(const FinStructure& a, const std::vector<int>& prefix = {});
FinStructure canonical_form(const FinStructure& a);

/// Compact, order-preserving key of a structure: size then tuples per relation.
std::string structure_key(const FinStructure& a);

/// One canonical representative per isomorphism type of induced substructure
/// of size <= k, ordered by size and then by key.
std::vector<FinStructure> induced_substructures(const FinStructure& a, int k);

std::vector<Embedding> automorphisms(const FinStructure& a, std::size_t limit = 0);

/// An automorphism g of a with g(from[i]) == to[i], if one exists.
std::optional<Embedding> find_automorphism_extending(const FinStructure& a, const std::vector<int>& from,
                                                     const std::vector<int>& to);

/// Canonical order on structures of one signature: size, then tuple lists.
bool structure_less(const FinStructure& x, const FinStructure& y);

std::string to_dot(const FinStructure& a, const std::string& name = "S");

// Common shapes used across modules and tests.
Signature graph_signature();
FinStructure make_graph(int n, const std::vector<std::pair<int, int>>& edges);
FinStructure make_path(int n);
FinStructure make_cycle(int n);
FinStructure make_complete(int n);
Signature order_signature();
FinStructure make_linear_order(int n);
/// All graphs on n vertices up to isomorphism, in canonical order.
std::vector<FinStructure> all_graphs(int n);

}  // namespace fmwb
