#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fmwb/errors.hpp"
#include "fmwb/finstruct.hpp"

namespace fmwb {

enum class AgeMode { Forbidden, Explicit };

/// A class of finite structures, either as the structures omitting a finite
/// forbidden list, or as an explicit list of members up to a size bound.
struct AgeSpec {
  std::string name;
  Signature sig;
  AgeMode mode = AgeMode::Forbidden;
  std::vector<FinStructure> structures;
  int k_max = 0;  // explicit mode only
};

/// Shipped classes: finite_sets, linear_orders, graphs, posets,
/// posets_linext, bipartite, maxdeg2, triangle_free. Forbidden lists are
/// generated as the minimal structures violating the defining axioms.
AgeSpec builtin_age(const std::string& name);
std::vector<std::string> builtin_age_names();

/// Throws InputError for duplicate (isomorphic) forbidden members or
/// signature mismatches.
void check_age_spec(const AgeSpec& spec);

bool in_age(const AgeSpec& spec, const FinStructure& a);

/// Members of exactly the given size, one canonical form per isomorphism type,
/// in canonical order.
std::vector<FinStructure> age_members(const AgeSpec& spec, int size);

struct HpWitness {
  FinStructure member;
  FinStructure missing;  // induced substructure outside the class
};

struct JepWitness {
  FinStructure c, d;
};

struct ApWitness {
  FinStructure b, c, d;
  Embedding p1, p2;
};

struct AmalgamationReport {
  int bound = 0;
  bool hp = true, jep = true, ap = true;
  std::optional<HpWitness> hp_witness;
  std::optional<JepWitness> jep_witness;
  std::optional<ApWitness> ap_witness;
  std::string countable = "not checked";
  std::size_t hp_checked = 0, jep_checked = 0, ap_checked = 0;
  std::vector<std::size_t> members_by_size;
};

/// HP, JEP and AP on all members up to size n. AP instances are taken up to
/// isomorphism over B; instances with a non-maximal C or D are covered by a
/// larger one (an amalgam restricts to smaller C, D), and (C, D), (D, C) are
/// checked once.
AmalgamationReport check_age_properties(const AgeSpec& spec, int n);

struct Amalgam {
  FinStructure e;
  Embedding p3, p4;
};

/// An amalgam of size <= |C|+|D|-|B| in the class, trying the disjoint
/// amalgam before identifications. Throws InputError when p1, p2 are not
/// embeddings.
std::optional<Amalgam> amalgamate(const AgeSpec& spec, const FinStructure& b, const FinStructure& c,
                                  const FinStructure& d, const Embedding& p1, const Embedding& p2);

/// small sits at positions 0..|small|-1 of big; the new element is last.
struct ExtensionTask {
  FinStructure small;
  FinStructure big;
};

std::vector<ExtensionTask> extension_tasks(const AgeSpec& spec, int e_bound);

struct TaskStatus {
  ExtensionTask task;
  std::size_t embeddings = 0;
  std::size_t unmet = 0;
};

struct GenericResult {
  FinStructure structure;
  bool stalled = false;
  std::vector<TaskStatus> tasks;
  std::uint64_t hash = 0;
};

/// Deterministic finite approximation of the Fraisse limit: repeatedly
/// realizes the first unmet one-point extension task, choosing the new
/// element's remaining relations among seeded completions so as to leave the
/// fewest unmet tasks.
GenericResult build_generic(const AgeSpec& spec, int n, int e_bound);

std::uint64_t structure_hash(const FinStructure& a);

struct HomogeneityResult {
  bool homogeneous = true;
  std::vector<int> from, to;  // non-extendable partial isomorphism when not
};

HomogeneityResult check_homogeneity(const FinStructure& a, int m);

}  // namespace fmwb
