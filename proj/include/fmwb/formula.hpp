#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fmwb/finstruct.hpp"

namespace fmwb {

enum class FKind { True, False, Rel, Eq, Not, And, Or, Exists, Forall };

struct FormulaNode;
/// First-order formulas are hash-consed: structurally equal formulas share
/// one node, so pointer equality is formula equality and large sentences
/// stay DAG-sized.
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FKind kind = FKind::True;
  std::string rel;        // Rel
  std::vector<int> args;  // Rel, Eq: variables
  int var = -1;           // quantifiers
  std::vector<Formula> kids;
  std::uint64_t id = 0;   // creation order
};

Formula f_true();
Formula f_false();
Formula f_rel(const std::string& rel, std::vector<int> args);
Formula f_eq(int x, int y);
Formula f_not(const Formula& f);
/// Duplicates are dropped; empty gives true, a single conjunct itself.
Formula f_and(std::vector<Formula> kids);
/// Duplicates are dropped; empty gives false, a single disjunct itself.
Formula f_or(std::vector<Formula> kids);
Formula f_exists(int var, const Formula& f);
Formula f_forall(int var, const Formula& f);

/// x, y, z, w, u, v, then x6, x7, ...
std::string var_name(int v);

int qrank(const Formula& f);
std::vector<int> free_vars(const Formula& f);
/// Distinct nodes, and the size of the fully expanded tree (saturating).
std::size_t dag_size(const Formula& f);
std::uint64_t tree_size(const Formula& f);

/// Prefix text: (E x phi), (A x phi), (rel R x y), (= x y), (not phi),
/// (and ...), (or ...), true, false.
std::string formula_str(const Formula& f);
/// Inverse of formula_str; other identifiers become fresh variables.
/// Throws InputError.
Formula parse_formula(const std::string& text);

/// Evaluation under an assignment of variables (indexed by variable) to
/// elements; throws InputError for unknown relations, wrong arities or
/// unassigned variables.
bool evaluate(const FinStructure& a, const Formula& f, const std::vector<int>& assignment);
/// Sentences only; throws InputError when f has free variables.
bool model_check(const FinStructure& a, const Formula& f);

}  // namespace fmwb
