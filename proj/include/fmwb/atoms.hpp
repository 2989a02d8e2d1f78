#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fmwb/clopen.hpp"
#include "fmwb/errors.hpp"
#include "fmwb/field.hpp"
#include "fmwb/ordinal.hpp"

namespace fmwb {

using Rational = boost::multiprecision::cpp_rational;

/// "p/q" or "p"; throws InputError.
Rational parse_rational(const std::string& text);
std::string rational_str(const Rational& r);

enum class BackendKind { PureSet, DenseOrder, PairedAtoms, NamedPairs, VectorSpace, OrdinalSpace, Rigid };

std::string backend_kind_name(BackendKind k);
BackendKind parse_backend_kind(const std::string& name);

struct BackendSpec {
  BackendKind kind = BackendKind::PureSet;
  int q = 2;                // VectorSpace
  Ordinal alpha;            // OrdinalSpace
  std::uint64_t k = 1;      // OrdinalSpace

  static BackendSpec of(BackendKind kind) {
    BackendSpec b;
    b.kind = kind;
    return b;
  }
  static BackendSpec pure_set() { return of(BackendKind::PureSet); }
  static BackendSpec dense_order() { return of(BackendKind::DenseOrder); }
  static BackendSpec paired_atoms() { return of(BackendKind::PairedAtoms); }
  static BackendSpec named_pairs() { return of(BackendKind::NamedPairs); }
  static BackendSpec rigid() { return of(BackendKind::Rigid); }
  static BackendSpec vector_space(int q);
  static BackendSpec ordinal_space(std::uint64_t alpha, std::uint64_t k);

  SpaceSpec space() const { return {alpha, k}; }
  std::string str() const;
  friend bool operator==(const BackendSpec&, const BackendSpec&) = default;
};

/// Throws InputError for malformed parameters and BoundExceeded for an
/// OrdinalSpace exponent that is infinite or above 8.
void validate_backend(const BackendSpec& b);

struct PairAtom {
  std::uint64_t pair = 0;
  int side = 0;
  friend bool operator==(const PairAtom&, const PairAtom&) = default;
  friend auto operator<=>(const PairAtom&, const PairAtom&) = default;
};

/// A member of the universe U of some backend. The alternative in use is
/// determined by the backend: ids for PureSet and Rigid, rationals for
/// DenseOrder, pair atoms, coordinate vectors, ordinals.
struct Atom {
  std::variant<std::uint64_t, Rational, PairAtom, FVec, Ordinal> value;

  static Atom id(std::uint64_t n) { return {n}; }
  static Atom rational(Rational r) { return {std::move(r)}; }
  static Atom pair(std::uint64_t n, int side) { return {PairAtom{n, side}}; }
  static Atom vec(FVec v);
  static Atom ordinal(Ordinal g) { return {std::move(g)}; }

  std::uint64_t as_id() const { return std::get<std::uint64_t>(value); }
  const Rational& as_rational() const { return std::get<Rational>(value); }
  const PairAtom& as_pair() const { return std::get<PairAtom>(value); }
  const FVec& as_vec() const { return std::get<FVec>(value); }
  const Ordinal& as_ordinal() const { return std::get<Ordinal>(value); }

  std::string str() const;
  friend bool operator==(const Atom& a, const Atom& b) { return a.value == b.value; }
  friend bool operator<(const Atom& a, const Atom& b) { return a.value < b.value; }
};

bool in_universe(const BackendSpec& b, const Atom& a);

struct Support {
  std::vector<Atom> atoms;
  std::vector<ClopenSet> clopens;

  std::size_t size() const { return atoms.size() + clopens.size(); }
  std::string str() const;
  friend bool operator==(const Support&, const Support&) = default;
};

/// Sorted, deduplicated copy; throws InputError for atoms outside U or
/// clopens of the wrong space (or present for a non-ordinal backend).
Support normalize_support(const BackendSpec& b, Support s);
Support support_union(const BackendSpec& b, const Support& x, const Support& y);

enum class OrbitKind {
  Finite,      // atoms lists the members
  CoFinite,    // U minus atoms
  Interval,    // open rational interval (lo, hi), either end may be unbounded
  RankClass,   // points of cell with CB-rank == rank, minus atoms
};

struct Orbit {
  int id = 0;
  OrbitKind kind = OrbitKind::Finite;
  std::vector<Atom> atoms;
  std::optional<Rational> lo, hi;
  ClopenSet cell;
  Ordinal rank;
  Atom representative;

  bool finite() const { return kind == OrbitKind::Finite; }
  std::size_t size() const { return atoms.size(); }  // Finite only
  bool contains(const Atom& a) const;
  std::string str() const;
};

enum class FamilyKind { NamedPairs, RigidSingletons };

/// The orbits {P_n} (or {u_n}) for all indices n outside a finite set.
struct OrbitFamily {
  FamilyKind kind = FamilyKind::NamedPairs;
  std::vector<std::uint64_t> excluded;

  std::size_t member_size() const { return kind == FamilyKind::NamedPairs ? 2 : 1; }
  bool has_index(std::uint64_t n) const;
  std::vector<Atom> member(std::uint64_t n) const;
  std::uint64_t first_index() const;
  std::string str() const;
};

struct Decomposition {
  BackendSpec backend;
  Support support;
  std::vector<Orbit> orbits;
  std::optional<OrbitFamily> family;

  std::size_t finite_orbit_count() const;
  std::size_t infinite_orbit_count() const;
};

/// Exact orbits of U under the pointwise stabilizer of S (which also fixes
/// the support clopens setwise).
Decomposition orbits(const BackendSpec& b, const Support& s);

struct OrbitRef {
  bool family = false;
  std::uint64_t index = 0;  // orbit id, or family index
  friend bool operator==(const OrbitRef&, const OrbitRef&) = default;
  friend auto operator<=>(const OrbitRef&, const OrbitRef&) = default;
};

OrbitRef orbit_of(const Decomposition& d, const Atom& a);
/// A member of the referenced orbit.
Atom orbit_representative(const Decomposition& d, const OrbitRef& r);

// Witnesses: finitely described elements of G_(S).

/// Finite-support permutation of atoms, as (a, g(a)) for moved atoms.
struct PermWitness {
  std::vector<std::pair<Atom, Atom>> moves;
};

/// Piecewise-linear order automorphism of Q through the breakpoints, with
/// slope 1 outside them.
struct PlWitness {
  std::vector<std::pair<Rational, Rational>> breakpoints;
};

/// Invertible matrix on the first n coordinates, identity beyond.
struct MatrixWitness {
  Matrix m;
};

/// (src_low, src_high] maps onto (dst_low, dst_high] by the order isomorphism.
struct Piece {
  Interval src, dst;
};

struct ExchangeWitness {
  std::vector<Piece> pieces;
};

using Witness = std::variant<PermWitness, PlWitness, MatrixWitness, ExchangeWitness>;

Atom apply_witness(const BackendSpec& b, const Witness& w, const Atom& a);
std::string witness_str(const Witness& w);

/// Checks that w is an automorphism of the backend structure fixing the
/// support atoms and, for OrdinalSpace, mapping each support clopen onto
/// itself. Returns a reason when it is not.
std::optional<std::string> verify_witness(const BackendSpec& b, const Support& s, const Witness& w);

struct WitnessResult {
  std::optional<Witness> witness;
  std::string separation;  // invariant separating x and y when no witness
};

WitnessResult same_orbit_witness(const BackendSpec& b, const Support& s, const Atom& x, const Atom& y);

struct TupleCount {
  std::optional<std::uint64_t> count;  // empty when infinite
  std::string family;                  // description when infinite
};

/// Number of G_(S)-orbits on U^n, by recursion over orbit representatives:
/// the orbits of (a1, ..., an) correspond to an orbit of a1 together with an
/// orbit of the rest under the stabilizer of a1.
TupleCount count_tuple_orbits(const BackendSpec& b, int n, const Support& s);

struct AtomSet {
  bool all = false;       // all of U
  bool infinite = false;
  std::vector<Atom> atoms;
  std::string str() const;
};

AtomSet dcl(const BackendSpec& b, const Support& s);
AtomSet acl(const BackendSpec& b, const Support& s);
AtomSet fixed_atoms(const BackendSpec& b, const Support& s);

/// Points mixing the support, nearby values and random members of U.
std::vector<Atom> sample_atoms(const BackendSpec& b, const Support& s, std::mt19937_64& rng, std::size_t count);
Atom random_atom(const BackendSpec& b, std::mt19937_64& rng);

/// Initial segments [0, p] used when searching over OrdinalSpace supports:
/// p ranges over 0, 1, w^j*c and, for each interval (l, h] cut out by the
/// base clopens, the landmarks l + w^j*m (m = 1, 2) below h. Any two-cell
/// split of a cell is reachable by boolean combination with the base.
std::vector<ClopenSet> clopen_catalog(const BackendSpec& b, const Support& base = {});

/// Supports with at most max_atoms atoms and max_clopens catalog clopens, one
/// per orbit of G on such tuples (families contribute their first member
/// only, marked in truncated).
struct SupportCatalog {
  std::vector<Support> supports;
  bool truncated = false;
};

SupportCatalog support_catalog(const BackendSpec& b, std::size_t max_atoms, std::size_t max_clopens,
                               const Support& base = {});

}  // namespace fmwb
