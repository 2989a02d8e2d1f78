#pragma once

#include <string>

#include "json.hpp"

#include "fmwb/atoms.hpp"
#include "fmwb/finstruct.hpp"
#include "fmwb/fmsets.hpp"
#include "fmwb/fraisse.hpp"
#include "fmwb/ordinal.hpp"

namespace fmwb {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// All readers throw InputError naming the offending field.

/// {signature: [{name, arity}], domain: [ids], relations: {name: [[ids]]}}
Json structure_to_json(const FinStructure& a);
FinStructure structure_from_json(const Json& j);

Json signature_to_json(const Signature& sig);
Signature signature_from_json(const Json& j);

/// {name, signature, mode: "forbidden" | "explicit", structures, k_max?}
Json age_to_json(const AgeSpec& spec);
AgeSpec age_from_json(const Json& j);

/// Term list [[exponent, coeff], ...] with exponents again term lists.
/// Readers also take the CNF text form.
Json ordinal_to_json(const Ordinal& o);
Ordinal ordinal_from_json(const Json& j);

/// {kind, q?} / {kind, alpha, k}
Json backend_to_json(const BackendSpec& b);
BackendSpec backend_from_json(const Json& j);

/// Ids as numbers, rationals as "p/q", pair atoms as [pair, side], vectors as
/// coordinate lists, ordinals as term lists.
Json atom_to_json(const BackendSpec& b, const Atom& a);
Atom atom_from_json(const BackendSpec& b, const Json& j);

/// Interval list [[low | null, high], ...] with CNF text ends.
Json clopen_to_json(const ClopenSet& c);
ClopenSet clopen_from_json(const SpaceSpec& space, const Json& j);

/// {atoms: [...], clopens: [...]}
Json support_to_json(const BackendSpec& b, const Support& s);
Support support_from_json(const BackendSpec& b, const Json& j);

/// {head: "0110", period: "1"}
Json index_set_to_json(const IndexSet& s);
IndexSet index_set_from_json(const Json& j);

/// {backend, support, selection, tail?}
Json symset_to_json(const SymSet& a);
SymSet symset_from_json(const Json& j);

/// {backend, support, scheme: {rule, basis?, exceptional?, removed?}}
Json partition_to_json(const SymPartition& p);
SymPartition partition_from_json(const Json& j);

Json rank_to_json(const RankDegree& r);
Json witness_to_json(const BackendSpec& b, const Witness& w);

/// Parses text, reporting the source on failure.
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

/// Compact, key-sorted rendering; identical values give identical bytes.
std::string dump_json(const Json& j);

}  // namespace fmwb
