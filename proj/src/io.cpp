#include "fmwb/io.hpp"

#include <fstream>
#include <sstream>

#include "fmwb/errors.hpp"

namespace fmwb {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw InputError(field + ": " + what);
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where + "." + key, "missing");
  return *it;
}

std::string need_string(const Json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

long long need_int(const Json& j, const std::string& field) {
  if (!j.is_number_integer()) bad(field, "expected an integer");
  return j.get<long long>();
}

std::uint64_t need_count(const Json& j, const std::string& field) {
  const long long v = need_int(j, field);
  if (v < 0) bad(field, "must be non-negative");
  return static_cast<std::uint64_t>(v);
}

const Json& need_array(const Json& j, const std::string& field) {
  if (!j.is_array()) bad(field, "expected an array");
  return j;
}

std::string element_id(const Json& j, const std::string& field) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  bad(field, "expected an element id");
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) bad(where + "." + it.key(), "unknown field");
  }
}

Ordinal parse_cnf(const std::string& s, const std::string& field) {
  try {
    return Ordinal::parse(s);
  } catch (const OrdinalError& e) {
    bad(field, e.what());
  }
}

std::string bits_str(const std::vector<bool>& b) {
  std::string s;
  for (bool x : b) s += x ? '1' : '0';
  return s;
}

std::vector<bool> bits_from(const Json& j, const std::string& field) {
  std::vector<bool> out;
  for (char c : need_string(j, field)) {
    if (c != '0' && c != '1') bad(field, "expected a string of 0 and 1");
    out.push_back(c == '1');
  }
  return out;
}

}  // namespace

Json signature_to_json(const Signature& sig) {
  Json out = Json::array();
  for (const auto& r : sig.relations) out.push_back({{"name", r.name}, {"arity", r.arity}});
  return out;
}

Signature signature_from_json(const Json& j) {
  Signature sig;
  need_array(j, "signature");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string f = "signature[" + std::to_string(i) + "]";
    const long long arity = need_int(need(j[i], "arity", f), f + ".arity");
    if (arity < 1) bad(f + ".arity", "must be positive");
    sig.relations.push_back({need_string(need(j[i], "name", f), f + ".name"), static_cast<int>(arity)});
  }
  return sig;
}

Json structure_to_json(const FinStructure& a) {
  Json rels = Json::object();
  for (std::size_t r = 0; r < a.signature().size(); ++r) {
    Json ts = Json::array();
    for (const auto& t : a.tuples(static_cast<int>(r))) {
      Json tj = Json::array();
      for (int x : t) tj.push_back(a.id(x));
      ts.push_back(tj);
    }
    rels[a.signature().relations[r].name] = ts;
  }
  return {{"signature", signature_to_json(a.signature())}, {"domain", a.ids()}, {"relations", rels}};
}

FinStructure structure_from_json(const Json& j) {
  if (!j.is_object()) bad("structure", "expected an object");
  reject_unknown(j, {"signature", "domain", "relations", "formatVersion"}, "structure");
  RawStructure raw;
  for (const auto& r : signature_from_json(need(j, "signature", "structure")).relations)
    raw.signature.emplace_back(r.name, r.arity);
  const auto& dom = need_array(need(j, "domain", "structure"), "structure.domain");
  for (std::size_t i = 0; i < dom.size(); ++i)
    raw.domain.push_back(element_id(dom[i], "structure.domain[" + std::to_string(i) + "]"));
  if (auto it = j.find("relations"); it != j.end()) {
    if (!it->is_object()) bad("structure.relations", "expected an object");
    for (auto r = it->begin(); r != it->end(); ++r) {
      const std::string f = "structure.relations." + r.key();
      std::vector<std::vector<std::string>> tuples;
      for (const auto& t : need_array(r.value(), f)) {
        std::vector<std::string> tup;
        for (const auto& x : need_array(t, f)) tup.push_back(element_id(x, f));
        tuples.push_back(std::move(tup));
      }
      raw.relations.emplace_back(r.key(), std::move(tuples));
    }
  }
  try {
    return validate(raw);
  } catch (const StructureError& e) {
    std::string msg;
    for (const auto& s : e.issues()) msg += (msg.empty() ? "" : "; ") + s;
    bad("structure", msg);
  }
}

Json age_to_json(const AgeSpec& spec) {
  Json ss = Json::array();
  for (const auto& s : spec.structures) ss.push_back(structure_to_json(s));
  Json out = {{"name", spec.name},
              {"signature", signature_to_json(spec.sig)},
              {"mode", spec.mode == AgeMode::Forbidden ? "forbidden" : "explicit"},
              {"structures", ss}};
  if (spec.mode == AgeMode::Explicit) out["k_max"] = spec.k_max;
  return out;
}

AgeSpec age_from_json(const Json& j) {
  if (!j.is_object()) bad("age", "expected an object");
  reject_unknown(j, {"name", "signature", "mode", "structures", "k_max", "formatVersion"}, "age");
  AgeSpec spec;
  spec.name = need_string(need(j, "name", "age"), "age.name");
  spec.sig = signature_from_json(need(j, "signature", "age"));
  const std::string mode = need_string(need(j, "mode", "age"), "age.mode");
  if (mode == "forbidden") spec.mode = AgeMode::Forbidden;
  else if (mode == "explicit") spec.mode = AgeMode::Explicit;
  else bad("age.mode", "expected \"forbidden\" or \"explicit\"");
  const auto& ss = need_array(need(j, "structures", "age"), "age.structures");
  for (const auto& s : ss) spec.structures.push_back(structure_from_json(s));
  if (auto it = j.find("k_max"); it != j.end()) spec.k_max = static_cast<int>(need_int(*it, "age.k_max"));
  if (spec.mode == AgeMode::Explicit && spec.k_max <= 0) bad("age.k_max", "required and positive in explicit mode");
  check_age_spec(spec);
  return spec;
}

Json ordinal_to_json(const Ordinal& o) {
  Json out = Json::array();
  for (const auto& t : o.terms()) out.push_back(Json::array({ordinal_to_json(t.exponent), t.coeff}));
  return out;
}

Ordinal ordinal_from_json(const Json& j) {
  if (j.is_string()) return parse_cnf(j.get<std::string>(), "ordinal");
  if (j.is_number_integer()) return Ordinal::natural(need_count(j, "ordinal"));
  std::vector<OrdinalTerm> terms;
  for (const auto& t : need_array(j, "ordinal")) {
    if (!t.is_array() || t.size() != 2) bad("ordinal", "terms are [exponent, coeff] pairs");
    const auto c = need_count(t[1], "ordinal.coeff");
    if (c == 0) bad("ordinal.coeff", "must be positive");
    terms.push_back({ordinal_from_json(t[0]), c});
  }
  try {
    return Ordinal::from_terms(std::move(terms));
  } catch (const OrdinalError& e) {
    bad("ordinal", e.what());
  }
}

Json backend_to_json(const BackendSpec& b) {
  Json out = {{"kind", backend_kind_name(b.kind)}};
  if (b.kind == BackendKind::VectorSpace) out["q"] = b.q;
  if (b.kind == BackendKind::OrdinalSpace) {
    out["alpha"] = b.alpha.str();
    out["k"] = b.k;
  }
  return out;
}

BackendSpec backend_from_json(const Json& j) {
  if (j.is_string()) {
    auto b = BackendSpec::of(parse_backend_kind(j.get<std::string>()));
    if (b.kind == BackendKind::OrdinalSpace) bad("backend", "OrdinalSpace needs alpha and k");
    validate_backend(b);
    return b;
  }
  if (!j.is_object()) bad("backend", "expected an object or a kind name");
  reject_unknown(j, {"kind", "q", "alpha", "k"}, "backend");
  auto b = BackendSpec::of(parse_backend_kind(need_string(need(j, "kind", "backend"), "backend.kind")));
  if (b.kind == BackendKind::VectorSpace) b.q = static_cast<int>(need_int(need(j, "q", "backend"), "backend.q"));
  if (b.kind == BackendKind::OrdinalSpace) {
    b.alpha = ordinal_from_json(need(j, "alpha", "backend"));
    b.k = need_count(need(j, "k", "backend"), "backend.k");
  }
  validate_backend(b);
  return b;
}

Json atom_to_json(const BackendSpec& b, const Atom& a) {
  switch (b.kind) {
    case BackendKind::PureSet:
    case BackendKind::Rigid: return a.as_id();
    case BackendKind::DenseOrder: return rational_str(a.as_rational());
    case BackendKind::PairedAtoms:
    case BackendKind::NamedPairs: return Json::array({a.as_pair().pair, a.as_pair().side});
    case BackendKind::VectorSpace: return a.as_vec();
    case BackendKind::OrdinalSpace: return ordinal_to_json(a.as_ordinal());
  }
  return nullptr;
}

Atom atom_from_json(const BackendSpec& b, const Json& j) {
  Atom a;
  switch (b.kind) {
    case BackendKind::PureSet:
    case BackendKind::Rigid: a = Atom::id(need_count(j, "atom")); break;
    case BackendKind::DenseOrder:
      a = Atom::rational(j.is_number_integer() ? Rational(j.get<long long>()) : parse_rational(need_string(j, "atom")));
      break;
    case BackendKind::PairedAtoms:
    case BackendKind::NamedPairs:
      if (!j.is_array() || j.size() != 2) bad("atom", "expected [pair, side]");
      a = Atom::pair(need_count(j[0], "atom.pair"), static_cast<int>(need_int(j[1], "atom.side")));
      break;
    case BackendKind::VectorSpace: {
      FVec v;
      for (const auto& x : need_array(j, "atom")) v.push_back(static_cast<int>(need_int(x, "atom")));
      a = Atom::vec(v);
      break;
    }
    case BackendKind::OrdinalSpace: a = Atom::ordinal(ordinal_from_json(j)); break;
  }
  if (!in_universe(b, a)) bad("atom", a.str() + " is not an atom of " + b.str());
  return a;
}

Json clopen_to_json(const ClopenSet& c) {
  Json out = Json::array();
  for (const auto& iv : c.intervals())
    out.push_back(Json::array({iv.low ? Json(iv.low->str()) : Json(nullptr), iv.high.str()}));
  return out;
}

ClopenSet clopen_from_json(const SpaceSpec& space, const Json& j) {
  ClopenSet out = ClopenSet::empty(space);
  for (const auto& iv : need_array(j, "clopen")) {
    if (!iv.is_array() || iv.size() != 2) bad("clopen", "intervals are [low | null, high]");
    LowerBound low;
    if (!iv[0].is_null()) low = ordinal_from_json(iv[0]);
    const Ordinal high = ordinal_from_json(iv[1]);
    if (!space.contains(high)) bad("clopen", "interval end " + high.str() + " outside the space");
    out = clopen_union(out, ClopenSet::interval(space, low, high));
  }
  return out;
}

Json support_to_json(const BackendSpec& b, const Support& s) {
  Json atoms = Json::array(), clopens = Json::array();
  for (const auto& a : s.atoms) atoms.push_back(atom_to_json(b, a));
  for (const auto& c : s.clopens) clopens.push_back(clopen_to_json(c));
  Json out = {{"atoms", atoms}};
  if (!s.clopens.empty()) out["clopens"] = clopens;
  return out;
}

Support support_from_json(const BackendSpec& b, const Json& j) {
  Support s;
  if (j.is_null()) return s;
  if (!j.is_object()) bad("support", "expected an object");
  reject_unknown(j, {"atoms", "clopens"}, "support");
  if (auto it = j.find("atoms"); it != j.end())
    for (const auto& a : need_array(*it, "support.atoms")) s.atoms.push_back(atom_from_json(b, a));
  if (auto it = j.find("clopens"); it != j.end()) {
    if (b.kind != BackendKind::OrdinalSpace && !it->empty()) bad("support.clopens", "only OrdinalSpace has clopens");
    for (const auto& c : need_array(*it, "support.clopens")) s.clopens.push_back(clopen_from_json(b.space(), c));
  }
  return normalize_support(b, s);
}

Json index_set_to_json(const IndexSet& s) { return {{"head", bits_str(s.head())}, {"period", bits_str(s.period())}}; }

IndexSet index_set_from_json(const Json& j) {
  if (!j.is_object()) bad("tail", "expected {head, period}");
  reject_unknown(j, {"head", "period"}, "tail");
  auto period = bits_from(need(j, "period", "tail"), "tail.period");
  if (period.empty()) bad("tail.period", "must be nonempty");
  std::vector<bool> head;
  if (auto it = j.find("head"); it != j.end()) head = bits_from(*it, "tail.head");
  return IndexSet(std::move(head), std::move(period));
}

Json symset_to_json(const SymSet& a) {
  Json out = {{"backend", backend_to_json(a.backend)},
              {"support", support_to_json(a.backend, a.support)},
              {"selection", a.selection}};
  if (a.tail != IndexSet()) out["tail"] = index_set_to_json(a.tail);
  return out;
}

SymSet symset_from_json(const Json& j) {
  if (!j.is_object()) bad("set", "expected an object");
  reject_unknown(j, {"backend", "support", "selection", "tail", "formatVersion"}, "set");
  const auto b = backend_from_json(need(j, "backend", "set"));
  Support s;
  if (auto it = j.find("support"); it != j.end()) s = support_from_json(b, *it);
  std::set<int> sel;
  if (auto it = j.find("selection"); it != j.end())
    for (const auto& x : need_array(*it, "set.selection")) sel.insert(static_cast<int>(need_int(x, "set.selection")));
  IndexSet tail;
  if (auto it = j.find("tail"); it != j.end()) tail = index_set_from_json(*it);
  return make_symset(b, s, sel, tail);
}

Json partition_to_json(const SymPartition& p) {
  Json scheme = {{"rule", block_rule_name(p.rule)}};
  if (!p.basis.empty()) scheme["basis"] = p.basis;
  Json ex = Json::array(), rm = Json::array();
  for (const auto& blk : p.exceptional) {
    Json bj = Json::array();
    for (const auto& a : blk) bj.push_back(atom_to_json(p.backend, a));
    ex.push_back(bj);
  }
  for (const auto& a : p.removed) rm.push_back(atom_to_json(p.backend, a));
  if (!ex.empty()) scheme["exceptional"] = ex;
  if (!rm.empty()) scheme["removed"] = rm;
  return {{"backend", backend_to_json(p.backend)}, {"support", support_to_json(p.backend, p.support)}, {"scheme", scheme}};
}

SymPartition partition_from_json(const Json& j) {
  if (!j.is_object()) bad("partition", "expected an object");
  reject_unknown(j, {"backend", "support", "scheme", "formatVersion"}, "partition");
  SymPartition p;
  p.backend = backend_from_json(need(j, "backend", "partition"));
  if (auto it = j.find("support"); it != j.end()) p.support = support_from_json(p.backend, *it);
  const auto& sc = need(j, "scheme", "partition");
  if (!sc.is_object()) bad("partition.scheme", "expected an object");
  reject_unknown(sc, {"rule", "basis", "exceptional", "removed"}, "partition.scheme");
  p.rule = parse_block_rule(need_string(need(sc, "rule", "partition.scheme"), "partition.scheme.rule"));
  if (auto it = sc.find("basis"); it != sc.end())
    for (const auto& v : need_array(*it, "partition.scheme.basis"))
      p.basis.push_back(atom_from_json(p.backend, v).as_vec());
  if (auto it = sc.find("exceptional"); it != sc.end())
    for (const auto& blk : need_array(*it, "partition.scheme.exceptional")) {
      std::vector<Atom> atoms;
      for (const auto& a : need_array(blk, "partition.scheme.exceptional")) atoms.push_back(atom_from_json(p.backend, a));
      p.exceptional.push_back(std::move(atoms));
    }
  if (auto it = sc.find("removed"); it != sc.end())
    for (const auto& a : need_array(*it, "partition.scheme.removed")) p.removed.push_back(atom_from_json(p.backend, a));
  validate_partition(p);
  return p;
}

Json rank_to_json(const RankDegree& r) {
  switch (r.kind) {
    case RankDegree::Kind::MinusOne: return {{"rank", -1}};
    case RankDegree::Kind::NoRank: return {{"rank", "none"}};
    case RankDegree::Kind::Ordinal: return {{"rank", r.rank.str()}, {"degree", r.degree}};
  }
  return nullptr;
}

Json witness_to_json(const BackendSpec& b, const Witness& w) {
  if (const auto* p = std::get_if<PermWitness>(&w)) {
    Json moves = Json::array();
    for (const auto& [x, y] : p->moves) moves.push_back(Json::array({atom_to_json(b, x), atom_to_json(b, y)}));
    return {{"type", "permutation"}, {"moves", moves}};
  }
  if (const auto* p = std::get_if<PlWitness>(&w)) {
    Json pts = Json::array();
    for (const auto& [x, y] : p->breakpoints) pts.push_back(Json::array({rational_str(x), rational_str(y)}));
    return {{"type", "piecewise-linear"}, {"breakpoints", pts}};
  }
  if (const auto* m = std::get_if<MatrixWitness>(&w)) return {{"type", "matrix"}, {"matrix", m->m}};
  const auto& e = std::get<ExchangeWitness>(w);
  Json pieces = Json::array();
  auto iv = [](const Interval& i) { return Json::array({i.low ? Json(i.low->str()) : Json(nullptr), i.high.str()}); };
  for (const auto& pc : e.pieces) pieces.push_back({{"from", iv(pc.src)}, {"to", iv(pc.dst)}});
  return {{"type", "interval-exchange"}, {"pieces", pieces}};
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(source, std::string("malformed JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

std::string dump_json(const Json& j) { return j.dump(); }

}  // namespace fmwb
