#include "fmwb/cli.hpp"

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "fmwb/clopen.hpp"
#include "fmwb/config.hpp"
#include "fmwb/efgames.hpp"
#include "fmwb/errors.hpp"
#include "fmwb/fmsets.hpp"
#include "fmwb/fraisse.hpp"
#include "fmwb/io.hpp"
#include "fmwb/tour.hpp"

namespace fmwb {

namespace {

struct Output {
  Json input = Json::object();
  Json result = Json::object();
  Json evidence;
  std::string text;  // human summary; generic rendering when empty
  std::optional<std::string> dot;
};

// Inline JSON, a file, or nothing.
std::optional<Json> json_arg(const std::string& arg) {
  if (arg.empty()) return std::nullopt;
  const char c = arg.front();
  if (c == '{' || c == '[' || c == '"') return parse_json_text(arg, "argument");
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) return read_json_file(arg);
  return std::nullopt;
}

// Scalars that do not parse as JSON are taken as strings (1/2, w^2 + 1).
Json scalar_arg(const std::string& arg) {
  if (auto j = json_arg(arg)) return *j;
  try {
    return Json::parse(arg);
  } catch (const Json::parse_error&) {
    return arg;
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s, const std::string& field) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw InputError(field + ": expected an integer, got '" + s + "'");
}

void check_backend_bounds(const BackendSpec& b, const DeskConfig& cfg) {
  if (b.kind != BackendKind::OrdinalSpace) return;
  const auto a = b.alpha.as_natural();
  if (!a || *a > cfg.ordinal_alpha_max)
    throw BoundExceeded("OrdinalSpace alpha " + b.alpha.str() + " exceeds the configured maximum " +
                        std::to_string(cfg.ordinal_alpha_max));
}

// PureSet, VectorSpace:2, OrdinalSpace:w^2:3, or a JSON descriptor.
BackendSpec backend_arg(const std::string& arg, const DeskConfig& cfg) {
  BackendSpec b;
  if (auto j = json_arg(arg)) {
    b = backend_from_json(*j);
  } else {
    const auto parts = split(arg, ':');
    b = BackendSpec::of(parse_backend_kind(parts[0]));
    if (b.kind == BackendKind::VectorSpace) {
      if (parts.size() != 2) throw InputError("backend: write VectorSpace:q");
      b.q = parse_int(parts[1], "backend.q");
    } else if (b.kind == BackendKind::OrdinalSpace) {
      if (parts.size() != 3) throw InputError("backend: write OrdinalSpace:alpha:k");
      b.alpha = ordinal_from_json(parts[1]);
      b.k = static_cast<std::uint64_t>(parse_int(parts[2], "backend.k"));
    } else if (parts.size() != 1) {
      throw InputError("backend: " + parts[0] + " takes no parameters");
    }
    validate_backend(b);
  }
  check_backend_bounds(b, cfg);
  return b;
}

Support support_arg(const BackendSpec& b, const std::string& arg) {
  if (arg.empty()) return {};
  auto j = json_arg(arg);
  if (!j) throw InputError("support: expected JSON or a file, got '" + arg + "'");
  if (j->is_array()) j = Json{{"atoms", *j}};
  return support_from_json(b, *j);
}

// path:4, cycle:5, complete:3, edgeless:6, matching:6, order:4, or JSON.
FinStructure structure_arg(const std::string& arg, const std::string& field) {
  if (arg.empty()) throw InputError(field + ": missing structure");
  if (auto j = json_arg(arg)) return structure_from_json(*j);
  const auto parts = split(arg, ':');
  if (parts.size() != 2) throw InputError(field + ": expected JSON, a file, or shape:n");
  const int n = parse_int(parts[1], field);
  if (n < 0) throw InputError(field + ": size must be non-negative");
  const auto& s = parts[0];
  if (s == "path") return make_path(n);
  if (s == "cycle") return make_cycle(n);
  if (s == "complete") return make_complete(n);
  if (s == "edgeless") return make_graph(n, {});
  if (s == "order") return make_linear_order(n);
  if (s == "matching") {
    if (n % 2) throw InputError(field + ": a perfect matching needs an even number of vertices");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; i += 2) e.emplace_back(i, i + 1);
    return make_graph(n, e);
  }
  throw InputError(field + ": unknown shape '" + s + "'");
}

AgeSpec age_arg(const std::string& arg) {
  if (auto j = json_arg(arg)) return age_from_json(*j);
  for (const auto& n : builtin_age_names())
    if (n == arg) return builtin_age(arg);
  throw InputError("age: unknown class '" + arg + "'");
}

Ordinal ordinal_arg(const std::string& arg, const std::string& field) {
  try {
    return ordinal_from_json(scalar_arg(arg));
  } catch (const InputError& e) {
    throw InputError(field + ": " + e.what());
  }
}

Json decomposition_json(const Decomposition& d) {
  Json os = Json::array();
  for (const auto& o : d.orbits)
    os.push_back({{"id", o.id}, {"finite", o.finite()}, {"description", o.str()},
                  {"representative", atom_to_json(d.backend, o.representative)}});
  Json out = {{"orbits", os}, {"finite_orbits", d.finite_orbit_count()}, {"infinite_orbits", d.infinite_orbit_count()}};
  if (d.family) out["family"] = d.family->str();
  return out;
}

void check_cap(std::size_t value, std::size_t cap, const std::string& what) {
  if (value > cap)
    throw BoundExceeded(what + " " + std::to_string(value) + " exceeds the configured maximum " + std::to_string(cap));
}

std::string render_text(const Output& o) {
  if (!o.text.empty()) return o.text;
  std::string s;
  for (auto it = o.result.begin(); it != o.result.end(); ++it)
    s += it.key() + ": " + (it->is_string() ? it->get<std::string>() : it->dump()) + "\n";
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite shadows of permutation models, amorphous sets and Fraisse limits", "fmwb"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string format = "text", config_path;
  app.add_option("--format", format, "json, text or dot")->check(CLI::IsMember({"json", "text", "dot"}));
  app.add_option("--config", config_path, "desk configuration file (default: $FMWB_CONFIG)");

  DeskConfig cfg;
  std::string command;
  std::function<Output()> action;
  auto on = [&](CLI::App* sub, const std::string& name, std::function<Output()> f) {
    sub->callback([&, name, f] {
      command = name;
      action = f;
    });
  };

  // Shared option storage; each command reads only its own.
  std::string age = "graphs", backend_s, support_s, set_s, partition_s, x_s, y_s, a_s, b_s, formula_s, subsets_s,
              alpha_s, gamma_s, clopen_s, suite_s;
  int bound = -1, n = -1, e_bound = -1, rounds = 2, x_size = 0, depth = -1;
  long long s_max = -1, b_max = -1;
  std::uint64_t k = 1;
  bool oracle = false, no_rigid = false;
  std::string lhs, rhs;

  // fraisse
  auto* fr = app.add_subcommand("fraisse", "amalgamation classes and generic structures");
  fr->require_subcommand(1);
  auto* fr_check = fr->add_subcommand("check", "HP, JEP and AP up to a size bound");
  fr_check->add_option("--age", age, "builtin class name, JSON or file");
  fr_check->add_option("--bound", bound, "largest member size");
  on(fr_check, "fraisse check", [&] {
    const auto spec = age_arg(age);
    const int nb = bound < 0 ? cfg.fraisse_bound : bound;
    check_cap(static_cast<std::size_t>(nb), static_cast<std::size_t>(cfg.fraisse_bound_max), "bound");
    const auto rep = check_age_properties(spec, nb);
    Output o;
    o.input = {{"age", spec.name}, {"bound", nb}};
    o.result = {{"hp", rep.hp}, {"jep", rep.jep}, {"ap", rep.ap}, {"countable", rep.countable},
                {"members_by_size", rep.members_by_size}, {"checked", {{"hp", rep.hp_checked}, {"jep", rep.jep_checked}, {"ap", rep.ap_checked}}}};
    o.evidence = Json::object();
    if (rep.hp_witness) o.evidence["hp"] = {{"member", structure_to_json(rep.hp_witness->member)}, {"missing", structure_to_json(rep.hp_witness->missing)}};
    if (rep.jep_witness) o.evidence["jep"] = {{"c", structure_to_json(rep.jep_witness->c)}, {"d", structure_to_json(rep.jep_witness->d)}};
    if (rep.ap_witness) {
      const auto& w = *rep.ap_witness;
      const bool verified = is_embedding(w.b, w.c, w.p1) && is_embedding(w.b, w.d, w.p2) &&
                            !amalgamate(spec, w.b, w.c, w.d, w.p1, w.p2);
      if (!verified) throw std::logic_error("AP witness failed re-validation");
      o.evidence["ap"] = {{"b", structure_to_json(w.b)}, {"c", structure_to_json(w.c)}, {"d", structure_to_json(w.d)},
                          {"p1", w.p1.map}, {"p2", w.p2.map}, {"verified", verified}};
    }
    o.text = spec.name + " up to size " + std::to_string(nb) + ": hp " + (rep.hp ? "pass" : "fail") + ", jep " +
             (rep.jep ? "pass" : "fail") + ", ap " + (rep.ap ? "pass" : "fail") + "\n";
    if (rep.ap_witness)
      o.text += "ap witness: B = " + structure_key(rep.ap_witness->b) + ", C = " + structure_key(rep.ap_witness->c) +
                ", D = " + structure_key(rep.ap_witness->d) + "\n";
    return o;
  });
  auto* fr_build = fr->add_subcommand("build", "finite approximation of the Fraisse limit");
  fr_build->add_option("--age", age, "builtin class name, JSON or file");
  fr_build->add_option("--n", n, "number of elements");
  fr_build->add_option("--e-bound", e_bound, "largest extension task size");
  on(fr_build, "fraisse build", [&] {
    const auto spec = age_arg(age);
    const int nn = n < 0 ? cfg.generic_n : n, eb = e_bound < 0 ? cfg.generic_e_bound : e_bound;
    check_cap(static_cast<std::size_t>(nn), static_cast<std::size_t>(cfg.generic_n_max), "n");
    const auto g = build_generic(spec, nn, eb);
    std::size_t unmet = 0;
    for (const auto& t : g.tasks) unmet += t.unmet;
    Output o;
    o.input = {{"age", spec.name}, {"n", nn}, {"e_bound", eb}};
    o.result = {{"structure", structure_to_json(g.structure)}, {"stalled", g.stalled}, {"hash", std::to_string(g.hash)},
                {"tasks", g.tasks.size()}, {"unmet", unmet}};
    o.text = spec.name + ": " + std::to_string(g.structure.size()) + " elements, " + std::to_string(g.tasks.size()) +
             " extension tasks, " + std::to_string(unmet) + " unmet" + (g.stalled ? " (stalled)" : "") + ", hash " +
             std::to_string(g.hash) + "\n";
    o.dot = to_dot(g.structure, spec.name);
    return o;
  });

  // atoms
  auto* at = app.add_subcommand("atoms", "orbits of atom backends");
  at->require_subcommand(1);
  auto* at_orbits = at->add_subcommand("orbits", "orbits of the universe under the stabilizer of a support");
  at_orbits->add_option("--backend", backend_s, "e.g. PureSet, VectorSpace:2, OrdinalSpace:w^2:3")->required();
  at_orbits->add_option("--support", support_s, "JSON {atoms, clopens} or atom list");
  on(at_orbits, "atoms orbits", [&] {
    const auto b = backend_arg(backend_s, cfg);
    const auto s = support_arg(b, support_s);
    const auto d = orbits(b, s);
    Output o;
    o.input = {{"backend", backend_to_json(b)}, {"support", support_to_json(b, s)}};
    o.result = decomposition_json(d);
    for (const auto& orb : d.orbits) o.text += std::to_string(orb.id) + ": " + orb.str() + "\n";
    if (d.family) o.text += "family: " + d.family->str() + "\n";
    return o;
  });
  auto* at_wit = at->add_subcommand("witness", "an automorphism fixing the support and moving x to y");
  at_wit->add_option("--backend", backend_s)->required();
  at_wit->add_option("--support", support_s);
  at_wit->add_option("--x", x_s)->required();
  at_wit->add_option("--y", y_s)->required();
  on(at_wit, "atoms witness", [&] {
    const auto b = backend_arg(backend_s, cfg);
    const auto s = support_arg(b, support_s);
    const Atom x = atom_from_json(b, scalar_arg(x_s)), y = atom_from_json(b, scalar_arg(y_s));
    const auto w = same_orbit_witness(b, s, x, y);
    Output o;
    o.input = {{"backend", backend_to_json(b)}, {"support", support_to_json(b, s)}, {"x", atom_to_json(b, x)}, {"y", atom_to_json(b, y)}};
    o.result = {{"same_orbit", w.witness.has_value()}};
    if (w.witness) {
      if (auto why = verify_witness(b, s, *w.witness)) throw std::logic_error("witness failed verification: " + *why);
      if (!(apply_witness(b, *w.witness, x) == y)) throw std::logic_error("witness does not move x to y");
      o.evidence = {{"witness", witness_to_json(b, *w.witness)}, {"verified", true}};
      o.text = "same orbit: " + witness_str(*w.witness) + "\n";
    } else {
      o.evidence = {{"separation", w.separation}};
      o.text = "different orbits: " + w.separation + "\n";
    }
    return o;
  });
  auto* at_types = at->add_subcommand("types", "number of orbits on n-tuples");
  at_types->add_option("--backend", backend_s)->required();
  at_types->add_option("--support", support_s);
  at_types->add_option("--n", n)->required();
  on(at_types, "atoms types", [&] {
    const auto b = backend_arg(backend_s, cfg);
    const auto s = support_arg(b, support_s);
    if (n < 0) throw InputError("n: must be non-negative");
    check_cap(static_cast<std::size_t>(n), static_cast<std::size_t>(cfg.tuple_n_max), "n");
    const auto c = count_tuple_orbits(b, n, s);
    Output o;
    o.input = {{"backend", backend_to_json(b)}, {"support", support_to_json(b, s)}, {"n", n}};
    o.result = {{"count", c.count ? Json(*c.count) : Json("infinite")}};
    if (!c.count) o.evidence = {{"family", c.family}};
    o.text = (c.count ? std::to_string(*c.count) : "infinite: " + c.family) + "\n";
    return o;
  });

  // fm
  auto* fm = app.add_subcommand("fm", "symmetric sets in permutation models");
  fm->require_subcommand(1);
  auto* fm_size = fm->add_subcommand("sizeclass", "finite, cofinite or infinite-coinfinite");
  fm_size->add_option("--set", set_s, "SymSet JSON or file")->required();
  on(fm_size, "fm sizeclass", [&] {
    auto j = json_arg(set_s);
    if (!j) throw InputError("set: expected JSON or a file");
    const auto a = symset_from_json(*j);
    check_backend_bounds(a.backend, cfg);
    const auto c = size_class(a);
    Output o;
    o.input = {{"set", symset_to_json(a)}};
    o.result = {{"class", c.str()}};
    return o;
  });
  auto* fm_am = fm->add_subcommand("amorphous", "amorphousness of the universe");
  fm_am->add_option("--backend", backend_s)->required();
  fm_am->add_option("--s-max", s_max, "largest support size searched");
  on(fm_am, "fm amorphous", [&] {
    const auto b = backend_arg(backend_s, cfg);
    const std::size_t s = s_max < 0 ? cfg.s_max : static_cast<std::size_t>(s_max);
    check_cap(s, cfg.s_max_cap, "s-max");
    const auto r = is_amorphous(b, s);
    Output o;
    o.input = {{"backend", backend_to_json(b)}, {"s_max", s}};
    o.result = {{"amorphous", r.amorphous}, {"reason", r.reason}, {"supports_checked", r.supports_checked}};
    if (r.witness) {
      const bool ok = size_class(*r.witness).kind == SizeClass::Kind::InfiniteCoinfinite;
      if (!ok) throw std::logic_error("amorphousness witness failed re-validation");
      o.evidence = {{"witness", symset_to_json(*r.witness)}, {"verified", ok}};
    }
    o.text = b.str() + (r.amorphous ? " is amorphous" : " is not amorphous") + " (supports up to " + std::to_string(s) +
             "): " + r.reason + "\n";
    return o;
  });
  auto* fm_gauge = fm->add_subcommand("gauge", "gauge of a partition, or the gauge table of a backend");
  fm_gauge->add_option("--partition", partition_s, "SymPartition JSON or file");
  fm_gauge->add_option("--backend", backend_s);
  fm_gauge->add_option("--s-max", s_max);
  fm_gauge->add_option("--b-max", b_max, "largest block size");
  on(fm_gauge, "fm gauge", [&] {
    Output o;
    if (!partition_s.empty()) {
      auto j = json_arg(partition_s);
      if (!j) throw InputError("partition: expected JSON or a file");
      const auto p = partition_from_json(*j);
      check_backend_bounds(p.backend, cfg);
      const auto g = gauge(p);
      o.input = {{"partition", partition_to_json(p)}};
      Json odd = Json::array(), std_blocks = Json::array();
      for (const auto& blk : g.odd_blocks) {
        Json bj = Json::array();
        for (const auto& a : blk) bj.push_back(atom_to_json(p.backend, a));
        odd.push_back(bj);
      }
      for (const auto& blk : g.standard_blocks) {
        Json bj = Json::array();
        for (const auto& a : blk) bj.push_back(atom_to_json(p.backend, a));
        std_blocks.push_back(bj);
      }
      o.result = {{"gauge", g.gauge}, {"leftover", g.leftover}};
      o.evidence = {{"odd_blocks", odd}, {"standard_form", std_blocks}};
      return o;
    }
    if (backend_s.empty()) throw InputError("fm gauge: give --partition or --backend");
    const auto b = backend_arg(backend_s, cfg);
    const std::size_t s = s_max < 0 ? cfg.gauge_s_max : static_cast<std::size_t>(s_max);
    const std::size_t bm = b_max < 0 ? cfg.gauge_b_max : static_cast<std::size_t>(b_max);
    check_cap(s, cfg.s_max_cap, "s-max");
    const auto t = check_gauge_invariance(b, s, bm);
    Json tab = Json::object();
    for (const auto& [g, ls] : t.leftovers) tab[std::to_string(g)] = ls;
    o.input = {{"backend", backend_to_json(b)}, {"s_max", s}, {"b_max", bm}};
    o.result = {{"table", tab}, {"single_valued", t.single_valued}, {"partitions", t.partitions}, {"supports", t.supports},
                {"scope", t.scope}};
    if (t.conflict) o.evidence = {{"conflict", partition_to_json(*t.conflict)}};
    o.text = b.str() + " gauge table:";
    for (const auto& [g, ls] : t.leftovers) {
      o.text += " " + std::to_string(g) + "->{";
      bool first = true;
      for (auto l : ls) {
        o.text += (first ? "" : ",") + std::to_string(l);
        first = false;
      }
      o.text += "}";
    }
    o.text += " over " + std::to_string(t.partitions) + " partitions\n";
    return o;
  });
  auto* fm_rank = fm->add_subcommand("rank", "MT-rank and degree of a symmetric set");
  fm_rank->add_option("--set", set_s)->required();
  fm_rank->add_flag("--oracle", oracle, "also bound the rank by splitting search");
  fm_rank->add_option("--s-max", s_max);
  fm_rank->add_option("--depth", depth);
  on(fm_rank, "fm rank", [&] {
    auto j = json_arg(set_s);
    if (!j) throw InputError("set: expected JSON or a file");
    const auto a = symset_from_json(*j);
    check_backend_bounds(a.backend, cfg);
    const auto r = mt_rank(a);
    Output o;
    o.input = {{"set", symset_to_json(a)}};
    o.result = {{"rank", rank_to_json(r)}};
    o.text = r.str() + "\n";
    if (oracle) {
      const std::size_t s = s_max < 0 ? cfg.rank_s_max : static_cast<std::size_t>(s_max);
      const int d = depth < 0 ? cfg.rank_depth : depth;
      check_cap(s, cfg.s_max_cap, "s-max");
      check_cap(static_cast<std::size_t>(d), static_cast<std::size_t>(cfg.rank_depth_max), "depth");
      const auto bounds = mt_rank_oracle(a, s, d);
      Json bj = {{"lower", rank_to_json(bounds.lower)}, {"splits", bounds.splits}, {"unbounded", bounds.unbounded},
                 {"note", bounds.note}, {"consistent", rank_consistent(r, bounds)}};
      if (bounds.upper) bj["upper"] = rank_to_json(*bounds.upper);
      if (bounds.evidence) bj["evidence"] = rank_to_json(*bounds.evidence);
      o.input["s_max"] = s;
      o.input["depth"] = d;
      o.evidence = {{"oracle", bj}};
      o.text += "oracle: lower " + bounds.lower.str() + (bounds.upper ? ", upper " + bounds.upper->str() : "") +
                (bounds.evidence ? ", evidence " + bounds.evidence->str() : "") + "\n";
    }
    return o;
  });
  auto* fm_dd = fm->add_subcommand("dedekind", "Dedekind-finiteness class of the universe");
  fm_dd->add_option("--backend", backend_s)->required();
  fm_dd->add_option("--s-max", s_max);
  on(fm_dd, "fm dedekind", [&] {
    const auto b = backend_arg(backend_s, cfg);
    const std::size_t s = s_max < 0 ? cfg.s_max : static_cast<std::size_t>(s_max);
    check_cap(s, cfg.s_max_cap, "s-max");
    const auto r = dedekind_class(b, s);
    Output o;
    o.input = {{"backend", backend_to_json(b)}, {"s_max", s}};
    o.result = {{"class", dedekind_class_name(r.cls)}, {"supports_checked", r.supports_checked}};
    o.evidence = {{"support", support_to_json(b, r.evidence)}, {"detail", r.detail}};
    o.text = b.str() + ": " + dedekind_class_name(r.cls) + " (" + r.detail + ")\n";
    return o;
  });
  auto* fm_venn = fm->add_subcommand("vennchain", "chain of Venn cells of a family of subsets of a finite set");
  fm_venn->add_option("--x-size", x_size, "X = {0, ..., n-1}")->required();
  fm_venn->add_option("--subsets", subsets_s, "JSON list of element lists")->required();
  on(fm_venn, "fm vennchain", [&] {
    auto j = json_arg(subsets_s);
    if (!j || !j->is_array()) throw InputError("subsets: expected a JSON list of element lists");
    std::vector<std::uint64_t> masks;
    for (const auto& s : *j) {
      if (!s.is_array()) throw InputError("subsets: each subset is a list of elements");
      std::uint64_t m = 0;
      for (const auto& x : s) {
        if (!x.is_number_integer() || x.get<long long>() < 0 || x.get<long long>() >= x_size)
          throw InputError("subsets: elements must lie in 0.." + std::to_string(x_size - 1));
        m |= std::uint64_t{1} << x.get<int>();
      }
      masks.push_back(m);
    }
    const auto v = venn_chain(x_size, masks);
    auto members = [&](std::uint64_t m) {
      Json e = Json::array();
      for (int x = 0; x < x_size; ++x)
        if (m >> x & 1) e.push_back(x);
      return e;
    };
    Json cells = Json::array();
    for (std::size_t i = 0; i < v.cells.size(); ++i) cells.push_back({{"in", members(v.signatures[i])}, {"members", members(v.cells[i])}});
    Output o;
    o.input = {{"x_size", x_size}, {"subsets", *j}};
    o.result = {{"m_sequence", v.m_sequence}, {"chain_sizes", Json::array()}, {"level", v.level}};
    for (const auto& y : v.chain) o.result["chain_sizes"].push_back(y.size());
    o.evidence = {{"cells", cells}};
    return o;
  });

  // ord
  auto* ord = app.add_subcommand("ord", "ordinal arithmetic and ordinal spaces");
  ord->require_subcommand(1);
  for (const std::string op : {"add", "mul", "cmp"}) {
    auto* sub = ord->add_subcommand(op, op == "cmp" ? "compare two ordinals" : "ordinal " + op + "ition");
    sub->add_option("a", lhs)->required();
    sub->add_option("b", rhs)->required();
    on(sub, "ord " + op, [&, op] {
      const Ordinal a = ordinal_arg(lhs, "a"), b = ordinal_arg(rhs, "b");
      Output o;
      o.input = {{"a", a.str()}, {"b", b.str()}};
      if (op == "cmp") {
        const char* c = a < b ? "<" : a == b ? "=" : ">";
        o.result = {{"order", c}};
        o.text = a.str() + " " + c + " " + b.str() + "\n";
      } else {
        const Ordinal r = op == "add" ? ord_add(a, b) : ord_mul(a, b);
        o.result = {{"value", r.str()}, {"terms", ordinal_to_json(r)}};
        o.text = r.str() + "\n";
      }
      return o;
    });
  }
  auto* ord_cb = ord->add_subcommand("cbrank", "CB-rank of a point, or CB rank and degree of a clopen set");
  ord_cb->add_option("--gamma", gamma_s, "a point");
  ord_cb->add_option("--clopen", clopen_s, "interval list JSON");
  ord_cb->add_option("--alpha", alpha_s, "space exponent (with --clopen)");
  ord_cb->add_option("--k", k, "space multiplier (with --clopen)");
  on(ord_cb, "ord cbrank", [&] {
    Output o;
    if (!gamma_s.empty()) {
      const Ordinal g = ordinal_arg(gamma_s, "gamma");
      const Ordinal r = point_cb_rank(g);
      o.input = {{"gamma", g.str()}};
      o.result = {{"rank", r.str()}};
      o.text = r.str() + "\n";
      return o;
    }
    if (clopen_s.empty() || alpha_s.empty()) throw InputError("ord cbrank: give --gamma, or --clopen with --alpha and --k");
    const SpaceSpec sp{ordinal_arg(alpha_s, "alpha"), k};
    if (k == 0) throw InputError("k: must be positive");
    auto j = json_arg(clopen_s);
    if (!j) throw InputError("clopen: expected an interval list");
    const auto c = clopen_from_json(sp, *j);
    const auto r = cb_rank_degree(c);
    o.input = {{"alpha", sp.alpha.str()}, {"k", k}, {"clopen", clopen_to_json(c)}};
    if (r.minus_one) {
      o.result = {{"rank", -1}};
      o.text = "-1\n";
    } else {
      o.result = {{"rank", r.rank.str()}, {"degree", r.degree}};
      o.text = "(" + r.rank.str() + ", " + std::to_string(r.degree) + ")\n";
    }
    return o;
  });
  auto* ord_sr = ord->add_subcommand("space-rank", "rank and degree of the clopen algebra of w^alpha*k+1");
  ord_sr->add_option("--alpha", alpha_s)->required();
  ord_sr->add_option("--k", k)->required();
  on(ord_sr, "ord space-rank", [&] {
    if (k == 0) throw InputError("k: must be positive");
    const SpaceSpec sp{ordinal_arg(alpha_s, "alpha"), k};
    const auto r = space_rank_degree(sp);
    Json chain = Json::array();
    for (const auto& lv : r.chain)
      chain.push_back({{"beta", lv.beta.str()}, {"whole_space_member", lv.whole_space_member},
                       {"quotient_atoms", lv.quotient_atoms ? Json(*lv.quotient_atoms) : Json("infinite")}});
    Output o;
    o.input = {{"alpha", sp.alpha.str()}, {"k", k}};
    o.result = {{"rank", r.rank.str()}, {"degree", r.degree}};
    o.evidence = {{"chain", chain}, {"symbolic", r.symbolic}};
    o.text = "(" + r.rank.str() + ", " + std::to_string(r.degree) + ")\n";
    return o;
  });

  // ef
  auto* ef = app.add_subcommand("ef", "Ehrenfeucht-Fraisse games");
  ef->require_subcommand(1);
  auto limits = [&] { return EfLimits{cfg.ef_size_max, cfg.ef_rounds_max}; };
  auto pair_input = [&](const FinStructure& a, const FinStructure& b) {
    return Json{{"a", structure_to_json(a)}, {"b", structure_to_json(b)}, {"rounds", rounds}};
  };
  auto pair_dot = [](const FinStructure& a, const FinStructure& b) { return to_dot(a, "A") + to_dot(b, "B"); };
  auto* ef_play_c = ef->add_subcommand("play", "decide the r-round game");
  auto* ef_dist = ef->add_subcommand("distinguish", "a sentence of rank <= r true in A and false in B");
  for (auto* sub : {ef_play_c, ef_dist}) {
    sub->add_option("--a", a_s, "structure: JSON, file, or shape:n (path, cycle, complete, edgeless, matching, order)")->required();
    sub->add_option("--b", b_s)->required();
    sub->add_option("--rounds,-r", rounds);
  }
  on(ef_play_c, "ef play", [&] {
    const auto a = structure_arg(a_s, "a"), b = structure_arg(b_s, "b");
    const auto r = ef_play(a, b, rounds, limits());
    Output o;
    o.input = pair_input(a, b);
    o.result = {{"equivalent", r.equivalent}, {"winner", r.equivalent ? "Duplicator" : "Spoiler"}, {"positions", r.positions}};
    if (r.opening) o.evidence = {{"opening", {{"structure", r.opening->in_a ? "A" : "B"}, {"element", r.opening->in_a ? a.id(r.opening->element) : b.id(r.opening->element)}}}};
    o.text = std::string(r.equivalent ? "Duplicator wins" : "Spoiler wins") + " the " + std::to_string(rounds) +
             "-round game (rank-" + std::to_string(rounds) + " evidence)\n";
    o.dot = pair_dot(a, b);
    return o;
  });
  on(ef_dist, "ef distinguish", [&] {
    const auto a = structure_arg(a_s, "a"), b = structure_arg(b_s, "b");
    const auto phi = distinguishing_sentence(a, b, rounds, limits());
    Output o;
    o.input = pair_input(a, b);
    if (phi) {
      o.result = {{"sentence", formula_str(*phi)}, {"qrank", qrank(*phi)}};
      o.evidence = {{"holds_in_a", model_check(a, *phi)}, {"holds_in_b", model_check(b, *phi)}};
      o.text = formula_str(*phi) + "\n";
    } else {
      o.result = {{"sentence", nullptr}, {"equivalent", true}};
      o.text = "no sentence of rank <= " + std::to_string(rounds) + " distinguishes them\n";
    }
    o.dot = pair_dot(a, b);
    return o;
  });
  auto* ef_chk = ef->add_subcommand("check", "model-check a sentence");
  ef_chk->add_option("--a", a_s)->required();
  ef_chk->add_option("--formula", formula_s)->required();
  on(ef_chk, "ef check", [&] {
    const auto a = structure_arg(a_s, "a");
    const auto phi = parse_formula(formula_s);
    const bool v = model_check(a, phi);
    Output o;
    o.input = {{"a", structure_to_json(a)}, {"formula", formula_str(phi)}};
    o.result = {{"holds", v}, {"qrank", qrank(phi)}};
    o.text = std::string(v ? "true" : "false") + "\n";
    return o;
  });
  auto* ef_hin = ef->add_subcommand("hintikka", "the rank-r Hintikka sentence of a structure");
  ef_hin->add_option("--a", a_s)->required();
  ef_hin->add_option("--rounds,-r", rounds);
  on(ef_hin, "ef hintikka", [&] {
    const auto a = structure_arg(a_s, "a");
    check_cap(static_cast<std::size_t>(a.size()), static_cast<std::size_t>(cfg.hintikka_size_max), "structure size");
    check_cap(static_cast<std::size_t>(std::max(rounds, 0)), static_cast<std::size_t>(cfg.hintikka_rank_max), "rank");
    const auto th = hintikka(a, rounds);
    if (tree_size(th) > 2'000'000) throw BoundExceeded("Hintikka sentence too large to print");
    Output o;
    o.input = {{"a", structure_to_json(a)}, {"rounds", rounds}};
    o.result = {{"sentence", formula_str(th)}, {"qrank", qrank(th)}, {"dag_size", dag_size(th)}, {"tree_size", tree_size(th)}};
    o.text = formula_str(th) + "\n";
    return o;
  });

  // tour and config
  auto* tour = app.add_subcommand("tour", "run the curated worked examples");
  tour->add_flag("--no-rigid", no_rigid, "leave out the Rigid backend");
  tour->add_option("--suite", suite_s, "run one suite only");
  on(tour, "tour", [&] {
    TourOptions opt;
    opt.include_rigid = !no_rigid;
    Output o;
    o.input = {{"include_rigid", opt.include_rigid}};
    Json bundle;
    if (suite_s.empty()) {
      bundle = demo_tour(cfg, opt);
    } else {
      o.input["suite"] = suite_s;
      const auto r = run_tour_suite(suite_s, cfg, opt);
      bundle = {{"pass", r.pass}, {"suites", Json::array({suite_to_json(r)})}};
    }
    o.result = {{"pass", bundle["pass"]}, {"suites", bundle["suites"]}};
    for (const auto& s : bundle["suites"]) {
      o.text += (s["pass"].get<bool>() ? "PASS " : "FAIL ") + s["name"].get<std::string>() + " (" +
                std::to_string(s["checks"].get<std::size_t>()) + " checks)\n";
      for (const auto& f : s["failures"]) o.text += "  " + f.get<std::string>() + "\n";
    }
    return o;
  });
  auto* cfg_cmd = app.add_subcommand("config", "print the effective desk configuration");
  on(cfg_cmd, "config", [&] {
    Output o;
    o.result = config_to_json(cfg);
    o.result.erase("formatVersion");
    o.input = {{"source", cfg.source}};
    o.text = o.result.dump(2) + "\n";
    return o;
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    // Help on a subcommand arrives as CallForHelp thrown from it.
    if (e.get_exit_code() == 0) {
      out << e.what() << "\n";
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    cfg = load_config(config_path);
    if (!action) throw InputError("no command given");
    Output o = action();
    if (format == "dot") {
      if (!o.dot) throw InputError("format: dot output is only available for fraisse build and ef play/distinguish");
      out << *o.dot;
    } else if (format == "json") {
      Json report = {{"formatVersion", kFormatVersion}, {"command", command}, {"input", o.input}, {"result", o.result},
                     {"deterministic", true}};
      if (!o.evidence.is_null()) report["evidence"] = o.evidence;
      out << dump_json(report) << "\n";
    } else {
      out << render_text(o);
    }
    return 0;
  } catch (const BoundExceeded& e) {
    err << "bound exceeded: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const OrdinalError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const StructureError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fmwb
