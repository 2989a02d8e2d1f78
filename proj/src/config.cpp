#include "fmwb/config.hpp"

#include <cstdlib>
#include <functional>
#include <map>

#include "fmwb/errors.hpp"

namespace fmwb {

namespace {

template <class T>
void read_field(const Json& j, const std::string& key, T& out) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw InputError("config." + key + ": expected a non-negative integer");
  out = static_cast<T>(j.get<long long>());
}

// Keys and their fields, in one place.
template <class F>
void for_fields(DeskConfig& c, F&& f) {
  f("fraisse.bound", c.fraisse_bound);
  f("fraisse.bound_max", c.fraisse_bound_max);
  f("fraisse.generic_n", c.generic_n);
  f("fraisse.generic_n_max", c.generic_n_max);
  f("fraisse.generic_e_bound", c.generic_e_bound);
  f("atoms.ordinal_alpha_max", c.ordinal_alpha_max);
  f("atoms.s_max", c.s_max);
  f("atoms.s_max_cap", c.s_max_cap);
  f("atoms.tuple_n_max", c.tuple_n_max);
  f("fm.gauge_s_max", c.gauge_s_max);
  f("fm.gauge_b_max", c.gauge_b_max);
  f("fm.rank_s_max", c.rank_s_max);
  f("fm.rank_depth", c.rank_depth);
  f("fm.rank_depth_max", c.rank_depth_max);
  f("ef.size_max", c.ef_size_max);
  f("ef.rounds_max", c.ef_rounds_max);
  f("ef.hintikka_size_max", c.hintikka_size_max);
  f("ef.hintikka_rank_max", c.hintikka_rank_max);
}

}  // namespace

DeskConfig config_from_json(const Json& j) {
  DeskConfig c;
  if (!j.is_object()) throw InputError("config: expected an object");
  std::map<std::string, std::function<void(const Json&)>> setters;
  for_fields(c, [&](const std::string& key, auto& field) {
    setters[key] = [&field, key](const Json& v) { read_field(v, key, field); };
  });
  for (auto sec = j.begin(); sec != j.end(); ++sec) {
    if (sec.key() == "formatVersion") continue;
    if (!sec->is_object()) throw InputError("config." + sec.key() + ": unknown section");
    for (auto it = sec->begin(); it != sec->end(); ++it) {
      const std::string key = sec.key() + "." + it.key();
      auto s = setters.find(key);
      if (s == setters.end()) throw InputError("config." + key + ": unknown key");
      s->second(it.value());
    }
  }
  if (c.fraisse_bound > c.fraisse_bound_max || c.generic_n > c.generic_n_max || c.s_max > c.s_max_cap ||
      c.rank_depth > c.rank_depth_max)
    throw InputError("config: a default exceeds its cap");
  return c;
}

Json config_to_json(const DeskConfig& c) {
  Json out = {{"formatVersion", kFormatVersion}};
  DeskConfig copy = c;
  for_fields(copy, [&](const std::string& key, auto& field) {
    const auto dot = key.find('.');
    out[key.substr(0, dot)][key.substr(dot + 1)] = field;
  });
  return out;
}

DeskConfig load_config(const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty())
    if (const char* env = std::getenv("FMWB_CONFIG")) path = env;
  if (path.empty()) return {};
  DeskConfig c = config_from_json(read_json_file(path));
  c.source = path;
  return c;
}

}  // namespace fmwb
