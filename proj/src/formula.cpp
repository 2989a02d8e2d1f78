#include "fmwb/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

#include "fmwb/errors.hpp"

namespace fmwb {

namespace {

struct Pool {
  std::mutex mu;
  std::unordered_map<std::string, Formula> nodes;
  std::uint64_t next = 0;
};

Pool& pool() {
  static Pool p;
  return p;
}

// Per-node facts, computed once at creation.
struct Facts {
  std::vector<int> free;
  int rank = 0;
  std::uint64_t tree = 1;
};

std::unordered_map<std::uint64_t, Facts>& facts() {
  static std::unordered_map<std::uint64_t, Facts> f;
  return f;
}

const Facts& facts_of(const Formula& f) {
  std::lock_guard<std::mutex> lock(pool().mu);
  return facts().at(f->id);
}

Formula intern(FormulaNode n) {
  std::string key = std::to_string(static_cast<int>(n.kind)) + "|" + n.rel + "|" + std::to_string(n.var) + "|";
  for (int a : n.args) key += std::to_string(a) + ",";
  key += "|";
  for (const auto& k : n.kids) key += std::to_string(k->id) + ",";
  auto& p = pool();
  std::lock_guard<std::mutex> lock(p.mu);
  if (auto it = p.nodes.find(key); it != p.nodes.end()) return it->second;
  Facts fx;
  std::vector<int> free = n.args;
  std::uint64_t tree = 1;
  for (const auto& k : n.kids) {
    const auto& kf = facts().at(k->id);
    free.insert(free.end(), kf.free.begin(), kf.free.end());
    fx.rank = std::max(fx.rank, kf.rank);
    tree = tree + kf.tree < tree ? ~std::uint64_t{0} : tree + kf.tree;
  }
  std::sort(free.begin(), free.end());
  free.erase(std::unique(free.begin(), free.end()), free.end());
  if (n.kind == FKind::Exists || n.kind == FKind::Forall) {
    free.erase(std::remove(free.begin(), free.end(), n.var), free.end());
    ++fx.rank;
  }
  fx.free = std::move(free);
  fx.tree = tree;
  n.id = p.next++;
  auto node = std::make_shared<const FormulaNode>(std::move(n));
  facts().emplace(node->id, std::move(fx));
  p.nodes.emplace(std::move(key), node);
  return node;
}

FormulaNode node(FKind k) {
  FormulaNode n;
  n.kind = k;
  return n;
}

std::vector<Formula> dedupe(std::vector<Formula> kids) {
  std::vector<Formula> out;
  for (auto& k : kids)
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(std::move(k));
  return out;
}

}  // namespace

Formula f_true() { return intern(node(FKind::True)); }
Formula f_false() { return intern(node(FKind::False)); }

Formula f_rel(const std::string& rel, std::vector<int> args) {
  auto n = node(FKind::Rel);
  n.rel = rel;
  n.args = std::move(args);
  return intern(std::move(n));
}

Formula f_eq(int x, int y) {
  auto n = node(FKind::Eq);
  n.args = {x, y};
  return intern(std::move(n));
}

Formula f_not(const Formula& f) {
  auto n = node(FKind::Not);
  n.kids = {f};
  return intern(std::move(n));
}

// The unit of the connective is dropped and its zero absorbs.
static std::vector<Formula> absorb(std::vector<Formula> kids, FKind unit, FKind zero, bool& zeroed) {
  std::vector<Formula> out;
  for (auto& k : kids) {
    if (k->kind == zero) zeroed = true;
    if (k->kind != unit) out.push_back(std::move(k));
  }
  return out;
}

Formula f_and(std::vector<Formula> kids) {
  bool zeroed = false;
  kids = dedupe(absorb(std::move(kids), FKind::True, FKind::False, zeroed));
  if (zeroed) return f_false();
  if (kids.empty()) return f_true();
  if (kids.size() == 1) return kids.front();
  auto n = node(FKind::And);
  n.kids = std::move(kids);
  return intern(std::move(n));
}

Formula f_or(std::vector<Formula> kids) {
  bool zeroed = false;
  kids = dedupe(absorb(std::move(kids), FKind::False, FKind::True, zeroed));
  if (zeroed) return f_true();
  if (kids.empty()) return f_false();
  if (kids.size() == 1) return kids.front();
  auto n = node(FKind::Or);
  n.kids = std::move(kids);
  return intern(std::move(n));
}

Formula f_exists(int var, const Formula& f) {
  auto n = node(FKind::Exists);
  n.var = var;
  n.kids = {f};
  return intern(std::move(n));
}

Formula f_forall(int var, const Formula& f) {
  auto n = node(FKind::Forall);
  n.var = var;
  n.kids = {f};
  return intern(std::move(n));
}

std::string var_name(int v) {
  static const char* names[] = {"x", "y", "z", "w", "u", "v"};
  if (v >= 0 && v < 6) return names[v];
  return "x" + std::to_string(v);
}

int qrank(const Formula& f) { return facts_of(f).rank; }
std::vector<int> free_vars(const Formula& f) { return facts_of(f).free; }
std::uint64_t tree_size(const Formula& f) { return facts_of(f).tree; }

std::size_t dag_size(const Formula& f) {
  std::vector<const FormulaNode*> stack{f.get()};
  std::set<std::uint64_t> seen;
  while (!stack.empty()) {
    const auto* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n->id).second) continue;
    for (const auto& k : n->kids) stack.push_back(k.get());
  }
  return seen.size();
}

std::string formula_str(const Formula& f) {
  switch (f->kind) {
    case FKind::True: return "true";
    case FKind::False: return "false";
    case FKind::Rel: {
      std::string s = "(rel " + f->rel;
      for (int a : f->args) s += " " + var_name(a);
      return s + ")";
    }
    case FKind::Eq: return "(= " + var_name(f->args[0]) + " " + var_name(f->args[1]) + ")";
    case FKind::Not: return "(not " + formula_str(f->kids[0]) + ")";
    case FKind::And:
    case FKind::Or: {
      std::string s = f->kind == FKind::And ? "(and" : "(or";
      for (const auto& k : f->kids) s += " " + formula_str(k);
      return s + ")";
    }
    case FKind::Exists: return "(E " + var_name(f->var) + " " + formula_str(f->kids[0]) + ")";
    case FKind::Forall: return "(A " + var_name(f->var) + " " + formula_str(f->kids[0]) + ")";
  }
  return "";
}

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) {
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) toks_.push_back(cur);
      cur.clear();
    };
    for (char c : text) {
      if (c == '(' || c == ')') {
        flush();
        toks_.push_back(std::string(1, c));
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        flush();
      } else {
        cur += c;
      }
    }
    flush();
  }

  Formula parse() {
    Formula f = formula();
    if (pos_ != toks_.size()) fail("trailing input '" + toks_[pos_] + "'");
    return f;
  }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, int> extra_;

  [[noreturn]] void fail(const std::string& why) const { throw InputError("formula: " + why); }

  const std::string& next() {
    if (pos_ >= toks_.size()) fail("unexpected end of input");
    return toks_[pos_++];
  }

  void expect(const std::string& t) {
    const auto& got = next();
    if (got != t) fail("expected '" + t + "' but found '" + got + "'");
  }

  int variable() {
    const std::string name = next();
    if (name == "(" || name == ")") fail("expected a variable");
    static const std::map<std::string, int> fixed = {{"x", 0}, {"y", 1}, {"z", 2}, {"w", 3}, {"u", 4}, {"v", 5}};
    if (auto it = fixed.find(name); it != fixed.end()) return it->second;
    if (name.size() > 1 && name[0] == 'x' && std::all_of(name.begin() + 1, name.end(), ::isdigit) && name.size() < 6)
      return std::stoi(name.substr(1));
    auto [it, fresh] = extra_.emplace(name, 1000 + static_cast<int>(extra_.size()));
    return it->second;
  }

  Formula formula() {
    const std::string t = next();
    if (t == "true") return f_true();
    if (t == "false") return f_false();
    if (t != "(") fail("unexpected token '" + t + "'");
    const std::string head = next();
    Formula out;
    if (head == "E" || head == "exists" || head == "A" || head == "forall") {
      const int v = variable();
      const Formula body = formula();
      out = (head == "E" || head == "exists") ? f_exists(v, body) : f_forall(v, body);
    } else if (head == "rel") {
      const std::string r = next();
      if (r == "(" || r == ")") fail("expected a relation name");
      std::vector<int> args;
      while (pos_ < toks_.size() && toks_[pos_] != ")") args.push_back(variable());
      out = f_rel(r, args);
    } else if (head == "=") {
      const int x = variable();
      const int y = variable();
      out = f_eq(x, y);
    } else if (head == "not") {
      out = f_not(formula());
    } else if (head == "and" || head == "or") {
      std::vector<Formula> kids;
      while (pos_ < toks_.size() && toks_[pos_] != ")") kids.push_back(formula());
      out = head == "and" ? f_and(kids) : f_or(kids);
    } else {
      fail("unknown head '" + head + "'");
    }
    expect(")");
    return out;
  }
};

class Evaluator {
 public:
  explicit Evaluator(const FinStructure& a) : a_(a) {}

  bool eval(const Formula& f, std::vector<int>& asg) {
    const auto& fv = facts_of(f).free;
    std::vector<std::int64_t> key{static_cast<std::int64_t>(f->id)};
    for (int v : fv) {
      if (v >= static_cast<int>(asg.size()) || asg[static_cast<std::size_t>(v)] < 0)
        throw InputError("variable " + var_name(v) + " is not assigned");
      key.push_back(asg[static_cast<std::size_t>(v)]);
    }
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const bool r = compute(f, asg);
    memo_.emplace(std::move(key), r);
    return r;
  }

 private:
  const FinStructure& a_;
  std::map<std::vector<std::int64_t>, bool> memo_;

  bool compute(const Formula& f, std::vector<int>& asg) {
    auto val = [&](int v) { return asg[static_cast<std::size_t>(v)]; };
    switch (f->kind) {
      case FKind::True: return true;
      case FKind::False: return false;
      case FKind::Eq: return val(f->args[0]) == val(f->args[1]);
      case FKind::Rel: {
        const int r = a_.signature().index_of(f->rel);
        Tuple t;
        for (int v : f->args) t.push_back(val(v));
        return a_.holds(r, t);
      }
      case FKind::Not: return !eval(f->kids[0], asg);
      case FKind::And:
        for (const auto& k : f->kids)
          if (!eval(k, asg)) return false;
        return true;
      case FKind::Or:
        for (const auto& k : f->kids)
          if (eval(k, asg)) return true;
        return false;
      case FKind::Exists:
      case FKind::Forall: {
        const bool want = f->kind == FKind::Exists;
        if (f->var >= static_cast<int>(asg.size())) asg.resize(static_cast<std::size_t>(f->var) + 1, -1);
        const int saved = asg[static_cast<std::size_t>(f->var)];
        bool result = !want;
        for (int e = 0; e < a_.size(); ++e) {
          asg[static_cast<std::size_t>(f->var)] = e;
          if (eval(f->kids[0], asg) == want) {
            result = want;
            break;
          }
        }
        asg[static_cast<std::size_t>(f->var)] = saved;
        return result;
      }
    }
    return false;
  }
};

void check_signature(const FinStructure& a, const Formula& f) {
  std::vector<const FormulaNode*> stack{f.get()};
  std::set<std::uint64_t> seen;
  while (!stack.empty()) {
    const auto* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n->id).second) continue;
    if (n->kind == FKind::Rel) {
      const int r = a.signature().index_of(n->rel);
      if (r < 0) throw InputError("relation '" + n->rel + "' is not in the signature " + a.signature().str());
      if (a.signature().relations[static_cast<std::size_t>(r)].arity != static_cast<int>(n->args.size()))
        throw InputError("relation '" + n->rel + "' used with the wrong arity");
    }
    for (const auto& k : n->kids) stack.push_back(k.get());
  }
}

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

bool evaluate(const FinStructure& a, const Formula& f, const std::vector<int>& assignment) {
  check_signature(a, f);
  std::vector<int> asg = assignment;
  return Evaluator(a).eval(f, asg);
}

bool model_check(const FinStructure& a, const Formula& f) {
  const auto fv = free_vars(f);
  if (!fv.empty()) throw InputError("model_check needs a sentence; free variable " + var_name(fv.front()));
  return evaluate(a, f, {});
}

}  // namespace fmwb
