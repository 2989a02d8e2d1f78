#include "fmwb/efgames.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "fmwb/errors.hpp"

namespace fmwb {

namespace {

void check_inputs(const FinStructure& a, const FinStructure& b, int r, const EfLimits& limits) {
  if (!(a.signature() == b.signature()))
    throw InputError("signature mismatch: " + a.signature().str() + " vs " + b.signature().str());
  if (r < 0) throw InputError("number of rounds must be non-negative");
  if (a.size() > limits.max_size || b.size() > limits.max_size)
    throw BoundExceeded("structures are limited to " + std::to_string(limits.max_size) + " elements");
  if (r > limits.max_rounds) throw BoundExceeded("games are limited to " + std::to_string(limits.max_rounds) + " rounds");
}

/// Calls f(positions) for every tuple of the given arity over 0..m that
/// mentions m.
template <class F>
void tuples_with_last(int m, int arity, F&& f) {
  std::vector<int> t(static_cast<std::size_t>(arity), 0);
  for (;;) {
    if (std::find(t.begin(), t.end(), m) != t.end()) f(t);
    int i = arity - 1;
    while (i >= 0 && ++t[static_cast<std::size_t>(i)] > m) t[static_cast<std::size_t>(i--)] = 0;
    if (i < 0) return;
  }
}

class Game {
 public:
  Game(const FinStructure& a, const FinStructure& b) : s_{&a, &b} {}

  /// Side 0 is A. xs/ys are the played elements on the true side t and the
  /// other side; returns a literal over variables 0..k that holds of xs + c
  /// but not of ys + d, or none when the extension is still a partial
  /// isomorphism.
  std::optional<Formula> clash(int t, const std::vector<int>& xs, const std::vector<int>& ys, int c, int d) const {
    const FinStructure& x = *s_[t];
    const FinStructure& y = *s_[1 - t];
    const int k = static_cast<int>(xs.size());
    for (int i = 0; i < k; ++i) {
      const bool ex = xs[static_cast<std::size_t>(i)] == c, ey = ys[static_cast<std::size_t>(i)] == d;
      if (ex != ey) return ex ? f_eq(k, i) : f_not(f_eq(k, i));
    }
    const auto& sig = x.signature();
    for (std::size_t r = 0; r < sig.size(); ++r) {
      std::optional<Formula> found;
      tuples_with_last(k, sig.relations[r].arity, [&](const std::vector<int>& vars) {
        if (found) return;
        Tuple tx, ty;
        for (int v : vars) {
          tx.push_back(v == k ? c : xs[static_cast<std::size_t>(v)]);
          ty.push_back(v == k ? d : ys[static_cast<std::size_t>(v)]);
        }
        const bool hx = x.holds(static_cast<int>(r), tx), hy = y.holds(static_cast<int>(r), ty);
        if (hx != hy) found = hx ? f_rel(sig.relations[r].name, vars) : f_not(f_rel(sig.relations[r].name, vars));
      });
      if (found) return found;
    }
    return std::nullopt;
  }

  bool extends(const std::vector<int>& pa, const std::vector<int>& pb, int a, int b) const {
    return !clash(0, pa, pb, a, b);
  }

  /// Duplicator wins r more rounds from the position pa <-> pb.
  bool duplicator_wins(std::vector<int>& pa, std::vector<int>& pb, int r) {
    if (r == 0) return true;
    const std::string key = position_key(pa, pb, r);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool wins = true;
    for (int side = 0; side < 2 && wins; ++side)
      for (int e = 0; e < s_[side]->size() && wins; ++e)
        if (!answerable(pa, pb, side, e, r)) wins = false;
    memo_.emplace(key, wins);
    return wins;
  }

  /// Spoiler's moves that win from the position: (side, element).
  std::vector<std::pair<int, int>> winning_moves(std::vector<int>& pa, std::vector<int>& pb, int r) {
    std::vector<std::pair<int, int>> out;
    if (r == 0) return out;
    for (int side = 0; side < 2; ++side)
      for (int e = 0; e < s_[side]->size(); ++e)
        if (!answerable(pa, pb, side, e, r)) out.emplace_back(side, e);
    return out;
  }

  std::size_t positions() const { return memo_.size(); }
  const FinStructure& side(int t) const { return *s_[t]; }

 private:
  const FinStructure* s_[2];
  std::unordered_map<std::string, bool> memo_;

  std::string position_key(const std::vector<int>& pa, const std::vector<int>& pb, int r) const {
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < pa.size(); ++i) pairs.emplace_back(pa[i], pb[i]);
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    std::string key(1, static_cast<char>(r));
    for (auto [x, y] : pairs) {
      key += static_cast<char>(x);
      key += static_cast<char>(y);
    }
    return key;
  }

  bool answerable(std::vector<int>& pa, std::vector<int>& pb, int side, int e, int r) {
    auto& mine = side == 0 ? pa : pb;
    // Replaying a pebbled element gains Spoiler nothing.
    if (std::find(mine.begin(), mine.end(), e) != mine.end()) return true;
    for (int f = 0; f < s_[1 - side]->size(); ++f) {
      const int a = side == 0 ? e : f, b = side == 0 ? f : e;
      if (!extends(pa, pb, a, b)) continue;
      pa.push_back(a);
      pb.push_back(b);
      const bool ok = duplicator_wins(pa, pb, r - 1);
      pa.pop_back();
      pb.pop_back();
      if (ok) return true;
    }
    return false;
  }
};

class Extractor {
 public:
  explicit Extractor(Game& g) : g_(g) {}

  /// Spoiler wins r rounds from pa <-> pb. Returns a formula with free
  /// variables 0..k-1 true on side t (at its pebbles) and false on 1-t.
  Formula dist(int t, std::vector<int>& pa, std::vector<int>& pb, int r) {
    std::string key = std::to_string(t) + ":" + std::to_string(r) + ":";
    for (std::size_t i = 0; i < pa.size(); ++i) key += std::to_string(pa[i]) + "," + std::to_string(pb[i]) + ";";
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const int k = static_cast<int>(pa.size());
    std::optional<Formula> best;
    for (auto [side, e] : g_.winning_moves(pa, pb, r)) {
      // A move on the true side gives an existential, otherwise a universal.
      const bool exists = side == t;
      const int body_side = exists ? t : 1 - t;  // side where each piece is true
      const int killed_side = 1 - body_side;
      std::vector<Formula> pieces;
      std::vector<int> replies;
      for (int f = 0; f < g_.side(1 - side).size(); ++f) {
        const int a = side == 0 ? e : f, b = side == 0 ? f : e;
        auto& bx = body_side == 0 ? pa : pb;
        auto& by = body_side == 0 ? pb : pa;
        const int cx = body_side == 0 ? a : b, cy = body_side == 0 ? b : a;
        Formula piece;
        if (auto lit = g_.clash(body_side, bx, by, cx, cy)) {
          piece = *lit;
        } else {
          pa.push_back(a);
          pb.push_back(b);
          piece = dist(body_side, pa, pb, r - 1);
          pa.pop_back();
          pb.pop_back();
        }
        pieces.push_back(piece);
        replies.push_back(f);
      }
      // Keep a small set of pieces that still fails at every reply.
      auto& base = killed_side == 0 ? pa : pb;
      std::vector<std::vector<bool>> kills(pieces.size(), std::vector<bool>(replies.size()));
      for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = 0; j < replies.size(); ++j) {
          std::vector<int> asg = base;
          asg.push_back(replies[j]);
          kills[i][j] = !evaluate(g_.side(killed_side), pieces[i], asg);
        }
      std::vector<bool> covered(replies.size(), false);
      std::vector<Formula> chosen;
      for (;;) {
        std::size_t best_i = pieces.size(), best_n = 0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
          std::size_t n = 0;
          for (std::size_t j = 0; j < replies.size(); ++j) n += kills[i][j] && !covered[j];
          if (n > best_n || (n == best_n && n > 0 && tree_size(pieces[i]) < tree_size(pieces[best_i]))) {
            best_n = n;
            best_i = i;
          }
        }
        if (best_n == 0) break;
        chosen.push_back(pieces[best_i]);
        for (std::size_t j = 0; j < replies.size(); ++j) covered[j] = covered[j] || kills[best_i][j];
      }
      Formula cand;
      if (exists) {
        cand = f_exists(k, f_and(chosen));
      } else {
        std::vector<Formula> negs;
        for (const auto& c : chosen) negs.push_back(negate(c));
        cand = f_forall(k, f_or(negs));
      }
      if (!best || tree_size(cand) < tree_size(*best) ||
          (tree_size(cand) == tree_size(*best) && formula_str(cand) < formula_str(*best)))
        best = cand;
    }
    memo_.emplace(std::move(key), *best);
    return *best;
  }

 private:
  Game& g_;
  std::map<std::string, Formula> memo_;

  static Formula negate(const Formula& f) { return f->kind == FKind::Not ? f->kids[0] : f_not(f); }
};

}  // namespace

EfResult ef_play(const FinStructure& a, const FinStructure& b, int r, const EfLimits& limits) {
  check_inputs(a, b, r, limits);
  Game g(a, b);
  std::vector<int> pa, pb;
  EfResult res;
  res.rounds = r;
  res.equivalent = g.duplicator_wins(pa, pb, r);
  if (!res.equivalent) {
    const auto moves = g.winning_moves(pa, pb, r);
    res.opening = EfMove{moves.front().first == 0, moves.front().second};
  }
  res.positions = g.positions();
  return res;
}

bool ef_equivalent(const FinStructure& a, const FinStructure& b, int r, const EfLimits& limits) {
  return ef_play(a, b, r, limits).equivalent;
}

std::optional<Formula> distinguishing_sentence(const FinStructure& a, const FinStructure& b, int r, const EfLimits& limits) {
  check_inputs(a, b, r, limits);
  Game g(a, b);
  std::vector<int> pa, pb;
  if (g.duplicator_wins(pa, pb, r)) return std::nullopt;
  Extractor ex(g);
  const Formula phi = ex.dist(0, pa, pb, r);
  if (qrank(phi) > r || !model_check(a, phi) || model_check(b, phi))
    throw std::logic_error("extracted sentence failed its re-check: " + formula_str(phi));
  return phi;
}

namespace {

class HintikkaBuilder {
 public:
  explicit HintikkaBuilder(const FinStructure& a) : a_(a) {}

  Formula theta(std::vector<int>& tuple, int r) {
    std::string key = std::to_string(r) + ":";
    for (int e : tuple) key += std::to_string(e) + ",";
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Formula> parts{atomic(tuple)};
    if (r > 0) {
      const int k = static_cast<int>(tuple.size());
      std::vector<Formula> options;
      for (int e = 0; e < a_.size(); ++e) {
        tuple.push_back(e);
        const Formula sub = theta(tuple, r - 1);
        tuple.pop_back();
        parts.push_back(f_exists(k, sub));
        options.push_back(sub);
      }
      parts.push_back(f_forall(k, f_or(options)));
    }
    Formula out = f_and(parts);
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  const FinStructure& a_;
  std::map<std::string, Formula> memo_;

  Formula atomic(const std::vector<int>& tuple) const {
    std::vector<Formula> lits;
    const int k = static_cast<int>(tuple.size());
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        const Formula eq = f_eq(i, j);
        lits.push_back(tuple[static_cast<std::size_t>(i)] == tuple[static_cast<std::size_t>(j)] ? eq : f_not(eq));
      }
    const auto& sig = a_.signature();
    for (std::size_t r = 0; r < sig.size(); ++r) {
      const int arity = sig.relations[r].arity;
      if (k == 0) continue;
      std::vector<int> vars(static_cast<std::size_t>(arity), 0);
      for (;;) {
        Tuple t;
        for (int v : vars) t.push_back(tuple[static_cast<std::size_t>(v)]);
        const Formula atom = f_rel(sig.relations[r].name, vars);
        lits.push_back(a_.holds(static_cast<int>(r), t) ? atom : f_not(atom));
        int i = 0;
        while (i < arity && ++vars[static_cast<std::size_t>(i)] >= k) vars[static_cast<std::size_t>(i++)] = 0;
        if (i == arity) break;
      }
    }
    return f_and(lits);
  }
};

}  // namespace

Formula hintikka(const FinStructure& a, int r) {
  if (r < 0) throw InputError("rank must be non-negative");
  if (a.size() > 8 || r > 3) throw BoundExceeded("Hintikka sentences are limited to 8 elements and rank 3");
  HintikkaBuilder h(a);
  std::vector<int> tuple;
  return h.theta(tuple, r);
}

}  // namespace fmwb
