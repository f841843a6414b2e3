#ifndef COXTL_TESTS_ORACLES_HPP
#define COXTL_TESTS_ORACLES_HPP

// Independent oracle models used by the tests: the groups are realised as
// (signed) permutations or dihedral pairs, with lengths obtained by BFS from
// the identity.  Nothing here touches the library's root-permutation tables,
// so agreement is a genuine cross-check.

#include "coxtl/coxeter.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace oracles {

using coxtl::Gen;
using coxtl::Word;

struct Model {
  using Elt = std::vector<int>;
  Elt id;
  // right multiplication by generator s
  std::function<Elt(const Elt&, Gen)> rmul;
  int rank = 0;

  Elt fold(const Word& w) const {
    Elt x = id;
    for (Gen s : w) x = rmul(x, s);
    return x;
  }
};

// A_n as S_{n+1}: s_k swaps positions k-1, k of the one-line notation.
inline Model model_A(int n) {
  Model m;
  m.rank = n;
  m.id.resize(n + 1);
  for (int i = 0; i <= n; ++i) m.id[i] = i + 1;
  m.rmul = [](const Model::Elt& x, Gen s) {
    Model::Elt y = x;
    std::swap(y[s], y[s + 1]);
    return y;
  };
  return m;
}

// B_n as signed permutations with the library's labelling: s_1 flips the sign
// of the first entry, s_k (k > 1) swaps entries k-1 and k.
inline Model model_B(int n) {
  Model m;
  m.rank = n;
  m.id.resize(n);
  for (int i = 0; i < n; ++i) m.id[i] = i + 1;
  m.rmul = [](const Model::Elt& x, Gen s) {
    Model::Elt y = x;
    if (s == 0)
      y[0] = -y[0];
    else
      std::swap(y[s - 1], y[s]);
    return y;
  };
  return m;
}

// D_n, branch-node labelling: s_1 is (u1,u2) -> (-u2,-u1), s_k (k >= 2)
// swaps entries k-1 and k.
inline Model model_D(int n) {
  Model m;
  m.rank = n;
  m.id.resize(n);
  for (int i = 0; i < n; ++i) m.id[i] = i + 1;
  m.rmul = [](const Model::Elt& x, Gen s) {
    Model::Elt y = x;
    if (s == 0) {
      int a = y[0], b = y[1];
      y[0] = -b;
      y[1] = -a;
    } else {
      std::swap(y[s - 1], y[s]);
    }
    return y;
  };
  return m;
}

// I2(m) as pairs (rotation mod m, flip).
inline Model model_I2(int mm) {
  Model m;
  m.rank = 2;
  m.id = {0, 0, mm};
  m.rmul = [](const Model::Elt& x, Gen s) {
    // x = (k, f, m); right multiply by generator: s1 = (0,1), s2 = (1,1);
    // (k1,f1)(k2,f2) = (k1 + (-1)^f1 k2 mod m, f1 xor f2)
    const int mmod = x[2];
    int k2 = s == 0 ? 0 : 1;
    int k = x[0] + (x[1] ? -k2 : k2);
    k = ((k % mmod) + mmod) % mmod;
    return Model::Elt{k, x[1] ^ 1, mmod};
  };
  return m;
}

// Whole group with BFS lengths.
struct ModelGroup {
  Model model;
  std::map<Model::Elt, int> length;

  explicit ModelGroup(Model m) : model(std::move(m)) {
    std::vector<Model::Elt> frontier{model.id};
    length[model.id] = 0;
    while (!frontier.empty()) {
      std::vector<Model::Elt> next;
      for (const auto& x : frontier) {
        for (Gen s = 0; s < model.rank; ++s) {
          auto y = model.rmul(x, s);
          if (length.emplace(y, length[x] + 1).second) next.push_back(y);
        }
      }
      frontier = std::move(next);
    }
  }

  std::size_t order() const { return length.size(); }
  int len(const Model::Elt& x) const { return length.at(x); }

  // All reduced words of x, by peeling right descents.
  std::vector<Word> reduced_words(const Model::Elt& x) const {
    if (x == model.id) return {Word{}};
    std::vector<Word> out;
    for (Gen s = 0; s < model.rank; ++s) {
      auto y = model.rmul(x, s);
      if (len(y) < len(x)) {
        for (Word w : reduced_words(y)) {
          w.push_back(s);
          out.push_back(std::move(w));
        }
      }
    }
    return out;
  }

  // Is x fully commutative in the introduction's sense: do all reduced words
  // form a single commutation class?
  bool fully_commutative(const coxtl::CoxeterGraph& g, const Model::Elt& x) const {
    auto words = reduced_words(x);
    std::set<Word> all(words.begin(), words.end());
    std::set<Word> reached;
    std::vector<Word> queue{*all.begin()};
    reached.insert(*all.begin());
    while (!queue.empty()) {
      Word w = queue.back();
      queue.pop_back();
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i] != w[i + 1] && g.commute(w[i], w[i + 1])) {
          std::swap(w[i], w[i + 1]);
          if (reached.insert(w).second) queue.push_back(w);
          std::swap(w[i], w[i + 1]);
        }
      }
    }
    return reached == all;
  }
};

// Does `sub` occur as a (not necessarily contiguous) subword of `word`?
inline bool is_subword(const Word& sub, const Word& word) {
  std::size_t i = 0;
  for (Gen s : word) {
    if (i < sub.size() && sub[i] == s) ++i;
  }
  return i == sub.size();
}

} // namespace oracles

#endif
