#include "coxtl/coxeter.hpp"

#include "coxtl/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

namespace coxtl {

/* ------------------------------------------------------------------ */
/*  CoxeterGraph                                                       */
/* ------------------------------------------------------------------ */

std::string type_name(CoxeterType t) {
  switch (t) {
    case CoxeterType::A: return "A";
    case CoxeterType::B: return "B";
    case CoxeterType::D: return "D";
    case CoxeterType::I2: return "I2";
    case CoxeterType::F4: return "F";
    case CoxeterType::H3: case CoxeterType::H4: return "H";
    case CoxeterType::E6: case CoxeterType::E7: case CoxeterType::E8: return "E";
  }
  return "?";
}

namespace {

constexpr int kMaxRank = 12;

std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

} // namespace

CoxeterGraph CoxeterGraph::build(CoxeterType type, int rank_or_m, GraphOptions opts) {
  CoxeterGraph g;
  g.type_ = type;
  int n = rank_or_m;

  auto chain_rank = [&](int lo, int hi) {
    if (n < lo || n > hi)
      throw ContractError("unsupported rank " + std::to_string(n) + " for type " +
                          type_name(type));
  };

  switch (type) {
    case CoxeterType::A: chain_rank(1, kMaxRank); g.rank_ = n; break;
    case CoxeterType::B: chain_rank(2, kMaxRank); g.rank_ = n; break;
    case CoxeterType::D:
      if (n == 3 && !opts.allow_d3_alias)
        throw ContractError("D3 rejected by default; it is A3 under the D labelling "
                            "(enable the alias to accept it)");
      chain_rank(3, kMaxRank);
      g.rank_ = n;
      break;
    case CoxeterType::I2:
      if (n < 3) throw ContractError("I2(m) requires 3 <= m < infinity");
      g.rank_ = 2;
      g.m_ = n;
      break;
    case CoxeterType::F4: chain_rank(4, 4); g.rank_ = 4; break;
    case CoxeterType::H3: chain_rank(3, 3); g.rank_ = 3; break;
    case CoxeterType::H4: chain_rank(4, 4); g.rank_ = 4; break;
    case CoxeterType::E6: chain_rank(6, 6); g.rank_ = 6; break;
    case CoxeterType::E7: chain_rank(7, 7); g.rank_ = 7; break;
    case CoxeterType::E8: chain_rank(8, 8); g.rank_ = 8; break;
  }

  const int r = g.rank_;
  g.mat_.assign(static_cast<std::size_t>(r) * r, 2);
  for (int i = 0; i < r; ++i) g.mat_[static_cast<std::size_t>(i) * r + i] = 1;
  auto set_bond = [&](int i, int j, int m) {
    g.mat_[static_cast<std::size_t>(i) * r + j] = m;
    g.mat_[static_cast<std::size_t>(j) * r + i] = m;
  };

  switch (type) {
    case CoxeterType::A:
      for (int i = 0; i + 1 < r; ++i) set_bond(i, i + 1, 3);
      break;
    case CoxeterType::B:
      set_bond(0, 1, 4);
      for (int i = 1; i + 1 < r; ++i) set_bond(i, i + 1, 3);
      break;
    case CoxeterType::D:
      // s3 is the branch node; s1, s2 commute with everything except s3.
      set_bond(0, 2, 3);
      set_bond(1, 2, 3);
      for (int i = 2; i + 1 < r; ++i) set_bond(i, i + 1, 3);
      break;
    case CoxeterType::I2:
      set_bond(0, 1, g.m_);
      break;
    case CoxeterType::F4:
      set_bond(0, 1, 3);
      set_bond(1, 2, 4);
      set_bond(2, 3, 3);
      break;
    case CoxeterType::H3:
    case CoxeterType::H4:
      set_bond(0, 1, 5);
      for (int i = 1; i + 1 < r; ++i) set_bond(i, i + 1, 3);
      break;
    case CoxeterType::E6:
    case CoxeterType::E7:
    case CoxeterType::E8:
      // Bourbaki: chain 1-3-4-5-...-n with 2 attached to 4.
      set_bond(0, 2, 3);
      set_bond(1, 3, 3);
      for (int i = 2; i + 1 < r; ++i) set_bond(i, i + 1, 3);
      break;
  }
  return g;
}

std::string CoxeterGraph::label() const {
  if (type_ == CoxeterType::I2) return "I2(" + std::to_string(m_) + ")";
  return type_name(type_) + std::to_string(rank_);
}

std::uint64_t CoxeterGraph::group_order() const {
  switch (type_) {
    case CoxeterType::A: return factorial(rank_ + 1);
    case CoxeterType::B: return (std::uint64_t{1} << rank_) * factorial(rank_);
    case CoxeterType::D: return (std::uint64_t{1} << (rank_ - 1)) * factorial(rank_);
    case CoxeterType::I2: return 2ull * static_cast<std::uint64_t>(m_);
    case CoxeterType::F4: return 1152;
    case CoxeterType::H3: return 120;
    case CoxeterType::H4: return 14400;
    case CoxeterType::E6: return 51840;
    case CoxeterType::E7: return 2903040;
    case CoxeterType::E8: return 696729600;
  }
  return 0;
}

bool CoxeterGraph::contains_d4_subgraph() const {
  for (Gen c = 0; c < rank_; ++c) {
    std::vector<Gen> simple_nbrs;
    for (Gen t = 0; t < rank_; ++t)
      if (t != c && bond(c, t) == 3) simple_nbrs.push_back(t);
    if (simple_nbrs.size() < 3) continue;
    const std::size_t k = simple_nbrs.size();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        for (std::size_t l = j + 1; l < k; ++l)
          if (commute(simple_nbrs[i], simple_nbrs[j]) &&
              commute(simple_nbrs[i], simple_nbrs[l]) &&
              commute(simple_nbrs[j], simple_nbrs[l]))
            return true;
  }
  return false;
}

/* ------------------------------------------------------------------ */
/*  Root systems                                                       */
/* ------------------------------------------------------------------ */

namespace {

/*
  Exact scalars for the reflection representation.  A value is a + b*omega
  where omega^2 = u*omega + w for ring constants (u, w): omega = sqrt(2) for
  graphs with a bond of order 4, omega = golden ratio for order 5, unused for
  simply-laced graphs.  Root coordinates stay small, so plain 64-bit
  arithmetic is exact.
*/
struct RingSpec {
  std::int64_t u = 0, w = 0;
};

struct QuadInt {
  std::int64_t a = 0, b = 0;
  friend bool operator==(const QuadInt&, const QuadInt&) = default;
};

QuadInt qmul(const QuadInt& p, const QuadInt& q, const RingSpec& ring) {
  return {p.a * q.a + p.b * q.b * ring.w, p.a * q.b + p.b * q.a + p.b * q.b * ring.u};
}

using RootVec = std::vector<QuadInt>;

struct RootVecHash {
  std::size_t operator()(const RootVec& v) const {
    std::size_t h = 0x811c9dc5u;
    for (const QuadInt& q : v) {
      h = (h ^ static_cast<std::size_t>(q.a)) * 0x100000001b3ull;
      h = (h ^ static_cast<std::size_t>(q.b)) * 0x100000001b3ull;
    }
    return h;
  }
};

struct RootAction {
  int n_pos = 0;                                    // number of positive roots
  std::vector<std::vector<std::uint16_t>> genperm;  // rank x (2 * n_pos)
  std::vector<std::uint16_t> alpha;                 // index of each simple root
};

// Positive roots by closure from the simple roots; a generator permutes the
// positive roots other than its own simple root.
RootAction build_root_action_coords(const CoxeterGraph& g) {
  const int rank = g.rank();
  RingSpec ring{0, 0};
  for (Gen s = 0; s < rank; ++s)
    for (Gen t = 0; t < rank; ++t) {
      if (g.bond(s, t) == 4) ring = RingSpec{0, 2};
      if (g.bond(s, t) == 5) {
        if (ring.w == 2)
          throw ContractError("mixed bond orders 4 and 5 are not supported");
        ring = RingSpec{1, 1};
      }
      if (g.bond(s, t) > 5 && s != t)
        throw ContractError("bond order > 5 outside rank 2 is not supported");
    }

  // c(r,t) = 2 cos(pi/m(r,t)) with the sign convention of the symmetrised
  // Cartan matrix: 2 on the diagonal, -1 / -omega off it.
  auto cartan = [&](Gen r, Gen t) -> QuadInt {
    if (r == t) return {2, 0};
    switch (g.bond(r, t)) {
      case 2: return {0, 0};
      case 3: return {-1, 0};
      default: return {0, -1}; // order 4 or 5
    }
  };

  auto reflect = [&](const RootVec& x, Gen t) {
    QuadInt dot{0, 0};
    for (Gen r = 0; r < rank; ++r) {
      const QuadInt c = cartan(r, t);
      const QuadInt p = qmul(x[r], c, ring);
      dot.a += p.a;
      dot.b += p.b;
    }
    RootVec y = x;
    y[t].a -= dot.a;
    y[t].b -= dot.b;
    return y;
  };

  std::vector<RootVec> roots;
  std::unordered_map<RootVec, std::uint16_t, RootVecHash> index;
  for (Gen s = 0; s < rank; ++s) {
    RootVec a(rank);
    a[s] = {1, 0};
    index.emplace(a, static_cast<std::uint16_t>(roots.size()));
    roots.push_back(std::move(a));
  }
  for (std::size_t head = 0; head < roots.size(); ++head) {
    for (Gen t = 0; t < rank; ++t) {
      if (head == static_cast<std::size_t>(t) && head < static_cast<std::size_t>(rank))
        continue; // sigma_t(alpha_t) is negative
      RootVec y = reflect(roots[head], t);
      if (!index.contains(y)) {
        index.emplace(y, static_cast<std::uint16_t>(roots.size()));
        roots.push_back(std::move(y));
      }
    }
  }

  RootAction act;
  act.n_pos = static_cast<int>(roots.size());
  const int n2 = 2 * act.n_pos;
  act.alpha.resize(rank);
  for (Gen s = 0; s < rank; ++s) act.alpha[s] = s;
  act.genperm.assign(rank, std::vector<std::uint16_t>(n2));
  for (Gen t = 0; t < rank; ++t) {
    for (int i = 0; i < act.n_pos; ++i) {
      std::uint16_t img;
      if (i == t) {
        img = static_cast<std::uint16_t>(t + act.n_pos);
      } else {
        auto it = index.find(reflect(roots[i], t));
        if (it == index.end()) throw InternalError("root closure is not closed");
        img = it->second;
      }
      act.genperm[t][i] = img;
      act.genperm[t][i + act.n_pos] =
          static_cast<std::uint16_t>(img >= act.n_pos ? img - act.n_pos : img + act.n_pos);
    }
  }
  return act;
}

struct Key {
  std::array<std::uint16_t, kMaxRank> img{};
  friend bool operator==(const Key&, const Key&) = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint16_t v : k.img) h = (h ^ v) * 0x100000001b3ull;
    return static_cast<std::size_t>(h);
  }
};

} // namespace

/* ------------------------------------------------------------------ */
/*  GroupTable construction                                            */
/* ------------------------------------------------------------------ */

/*
  Dihedral tables in closed form.  Every element other than e and the longest
  element has the unique reduced word alt(a, L): the alternating word of
  length L starting with generator a.  Ids in (length, word) order:
  0 = e, 2L-1 = alt(0, L), 2L = alt(1, L) for 1 <= L < m, 2m-1 = the longest
  element.  Building these directly avoids materialising quadratically many
  root images for large m.
*/
std::shared_ptr<GroupTable> GroupTable::build_dihedral(int m) {
  auto alt_id = [](int a, int L) { return static_cast<EltId>(2 * L - 1 + a); };
  const EltId w0 = static_cast<EltId>(2 * m - 1);
  const std::uint32_t size = 2 * static_cast<std::uint32_t>(m);

  auto table = std::shared_ptr<GroupTable>(new GroupTable());
  GroupTable& t = *table;
  t.length_.resize(size);
  t.rshift_.resize(size * 2);
  t.lshift_.resize(size * 2);
  t.inverse_.resize(size);
  t.parent_.assign(size, 0);
  t.parent_gen_.assign(size, 0);
  t.rdesc_.assign(size, 0);
  t.ldesc_.assign(size, 0);
  t.content_.assign(size, 0);

  t.length_[0] = 0;
  t.length_[w0] = static_cast<std::uint16_t>(m);
  t.inverse_[0] = 0;
  t.inverse_[w0] = w0;
  t.rdesc_[w0] = t.ldesc_[w0] = 3;
  t.content_[w0] = 3;
  t.parent_gen_[w0] = 0;
  t.parent_[w0] = alt_id(1, m - 1);
  for (int s = 0; s < 2; ++s) {
    t.rshift_[0 * 2 + s] = t.lshift_[0 * 2 + s] = alt_id(s, 1);
    // peeling s off the longest element leaves the rep ending (starting)
    // with the other letter
    t.rshift_[static_cast<std::size_t>(w0) * 2 + s] =
        alt_id((m - 1) % 2 == 1 ? 1 - s : s, m - 1);
    t.lshift_[static_cast<std::size_t>(w0) * 2 + s] = alt_id(1 - s, m - 1);
  }

  for (int L = 1; L < m; ++L) {
    for (int a = 0; a < 2; ++a) {
      const EltId x = alt_id(a, L);
      const int last = L % 2 == 1 ? a : 1 - a;
      t.length_[x] = static_cast<std::uint16_t>(L);
      t.inverse_[x] = alt_id(last, L);
      t.rdesc_[x] = static_cast<std::uint16_t>(1u << last);
      t.ldesc_[x] = static_cast<std::uint16_t>(1u << a);
      t.content_[x] = static_cast<std::uint16_t>(L == 1 ? 1u << a : 3u);
      t.parent_gen_[x] = static_cast<Gen>(a);
      t.parent_[x] = L == 1 ? 0 : alt_id(1 - a, L - 1);
      for (int s = 0; s < 2; ++s) {
        t.rshift_[static_cast<std::size_t>(x) * 2 + s] =
            s == last ? (L == 1 ? 0 : alt_id(a, L - 1))
                      : (L + 1 == m ? w0 : alt_id(a, L + 1));
        t.lshift_[static_cast<std::size_t>(x) * 2 + s] =
            s == a ? (L == 1 ? 0 : alt_id(1 - a, L - 1))
                   : (L + 1 == m ? w0 : alt_id(s, L + 1));
      }
    }
  }

  t.strata_.resize(m + 2);
  t.strata_[0] = 0;
  for (int L = 1; L <= m; ++L) t.strata_[L] = static_cast<EltId>(2 * L - 1);
  t.strata_[m + 1] = size;
  return table;
}

std::shared_ptr<const GroupTable> GroupTable::build(const CoxeterGraph& graph,
                                                    TableOptions opts) {
  const std::uint64_t order = graph.group_order();
  if (order > opts.max_group_order && !opts.capacity_override)
    throw CapacityError(graph.label() + " has order " + std::to_string(order) +
                        ", above the configured bound " +
                        std::to_string(opts.max_group_order));

  if (graph.type() == CoxeterType::I2) {
    auto table = build_dihedral(static_cast<int>(order / 2));
    table->graph_ = graph;
    return table;
  }

  const int rank = graph.rank();
  RootAction act = build_root_action_coords(graph);
  const int n2 = 2 * act.n_pos;

  // Breadth-first closure.  An element is keyed by the images of the simple
  // roots, which determine its action on the whole root system.
  std::vector<std::vector<std::uint16_t>> perm;
  std::vector<std::uint16_t> len;
  std::unordered_map<Key, EltId, KeyHash> index;
  perm.reserve(order);
  len.reserve(order);

  auto key_of = [&](const std::vector<std::uint16_t>& p) {
    Key k;
    for (int i = 0; i < rank; ++i) k.img[i] = p[act.alpha[i]];
    return k;
  };

  {
    std::vector<std::uint16_t> id_perm(n2);
    std::iota(id_perm.begin(), id_perm.end(), 0);
    index.emplace(key_of(id_perm), 0);
    perm.push_back(std::move(id_perm));
    len.push_back(0);
  }

  std::vector<std::uint16_t> scratch(n2);
  EltId stratum_lo = 0, stratum_hi = 1;
  while (stratum_lo < stratum_hi) {
    for (EltId x = stratum_lo; x < stratum_hi; ++x) {
      for (Gen s = 0; s < rank; ++s) {
        if (perm[x][act.alpha[s]] >= act.n_pos) continue; // right descent
        const auto& ps = act.genperm[s];
        for (int r = 0; r < n2; ++r) scratch[r] = perm[x][ps[r]];
        Key k = key_of(scratch);
        if (index.emplace(k, static_cast<EltId>(perm.size())).second) {
          perm.push_back(scratch);
          len.push_back(static_cast<std::uint16_t>(len[x] + 1));
        }
      }
    }
    stratum_lo = stratum_hi;
    stratum_hi = static_cast<EltId>(perm.size());
  }

  const std::uint32_t size = static_cast<std::uint32_t>(perm.size());
  if (size != order)
    throw InternalError(graph.label() + ": enumeration found " + std::to_string(size) +
                        " elements, expected " + std::to_string(order));

  // Provisional shift tables, descent masks, inverses.
  std::vector<EltId> rsh(static_cast<std::size_t>(size) * rank);
  std::vector<EltId> lsh(static_cast<std::size_t>(size) * rank);
  std::vector<EltId> inv(size);
  std::vector<std::uint16_t> invperm(n2);
  for (EltId x = 0; x < size; ++x) {
    for (Gen s = 0; s < rank; ++s) {
      Key k;
      for (int i = 0; i < rank; ++i) k.img[i] = perm[x][act.genperm[s][act.alpha[i]]];
      rsh[static_cast<std::size_t>(x) * rank + s] = index.at(k);
      for (int i = 0; i < rank; ++i) k.img[i] = act.genperm[s][perm[x][act.alpha[i]]];
      lsh[static_cast<std::size_t>(x) * rank + s] = index.at(k);
    }
    for (int r = 0; r < n2; ++r) invperm[perm[x][r]] = static_cast<std::uint16_t>(r);
    Key k;
    for (int i = 0; i < rank; ++i) k.img[i] = invperm[act.alpha[i]];
    inv[x] = index.at(k);
  }
  perm.clear();
  perm.shrink_to_fit();
  index.clear();

  // Canonical-word parents: the first letter of the lexicographically least
  // reduced word is the least left descent.
  std::vector<Gen> pgen(size, 0);
  std::vector<EltId> par(size, 0);
  for (EltId x = 1; x < size; ++x) {
    for (Gen s = 0; s < rank; ++s) {
      EltId sx = lsh[static_cast<std::size_t>(x) * rank + s];
      if (len[sx] < len[x]) {
        pgen[x] = s;
        par[x] = sx;
        break;
      }
    }
  }

  // Final ids sort each length stratum by canonical word; comparing
  // (first letter, parent's final id) realises the lexicographic order
  // because parents sit in the previous, already sorted stratum.
  std::vector<EltId> final_of(size), prov_of(size);
  {
    std::vector<std::vector<EltId>> strata(len[size - 1] + 1);
    for (EltId x = 0; x < size; ++x) strata[len[x]].push_back(x);
    EltId next = 0;
    for (auto& stratum : strata) {
      std::sort(stratum.begin(), stratum.end(), [&](EltId a, EltId b) {
        if (pgen[a] != pgen[b]) return pgen[a] < pgen[b];
        return final_of[par[a]] < final_of[par[b]];
      });
      for (EltId x : stratum) {
        final_of[x] = next;
        prov_of[next] = x;
        ++next;
      }
    }
  }

  auto table = std::shared_ptr<GroupTable>(new GroupTable());
  GroupTable& t = *table;
  t.graph_ = graph;
  t.length_.resize(size);
  t.rshift_.resize(static_cast<std::size_t>(size) * rank);
  t.lshift_.resize(static_cast<std::size_t>(size) * rank);
  t.inverse_.resize(size);
  t.parent_.resize(size);
  t.parent_gen_.resize(size);
  t.rdesc_.assign(size, 0);
  t.ldesc_.assign(size, 0);
  t.content_.assign(size, 0);
  for (EltId x = 0; x < size; ++x) {
    const EltId p = prov_of[x];
    t.length_[x] = len[p];
    t.inverse_[x] = final_of[inv[p]];
    t.parent_[x] = final_of[par[p]];
    t.parent_gen_[x] = pgen[p];
    for (Gen s = 0; s < rank; ++s) {
      EltId xs = final_of[rsh[static_cast<std::size_t>(p) * rank + s]];
      EltId sx = final_of[lsh[static_cast<std::size_t>(p) * rank + s]];
      t.rshift_[static_cast<std::size_t>(x) * rank + s] = xs;
      t.lshift_[static_cast<std::size_t>(x) * rank + s] = sx;
      if (len[rsh[static_cast<std::size_t>(p) * rank + s]] < t.length_[x])
        t.rdesc_[x] |= static_cast<std::uint16_t>(1u << s);
      if (len[lsh[static_cast<std::size_t>(p) * rank + s]] < t.length_[x])
        t.ldesc_[x] |= static_cast<std::uint16_t>(1u << s);
    }
  }
  for (EltId x = 1; x < size; ++x)
    t.content_[x] = static_cast<std::uint16_t>(t.content_[t.parent_[x]] |
                                               (1u << t.parent_gen_[x]));

  t.strata_.assign(t.length_[size - 1] + 2, 0);
  for (EltId x = 0; x < size; ++x) t.strata_[t.length_[x] + 1]++;
  for (std::size_t l = 1; l < t.strata_.size(); ++l) t.strata_[l] += t.strata_[l - 1];

  return table;
}

EltId GroupTable::stratum_begin(int l) const {
  if (l < 0) return 0;
  if (static_cast<std::size_t>(l) >= strata_.size()) return size();
  return strata_[l];
}

Word GroupTable::word(EltId x) const {
  Word w;
  w.reserve(length_[x]);
  while (x != 0) {
    w.push_back(parent_gen_[x]);
    x = parent_[x];
  }
  return w;
}

EltId GroupTable::from_word(std::span<const Gen> w) const {
  EltId x = 0;
  for (Gen s : w) {
    if (s >= rank()) throw ContractError("generator index out of range");
    x = rshift(x, s);
  }
  return x;
}

EltId GroupTable::mult(EltId x, EltId y) const {
  for (Gen s : word(y)) x = rshift(x, s);
  return x;
}

/* ------------------------------------------------------------------ */
/*  Words and full commutativity                                       */
/* ------------------------------------------------------------------ */

std::string word_to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(static_cast<int>(w[i]) + 1);
  }
  return s;
}

Word parse_word(std::string_view text, int rank) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "e") return {};
  if (text.empty()) throw ParseError("empty word (use 'e' for the identity)");
  Word w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view tok = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
    int v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 1 || v > rank)
      throw ParseError("bad generator '" + std::string(tok) + "' in word");
    w.push_back(static_cast<Gen>(v - 1));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return w;
}

bool has_braid_substring(const CoxeterGraph& graph, std::span<const Gen> w) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i + 2 <= n; ++i) {
    Gen a = w[i], b = w[i + 1];
    if (a == b) continue;
    int m = graph.bond(a, b);
    if (m < 3) continue;
    std::size_t run = 2;
    while (i + run < n && w[i + run] == (run % 2 == 0 ? a : b)) ++run;
    if (run >= static_cast<std::size_t>(m)) return true;
  }
  return false;
}

namespace {

// First (or last) consecutive braid factor of a letter sequence.
std::optional<std::pair<std::size_t, int>> braid_in_word(const CoxeterGraph& graph,
                                                         const Word& w, bool rightmost) {
  std::optional<std::pair<std::size_t, int>> found;
  const std::size_t n = w.size();
  for (std::size_t i = 0; i + 2 <= n; ++i) {
    Gen a = w[i], b = w[i + 1];
    if (a == b) continue;
    int m = graph.bond(a, b);
    if (m < 3 || static_cast<std::size_t>(m) > n - i) continue;
    std::size_t run = 2;
    while (i + run < n && w[i + run] == (run % 2 == 0 ? a : b)) ++run;
    if (run >= static_cast<std::size_t>(m)) {
      // Report the rightmost alignment of the factor within this run when
      // scanning for the rightmost occurrence.
      std::size_t start = rightmost ? i + run - static_cast<std::size_t>(m) : i;
      if (!found || rightmost) found = {{start, m}};
      if (!rightmost) return found;
    }
  }
  return found;
}

} // namespace

std::vector<Word> commutation_class(const CoxeterGraph& graph, const Word& w) {
  std::set<Word> seen;
  std::vector<Word> queue{w};
  seen.insert(w);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Word cur = queue[head];
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i] != cur[i + 1] && graph.commute(cur[i], cur[i + 1])) {
        std::swap(cur[i], cur[i + 1]);
        if (seen.insert(cur).second) queue.push_back(cur);
        std::swap(cur[i], cur[i + 1]);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

namespace {

std::optional<BraidFactorization> braid_factorization_of_word(const CoxeterGraph& graph,
                                                              const Word& start,
                                                              bool rightmost) {
  // Explore the commutation class in lexicographic order so the reported
  // factorisation is deterministic.
  std::set<Word> seen{start};
  std::set<Word> pending{start};
  while (!pending.empty()) {
    Word cur = *pending.begin();
    pending.erase(pending.begin());
    if (auto hit = braid_in_word(graph, cur, rightmost)) {
      auto [pos, m] = *hit;
      BraidFactorization f;
      f.x1.assign(cur.begin(), cur.begin() + pos);
      f.braid.assign(cur.begin() + pos, cur.begin() + pos + m);
      f.x2.assign(cur.begin() + pos + m, cur.end());
      f.s = f.braid[0];
      f.t = f.braid[1];
      return f;
    }
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i] != cur[i + 1] && graph.commute(cur[i], cur[i + 1])) {
        std::swap(cur[i], cur[i + 1]);
        if (seen.insert(cur).second) pending.insert(cur);
        std::swap(cur[i], cur[i + 1]);
      }
    }
  }
  return std::nullopt;
}

} // namespace

std::optional<BraidFactorization> find_braid_factorization(const CoxeterElement& w,
                                                           bool rightmost) {
  return braid_factorization_of_word(w.graph(), w.word(), rightmost);
}

void GroupTable::ensure_fc() const {
  std::call_once(fc_once_, [this] {
    fc_flags_.assign(size(), 0);
    for (EltId x = 0; x < size(); ++x) {
      bool fc = !braid_factorization_of_word(graph_, word(x), false).has_value();
      fc_flags_[x] = fc ? 1 : 0;
      if (fc) fc_list_.push_back(x);
    }
  });
}

bool GroupTable::is_fully_commutative(EltId x) const {
  ensure_fc();
  return fc_flags_[x] != 0;
}

std::uint32_t GroupTable::fc_count() const {
  ensure_fc();
  return static_cast<std::uint32_t>(fc_list_.size());
}

const std::vector<EltId>& GroupTable::fc_elements() const {
  ensure_fc();
  return fc_list_;
}

bool is_fully_commutative(const CoxeterElement& w) {
  return w.table()->is_fully_commutative(w.id());
}

/* ------------------------------------------------------------------ */
/*  CoxeterElement                                                     */
/* ------------------------------------------------------------------ */

CoxeterElement CoxeterElement::from_word(GroupPtr table, std::span<const Gen> w) {
  EltId id = table->from_word(w);
  return {std::move(table), id};
}

CoxeterElement CoxeterElement::parse(GroupPtr table, std::string_view text) {
  Word w = parse_word(text, table->rank());
  return from_word(std::move(table), w);
}

std::string CoxeterElement::to_string() const { return word_to_string(word()); }

CoxeterElement CoxeterElement::mult_gen(Gen s, Side side) const {
  if (s >= table_->rank()) throw ContractError("generator index out of range");
  EltId id = side == Side::Right ? table_->rshift(id_, s) : table_->lshift(id_, s);
  return {table_, id};
}

CoxeterElement CoxeterElement::operator*(const CoxeterElement& rhs) const {
  if (table_.get() != rhs.table_.get())
    throw ContractError("elements from different groups");
  return {table_, table_->mult(id_, rhs.id_)};
}

std::vector<Gen> CoxeterElement::content() const {
  std::vector<Gen> c;
  std::uint16_t mask = table_->content_mask(id_);
  for (Gen s = 0; s < table_->rank(); ++s)
    if (mask >> s & 1u) c.push_back(s);
  return c;
}

/* ------------------------------------------------------------------ */
/*  Bruhat order and enumeration                                       */
/* ------------------------------------------------------------------ */

bool bruhat_leq(const GroupTable& table, EltId x, EltId w) {
  if (table.length(x) > table.length(w)) return false;
  Word ww = table.word(w);
  EltId u = x;
  for (std::size_t i = ww.size(); i-- > 0;) {
    Gen s = ww[i];
    if (table.is_rdescent(u, s)) u = table.rshift(u, s);
  }
  return u == 0;
}

bool bruhat_leq(const CoxeterElement& x, const CoxeterElement& w) {
  if (x.table().get() != w.table().get())
    throw ContractError("elements from different groups");
  return bruhat_leq(*x.table(), x.id(), w.id());
}

std::vector<CoxeterElement> enumerate(const GroupPtr& table, std::optional<int> max_length) {
  EltId hi = table->size();
  if (max_length) hi = table->stratum_begin(*max_length + 1);
  std::vector<CoxeterElement> out;
  out.reserve(hi);
  for (EltId x = 0; x < hi; ++x) out.emplace_back(table, x);
  return out;
}

/* ------------------------------------------------------------------ */
/*  Type-B combinatorics                                               */
/* ------------------------------------------------------------------ */

namespace {

void require_type_b(const CoxeterGraph& g, const char* who) {
  if (g.type() != CoxeterType::B)
    throw ContractError(std::string(who) + " requires a type-B graph, got " + g.label());
}

} // namespace

BParse parse_nonfc_B(const CoxeterElement& w, Gen s) {
  const GroupPtr& table = w.table();
  const CoxeterGraph& g = w.graph();
  require_type_b(g, "parse_nonfc_B");
  if (s >= g.rank()) throw ContractError("generator index out of range");
  if (!is_fully_commutative(w))
    throw ContractError("parse_nonfc_B: w is not fully commutative");
  CoxeterElement ws = w.mult_gen(s, CoxeterElement::Side::Right);
  if (is_fully_commutative(ws))
    throw ContractError("parse_nonfc_B: ws is fully commutative");

  const Word word = w.word();
  std::size_t i2 = word.size();
  for (std::size_t i = word.size(); i-- > 0;)
    if (word[i] == s) {
      i2 = i;
      break;
    }
  if (i2 == word.size()) throw InternalError("parse_nonfc_B: s does not occur in w");

  std::size_t i3 = word.size();
  for (std::size_t i = i2 + 1; i < word.size(); ++i) {
    if (!g.commute(word[i], s)) {
      if (i3 != word.size())
        throw InternalError("parse_nonfc_B: two non-commuting letters after the last s");
      i3 = i;
    }
  }
  if (i3 == word.size())
    throw InternalError("parse_nonfc_B: no non-commuting letter after the last s");
  const Gen sp = word[i3];
  const int m = g.bond(s, sp);

  auto piece = [&](std::size_t lo, std::size_t hi) {
    Word part(word.begin() + lo, word.begin() + hi);
    return CoxeterElement::from_word(table, part);
  };

  BParse out;
  out.sprime = sp;
  if (m == 3) {
    out.kind = BParse::Kind::CaseI;
    out.factors = {piece(0, i2), piece(i2 + 1, i3), piece(i3 + 1, word.size())};
    return out;
  }
  if (m != 4) throw InternalError("parse_nonfc_B: bond order is neither 3 nor 4");

  std::size_t i1 = word.size();
  for (std::size_t i = i2; i-- > 0;)
    if (word[i] == sp) {
      i1 = i;
      break;
    }
  if (i1 == word.size()) throw InternalError("parse_nonfc_B: case ii without earlier s'");
  for (std::size_t i = i1 + 1; i < i2; ++i)
    if (!g.commute(word[i], sp))
      throw InternalError("parse_nonfc_B: w2 does not commute with s'");
  for (std::size_t i = i2 + 1; i < i3; ++i)
    if (!g.commute(word[i], sp))
      throw InternalError("parse_nonfc_B: w3 does not commute with s'");

  out.kind = BParse::Kind::CaseII;
  out.factors = {piece(0, i1), piece(i1 + 1, i2), piece(i2 + 1, i3),
                 piece(i3 + 1, word.size())};
  return out;
}

std::vector<CoxeterElement> type_b_coset_reps(const GroupPtr& table, int r) {
  require_type_b(table->graph(), "type_b_coset_reps");
  if (r < 1 || r > table->rank())
    throw ContractError("type_b_coset_reps: rank out of range");
  std::vector<CoxeterElement> reps;
  reps.reserve(2 * r);
  Word w;
  reps.push_back(CoxeterElement::identity(table));
  for (int j = r - 1; j >= 0; --j) { // s_r, s_r s_{r-1}, ..., down to s_1
    w.push_back(static_cast<Gen>(j));
    reps.push_back(CoxeterElement::from_word(table, w));
  }
  for (int j = 1; j < r; ++j) { // back up: ... s_1 s_2 ... s_r
    w.push_back(static_cast<Gen>(j));
    reps.push_back(CoxeterElement::from_word(table, w));
  }
  if (reps.size() != static_cast<std::size_t>(2 * r))
    throw InternalError("type_b_coset_reps: wrong count");
  return reps;
}

BCosetNF coset_decompose_B(const CoxeterElement& w) {
  const GroupPtr& table = w.table();
  require_type_b(table->graph(), "coset_decompose_B");
  const int n = table->rank();
  BCosetNF nf;
  nf.factors.assign(n, CoxeterElement::identity(table));

  EltId y = w.id();
  for (int r = n; r >= 1; --r) {
    // Strip left descents lying in W(B_{r-1}); what remains is the minimal
    // coset representative in W^(r).
    Word stripped;
    EltId z = y;
    for (;;) {
      bool moved = false;
      for (Gen s = 0; s + 1 < static_cast<Gen>(r); ++s) {
        if (table->is_ldescent(z, s)) {
          stripped.push_back(s);
          z = table->lshift(z, s);
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    nf.factors[r - 1] = CoxeterElement(table, z);
    y = table->from_word(stripped);
  }

  // The factorisation is unique and reduced; check both before returning.
  EltId acc = 0;
  std::uint32_t total = 0;
  for (const CoxeterElement& f : nf.factors) {
    acc = table->mult(acc, f.id());
    total += f.length();
  }
  if (acc != w.id() || total != w.length())
    throw InternalError("coset_decompose_B: factorisation failed to recompose");
  return nf;
}

} // namespace coxtl
