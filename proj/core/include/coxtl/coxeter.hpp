#ifndef COXTL_COXETER_HPP
#define COXTL_COXETER_HPP

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coxtl {

using Gen = std::uint8_t;     // 0-based generator index
using Word = std::vector<Gen>;
using EltId = std::uint32_t;  // index into a GroupTable, sorted by (length, word)

enum class CoxeterType { A, B, D, I2, F4, H3, H4, E6, E7, E8 };

std::string type_name(CoxeterType t);

struct GraphOptions {
  // D3 is rejected by default; with this flag it is accepted (it is the same
  // group as A3 under the D-style labelling).
  bool allow_d3_alias = false;
};

/*
  A Coxeter graph: rank and the symmetric matrix of bond orders m(s,t),
  with m(s,s) = 1 and finite m(s,t) >= 2 off the diagonal.

  Named constructors fix the generator labellings used throughout:
    A_n   chain, all bonds 3
    B_n   chain, m(s1,s2) = 4, m(si,si+1) = 3 for i > 1
    D_n   s3 is the branch node; s1 and s2 commute with everything except s3
    I2(m) two generators with bond m (3 <= m < infinity)
    F4    chain, m(s2,s3) = 4
    H3/H4 chain, m(s1,s2) = 5
    E6/7/8  chain s1-s3-s4-...-sn with s2 attached to s4 (Bourbaki)
*/
class CoxeterGraph {
public:
  static CoxeterGraph build(CoxeterType type, int rank_or_m, GraphOptions opts = {});

  CoxeterType type() const { return type_; }
  int rank() const { return rank_; }
  // Bond order m(s,t); 1 on the diagonal.
  int bond(Gen s, Gen t) const { return mat_[static_cast<std::size_t>(s) * rank_ + t]; }
  bool commute(Gen s, Gen t) const { return bond(s, t) == 2; }

  // "B3", "I2(7)", ...
  std::string label() const;
  std::uint64_t group_order() const;
  // True iff some vertex has three pairwise-commuting neighbours, each joined
  // to it by a bond of order exactly 3 (an induced D4 star).
  bool contains_d4_subgraph() const;

  bool operator==(const CoxeterGraph& rhs) const = default;

  CoxeterGraph() = default; // empty graph; fill via build()

private:
  CoxeterType type_ = CoxeterType::A;
  int rank_ = 0;
  int m_ = 0; // bond parameter for I2
  std::vector<int> mat_;
};

struct TableOptions {
  std::uint64_t max_group_order = 2'000'000;
  bool capacity_override = false;
};

/*
  Full enumeration of a finite Coxeter group.

  Elements are identified with ids 0..size()-1, sorted by (length, canonical
  word) where the canonical word of an element is its lexicographically least
  reduced word.  Id 0 is the identity and the unique longest element comes
  last.  The table stores one-generator shift tables on both sides, descent
  masks, inverses and canonical-word parent links, so everything downstream
  is O(1) table arithmetic per letter.

  Construction works in the reflection representation: generators act as
  permutations of the (finite) root system, with exact coordinates in Z,
  Z[sqrt 2] or Z[phi] depending on the bonds present, and an element is keyed
  by the images of the simple roots, which determine it uniquely.  Dihedral
  tables are written down in closed form instead.

  Tables are immutable after build() returns; the fully-commutative flags are
  materialised lazily (single writer, then frozen) on first use.
*/
class GroupTable {
public:
  static std::shared_ptr<const GroupTable> build(const CoxeterGraph& graph,
                                                 TableOptions opts = {});

  const CoxeterGraph& graph() const { return graph_; }
  int rank() const { return graph_.rank(); }
  std::uint32_t size() const { return static_cast<std::uint32_t>(length_.size()); }

  std::uint16_t length(EltId x) const { return length_[x]; }
  EltId rshift(EltId x, Gen s) const { return rshift_[static_cast<std::size_t>(x) * rank() + s]; }
  EltId lshift(EltId x, Gen s) const { return lshift_[static_cast<std::size_t>(x) * rank() + s]; }
  EltId inverse(EltId x) const { return inverse_[x]; }

  bool is_rdescent(EltId x, Gen s) const { return rdesc_[x] >> s & 1u; }
  bool is_ldescent(EltId x, Gen s) const { return ldesc_[x] >> s & 1u; }
  std::uint16_t rdescent_mask(EltId x) const { return rdesc_[x]; }
  std::uint16_t ldescent_mask(EltId x) const { return ldesc_[x]; }
  // Set of generators appearing in a reduced word for x.
  std::uint16_t content_mask(EltId x) const { return content_[x]; }

  Word word(EltId x) const;
  EltId from_word(std::span<const Gen> w) const;
  EltId mult(EltId x, EltId y) const;

  EltId identity() const { return 0; }
  EltId longest_element() const { return size() - 1; }
  std::uint16_t max_length() const { return length_.back(); }
  // Ids of all elements of the given length form the contiguous range
  // [stratum_begin(l), stratum_begin(l+1)).
  EltId stratum_begin(int l) const;

  // Fully commutative elements (lazily computed for the whole group).
  bool is_fully_commutative(EltId x) const;
  std::uint32_t fc_count() const;
  const std::vector<EltId>& fc_elements() const;

private:
  GroupTable() = default;
  static std::shared_ptr<GroupTable> build_dihedral(int m);
  void ensure_fc() const;

  CoxeterGraph graph_;
  std::vector<std::uint16_t> length_;
  std::vector<EltId> rshift_, lshift_, inverse_, parent_;
  std::vector<Gen> parent_gen_;
  std::vector<std::uint16_t> rdesc_, ldesc_, content_;
  std::vector<EltId> strata_; // strata_[l] = first id of length l

  mutable std::once_flag fc_once_;
  mutable std::vector<std::uint8_t> fc_flags_;
  mutable std::vector<EltId> fc_list_;
};

using GroupPtr = std::shared_ptr<const GroupTable>;

/*
  A group element in canonical reduced-word normal form: a (table, id) pair.
  Values are immutable and cheap to copy; the canonical word is materialised
  on demand from the table's parent links.
*/
class CoxeterElement {
public:
  CoxeterElement() = default;
  CoxeterElement(GroupPtr table, EltId id) : table_(std::move(table)), id_(id) {}

  static CoxeterElement identity(GroupPtr table) { return {std::move(table), 0}; }
  static CoxeterElement from_word(GroupPtr table, std::span<const Gen> w);
  // Parses the dotted 1-based form, e.g. "2.3.1"; "e" is the identity.
  static CoxeterElement parse(GroupPtr table, std::string_view text);

  const GroupPtr& table() const { return table_; }
  const CoxeterGraph& graph() const { return table_->graph(); }
  EltId id() const { return id_; }

  std::uint16_t length() const { return table_->length(id_); }
  bool is_identity() const { return id_ == 0; }
  Word word() const { return table_->word(id_); }
  std::string to_string() const;

  CoxeterElement inverse() const { return {table_, table_->inverse(id_)}; }
  enum class Side { Left, Right };
  CoxeterElement mult_gen(Gen s, Side side) const;
  CoxeterElement operator*(const CoxeterElement& rhs) const;

  bool is_rdescent(Gen s) const { return table_->is_rdescent(id_, s); }
  bool is_ldescent(Gen s) const { return table_->is_ldescent(id_, s); }
  std::vector<Gen> content() const;

  bool operator==(const CoxeterElement& rhs) const {
    return table_.get() == rhs.table_.get() && id_ == rhs.id_;
  }

private:
  GroupPtr table_;
  EltId id_ = 0;
};

// Subword test for the Bruhat-Chevalley order, scanning the canonical word of
// w right to left.  Both elements must come from the same table.
bool bruhat_leq(const CoxeterElement& x, const CoxeterElement& w);
bool bruhat_leq(const GroupTable& table, EltId x, EltId w);

// All elements (or all of length <= max_length), in id order.
std::vector<CoxeterElement> enumerate(const GroupPtr& table,
                                      std::optional<int> max_length = std::nullopt);

bool is_fully_commutative(const CoxeterElement& w);

// Word-level helpers.
std::string word_to_string(const Word& w);
Word parse_word(std::string_view text, int rank);
// True iff the letter sequence contains a consecutive factor s t s t ... of
// length m(s,t) >= 3.
bool has_braid_substring(const CoxeterGraph& graph, std::span<const Gen> w);
// All reduced words obtainable from `w` by swaps of adjacent commuting
// letters, in lexicographic order.  `w` is assumed reduced.
std::vector<Word> commutation_class(const CoxeterGraph& graph, const Word& w);

/*
  A factorisation w = x1 . braid . x2 into subwords of a reduced word of w,
  where braid is the alternating word s t s t... of length m(s,t) >= 3.
  Exists iff w is not fully commutative.  The search explores the commutation
  class of the canonical word in lexicographic order and reports the first
  (or, with `rightmost`, the last) braid factor of the first word containing
  one, so the choice is deterministic.
*/
struct BraidFactorization {
  Word x1, braid, x2;
  Gen s, t;
};
std::optional<BraidFactorization> find_braid_factorization(const CoxeterElement& w,
                                                           bool rightmost = false);

/*
  Type-B parse of a fully commutative w whose extension ws leaves the fully
  commutative set: locates the unique s' that will braid with s and splits
  the canonical word as w1 s w2 s' w3 (order of ss' = 3, with s commuting
  with the contents of w2 and w3) or w1 s' w2 s w3 s' w4 (order 4, with s
  commuting past w3, w4 and s' past w2, w3).
*/
struct BParse {
  enum class Kind { CaseI, CaseII };
  Kind kind;
  Gen sprime;
  std::vector<CoxeterElement> factors; // 3 factors for case I, 4 for case II
};
BParse parse_nonfc_B(const CoxeterElement& w, Gen s);

// The 2r minimal right coset representatives W^(r) of W(B_{r-1}) in W(B_r):
// e, s_r, s_r s_{r-1}, ..., s_r...s_2 s_1, s_r...s_2 s_1 s_2, ...,
// s_r...s_2 s_1 s_2...s_r.  Requires a type-B table with rank >= r.
std::vector<CoxeterElement> type_b_coset_reps(const GroupPtr& table, int r);

// Unique factorisation w = w_1 w_2 ... w_n with w_i in W^(i), type B only.
struct BCosetNF {
  std::vector<CoxeterElement> factors; // factors[i] lies in W^(i+1)
};
BCosetNF coset_decompose_B(const CoxeterElement& w);

} // namespace coxtl

#endif
