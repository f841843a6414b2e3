#ifndef COXTL_HECKE_HPP
#define COXTL_HECKE_HPP

#include "coxtl/coxeter.hpp"
#include "coxtl/laurent.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace coxtl {

/*
  An element of the Hecke algebra in Tt-coordinates (Tt_w = v^-len(w) T_w):
  a sorted sparse map element id -> Laurent polynomial with no zero entries.

  The generator rule, rewritten for the Tt basis:
      Tt_s Tt_w = Tt_sw                      if len(sw) > len(w)
      Tt_s Tt_w = Tt_sw + (v - v^-1) Tt_w    otherwise.
*/
class HeckeElt {
public:
  using Entry = std::pair<EltId, LaurentPoly>;

  HeckeElt() = default;
  explicit HeckeElt(GroupPtr table) : table_(std::move(table)) {}

  static HeckeElt zero(GroupPtr table) { return HeckeElt(std::move(table)); }
  // Tt_w
  static HeckeElt unit(GroupPtr table, EltId w);
  static HeckeElt unit(const CoxeterElement& w) { return unit(w.table(), w.id()); }

  const GroupPtr& table() const { return table_; }
  const std::vector<Entry>& coords() const { return coords_; }
  bool is_zero() const { return coords_.empty(); }
  std::size_t support_size() const { return coords_.size(); }
  // Coefficient of Tt_x (zero polynomial if absent).
  LaurentPoly coord(EltId x) const;

  HeckeElt operator+(const HeckeElt& rhs) const;
  HeckeElt operator-(const HeckeElt& rhs) const;
  HeckeElt& operator+=(const HeckeElt& rhs) { return *this = *this + rhs; }
  HeckeElt& operator-=(const HeckeElt& rhs) { return *this = *this - rhs; }
  HeckeElt scaled(const LaurentPoly& a) const;

  // h * Tt_s and Tt_s * h.
  HeckeElt times_gen(Gen s) const;
  HeckeElt times_gen_left(Gen s) const;
  // Bilinear product; folds the right factor one letter at a time.
  HeckeElt operator*(const HeckeElt& rhs) const;

  bool operator==(const HeckeElt& rhs) const;

  // Construction helper: accumulate a term, then normalize() once.
  void add_term(EltId x, LaurentPoly p);
  void normalize();

private:
  GroupPtr table_;
  std::vector<Entry> coords_; // ascending id, nonzero polys
};

/*
  bar(Tt_w) = (Tt_{w^-1})^-1, materialised per basis element by increasing
  length via bar(Tt_us) = bar(Tt_u) (Tt_s - (v - v^-1)).  Lazily built;
  single writer, frozen afterwards.
*/
class HeckeBarTable {
public:
  explicit HeckeBarTable(GroupPtr table) : table_(std::move(table)) {}
  const GroupPtr& table() const { return table_; }
  const HeckeElt& bar_basis(EltId w);
  // Semilinear extension: bar(sum a_w Tt_w) = sum bar(a_w) bar(Tt_w).
  HeckeElt bar(const HeckeElt& h);

private:
  GroupPtr table_;
  std::vector<HeckeElt> rows_;
  std::vector<std::uint8_t> ready_;
};

enum class DescentPolicy { LowestIndex, HighestIndex };

// One row of the Kazhdan-Lusztig table: C'_w in Tt-coordinates plus the
// nonzero mu(x, w) values (the v^-1 coefficients of the P-tilde entries).
struct KLEntry {
  EltId w = 0;
  std::span<const std::pair<EltId, std::uint32_t>> coords; // (x, poly id)
  std::span<const std::pair<EltId, std::int64_t>> mus;     // (x, mu), mu != 0
};

/*
  Memoised Kazhdan-Lusztig basis for one group.

  Rows are computed by the left-descent recursion
      C'_w = C'_s C'_sw - sum_{x < sw, sx < x} mu(x, sw) C'_x
  processing lengths in increasing order, with polynomials interned in a
  shared pool.  The diagonal-is-one and off-diagonal-in-v^-1 Z[v^-1]
  conditions are asserted for every computed row.

  Rows can be persisted to and restored from an append-only cache file
  ("KLC1" format): header `KLC1 <type> <rank>`, then one line
  `<w-word> <x-word> <poly>` per entry, each row written with its diagonal
  entry last so that truncated writes are detectable.
*/
class KLCache {
public:
  explicit KLCache(GroupPtr table, DescentPolicy policy = DescentPolicy::LowestIndex);

  const GroupPtr& table() const { return table_; }
  DescentPolicy policy() const { return policy_; }

  KLEntry row(EltId w);
  LaurentPoly p_tilde(EltId x, EltId w);
  // 0 unless x < w in Bruhat order.
  std::int64_t mu(EltId x, EltId w);

  // C'_w as a Hecke element.
  HeckeElt clprime(EltId w);
  // C'_s C'_w in C'-coordinates (Proposition 1.2.1 shape): either
  // {(sw, 1)} + mu terms, or {(w, v + v^-1)}.
  std::vector<std::pair<EltId, LaurentPoly>> cs_times_clprime(Gen s, EltId w);
  // Expand an arbitrary element in the C' basis (triangular elimination).
  std::vector<std::pair<EltId, LaurentPoly>> expand_in_clprime(const HeckeElt& h);

  void compute_all();
  std::uint32_t rows_ready() const;

  // Cache file management; see the class comment for the format.
  void load_file(const std::filesystem::path& path);
  void flush_file(const std::filesystem::path& path);

  LaurentPoly pool_poly(std::uint32_t id) const { return pool_[id]; }

private:
  struct Row {
    std::uint8_t ready = 0;
    std::uint8_t persisted = 0;
    std::vector<std::pair<EltId, std::uint32_t>> coords;
    std::vector<std::pair<EltId, std::int64_t>> mus;
  };

  void ensure_row(EltId w);
  void ensure_all_up_to(std::uint16_t length);
  void compute_row(EltId w);
  void finish_row(EltId w, Row& row);
  std::uint32_t intern(LaurentPoly p);

  GroupPtr table_;
  DescentPolicy policy_;
  std::vector<Row> rows_;
  std::vector<LaurentPoly> pool_;
  std::unordered_map<LaurentPoly, std::uint32_t, LaurentPolyHash> pool_index_;
  std::uint16_t frontier_ = 0; // all rows of length < frontier_ are ready
  // scratch for row assembly
  std::vector<LaurentPoly> acc_;
  std::vector<EltId> touched_;
};

// bar involution on a Hecke element, through the given bar table.
HeckeElt hecke_bar(const HeckeElt& h, HeckeBarTable& bars);

} // namespace coxtl

#endif
