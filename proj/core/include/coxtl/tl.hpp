#ifndef COXTL_TL_HPP
#define COXTL_TL_HPP

#include "coxtl/hecke.hpp"

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

namespace coxtl {

/*
  An element of the generalized Temperley-Lieb quotient in tt-coordinates
  (tt_w = v^-len(w) t_w, w fully commutative): sorted sparse map with no zero
  entries and support restricted to fully commutative elements.
*/
class TLElt {
public:
  using Entry = std::pair<EltId, LaurentPoly>;

  TLElt() = default;
  explicit TLElt(GroupPtr table) : table_(std::move(table)) {}

  static TLElt zero(GroupPtr table) { return TLElt(std::move(table)); }
  // tt_w; requires w fully commutative.
  static TLElt unit(GroupPtr table, EltId w);

  const GroupPtr& table() const { return table_; }
  const std::vector<Entry>& coords() const { return coords_; }
  bool is_zero() const { return coords_.empty(); }
  LaurentPoly coord(EltId x) const;

  TLElt operator+(const TLElt& rhs) const;
  TLElt operator-(const TLElt& rhs) const;
  TLElt& operator+=(const TLElt& rhs) { return *this = *this + rhs; }
  TLElt& operator-=(const TLElt& rhs) { return *this = *this - rhs; }
  TLElt scaled(const LaurentPoly& a) const;

  bool operator==(const TLElt& rhs) const;

  // The projection pi to L / v^-1 L, coordinatewise: the v^0 coefficient of
  // every coordinate (zeros omitted).
  std::vector<std::pair<EltId, std::int64_t>> pi() const;

  void add_term(EltId x, LaurentPoly p);
  void normalize(); // sort, merge, drop zeros, check the FC support invariant

private:
  GroupPtr table_;
  std::vector<Entry> coords_;
};

enum class TLBasis { T, B };

// Normal form a * qc^mu_exp * b_w of a monomial-basis multiple (type B).
struct MonomialNF {
  std::int64_t a = 1;
  std::uint32_t mu_exp = 0;
  EltId w = 0;
};

/*
  Per-group Temperley-Lieb machinery.

  theta is realised as a length-increasing reduction table: theta(Tt_w) is
  tt_w for fully commutative w, and otherwise is rewritten through a braid
  factorisation w = x1 . w_st . x2 using the defining ideal generator
  sum_{u in <s,t>} T_u, expanding Tt_x1 Tt_u Tt_x2 in the Hecke algebra and
  recursing; every recursion target is strictly shorter, which is checked at
  runtime.

  All tables (theta rows, monomial basis, canonical basis) are built lazily
  by increasing length by a single writer and are immutable afterwards.
*/
class TLContext {
public:
  // The tie-break when several maximal-length defect terms are available in
  // the canonical-basis correction; the basis is unique, so both orders must
  // produce the same table (checked by tests).
  enum class ICTieBreak { HighId, LowId };

  explicit TLContext(GroupPtr table, ICTieBreak tie = ICTieBreak::HighId);

  const GroupPtr& table() const { return table_; }

  // theta of a Tt-basis element / of a general Hecke element.
  const TLElt& theta_basis(EltId w);
  TLElt theta(const HeckeElt& h);

  // Canonical lift tt_x -> Tt_x.
  HeckeElt lift(const TLElt& u) const;

  // Product and bar involution, both through the Hecke algebra and theta.
  TLElt mult(const TLElt& u, const TLElt& v);
  TLElt bar(const TLElt& u);

  // Monomial basis b_w (w fully commutative) in tt-coordinates.
  const TLElt& b_elt(EltId w);
  // b_s as an element for a generator.
  TLElt b_gen(Gen s);
  // Expand in the monomial basis (unitriangular elimination).
  std::vector<std::pair<EltId, LaurentPoly>> to_b_basis(const TLElt& u);
  TLElt from_b_coords(std::span<const std::pair<EltId, LaurentPoly>> coords);

  // Canonical (IC) basis element c_w, w fully commutative.
  const TLElt& canonical(EltId w);

  // u lies in v^-k L'_w (basis B) or v^-k L_w (basis T): support inside
  // {x in W_c : x <= w} with every coefficient in v^-k Z[v^-1].
  bool lattice_member(const TLElt& u, EltId w, int k, TLBasis basis);
  // Same with no Bruhat bound on the support.
  bool in_lattice(const TLElt& u, int k, TLBasis basis);

  // One step of the type-B rewriting engine: (a qc^mu b_w) * b_s in normal
  // form, via descent / fully-commutative-extension / parse.
  MonomialNF rewrite_B(const MonomialNF& nf, Gen s);
  // Integer factors a_out / a_in seen in rewrite steps so far.  Nothing
  // bounds them a priori beyond nonnegativity; the observed range (always
  // {1, 2} in the ranks exercised here) is recorded, not asserted.
  const std::set<std::int64_t>& observed_rewrite_factors() const {
    return rewrite_factors_;
  }

private:
  void ensure_theta(EltId w);
  void ensure_b(EltId w);
  void ensure_canonical(EltId w);
  TLElt compute_theta_row(EltId w);
  TLElt compute_canonical(EltId w);

  GroupPtr table_;
  ICTieBreak tie_;
  HeckeBarTable bars_;
  std::vector<TLElt> theta_rows_;
  std::vector<std::uint8_t> theta_ready_;
  std::uint16_t theta_frontier_ = 0;
  std::vector<TLElt> b_rows_, c_rows_;
  std::vector<std::uint8_t> b_ready_, c_ready_;
  std::uint16_t b_frontier_ = 0, c_frontier_ = 0;
  std::set<std::int64_t> rewrite_factors_;
};

} // namespace coxtl

#endif
