#include "coxtl/tl.hpp"

#include "coxtl/errors.hpp"

#include <algorithm>
#include <map>

namespace coxtl {

/* ------------------------------------------------------------------ */
/*  TLElt                                                              */
/* ------------------------------------------------------------------ */

TLElt TLElt::unit(GroupPtr table, EltId w) {
  if (!table->is_fully_commutative(w))
    throw ContractError("TLElt: tt basis is indexed by fully commutative elements");
  TLElt u(std::move(table));
  u.coords_.emplace_back(w, LaurentPoly::one());
  return u;
}

LaurentPoly TLElt::coord(EltId x) const {
  auto it = std::lower_bound(coords_.begin(), coords_.end(), x,
                             [](const Entry& e, EltId id) { return e.first < id; });
  if (it != coords_.end() && it->first == x) return it->second;
  return LaurentPoly::zero();
}

void TLElt::add_term(EltId x, LaurentPoly p) {
  if (!p.is_zero()) coords_.emplace_back(x, std::move(p));
}

void TLElt::normalize() {
  std::sort(coords_.begin(), coords_.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  std::vector<Entry> out;
  out.reserve(coords_.size());
  for (auto& e : coords_) {
    if (!out.empty() && out.back().first == e.first)
      out.back().second += e.second;
    else
      out.push_back(std::move(e));
  }
  std::erase_if(out, [](const Entry& e) { return e.second.is_zero(); });
  for (const Entry& e : out)
    if (!table_->is_fully_commutative(e.first))
      throw InternalError("TLElt: non fully commutative support");
  coords_ = std::move(out);
}

TLElt TLElt::operator+(const TLElt& rhs) const {
  if (table_ && rhs.table_ && table_.get() != rhs.table_.get())
    throw ContractError("TLElt: mixed groups");
  TLElt out(table_ ? table_ : rhs.table_);
  auto a = coords_.begin(), ae = coords_.end();
  auto b = rhs.coords_.begin(), be = rhs.coords_.end();
  while (a != ae && b != be) {
    if (a->first < b->first) {
      out.coords_.push_back(*a++);
    } else if (b->first < a->first) {
      out.coords_.push_back(*b++);
    } else {
      LaurentPoly p = a->second + b->second;
      if (!p.is_zero()) out.coords_.emplace_back(a->first, std::move(p));
      ++a;
      ++b;
    }
  }
  out.coords_.insert(out.coords_.end(), a, ae);
  out.coords_.insert(out.coords_.end(), b, be);
  return out;
}

TLElt TLElt::operator-(const TLElt& rhs) const {
  return *this + rhs.scaled(LaurentPoly::constant(-1));
}

TLElt TLElt::scaled(const LaurentPoly& a) const {
  TLElt out(table_);
  if (a.is_zero()) return out;
  out.coords_.reserve(coords_.size());
  for (const Entry& e : coords_) {
    LaurentPoly p = e.second * a;
    if (!p.is_zero()) out.coords_.emplace_back(e.first, std::move(p));
  }
  return out;
}

bool TLElt::operator==(const TLElt& rhs) const { return coords_ == rhs.coords_; }

std::vector<std::pair<EltId, std::int64_t>> TLElt::pi() const {
  std::vector<std::pair<EltId, std::int64_t>> out;
  for (const Entry& e : coords_) {
    std::int64_t c = e.second.coeff(0);
    if (c != 0) out.emplace_back(e.first, c);
  }
  return out;
}

/* ------------------------------------------------------------------ */
/*  TLContext: theta                                                   */
/* ------------------------------------------------------------------ */

TLContext::TLContext(GroupPtr table, ICTieBreak tie)
    : table_(std::move(table)), tie_(tie), bars_(table_) {
  const std::uint32_t n = table_->size();
  theta_rows_.assign(n, TLElt(table_));
  theta_ready_.assign(n, 0);
  b_rows_.assign(n, TLElt(table_));
  b_ready_.assign(n, 0);
  c_rows_.assign(n, TLElt(table_));
  c_ready_.assign(n, 0);
}

TLElt TLContext::compute_theta_row(EltId w) {
  const GroupTable& t = *table_;
  if (t.is_fully_commutative(w)) return TLElt::unit(table_, w);

  CoxeterElement elt(table_, w);
  auto bf = find_braid_factorization(elt);
  if (!bf) throw InternalError("theta: non-FC element without braid factorisation");
  const int m = t.graph().bond(bf->s, bf->t);

  const EltId x1 = t.from_word(bf->x1);
  const EltId x2 = t.from_word(bf->x2);

  // Proper elements of the dihedral parabolic <s,t>: alternating words of
  // length l < m starting with either letter.
  std::vector<Word> proper;
  proper.push_back({});
  for (int l = 1; l < m; ++l) {
    for (Gen first : {bf->s, bf->t}) {
      Word u;
      for (int i = 0; i < l; ++i) u.push_back(i % 2 == 0 ? first : (first == bf->s ? bf->t : bf->s));
      proper.push_back(std::move(u));
    }
  }

  TLElt acc(table_);
  const std::uint16_t lw = t.length(w);
  for (const Word& u : proper) {
    HeckeElt h = HeckeElt::unit(table_, x1);
    for (Gen s : u) h = h.times_gen(s);
    for (Gen s : t.word(x2)) h = h.times_gen(s);
    // tt_{w_st} = - sum_u v^{len(u) - m} tt_u inside the quotient
    const LaurentPoly scale = LaurentPoly::v(static_cast<std::int32_t>(u.size()) - m);
    for (const auto& [y, c] : h.coords()) {
      if (t.length(y) >= lw)
        throw InternalError("theta: reduction step failed to decrease length");
      if (!theta_ready_[y]) throw InternalError("theta: reduction out of order");
      acc -= theta_rows_[y].scaled(c * scale);
    }
  }
  return acc;
}

void TLContext::ensure_theta(EltId w) {
  if (theta_ready_[w]) return;
  const std::uint16_t target = table_->length(w);
  while (theta_frontier_ <= target) {
    EltId lo = table_->stratum_begin(theta_frontier_);
    EltId hi = table_->stratum_begin(theta_frontier_ + 1);
    for (EltId x = lo; x < hi; ++x) {
      if (!theta_ready_[x]) {
        theta_rows_[x] = compute_theta_row(x);
        theta_ready_[x] = 1;
      }
    }
    ++theta_frontier_;
  }
}

const TLElt& TLContext::theta_basis(EltId w) {
  ensure_theta(w);
  return theta_rows_[w];
}

TLElt TLContext::theta(const HeckeElt& h) {
  TLElt acc(table_);
  for (const auto& [x, c] : h.coords()) acc += theta_basis(x).scaled(c);
  return acc;
}

HeckeElt TLContext::lift(const TLElt& u) const {
  HeckeElt h(table_);
  for (const auto& [x, c] : u.coords()) h.add_term(x, c);
  h.normalize();
  return h;
}

TLElt TLContext::mult(const TLElt& u, const TLElt& v) {
  return theta(lift(u) * lift(v));
}

TLElt TLContext::bar(const TLElt& u) { return theta(bars_.bar(lift(u))); }

/* ------------------------------------------------------------------ */
/*  Monomial basis                                                     */
/* ------------------------------------------------------------------ */

TLElt TLContext::b_gen(Gen s) {
  EltId ids = table_->from_word(std::array<Gen, 1>{s});
  TLElt b = TLElt::unit(table_, ids);
  b += TLElt::unit(table_, 0).scaled(LaurentPoly::v(-1));
  return b;
}

void TLContext::ensure_b(EltId w) {
  if (b_ready_[w]) return;
  const std::uint16_t target = table_->length(w);
  while (b_frontier_ <= target) {
    EltId lo = table_->stratum_begin(b_frontier_);
    EltId hi = table_->stratum_begin(b_frontier_ + 1);
    for (EltId x = lo; x < hi; ++x) {
      if (b_ready_[x] || !table_->is_fully_commutative(x)) continue;
      if (x == 0) {
        b_rows_[x] = TLElt::unit(table_, 0);
      } else {
        Word cw = table_->word(x);
        Gen last = cw.back();
        EltId u = table_->rshift(x, last);
        // b_x = b_u * b_last over any reduced word of x
        b_rows_[x] = mult(b_rows_[u], b_gen(last));
      }
      b_ready_[x] = 1;
    }
    ++b_frontier_;
  }
}

const TLElt& TLContext::b_elt(EltId w) {
  if (!table_->is_fully_commutative(w))
    throw ContractError("b_elt: monomial basis is indexed by fully commutative elements");
  ensure_b(w);
  return b_rows_[w];
}

std::vector<std::pair<EltId, LaurentPoly>> TLContext::to_b_basis(const TLElt& u) {
  std::map<EltId, LaurentPoly> work;
  for (const auto& e : u.coords()) work.emplace(e.first, e.second);
  std::vector<std::pair<EltId, LaurentPoly>> out;
  while (!work.empty()) {
    auto top = std::prev(work.end());
    EltId x = top->first;
    LaurentPoly c = std::move(top->second);
    work.erase(top);
    if (c.is_zero()) continue;
    const TLElt& bx = b_elt(x);
    for (const auto& [y, p] : bx.coords()) {
      if (y == x) continue; // unitriangular: the leading entry is 1
      auto [it, inserted] = work.try_emplace(y, LaurentPoly::zero());
      it->second -= c * p;
      if (it->second.is_zero()) work.erase(it);
    }
    out.emplace_back(x, std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

TLElt TLContext::from_b_coords(std::span<const std::pair<EltId, LaurentPoly>> coords) {
  TLElt acc(table_);
  for (const auto& [x, c] : coords) acc += b_elt(x).scaled(c);
  return acc;
}

/* ------------------------------------------------------------------ */
/*  Canonical basis                                                    */
/* ------------------------------------------------------------------ */

TLElt TLContext::compute_canonical(EltId w) {
  const GroupTable& t = *table_;
  TLElt c = TLElt::unit(table_, w);
  for (;;) {
    TLElt defect = bar(c) - c;
    if (defect.is_zero()) break;
    // pick a maximal-length term of the defect; any such term is maximal in
    // the Bruhat order on the support, where bar acts unitriangularly
    EltId x = defect.coords().front().first;
    for (const auto& [y, p] : defect.coords()) {
      (void)p;
      bool better = t.length(y) > t.length(x) ||
                    (t.length(y) == t.length(x) &&
                     (tie_ == ICTieBreak::HighId ? y > x : y < x));
      if (better) x = y;
    }
    if (t.length(x) >= t.length(w))
      throw InternalError("canonical: defect reaches the leading term");
    LaurentPoly r = defect.coord(x);
    if (!(r.bar() == -r) || r.coeff(0) != 0)
      throw InternalError("canonical: defect coefficient is not antisymmetric");
    // gamma - bar(gamma) = r with gamma in v^-1 Z[v^-1]: the negative part
    LaurentPoly gamma;
    for (const auto& term : r.terms())
      if (term.exp < 0) gamma += LaurentPoly::monomial(term.coeff, term.exp);
    ensure_canonical(x);
    c += c_rows_[x].scaled(gamma);
  }
  // c is bar-invariant by construction; check the congruence to tt_w.
  TLElt diff = c - TLElt::unit(table_, w);
  for (const auto& [y, p] : diff.coords()) {
    (void)y;
    if (!p.in_lattice(1))
      throw InternalError("canonical: c_w is not congruent to tt_w mod v^-1 L");
  }
  return c;
}

void TLContext::ensure_canonical(EltId w) {
  if (c_ready_[w]) return;
  const std::uint16_t target = table_->length(w);
  while (c_frontier_ <= target) {
    EltId lo = table_->stratum_begin(c_frontier_);
    EltId hi = table_->stratum_begin(c_frontier_ + 1);
    for (EltId x = lo; x < hi; ++x) {
      if (c_ready_[x] || !table_->is_fully_commutative(x)) continue;
      c_rows_[x] = compute_canonical(x);
      c_ready_[x] = 1;
    }
    ++c_frontier_;
  }
}

const TLElt& TLContext::canonical(EltId w) {
  if (!table_->is_fully_commutative(w))
    throw ContractError("canonical: IC basis is indexed by fully commutative elements");
  ensure_canonical(w);
  return c_rows_[w];
}

/* ------------------------------------------------------------------ */
/*  Lattice membership                                                 */
/* ------------------------------------------------------------------ */

bool TLContext::lattice_member(const TLElt& u, EltId w, int k, TLBasis basis) {
  if (basis == TLBasis::T) {
    for (const auto& [x, c] : u.coords())
      if (!c.in_lattice(k) || !bruhat_leq(*table_, x, w)) return false;
    return true;
  }
  for (const auto& [x, c] : to_b_basis(u))
    if (!c.in_lattice(k) || !bruhat_leq(*table_, x, w)) return false;
  return true;
}

bool TLContext::in_lattice(const TLElt& u, int k, TLBasis basis) {
  if (basis == TLBasis::T) {
    for (const auto& [x, c] : u.coords())
      if (!c.in_lattice(k)) return false;
    return true;
  }
  for (const auto& [x, c] : to_b_basis(u))
    if (!c.in_lattice(k)) return false;
  return true;
}

/* ------------------------------------------------------------------ */
/*  Type-B rewriting engine                                            */
/* ------------------------------------------------------------------ */

MonomialNF TLContext::rewrite_B(const MonomialNF& nf, Gen s) {
  const GroupTable& t = *table_;
  if (t.graph().type() != CoxeterType::B)
    throw ContractError("rewrite_B requires a type-B graph");
  if (!t.is_fully_commutative(nf.w))
    throw ContractError("rewrite_B: w must be fully commutative");
  if (s >= t.rank()) throw ContractError("generator index out of range");

  // b_w b_s = qc b_w when ws < w
  if (t.is_rdescent(nf.w, s)) {
    rewrite_factors_.insert(1);
    return {nf.a, nf.mu_exp + 1, nf.w};
  }

  EltId ws = t.rshift(nf.w, s);
  if (t.is_fully_commutative(ws)) {
    rewrite_factors_.insert(1);
    return {nf.a, nf.mu_exp, ws};
  }

  BParse parse = parse_nonfc_B(CoxeterElement(table_, nf.w), s);
  Word target;
  std::int64_t a = nf.a;
  if (parse.kind == BParse::Kind::CaseI) {
    // b_s b_s' b_s = b_s: drop s' and one s
    for (Gen g : parse.factors[0].word()) target.push_back(g);
    for (Gen g : parse.factors[1].word()) target.push_back(g);
    target.push_back(s);
    for (Gen g : parse.factors[2].word()) target.push_back(g);
  } else {
    // b_s' b_s b_s' b_s = 2 b_s' b_s: coefficient doubles
    if (__builtin_mul_overflow(a, std::int64_t{2}, &a))
      throw std::overflow_error("rewrite_B: coefficient overflow");
    for (Gen g : parse.factors[0].word()) target.push_back(g);
    for (Gen g : parse.factors[1].word()) target.push_back(g);
    target.push_back(parse.sprime);
    target.push_back(s);
    for (Gen g : parse.factors[2].word()) target.push_back(g);
    for (Gen g : parse.factors[3].word()) target.push_back(g);
  }

  // The residual letter sequence need not be reduced (letters that were
  // separated by the deleted s' may now meet), so fold it back through the
  // engine; every nested step works on a strictly shorter monomial.
  MonomialNF out{a, nf.mu_exp, 0};
  for (Gen g : target) out = rewrite_B(out, g);
  if (!t.is_rdescent(out.w, s) || out.mu_exp > nf.mu_exp + 1)
    throw InternalError("rewrite_B: normal form violates the product constraints");
  if (out.a % nf.a == 0) rewrite_factors_.insert(out.a / nf.a);
  return out;
}

} // namespace coxtl
