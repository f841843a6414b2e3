#include "coxtl/hecke.hpp"

#include "coxtl/errors.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace coxtl {

/* ------------------------------------------------------------------ */
/*  HeckeElt                                                           */
/* ------------------------------------------------------------------ */

HeckeElt HeckeElt::unit(GroupPtr table, EltId w) {
  HeckeElt h(std::move(table));
  h.coords_.emplace_back(w, LaurentPoly::one());
  return h;
}

LaurentPoly HeckeElt::coord(EltId x) const {
  auto it = std::lower_bound(coords_.begin(), coords_.end(), x,
                             [](const Entry& e, EltId id) { return e.first < id; });
  if (it != coords_.end() && it->first == x) return it->second;
  return LaurentPoly::zero();
}

void HeckeElt::add_term(EltId x, LaurentPoly p) {
  if (!p.is_zero()) coords_.emplace_back(x, std::move(p));
}

void HeckeElt::normalize() {
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
  coords_ = std::move(out);
}

HeckeElt HeckeElt::operator+(const HeckeElt& rhs) const {
  if (table_ && rhs.table_ && table_.get() != rhs.table_.get())
    throw ContractError("HeckeElt: mixed groups");
  HeckeElt out(table_ ? table_ : rhs.table_);
  out.coords_.reserve(coords_.size() + rhs.coords_.size());
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

HeckeElt HeckeElt::operator-(const HeckeElt& rhs) const {
  return *this + rhs.scaled(LaurentPoly::constant(-1));
}

HeckeElt HeckeElt::scaled(const LaurentPoly& a) const {
  HeckeElt out(table_);
  if (a.is_zero()) return out;
  out.coords_.reserve(coords_.size());
  for (const Entry& e : coords_) {
    LaurentPoly p = e.second * a;
    if (!p.is_zero()) out.coords_.emplace_back(e.first, std::move(p));
  }
  return out;
}

HeckeElt HeckeElt::times_gen(Gen s) const {
  const GroupTable& t = *table_;
  static const LaurentPoly vdiff = LaurentPoly::v(1) - LaurentPoly::v(-1);
  HeckeElt out(table_);
  out.coords_.reserve(coords_.size() * 2);
  for (const Entry& e : coords_) {
    EltId ws = t.rshift(e.first, s);
    out.add_term(ws, e.second);
    if (t.length(ws) < t.length(e.first)) out.add_term(e.first, e.second * vdiff);
  }
  out.normalize();
  return out;
}

HeckeElt HeckeElt::times_gen_left(Gen s) const {
  const GroupTable& t = *table_;
  static const LaurentPoly vdiff = LaurentPoly::v(1) - LaurentPoly::v(-1);
  HeckeElt out(table_);
  out.coords_.reserve(coords_.size() * 2);
  for (const Entry& e : coords_) {
    EltId sw = t.lshift(e.first, s);
    out.add_term(sw, e.second);
    if (t.length(sw) < t.length(e.first)) out.add_term(e.first, e.second * vdiff);
  }
  out.normalize();
  return out;
}

HeckeElt HeckeElt::operator*(const HeckeElt& rhs) const {
  if (table_.get() != rhs.table_.get()) throw ContractError("HeckeElt: mixed groups");
  HeckeElt acc(table_);
  for (const Entry& e : rhs.coords_) {
    HeckeElt part = *this;
    for (Gen s : table_->word(e.first)) part = part.times_gen(s);
    acc += part.scaled(e.second);
  }
  return acc;
}

bool HeckeElt::operator==(const HeckeElt& rhs) const { return coords_ == rhs.coords_; }

/* ------------------------------------------------------------------ */
/*  Bar involution                                                     */
/* ------------------------------------------------------------------ */

const HeckeElt& HeckeBarTable::bar_basis(EltId w) {
  if (rows_.empty()) {
    rows_.assign(table_->size(), HeckeElt(table_));
    ready_.assign(table_->size(), 0);
    rows_[0] = HeckeElt::unit(table_, 0);
    ready_[0] = 1;
  }
  if (ready_[w]) return rows_[w];
  static const LaurentPoly vdiff = LaurentPoly::v(1) - LaurentPoly::v(-1);
  // peel letters from the right; iterative so long elements do not recurse
  std::vector<std::pair<EltId, Gen>> chain;
  EltId u = w;
  while (!ready_[u]) {
    Word cw = table_->word(u);
    Gen s = cw.back();
    chain.emplace_back(u, s);
    u = table_->rshift(u, s);
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const HeckeElt& prev = rows_[table_->rshift(it->first, it->second)];
    rows_[it->first] = prev.times_gen(it->second) - prev.scaled(vdiff);
    ready_[it->first] = 1;
  }
  return rows_[w];
}

HeckeElt HeckeBarTable::bar(const HeckeElt& h) {
  HeckeElt out(table_);
  for (const HeckeElt::Entry& e : h.coords())
    out += bar_basis(e.first).scaled(e.second.bar());
  return out;
}

HeckeElt hecke_bar(const HeckeElt& h, HeckeBarTable& bars) { return bars.bar(h); }

/* ------------------------------------------------------------------ */
/*  KLCache                                                            */
/* ------------------------------------------------------------------ */

KLCache::KLCache(GroupPtr table, DescentPolicy policy)
    : table_(std::move(table)), policy_(policy) {
  rows_.resize(table_->size());
  pool_.push_back(LaurentPoly::one()); // id 0 = 1, the diagonal entry
  pool_index_.emplace(LaurentPoly::one(), 0);
  acc_.resize(table_->size());
}

std::uint32_t KLCache::intern(LaurentPoly p) {
  auto [it, inserted] = pool_index_.try_emplace(p, static_cast<std::uint32_t>(pool_.size()));
  if (inserted) pool_.push_back(std::move(p));
  return it->second;
}

void KLCache::ensure_all_up_to(std::uint16_t length) {
  while (frontier_ <= length) {
    EltId lo = table_->stratum_begin(frontier_);
    EltId hi = table_->stratum_begin(frontier_ + 1);
    for (EltId w = lo; w < hi; ++w)
      if (!rows_[w].ready) compute_row(w);
    ++frontier_;
  }
}

void KLCache::ensure_row(EltId w) {
  if (rows_[w].ready) return;
  if (table_->length(w) > 0) ensure_all_up_to(table_->length(w) - 1);
  compute_row(w);
}

void KLCache::compute_row(EltId w) {
  Row& row = rows_[w];
  if (row.ready) return;
  if (w == 0) {
    row.coords = {{0u, 0u}};
    row.ready = 1;
    return;
  }

  // s = chosen left descent, u = sw; C'_w = C'_s C'_u - mu terms.
  const std::uint16_t mask = table_->ldescent_mask(w);
  Gen s = 0;
  if (policy_ == DescentPolicy::LowestIndex) {
    while (!(mask >> s & 1u)) ++s;
  } else {
    s = static_cast<Gen>(table_->rank() - 1);
    while (!(mask >> s & 1u)) --s;
  }
  const EltId u = table_->lshift(w, s);
  if (!rows_[u].ready) throw InternalError("KL recursion out of order");

  touched_.clear();
  auto bump = [&](EltId x, const LaurentPoly& p) {
    if (acc_[x].is_zero() && !p.is_zero()) touched_.push_back(x);
    acc_[x] += p;
  };

  static const LaurentPoly vneg = LaurentPoly::v(-1);
  static const LaurentPoly vpos = LaurentPoly::v(1);
  for (const auto& [x, pid] : rows_[u].coords) {
    const LaurentPoly& p = pool_[pid];
    EltId sx = table_->lshift(x, s);
    bump(sx, p);
    // (v^-1 + (v - v^-1) [sx < x]) P
    bump(x, p * (table_->length(sx) < table_->length(x) ? vpos : vneg));
  }
  for (const auto& [x, m] : rows_[u].mus) {
    if (!table_->is_ldescent(x, s)) continue;
    if (!rows_[x].ready) throw InternalError("KL recursion out of order");
    const LaurentPoly mp = LaurentPoly::constant(-m);
    for (const auto& [y, pid] : rows_[x].coords) bump(y, pool_[pid] * mp);
  }

  std::sort(touched_.begin(), touched_.end());
  row.coords.clear();
  for (EltId x : touched_) {
    if (acc_[x].is_zero()) continue;
    row.coords.emplace_back(x, intern(std::move(acc_[x])));
    acc_[x] = LaurentPoly::zero();
  }

  finish_row(w, row);
}

void KLCache::finish_row(EltId w, Row& row) {
  // Defining conditions of the basis: the diagonal is 1, everything else lies in
  // v^-1 Z[v^-1], and mu is the v^-1 coefficient.
  row.mus.clear();
  bool saw_diag = false;
  for (const auto& [x, pid] : row.coords) {
    const LaurentPoly& p = pool_[pid];
    if (x == w) {
      if (!p.is_one()) throw InternalError("KL row: diagonal entry is not 1");
      saw_diag = true;
      continue;
    }
    if (!p.in_lattice(1))
      throw InternalError("KL row: off-diagonal entry outside v^-1 Z[v^-1]");
    std::int64_t m = p.coeff(-1);
    if (m != 0) row.mus.emplace_back(x, m);
  }
  if (!saw_diag) throw InternalError("KL row: missing diagonal entry");
  row.ready = 1;
}

KLEntry KLCache::row(EltId w) {
  ensure_row(w);
  const Row& r = rows_[w];
  return KLEntry{w, r.coords, r.mus};
}

LaurentPoly KLCache::p_tilde(EltId x, EltId w) {
  ensure_row(w);
  const Row& r = rows_[w];
  auto it = std::lower_bound(r.coords.begin(), r.coords.end(), x,
                             [](const auto& e, EltId id) { return e.first < id; });
  if (it != r.coords.end() && it->first == x) return pool_[it->second];
  return LaurentPoly::zero();
}

std::int64_t KLCache::mu(EltId x, EltId w) {
  if (table_->length(x) >= table_->length(w)) return 0;
  return p_tilde(x, w).coeff(-1);
}

HeckeElt KLCache::clprime(EltId w) {
  ensure_row(w);
  HeckeElt h(table_);
  for (const auto& [x, pid] : rows_[w].coords) h.add_term(x, pool_[pid]);
  h.normalize();
  return h;
}

std::vector<std::pair<EltId, LaurentPoly>> KLCache::cs_times_clprime(Gen s, EltId w) {
  std::vector<std::pair<EltId, LaurentPoly>> out;
  EltId sw = table_->lshift(w, s);
  if (table_->length(sw) < table_->length(w)) {
    out.emplace_back(w, LaurentPoly::qc());
    return out;
  }
  ensure_row(w);
  out.emplace_back(sw, LaurentPoly::one());
  for (const auto& [x, m] : rows_[w].mus)
    if (table_->is_ldescent(x, s)) out.emplace_back(x, LaurentPoly::constant(m));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

std::vector<std::pair<EltId, LaurentPoly>> KLCache::expand_in_clprime(const HeckeElt& h) {
  std::map<EltId, LaurentPoly> work;
  for (const auto& e : h.coords()) work.emplace(e.first, e.second);
  std::vector<std::pair<EltId, LaurentPoly>> out;
  while (!work.empty()) {
    auto top = std::prev(work.end());
    EltId x = top->first;
    LaurentPoly c = top->second;
    work.erase(top);
    if (c.is_zero()) continue;
    ensure_row(x);
    for (const auto& [y, pid] : rows_[x].coords) {
      if (y == x) continue;
      auto [it, inserted] = work.try_emplace(y, LaurentPoly::zero());
      it->second -= c * pool_[pid];
      if (it->second.is_zero()) work.erase(it);
    }
    out.emplace_back(x, std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void KLCache::compute_all() { ensure_all_up_to(table_->max_length()); }

std::uint32_t KLCache::rows_ready() const {
  std::uint32_t n = 0;
  for (const Row& r : rows_)
    if (r.ready) ++n;
  return n;
}

/* ------------------------------------------------------------------ */
/*  Cache file IO                                                      */
/* ------------------------------------------------------------------ */

namespace {

std::string cache_header(const CoxeterGraph& g) {
  int rank_or_m = g.type() == CoxeterType::I2 ? static_cast<int>(g.group_order() / 2)
                                              : g.rank();
  return "KLC1 " + type_name(g.type()) + " " + std::to_string(rank_or_m);
}

} // namespace

void KLCache::load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open KL cache file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != cache_header(table_->graph()))
    throw ParseError("KL cache header mismatch in " + path.string());

  // Collect whole rows; a row is trusted only if its diagonal entry is
  // present and equal to 1 (rows are flushed diagonal-last).
  std::map<EltId, Row> pending;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string wtok, xtok;
    if (!(ss >> wtok >> xtok))
      throw ParseError("KL cache: malformed line " + std::to_string(lineno));
    std::string polytext;
    std::getline(ss, polytext);
    EltId w, x;
    LaurentPoly p;
    try {
      Word ww = parse_word(wtok, table_->rank());
      Word xw = parse_word(xtok, table_->rank());
      w = table_->from_word(ww);
      x = table_->from_word(xw);
      if (word_to_string(table_->word(w)) != wtok || word_to_string(table_->word(x)) != xtok)
        throw ParseError("KL cache: non-canonical word");
      p = LaurentPoly::parse(polytext);
    } catch (const std::exception& e) {
      throw ParseError("KL cache: line " + std::to_string(lineno) + ": " + e.what());
    }
    if (x != w && !p.in_lattice(1))
      throw ParseError("KL cache: line " + std::to_string(lineno) +
                       ": off-diagonal entry outside v^-1 Z[v^-1]");
    if (x == w && !p.is_one())
      throw ParseError("KL cache: line " + std::to_string(lineno) + ": diagonal is not 1");
    if (!bruhat_leq(*table_, x, w))
      throw ParseError("KL cache: line " + std::to_string(lineno) +
                       ": entry outside the Bruhat interval");
    pending[w].coords.emplace_back(x, intern(std::move(p)));
  }
  for (auto& [w, row] : pending) {
    if (rows_[w].ready) continue;
    bool complete = !row.coords.empty() && row.coords.back().first == w;
    if (!complete) continue; // truncated tail row: recompute instead of trusting it
    std::sort(row.coords.begin(), row.coords.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < row.coords.size(); ++i)
      if (row.coords[i].first == row.coords[i - 1].first)
        throw ParseError("KL cache: duplicate entry in row " +
                         word_to_string(table_->word(w)));
    finish_row(w, row);
    row.persisted = 1;
    rows_[w] = std::move(row);
  }
  // advance the frontier over fully loaded strata
  while (frontier_ <= table_->max_length()) {
    EltId lo = table_->stratum_begin(frontier_);
    EltId hi = table_->stratum_begin(frontier_ + 1);
    bool all = true;
    for (EltId w = lo; w < hi && all; ++w) all = rows_[w].ready;
    if (!all) break;
    ++frontier_;
  }
}

void KLCache::flush_file(const std::filesystem::path& path) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (!out) throw ParseError("cannot open KL cache file " + path.string() + " for append");
  if (fresh) out << cache_header(table_->graph()) << "\n";
  for (EltId w = 0; w < table_->size(); ++w) {
    Row& row = rows_[w];
    if (!row.ready || row.persisted) continue;
    const std::string wtok = word_to_string(table_->word(w));
    // diagonal last: completeness marker for load_file
    for (const auto& [x, pid] : row.coords)
      if (x != w)
        out << wtok << ' ' << word_to_string(table_->word(x)) << ' '
            << pool_[pid].to_string() << "\n";
    out << wtok << ' ' << wtok << ' ' << pool_[0].to_string() << "\n";
    row.persisted = 1;
  }
}

} // namespace coxtl
