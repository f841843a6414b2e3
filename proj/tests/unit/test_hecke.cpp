#include "coxtl/hecke.hpp"

#include "coxtl/errors.hpp"
#include "coxtl/session.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

using namespace coxtl;

namespace {

GroupPtr table_of(CoxeterType ty, int n) {
  return GroupTable::build(CoxeterGraph::build(ty, n));
}

HeckeElt random_elt(const GroupPtr& t, std::mt19937_64& rng, int max_terms = 3) {
  std::uniform_int_distribution<EltId> pick(0, t->size() - 1);
  std::uniform_int_distribution<int> coeff(-3, 3), exp(-2, 2), nterms(1, max_terms);
  HeckeElt h(t);
  int n = nterms(rng);
  for (int i = 0; i < n; ++i)
    h.add_term(pick(rng), LaurentPoly::monomial(coeff(rng), exp(rng)));
  h.normalize();
  return h;
}

} // namespace

TEST_CASE("generator relation in the Tt basis") {
  auto t = table_of(CoxeterType::B, 2);
  HeckeElt ts = HeckeElt::unit(t, t->from_word(std::array<Gen, 1>{0}));
  HeckeElt sq = ts * ts;
  HeckeElt expect = HeckeElt::unit(t, 0);
  expect += ts.scaled(LaurentPoly::v(1) - LaurentPoly::v(-1));
  CHECK(sq == expect);

  // ascent: Tt_s Tt_w = Tt_sw
  HeckeElt tw = HeckeElt::unit(t, t->from_word(std::array<Gen, 2>{1, 0}));
  HeckeElt prod = tw.times_gen_left(0);
  CHECK(prod == HeckeElt::unit(t, t->from_word(std::array<Gen, 3>{0, 1, 0})));
}

TEST_CASE("multiplication is associative on random triples in B2") {
  auto t = table_of(CoxeterType::B, 2);
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 100; ++i) {
    HeckeElt a = random_elt(t, rng), b = random_elt(t, rng), c = random_elt(t, rng);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("bar involution on the Hecke algebra") {
  auto t = table_of(CoxeterType::B, 2);
  HeckeBarTable bars(t);
  EltId s = t->from_word(std::array<Gen, 1>{0});

  HeckeElt expect = HeckeElt::unit(t, s);
  expect -= HeckeElt::unit(t, 0).scaled(LaurentPoly::v(1) - LaurentPoly::v(-1));
  CHECK(bars.bar_basis(s) == expect);

  std::mt19937_64 rng(555);
  for (int i = 0; i < 50; ++i) {
    HeckeElt h = random_elt(t, rng);
    CHECK(hecke_bar(hecke_bar(h, bars), bars) == h);
    LaurentPoly a = LaurentPoly::parse("2:-1 1:3");
    CHECK(hecke_bar(h.scaled(a), bars) == hecke_bar(h, bars).scaled(a.bar()));
  }
}

TEST_CASE("C' base cases and the dihedral closed form") {
  auto t = table_of(CoxeterType::A, 2);
  KLCache kl(t);
  CHECK(kl.clprime(0) == HeckeElt::unit(t, 0));

  EltId s = t->from_word(std::array<Gen, 1>{0});
  HeckeElt cs = HeckeElt::unit(t, s);
  cs += HeckeElt::unit(t, 0).scaled(LaurentPoly::v(-1));
  CHECK(kl.clprime(s) == cs);

  // all dihedral P-tilde are monomials v^{l(x)-l(w)}
  for (int m = 3; m <= 8; ++m) {
    auto ti = table_of(CoxeterType::I2, m);
    KLCache kli(ti);
    for (EltId w = 0; w < ti->size(); ++w) {
      for (EltId x = 0; x <= w; ++x) {
        LaurentPoly expect =
            bruhat_leq(*ti, x, w)
                ? LaurentPoly::v(static_cast<std::int32_t>(ti->length(x)) - ti->length(w))
                : LaurentPoly::zero();
        CHECK(kli.p_tilde(x, w) == expect);
      }
    }
  }
}

TEST_CASE("mu examples in A2") {
  auto t = table_of(CoxeterType::A, 2);
  KLCache kl(t);
  EltId s1 = t->from_word(std::array<Gen, 1>{0});
  EltId s12 = t->from_word(std::array<Gen, 2>{0, 1});
  EltId s121 = t->from_word(std::array<Gen, 3>{0, 1, 0});
  CHECK(kl.mu(0, s1) == 1);
  CHECK(kl.mu(s1, s121) == 0);
  CHECK(kl.p_tilde(s1, s121) == LaurentPoly::v(-2));
  CHECK(kl.mu(s12, s121) == 1);
  CHECK(kl.mu(s121, s12) == 0); // not below in Bruhat order
}

TEST_CASE("bar invariance of every C'_w in small groups") {
  for (auto [ty, n] : {std::pair{CoxeterType::A, 3},
                       {CoxeterType::B, 3},
                       {CoxeterType::I2, 4},
                       {CoxeterType::I2, 7},
                       {CoxeterType::D, 4}}) {
    auto t = table_of(ty, n);
    KLCache kl(t);
    HeckeBarTable bars(t);
    for (EltId w = 0; w < t->size(); ++w) {
      HeckeElt c = kl.clprime(w);
      CHECK(hecke_bar(c, bars) == c);
    }
  }
}

TEST_CASE("KL rows are unitriangular with entries in v^-1 Z[v^-1]") {
  auto t = table_of(CoxeterType::B, 3);
  KLCache kl(t);
  for (EltId w = 0; w < t->size(); ++w) {
    KLEntry row = kl.row(w);
    for (const auto& [x, pid] : row.coords) {
      const LaurentPoly p = kl.pool_poly(pid);
      CHECK(bruhat_leq(*t, x, w));
      if (x == w)
        CHECK(p.is_one());
      else {
        CHECK(p.in_lattice(1));
        CHECK(kl.mu(x, w) == p.coeff(-1));
      }
    }
  }
}

TEST_CASE("uniqueness probe: perturbing one P-tilde entry breaks bar invariance") {
  for (auto [ty, n] : {std::pair{CoxeterType::B, 3}, {CoxeterType::A, 3}}) {
    auto t = table_of(ty, n);
    KLCache kl(t);
    HeckeBarTable bars(t);
    std::mt19937_64 rng(777);
    int probed = 0;
    while (probed < 10) {
      EltId w = rng() % t->size();
      HeckeElt c = kl.clprime(w);
      if (c.support_size() < 2) continue;
      const auto& entry = c.coords()[rng() % (c.support_size() - 1)]; // skip diagonal
      HeckeElt perturbed = c;
      HeckeElt bump = HeckeElt::unit(t, entry.first).scaled(LaurentPoly::v(-1));
      perturbed += bump;
      CHECK_FALSE(hecke_bar(perturbed, bars) == perturbed);
      ++probed;
    }
  }
}

TEST_CASE("cs_times_clprime matches the generator-product formula and the multiplication route") {
  auto t = table_of(CoxeterType::A, 2);
  KLCache kl(t);
  EltId s = t->from_word(std::array<Gen, 1>{0});

  auto self = kl.cs_times_clprime(0, s);
  REQUIRE(self.size() == 1);
  CHECK(self[0].first == s);
  CHECK(self[0].second == LaurentPoly::qc());

  auto up = kl.cs_times_clprime(0, 0);
  REQUIRE(up.size() == 1);
  CHECK(up[0].first == s);
  CHECK(up[0].second.is_one());

  // cross-route agreement on every (s, w) of A3 and B3
  for (auto [ty, n] : {std::pair{CoxeterType::A, 3}, {CoxeterType::B, 3}}) {
    auto tt = table_of(ty, n);
    KLCache klt(tt);
    for (Gen g = 0; g < tt->rank(); ++g) {
      HeckeElt cg = klt.clprime(tt->from_word(std::array<Gen, 1>{g}));
      for (EltId w = 0; w < tt->size(); ++w) {
        auto direct = klt.cs_times_clprime(g, w);
        auto expanded = klt.expand_in_clprime(cg * klt.clprime(w));
        CHECK(direct == expanded);
      }
    }
  }
}

TEST_CASE("descent-choice independence of the KL recursion on A3") {
  auto t = table_of(CoxeterType::A, 3);
  KLCache low(t, DescentPolicy::LowestIndex);
  KLCache high(t, DescentPolicy::HighestIndex);
  for (EltId w = 0; w < t->size(); ++w) CHECK(low.clprime(w) == high.clprime(w));
}

TEST_CASE("D4 counterexample: the escaping coefficient is the Laurent constant 1") {
  auto t = table_of(CoxeterType::D, 4);
  KLCache kl(t);
  auto w = CoxeterElement::parse(t, "2.3.4.3.1.2.3");
  auto x = CoxeterElement::parse(t, "1.2.4.3");
  CHECK_FALSE(t->is_ldescent(w.id(), 0)); // sigma_1 w > w
  auto expansion = kl.cs_times_clprime(0, w.id());
  LaurentPoly coeff;
  for (const auto& [y, c] : expansion)
    if (y == x.id()) coeff = c;
  CHECK(coeff.is_one());
}

TEST_CASE("KL cache files round-trip and are validated") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "coxtl_test_cache";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path file = dir / "B2.klc";

  auto t = table_of(CoxeterType::B, 2);
  {
    KLCache kl(t);
    kl.compute_all();
    kl.flush_file(file);
  }
  {
    KLCache kl(t);
    kl.load_file(file);
    CHECK(kl.rows_ready() == t->size());
    KLCache fresh(t);
    for (EltId w = 0; w < t->size(); ++w) CHECK(kl.clprime(w) == fresh.clprime(w));
    // flushing again appends nothing
    auto size_before = fs::file_size(file);
    kl.flush_file(file);
    CHECK(fs::file_size(file) == size_before);
  }

  // header mismatch
  {
    std::ofstream bad(dir / "bad1.klc");
    bad << "KLC1 B 3\n";
  }
  {
    KLCache kl(t);
    CHECK_THROWS_AS(kl.load_file(dir / "bad1.klc"), ParseError);
  }
  // corrupt polynomial
  {
    std::ofstream bad(dir / "bad2.klc");
    bad << "KLC1 B 2\n1 1 nonsense\n";
  }
  {
    KLCache kl(t);
    CHECK_THROWS_AS(kl.load_file(dir / "bad2.klc"), ParseError);
  }
  // a truncated final row (no diagonal) is ignored, not trusted
  {
    std::ofstream part(dir / "bad3.klc");
    part << "KLC1 B 2\n1.2.1 e 1:-3\n";
  }
  {
    KLCache kl(t);
    kl.load_file(dir / "bad3.klc");
    CHECK(kl.rows_ready() == 0);
  }

  // Session-level quarantine
  {
    std::ofstream bad(file, std::ios::trunc);
    bad << "KLC1 B 2\n1 1 garbage\n";
  }
  SessionOptions opts;
  opts.cache_dir = dir;
  Session session(CoxeterGraph::build(CoxeterType::B, 2), opts);
  auto warning = session.load_kl_cache();
  REQUIRE(warning.has_value());
  CHECK(fs::exists(dir / "B2.klc.quarantined"));
  CHECK_FALSE(fs::exists(file));
  session.kl().compute_all();
  session.flush_kl_cache();
  CHECK(fs::exists(file));
  fs::remove_all(dir);
}
