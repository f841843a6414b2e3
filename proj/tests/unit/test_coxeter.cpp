#include "coxtl/coxeter.hpp"

#include "coxtl/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace coxtl;

namespace {

GroupPtr table_of(CoxeterType ty, int n, GraphOptions gopts = {}) {
  return GroupTable::build(CoxeterGraph::build(ty, n, gopts));
}

// id -> oracle element dictionary, built by folding canonical words.
std::vector<oracles::Model::Elt> dictionary(const GroupPtr& t, const oracles::Model& m) {
  std::vector<oracles::Model::Elt> dict(t->size());
  for (EltId x = 0; x < t->size(); ++x) dict[x] = m.fold(t->word(x));
  return dict;
}

} // namespace

TEST_CASE("graph constructors carry the documented labelling") {
  auto b3 = CoxeterGraph::build(CoxeterType::B, 3);
  CHECK(b3.bond(0, 1) == 4);
  CHECK(b3.bond(1, 2) == 3);
  CHECK(b3.bond(0, 2) == 2);

  auto d4 = CoxeterGraph::build(CoxeterType::D, 4);
  CHECK(d4.bond(0, 2) == 3);
  CHECK(d4.bond(1, 2) == 3);
  CHECK(d4.bond(2, 3) == 3);
  CHECK(d4.commute(0, 1));
  CHECK(d4.commute(0, 3));

  auto f4 = CoxeterGraph::build(CoxeterType::F4, 4);
  CHECK(f4.bond(1, 2) == 4);
  auto h4 = CoxeterGraph::build(CoxeterType::H4, 4);
  CHECK(h4.bond(0, 1) == 5);

  CHECK_THROWS_AS(CoxeterGraph::build(CoxeterType::I2, 2), ContractError);
  CHECK_THROWS_AS(CoxeterGraph::build(CoxeterType::B, 1), ContractError);
  CHECK_THROWS_AS(CoxeterGraph::build(CoxeterType::H3, 5), ContractError);
}

TEST_CASE("D3 is rejected by default and accepted behind the alias flag") {
  CHECK_THROWS_AS(CoxeterGraph::build(CoxeterType::D, 3), ContractError);
  GraphOptions gopts;
  gopts.allow_d3_alias = true;
  auto t = table_of(CoxeterType::D, 3, gopts);
  CHECK(t->size() == 24); // same group as A3
}

TEST_CASE("I2(3) is the same group as A2") {
  auto ta = table_of(CoxeterType::A, 2);
  auto ti = table_of(CoxeterType::I2, 3);
  REQUIRE(ta->size() == ti->size());
  for (EltId x = 0; x < ta->size(); ++x) CHECK(ta->word(x) == ti->word(x));
}

TEST_CASE("D4 subgraph predicate") {
  CHECK(CoxeterGraph::build(CoxeterType::D, 4).contains_d4_subgraph());
  CHECK(CoxeterGraph::build(CoxeterType::D, 5).contains_d4_subgraph());
  CHECK(CoxeterGraph::build(CoxeterType::E6, 6).contains_d4_subgraph());
  CHECK_FALSE(CoxeterGraph::build(CoxeterType::A, 4).contains_d4_subgraph());
  CHECK_FALSE(CoxeterGraph::build(CoxeterType::B, 4).contains_d4_subgraph());
  CHECK_FALSE(CoxeterGraph::build(CoxeterType::F4, 4).contains_d4_subgraph());
  CHECK_FALSE(CoxeterGraph::build(CoxeterType::H4, 4).contains_d4_subgraph());
  CHECK_FALSE(CoxeterGraph::build(CoxeterType::I2, 7).contains_d4_subgraph());
}

TEST_CASE("enumeration agrees with independent permutation models") {
  struct Case {
    GroupPtr table;
    oracles::Model model;
  };
  std::vector<Case> cases;
  cases.push_back({table_of(CoxeterType::A, 3), oracles::model_A(3)});
  cases.push_back({table_of(CoxeterType::B, 3), oracles::model_B(3)});
  cases.push_back({table_of(CoxeterType::D, 4), oracles::model_D(4)});
  cases.push_back({table_of(CoxeterType::I2, 5), oracles::model_I2(5)});

  for (auto& c : cases) {
    oracles::ModelGroup g(c.model);
    REQUIRE(c.table->size() == g.order());
    auto dict = dictionary(c.table, c.model);
    // the words are reduced (lengths match) and the map is a bijection
    std::set<oracles::Model::Elt> seen;
    for (EltId x = 0; x < c.table->size(); ++x) {
      CHECK(g.len(dict[x]) == c.table->length(x));
      seen.insert(dict[x]);
    }
    CHECK(seen.size() == g.order());
  }

  CHECK(table_of(CoxeterType::A, 3)->size() == 24);
  CHECK(table_of(CoxeterType::B, 3)->size() == 48);
  CHECK(table_of(CoxeterType::I2, 5)->size() == 10);
}

TEST_CASE("enumerate is sorted by (length, canonical word) and respects max_length") {
  auto t = table_of(CoxeterType::B, 3);
  auto all = enumerate(t);
  REQUIRE(all.size() == 48);
  for (std::size_t i = 1; i < all.size(); ++i) {
    auto &a = all[i - 1], &b = all[i];
    bool ordered = a.length() < b.length() ||
                   (a.length() == b.length() && a.word() < b.word());
    CHECK(ordered);
  }
  auto short_ones = enumerate(t, 2);
  for (auto& e : short_ones) CHECK(e.length() <= 2);
  CHECK(short_ones.size() == 1 + 3 + 5);
}

TEST_CASE("dihedral tables match the oracle model for every element and shift") {
  for (int m : {3, 4, 9, 12}) {
    auto t = table_of(CoxeterType::I2, m);
    auto model = oracles::model_I2(m);
    oracles::ModelGroup g(model);
    REQUIRE(t->size() == g.order());
    auto dict = dictionary(t, model);
    std::set<oracles::Model::Elt> seen;
    for (EltId x = 0; x < t->size(); ++x) {
      CHECK(g.len(dict[x]) == t->length(x));
      seen.insert(dict[x]);
      for (Gen s = 0; s < 2; ++s) {
        CHECK(dict[t->rshift(x, s)] == model.rmul(dict[x], s));
        // left shift: s * x == (x^-1 * s)^-1 in the model
        auto inv_then = model.rmul(dict[t->inverse(x)], s);
        CHECK(dict[t->inverse(t->lshift(x, s))] == inv_then);
        CHECK(t->is_rdescent(x, s) ==
              (g.len(model.rmul(dict[x], s)) < g.len(dict[x])));
      }
    }
    CHECK(seen.size() == g.order());
    // inverses: folding the reversed canonical word reproduces the inverse id
    for (EltId x = 0; x < t->size(); ++x) {
      Word w = t->word(x);
      std::reverse(w.begin(), w.end());
      CHECK(t->from_word(w) == t->inverse(x));
    }
  }
}

TEST_CASE("mult_gen matches the signed-permutation oracle on all of B2") {
  auto t = table_of(CoxeterType::B, 2);
  auto m = oracles::model_B(2);
  auto dict = dictionary(t, m);
  for (EltId x = 0; x < t->size(); ++x) {
    CoxeterElement e(t, x);
    for (Gen s = 0; s < 2; ++s) {
      auto r = e.mult_gen(s, CoxeterElement::Side::Right);
      CHECK(dict[r.id()] == m.rmul(dict[x], s));
      int diff = static_cast<int>(r.length()) - static_cast<int>(e.length());
      CHECK(std::abs(diff) == 1); // length parity
    }
  }
}

TEST_CASE("exchange-condition example in A2") {
  auto t = table_of(CoxeterType::A, 2);
  auto w = CoxeterElement::parse(t, "1.2.1");
  auto ws = w.mult_gen(1, CoxeterElement::Side::Right);
  CHECK(ws.to_string() == "2.1");
  CHECK(ws.length() == 2);
  auto e = CoxeterElement::identity(t);
  CHECK(e.mult_gen(0, CoxeterElement::Side::Left).to_string() == "1");
  // the braid relation forces one canonical word
  Word alt{1, 0, 1};
  CHECK(CoxeterElement::from_word(t, alt).to_string() == "1.2.1");
}

TEST_CASE("canonical forms are stable under commutation reshuffles") {
  auto t = table_of(CoxeterType::B, 3);
  const CoxeterGraph& g = t->graph();
  std::mt19937_64 rng(31337);
  std::uniform_int_distribution<int> len(0, 14), gen(0, 2);
  for (int trial = 0; trial < 10000; ++trial) {
    Word w(len(rng));
    for (Gen& s : w) s = static_cast<Gen>(gen(rng));
    Word shuffled = w;
    for (int k = 0; k < 8 && shuffled.size() > 1; ++k) {
      std::size_t i = rng() % (shuffled.size() - 1);
      if (shuffled[i] != shuffled[i + 1] && g.commute(shuffled[i], shuffled[i + 1]))
        std::swap(shuffled[i], shuffled[i + 1]);
    }
    CHECK(t->from_word(w) == t->from_word(shuffled));
  }
}

TEST_CASE("bruhat order examples and exhaustive subword oracle") {
  auto t = table_of(CoxeterType::A, 2);
  auto e = CoxeterElement::identity(t);
  auto w0 = CoxeterElement(t, t->longest_element());
  CHECK(bruhat_leq(e, w0));
  CHECK(bruhat_leq(CoxeterElement::parse(t, "1.2"), CoxeterElement::parse(t, "1.2.1")));
  CHECK_FALSE(bruhat_leq(CoxeterElement::parse(t, "2.1"), CoxeterElement::parse(t, "1.2")));

  // oracle: x <= w iff some reduced word of x is a subword of the canonical
  // word of w
  for (auto [ty, n] : {std::pair{CoxeterType::A, 2}, {CoxeterType::B, 2}}) {
    auto tt = table_of(ty, n);
    auto m = ty == CoxeterType::A ? oracles::model_A(n) : oracles::model_B(n);
    oracles::ModelGroup g(m);
    auto dict = dictionary(tt, m);
    for (EltId x = 0; x < tt->size(); ++x) {
      for (EltId w = 0; w < tt->size(); ++w) {
        bool expected = false;
        for (const Word& rw : g.reduced_words(dict[x]))
          if (oracles::is_subword(rw, tt->word(w))) {
            expected = true;
            break;
          }
        CHECK(bruhat_leq(*tt, x, w) == expected);
      }
    }
  }
}

TEST_CASE("full commutativity: examples and commutation-class oracle") {
  auto ta = table_of(CoxeterType::A, 2);
  CHECK_FALSE(is_fully_commutative(CoxeterElement::parse(ta, "1.2.1")));

  auto td = table_of(CoxeterType::D, 4);
  CHECK(is_fully_commutative(CoxeterElement::parse(td, "1.2.4.3")));
  CHECK_FALSE(is_fully_commutative(CoxeterElement::parse(td, "2.3.4.3.1.2.3")));

  // counts against the single-commutation-class definition
  for (int n = 2; n <= 4; ++n) {
    auto t = table_of(CoxeterType::A, n);
    auto m = oracles::model_A(n);
    oracles::ModelGroup g(m);
    auto dict = dictionary(t, m);
    std::uint32_t oracle_count = 0;
    for (EltId x = 0; x < t->size(); ++x) {
      bool fc = g.fully_commutative(t->graph(), dict[x]);
      CHECK(fc == t->is_fully_commutative(x));
      if (fc) ++oracle_count;
    }
    CHECK(oracle_count == t->fc_count());
  }
  CHECK(table_of(CoxeterType::A, 2)->fc_count() == 5);
  CHECK(table_of(CoxeterType::A, 3)->fc_count() == 14);
}

TEST_CASE("W^(r): counts, unique reduced words, full commutativity, length additivity") {
  auto t = table_of(CoxeterType::B, 4);
  auto m = oracles::model_B(4);
  oracles::ModelGroup g(m);
  auto dict = dictionary(t, m);

  for (int r = 1; r <= 4; ++r) {
    auto reps = type_b_coset_reps(t, r);
    CHECK(reps.size() == static_cast<std::size_t>(2 * r));
    for (const auto& y : reps) {
      CHECK(g.reduced_words(dict[y.id()]).size() == 1);
      CHECK(is_fully_commutative(y));
    }
    // l(xy) = l(x) + l(y) for x in W(B_{r-1}), y in W^(r)
    for (EltId x = 0; x < t->size(); ++x) {
      if (t->content_mask(x) >> (r - 1)) continue; // outside W(B_{r-1})
      for (const auto& y : reps) {
        EltId xy = t->mult(x, y.id());
        CHECK(t->length(xy) == t->length(x) + y.length());
      }
    }
  }
}

TEST_CASE("parse_nonfc_B: spec examples") {
  auto t3 = table_of(CoxeterType::B, 3);
  auto p = parse_nonfc_B(CoxeterElement::parse(t3, "2.3"), 1);
  CHECK(p.kind == BParse::Kind::CaseI);
  CHECK(p.sprime == 2);
  REQUIRE(p.factors.size() == 3);
  for (const auto& f : p.factors) CHECK(f.is_identity());

  auto t2 = table_of(CoxeterType::B, 2);
  auto q = parse_nonfc_B(CoxeterElement::parse(t2, "1.2.1"), 1);
  CHECK(q.kind == BParse::Kind::CaseII);
  CHECK(q.sprime == 0);
  REQUIRE(q.factors.size() == 4);
  for (const auto& f : q.factors) CHECK(f.is_identity());

  CHECK_THROWS_AS(parse_nonfc_B(CoxeterElement::parse(t3, "3"), 1), ContractError);
  auto ta = table_of(CoxeterType::A, 3);
  CHECK_THROWS_AS(parse_nonfc_B(CoxeterElement::parse(ta, "1"), 1), ContractError);
}

TEST_CASE("parse_nonfc_B agrees with the exhaustive reduced-word pattern search") {
  auto t = table_of(CoxeterType::B, 3);
  auto m = oracles::model_B(3);
  oracles::ModelGroup g(m);
  auto dict = dictionary(t, m);
  const CoxeterGraph& graph = t->graph();

  int parsed = 0;
  for (EltId w : t->fc_elements()) {
    for (Gen s = 0; s < 3; ++s) {
      EltId ws = t->rshift(w, s);
      if (t->is_fully_commutative(ws)) continue;
      BParse p = parse_nonfc_B(CoxeterElement(t, w), s);
      ++parsed;

      // the factors reassemble a reduced word of w with the stated pattern
      Word assembled;
      auto push = [&](const CoxeterElement& f) {
        for (Gen x : f.word()) assembled.push_back(x);
      };
      if (p.kind == BParse::Kind::CaseI) {
        push(p.factors[0]);
        assembled.push_back(s);
        push(p.factors[1]);
        assembled.push_back(p.sprime);
        push(p.factors[2]);
        CHECK(graph.bond(s, p.sprime) == 3);
        for (Gen c : p.factors[1].content()) CHECK(graph.commute(s, c));
        for (Gen c : p.factors[2].content()) CHECK(graph.commute(s, c));
      } else {
        push(p.factors[0]);
        assembled.push_back(p.sprime);
        push(p.factors[1]);
        assembled.push_back(s);
        push(p.factors[2]);
        assembled.push_back(p.sprime);
        push(p.factors[3]);
        CHECK(graph.bond(s, p.sprime) == 4);
        for (Gen c : p.factors[2].content()) CHECK(graph.commute(s, c));
        for (Gen c : p.factors[3].content()) CHECK(graph.commute(s, c));
        for (Gen c : p.factors[1].content()) CHECK(graph.commute(p.sprime, c));
        for (Gen c : p.factors[2].content()) CHECK(graph.commute(p.sprime, c));
      }
      CHECK(assembled.size() == t->length(w));
      CHECK(t->from_word(assembled) == w);

      // s' is unique: search every reduced word of w for admissible parses
      std::set<Gen> sprimes;
      for (const Word& rw : g.reduced_words(dict[w])) {
        for (std::size_t i = 0; i < rw.size(); ++i) {
          if (rw[i] != s) continue;
          // case (i): last s, exactly one non-commuting letter afterwards
          std::vector<std::size_t> hot;
          bool last_s = true;
          for (std::size_t j = i + 1; j < rw.size(); ++j) {
            if (rw[j] == s) last_s = false;
            if (!graph.commute(rw[j], s)) hot.push_back(j);
          }
          if (!last_s || hot.size() != 1) continue;
          sprimes.insert(rw[hot[0]]);
        }
      }
      REQUIRE(sprimes.size() == 1);
      CHECK(*sprimes.begin() == p.sprime);
    }
  }
  CHECK(parsed > 0);
}

TEST_CASE("coset_decompose_B: examples and unique-factorisation oracle") {
  auto t2 = table_of(CoxeterType::B, 2);
  auto nf = coset_decompose_B(CoxeterElement(t2, t2->longest_element()));
  REQUIRE(nf.factors.size() == 2);
  CHECK(nf.factors[0].to_string() == "1");
  CHECK(nf.factors[1].to_string() == "2.1.2");

  auto nfe = coset_decompose_B(CoxeterElement::identity(t2));
  for (const auto& f : nfe.factors) CHECK(f.is_identity());

  auto nf21 = coset_decompose_B(CoxeterElement::parse(t2, "2.1"));
  CHECK(nf21.factors[0].is_identity());
  CHECK(nf21.factors[1].to_string() == "2.1");

  // oracle: the product map W^(1) x ... x W^(n) -> W is a reduced bijection
  for (int n : {2, 3}) {
    auto t = table_of(CoxeterType::B, n);
    std::vector<std::vector<CoxeterElement>> reps;
    for (int r = 1; r <= n; ++r) reps.push_back(type_b_coset_reps(t, r));
    std::set<EltId> seen;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      EltId prod = 0;
      std::uint32_t total = 0;
      for (int r = 0; r < n; ++r) {
        prod = t->mult(prod, reps[r][idx[r]].id());
        total += reps[r][idx[r]].length();
      }
      CHECK(t->length(prod) == total);
      CHECK(seen.insert(prod).second);
      // the library decomposition inverts the product
      auto dec = coset_decompose_B(CoxeterElement(t, prod));
      for (int r = 0; r < n; ++r) CHECK(dec.factors[r] == reps[r][idx[r]]);
      int carry = n - 1;
      while (carry >= 0 && ++idx[carry] == reps[carry].size()) idx[carry--] = 0;
      if (carry < 0) break;
    }
    CHECK(seen.size() == t->size());
  }
}

TEST_CASE("capacity guard") {
  CHECK_THROWS_AS(GroupTable::build(CoxeterGraph::build(CoxeterType::E7, 7)),
                  CapacityError);
  TableOptions small;
  small.max_group_order = 10;
  CHECK_THROWS_AS(GroupTable::build(CoxeterGraph::build(CoxeterType::B, 3), small),
                  CapacityError);
  small.capacity_override = true;
  CHECK(GroupTable::build(CoxeterGraph::build(CoxeterType::B, 3), small)->size() == 48);
}

TEST_CASE("word parsing and formatting") {
  auto t = table_of(CoxeterType::B, 3);
  CHECK(CoxeterElement::parse(t, "e").is_identity());
  CHECK(CoxeterElement::parse(t, "2.3.1").to_string() == "2.1.3");
  CHECK_THROWS_AS(parse_word("0.1", 3), ParseError);
  CHECK_THROWS_AS(parse_word("4", 3), ParseError);
  CHECK_THROWS_AS(parse_word("1..2", 3), ParseError);
  CHECK(word_to_string({}) == "e");
}

TEST_CASE("inverse and content") {
  auto t = table_of(CoxeterType::B, 3);
  for (EltId x = 0; x < t->size(); ++x) {
    CHECK(t->length(t->inverse(x)) == t->length(x));
    CHECK(t->mult(x, t->inverse(x)) == 0);
  }
  auto w = CoxeterElement::parse(t, "1.3");
  auto c = w.content();
  CHECK(c == std::vector<Gen>{0, 2});
}
