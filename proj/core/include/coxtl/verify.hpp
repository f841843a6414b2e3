#ifndef COXTL_VERIFY_HPP
#define COXTL_VERIFY_HPP

#include "coxtl/session.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coxtl {

// The eight equivalent conditions of the compatibility theorem.
enum class Condition { I, II, III, IV, V, VI, VII, VIII };

std::string condition_name(Condition c);
std::optional<Condition> parse_condition(std::string_view text);

struct Witness {
  std::vector<std::string> elements; // canonical words
  std::optional<int> generator;      // 1-based
  std::optional<std::string> coefficient;
  std::string note;
};

struct Verdict {
  std::string check;
  bool holds = true;
  std::optional<Witness> witness;
  double wall_ms = 0.0;
  std::map<std::string, std::uint64_t> stats;
};

/*
  Exact verification of one condition by full enumeration:
    i/ii  theta kills exactly the non-fully-commutative C'_w, and the images
          of the fully commutative ones form a unitriangular basis;
    iii   theta(C'_w) = 0 for every w outside W_c;
    iv    theta(C'_w) lies in L and projects to pi(c_w) (w in W_c) or 0;
    v     theta(Tt_w) lies in v^-1 L for every w outside W_c;
    vi    W \ W_c is closed under <=_L;
    vii   W \ W_c is closed under <=_LR;
    viii  W_c is closed under >=_LR.
*/
Verdict check_condition(Session& session, Condition condition);

// All eight verdicts, computed independently; condition checks run
// concurrently when the session allows more than one thread.  A disagreement
// between verdicts is an implementation fault and throws InternalError.
std::vector<Verdict> verify_equivalence(Session& session);

struct CorollaryRow {
  std::string graph;
  std::uint64_t order = 0;
  std::uint64_t fc_count = 0;
  bool wc_union_of_two_sided = false;
  bool contains_d4 = false;
  bool consistent = false; // wc_union_of_two_sided == !contains_d4
  double wall_ms = 0.0;
};

// One row of the classification table: is W_c a union of two-sided cells,
// and does that verdict match the D4-subgraph predicate on the graph.
CorollaryRow corollary_row(Session& session);

// {theta(C'_u) : u in W_c} equals {c_w : w in W_c} as sets.
Verdict d_remark_check(Session& session);

// Type-B intersection rule: inside every fully commutative two-sided cell,
// each left/right cell holds exactly one involution d, and |R intersect L|
// is 1 when exactly one of the two involutions lies in the parabolic W'
// omitting the first generator, or the cell misses/lies inside W'; else 2.
Verdict intersection_rule_B(Session& session);

// Type-A control: every right/left cell pair inside a fully commutative
// two-sided cell intersects in exactly one element.
Verdict intersection_control_A(Session& session);

} // namespace coxtl

#endif
