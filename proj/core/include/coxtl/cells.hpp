#ifndef COXTL_CELLS_HPP
#define COXTL_CELLS_HPP

#include "coxtl/hecke.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace coxtl {

enum class Side { Left, Right, TwoSided };

std::string side_name(Side s);

/*
  Elementary-edge graph of a Kazhdan-Lusztig preorder.  An edge w -> x means
  "x <= w in one step": for the left preorder, x appears in the expansion of
  C'_s C'_w for some s with sw > w, i.e. x = sw or mu(x, w) != 0 with sx < x.
  The right graph is the left graph of the inverses; the two-sided graph is
  the union.  Edge lists are sorted by target and deduplicated, so traversals
  and witnesses are deterministic.
*/
struct PreorderGraph {
  struct Edge {
    EltId to;
    Gen via;
  };
  Side side = Side::Left;
  GroupPtr table;
  std::vector<std::vector<Edge>> edges;

  std::size_t edge_count() const;
};

// Requires every KL row; computes them if missing.  `threads` parallelises
// the per-source edge construction once the KL table is frozen.
PreorderGraph build_preorder(KLCache& kl, Side side, int threads = 1);

/*
  Cells = strongly connected components of the preorder graph, partially
  ordered by the condensation's reachability.  Cells are listed by ascending
  minimal element; members are sorted.
*/
struct CellPartition {
  Side side = Side::Left;
  GroupPtr table;
  std::vector<std::vector<EltId>> cells;
  std::vector<std::uint32_t> cell_of;
  // cell_leq(i, j): cells[i] <= cells[j], i.e. the preorder reaches from
  // (a member of) j down to i.
  bool cell_leq(std::uint32_t i, std::uint32_t j) const;

  std::vector<std::vector<std::uint8_t>> reach; // reach[j][i]: j reaches i
};

CellPartition compute_cells(const PreorderGraph& pre);

/*
  Closure verdicts.  For a subset S and the preorder's edges w -> x:
    is_closed:        no edge leaves S downward (w in S, x not in S);
    is_closed_upward: no edge enters S from outside (x in S, w not in S),
                      i.e. S is closed under >=.
  The witness is the lexicographically least violating pair (lambda1,
  lambda2) with lambda1 the subset member, ordered by element id.
*/
struct ClosureVerdict {
  bool closed = true;
  std::optional<std::pair<EltId, EltId>> witness;
  std::optional<Gen> via;
};

ClosureVerdict is_closed(const PreorderGraph& pre, const std::vector<std::uint8_t>& subset);
ClosureVerdict is_closed_upward(const PreorderGraph& pre,
                                const std::vector<std::uint8_t>& subset);

// Shortest elementary-edge path from `from` to `to` (witnessing to <= from),
// as the list of visited elements including both endpoints.
std::optional<std::vector<EltId>> preorder_chain(const PreorderGraph& pre, EltId from,
                                                 EltId to);

/*
  Report on the fully commutative part of the cell structure: for each
  two-sided cell inside W_c, its left and right cells, the involutions in
  each, and the full |R intersect L| table.  Only meaningful when W_c is a
  union of two-sided cells; otherwise `supported` is false and the offending
  cell is reported.
*/
struct FcCellReport {
  struct CellInfo {
    std::vector<EltId> members;
    std::vector<EltId> involutions;
  };
  struct TwoSidedCellInfo {
    std::vector<EltId> members;
    std::vector<CellInfo> left_cells;
    std::vector<CellInfo> right_cells;
    // intersections[r][l] = |right_cells[r].members ∩ left_cells[l].members|
    std::vector<std::vector<std::uint32_t>> intersections;
  };

  bool supported = true;
  std::vector<EltId> mixed_cell; // a two-sided cell meeting both W_c and its complement
  std::vector<TwoSidedCellInfo> fc_cells;
};

FcCellReport fc_cell_report(KLCache& kl, int threads = 1);

} // namespace coxtl

#endif
