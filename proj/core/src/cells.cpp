#include "coxtl/cells.hpp"

#include "coxtl/errors.hpp"

#include <algorithm>
#include <functional>
#include <thread>

namespace coxtl {

std::string side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::TwoSided: return "two-sided";
  }
  return "?";
}

std::size_t PreorderGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges) n += e.size();
  return n;
}

namespace {

void run_chunked(std::uint32_t n, int threads, const std::function<void(EltId, EltId)>& fn) {
  if (threads <= 1 || n < 256) {
    fn(0, n);
    return;
  }
  const int nt = std::min<int>(threads, 64);
  std::vector<std::thread> pool;
  const std::uint32_t chunk = (n + nt - 1) / nt;
  for (int i = 0; i < nt; ++i) {
    EltId lo = std::min<std::uint32_t>(i * chunk, n);
    EltId hi = std::min<std::uint32_t>(lo + chunk, n);
    if (lo < hi) pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

void sort_dedup(std::vector<PreorderGraph::Edge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return a.to != b.to ? a.to < b.to : a.via < b.via;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const auto& a, const auto& b) { return a.to == b.to; }),
              edges.end());
}

std::vector<std::vector<PreorderGraph::Edge>> left_edges(KLCache& kl, int threads) {
  const GroupTable& t = *kl.table();
  const int rank = t.rank();
  std::vector<std::vector<PreorderGraph::Edge>> edges(t.size());
  run_chunked(t.size(), threads, [&](EltId lo, EltId hi) {
    for (EltId w = lo; w < hi; ++w) {
      auto& out = edges[w];
      KLEntry row = kl.row(w);
      for (Gen s = 0; s < rank; ++s) {
        if (t.is_ldescent(w, s)) continue;
        out.push_back({t.lshift(w, s), s});
        for (const auto& [x, m] : row.mus)
          if (t.is_ldescent(x, s)) out.push_back({x, s});
      }
      sort_dedup(out);
    }
  });
  return edges;
}

} // namespace

PreorderGraph build_preorder(KLCache& kl, Side side, int threads) {
  PreorderGraph g;
  g.side = side;
  g.table = kl.table();
  const GroupTable& t = *g.table;

  // Freeze the KL table before any parallel reads.
  kl.compute_all();

  auto left = left_edges(kl, threads);
  if (side == Side::Left) {
    g.edges = std::move(left);
    return g;
  }

  // Right edges are the left edges of the inverses.
  std::vector<std::vector<PreorderGraph::Edge>> right(t.size());
  for (EltId w = 0; w < t.size(); ++w) {
    const auto& src = left[t.inverse(w)];
    auto& dst = right[w];
    dst.reserve(src.size());
    for (const auto& e : src) dst.push_back({t.inverse(e.to), e.via});
    sort_dedup(dst);
  }
  if (side == Side::Right) {
    g.edges = std::move(right);
    return g;
  }

  g.edges.resize(t.size());
  for (EltId w = 0; w < t.size(); ++w) {
    auto& dst = g.edges[w];
    dst = std::move(left[w]);
    dst.insert(dst.end(), right[w].begin(), right[w].end());
    sort_dedup(dst);
  }
  return g;
}

/* ------------------------------------------------------------------ */
/*  Cells via strongly connected components                             */
/* ------------------------------------------------------------------ */

namespace {

// Iterative Tarjan.
std::vector<std::uint32_t> tarjan_scc(const std::vector<std::vector<PreorderGraph::Edge>>& adj,
                                      std::uint32_t& scc_count) {
  const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
  constexpr std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<std::uint32_t> stack;
  std::vector<std::uint8_t> on_stack(n, 0);
  std::uint32_t next_index = 0;
  scc_count = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t edge;
  };
  std::vector<Frame> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({root, 0});
    while (!call.empty()) {
      Frame& f = call.back();
      std::uint32_t v = f.v;
      if (f.edge == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (f.edge < adj[v].size()) {
        std::uint32_t u = adj[v][f.edge].to;
        ++f.edge;
        if (index[u] == kNone) {
          call.push_back({u, 0});
          descended = true;
          break;
        }
        if (on_stack[u]) low[v] = std::min(low[v], index[u]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        for (;;) {
          std::uint32_t u = stack.back();
          stack.pop_back();
          on_stack[u] = 0;
          comp[u] = scc_count;
          if (u == v) break;
        }
        ++scc_count;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return comp;
}

} // namespace

CellPartition compute_cells(const PreorderGraph& pre) {
  CellPartition part;
  part.side = pre.side;
  part.table = pre.table;
  const std::uint32_t n = static_cast<std::uint32_t>(pre.edges.size());

  std::uint32_t raw_count = 0;
  std::vector<std::uint32_t> raw = tarjan_scc(pre.edges, raw_count);

  // Re-index cells by ascending minimal element id.
  std::vector<EltId> min_elt(raw_count, UINT32_MAX);
  for (EltId x = 0; x < n; ++x) min_elt[raw[x]] = std::min(min_elt[raw[x]], x);
  std::vector<std::uint32_t> order(raw_count);
  for (std::uint32_t i = 0; i < raw_count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return min_elt[a] < min_elt[b]; });
  std::vector<std::uint32_t> newid(raw_count);
  for (std::uint32_t i = 0; i < raw_count; ++i) newid[order[i]] = i;

  part.cell_of.resize(n);
  part.cells.assign(raw_count, {});
  for (EltId x = 0; x < n; ++x) {
    part.cell_of[x] = newid[raw[x]];
    part.cells[part.cell_of[x]].push_back(x);
  }

  // Condensation reachability (cells are few; quadratic closure is fine).
  part.reach.assign(raw_count, std::vector<std::uint8_t>(raw_count, 0));
  std::vector<std::vector<std::uint32_t>> cadj(raw_count);
  for (EltId w = 0; w < n; ++w)
    for (const auto& e : pre.edges[w])
      if (part.cell_of[w] != part.cell_of[e.to])
        cadj[part.cell_of[w]].push_back(part.cell_of[e.to]);
  for (auto& v : cadj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (std::uint32_t c = 0; c < raw_count; ++c) {
    // DFS from c
    std::vector<std::uint32_t> stack{c};
    part.reach[c][c] = 1;
    while (!stack.empty()) {
      std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t nxt : cadj[u])
        if (!part.reach[c][nxt]) {
          part.reach[c][nxt] = 1;
          stack.push_back(nxt);
        }
    }
  }
  // Antisymmetry of the induced order comes with the SCC construction; a
  // violation here would be an implementation fault.
  for (std::uint32_t i = 0; i < raw_count; ++i)
    for (std::uint32_t j = i + 1; j < raw_count; ++j)
      if (part.reach[i][j] && part.reach[j][i])
        throw InternalError("cell condensation is not a partial order");
  return part;
}

bool CellPartition::cell_leq(std::uint32_t i, std::uint32_t j) const {
  return reach[j][i] != 0;
}

/* ------------------------------------------------------------------ */
/*  Closure checks                                                     */
/* ------------------------------------------------------------------ */

ClosureVerdict is_closed(const PreorderGraph& pre, const std::vector<std::uint8_t>& subset) {
  // Witness rule: greatest violating source, then least escaping target.
  // Counterexamples in the literature are stated near the top of a cell, and
  // this choice reproduces them verbatim while staying deterministic.
  ClosureVerdict v;
  for (EltId w = static_cast<EltId>(pre.edges.size()); w-- > 0;) {
    if (!subset[w]) continue;
    for (const auto& e : pre.edges[w]) {
      if (!subset[e.to]) {
        v.closed = false;
        v.witness = {w, e.to};
        v.via = e.via;
        return v;
      }
    }
  }
  return v;
}

ClosureVerdict is_closed_upward(const PreorderGraph& pre,
                                const std::vector<std::uint8_t>& subset) {
  // Violation: an edge w -> x with x inside and w outside; the witness pair
  // is (x, w), the subset member first, mirroring the >= reading.
  ClosureVerdict v;
  for (EltId w = static_cast<EltId>(pre.edges.size()); w-- > 0;) {
    if (subset[w]) continue;
    for (const auto& e : pre.edges[w]) {
      if (subset[e.to]) {
        v.closed = false;
        v.witness = {e.to, w};
        v.via = e.via;
        return v;
      }
    }
  }
  return v;
}

std::optional<std::vector<EltId>> preorder_chain(const PreorderGraph& pre, EltId from,
                                                 EltId to) {
  const std::uint32_t n = static_cast<std::uint32_t>(pre.edges.size());
  constexpr EltId kNone = UINT32_MAX;
  std::vector<EltId> parent(n, kNone);
  std::vector<EltId> queue{from};
  parent[from] = from;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    EltId u = queue[head];
    if (u == to) break;
    for (const auto& e : pre.edges[u]) {
      if (parent[e.to] == kNone) {
        parent[e.to] = u;
        queue.push_back(e.to);
      }
    }
  }
  if (parent[to] == kNone) return std::nullopt;
  std::vector<EltId> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

/* ------------------------------------------------------------------ */
/*  Fully commutative cell report                                      */
/* ------------------------------------------------------------------ */

FcCellReport fc_cell_report(KLCache& kl, int threads) {
  const GroupPtr& table = kl.table();
  const GroupTable& t = *table;
  FcCellReport report;

  PreorderGraph two = build_preorder(kl, Side::TwoSided, threads);
  CellPartition tcells = compute_cells(two);

  // W_c must be a union of two-sided cells for the report to make sense.
  for (const auto& cell : tcells.cells) {
    bool any_fc = false, any_non = false;
    for (EltId x : cell) (t.is_fully_commutative(x) ? any_fc : any_non) = true;
    if (any_fc && any_non) {
      report.supported = false;
      report.mixed_cell = cell;
      return report;
    }
  }

  PreorderGraph leftg = build_preorder(kl, Side::Left, threads);
  CellPartition lcells = compute_cells(leftg);
  PreorderGraph rightg = build_preorder(kl, Side::Right, threads);
  CellPartition rcells = compute_cells(rightg);

  auto collect = [&](const CellPartition& part, const std::vector<EltId>& members) {
    // left/right cells meeting this two-sided cell (cells refine, so each is
    // contained in it); returned sorted by minimal element.
    std::vector<std::uint32_t> ids;
    for (EltId x : members) ids.push_back(part.cell_of[x]);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
      return part.cells[a].front() < part.cells[b].front();
    });
    std::vector<FcCellReport::CellInfo> infos;
    for (std::uint32_t c : ids) {
      FcCellReport::CellInfo info;
      info.members = part.cells[c];
      for (EltId x : info.members)
        if (t.inverse(x) == x) info.involutions.push_back(x);
      infos.push_back(std::move(info));
    }
    return infos;
  };

  for (const auto& cell : tcells.cells) {
    if (!t.is_fully_commutative(cell.front())) continue;
    FcCellReport::TwoSidedCellInfo info;
    info.members = cell;
    info.left_cells = collect(lcells, cell);
    info.right_cells = collect(rcells, cell);
    info.intersections.assign(info.right_cells.size(),
                              std::vector<std::uint32_t>(info.left_cells.size(), 0));
    for (std::size_t r = 0; r < info.right_cells.size(); ++r) {
      const auto& rm = info.right_cells[r].members;
      for (std::size_t l = 0; l < info.left_cells.size(); ++l) {
        const auto& lm = info.left_cells[l].members;
        std::uint32_t count = 0;
        std::size_t i = 0, j = 0;
        while (i < rm.size() && j < lm.size()) {
          if (rm[i] < lm[j]) ++i;
          else if (lm[j] < rm[i]) ++j;
          else { ++count; ++i; ++j; }
        }
        info.intersections[r][l] = count;
      }
    }
    report.fc_cells.push_back(std::move(info));
  }
  return report;
}

} // namespace coxtl
