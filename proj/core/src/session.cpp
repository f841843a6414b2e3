#include "coxtl/session.hpp"

#include "coxtl/errors.hpp"

namespace coxtl {

Session::Session(const CoxeterGraph& graph, SessionOptions opts)
    : graph_(graph), opts_(std::move(opts)) {}

const GroupPtr& Session::table() {
  if (!table_) table_ = GroupTable::build(graph_, opts_.table);
  return table_;
}

KLCache& Session::kl() {
  if (!kl_) kl_ = std::make_unique<KLCache>(table(), opts_.policy);
  return *kl_;
}

TLContext& Session::tl() {
  if (!tl_) tl_ = std::make_unique<TLContext>(table());
  return *tl_;
}

HeckeBarTable& Session::bars() {
  if (!bars_) bars_ = std::make_unique<HeckeBarTable>(table());
  return *bars_;
}

const PreorderGraph& Session::preorder(Side side) {
  auto& slot = pre_[static_cast<int>(side)];
  if (!slot) slot = build_preorder(kl(), side, opts_.threads);
  return *slot;
}

const CellPartition& Session::cells(Side side) {
  auto& slot = cells_[static_cast<int>(side)];
  if (!slot) slot = compute_cells(preorder(side));
  return *slot;
}

void Session::warm_all() {
  const GroupTable& t = *table();
  kl().compute_all();
  TLContext& q = tl();
  q.theta_basis(t.longest_element());
  for (EltId w : t.fc_elements()) {
    q.b_elt(w);
    q.canonical(w);
  }
  for (Side side : {Side::Left, Side::Right, Side::TwoSided}) cells(side);
}

std::filesystem::path Session::kl_cache_path() const {
  if (!opts_.cache_dir) throw ContractError("no cache directory configured");
  return *opts_.cache_dir / (graph_.label() + ".klc");
}

std::optional<std::string> Session::load_kl_cache() {
  if (!opts_.cache_dir) return std::nullopt;
  const auto path = kl_cache_path();
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    kl().load_file(path);
    return std::nullopt;
  } catch (const ParseError& e) {
    // Quarantine and start over; a bad cache must never be trusted.
    auto quarantined = path;
    quarantined += ".quarantined";
    std::error_code ec;
    std::filesystem::rename(path, quarantined, ec);
    kl_ = std::make_unique<KLCache>(table(), opts_.policy);
    return "quarantined corrupt KL cache " + path.string() + ": " + e.what();
  }
}

void Session::flush_kl_cache() {
  if (!opts_.cache_dir) return;
  std::filesystem::create_directories(*opts_.cache_dir);
  kl().flush_file(kl_cache_path());
}

} // namespace coxtl
