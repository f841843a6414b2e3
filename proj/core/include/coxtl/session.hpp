#ifndef COXTL_SESSION_HPP
#define COXTL_SESSION_HPP

#include "coxtl/cells.hpp"
#include "coxtl/tl.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace coxtl {

struct SessionOptions {
  TableOptions table;
  DescentPolicy policy = DescentPolicy::LowestIndex;
  int threads = 1;
  std::optional<std::filesystem::path> cache_dir;
};

/*
  One group's worth of caches: the enumeration table, the KL table, the
  Temperley-Lieb context and the three preorder graphs with their cell
  partitions.  Everything is built lazily by a single writer; warm_all()
  freezes the lot so that later readers (including concurrent condition
  checks) never write.

  When a cache directory is configured, the KL table is backed by the
  append-only file <label>.klc inside it; corrupted files are renamed to
  <label>.klc.quarantined and recomputed.
*/
class Session {
public:
  explicit Session(const CoxeterGraph& graph, SessionOptions opts = {});

  const CoxeterGraph& graph() const { return graph_; }
  const SessionOptions& options() const { return opts_; }
  int threads() const { return opts_.threads; }

  const GroupPtr& table();
  KLCache& kl();
  TLContext& tl();
  HeckeBarTable& bars();
  const PreorderGraph& preorder(Side side);
  const CellPartition& cells(Side side);

  // Build every table this session can hold (KL rows, theta rows, monomial
  // and canonical bases, preorders, cells).
  void warm_all();

  std::filesystem::path kl_cache_path() const;
  // Load the bound cache file if present; returns a human-readable warning
  // when a corrupt file was quarantined.
  std::optional<std::string> load_kl_cache();
  void flush_kl_cache();

private:
  CoxeterGraph graph_;
  SessionOptions opts_;
  GroupPtr table_;
  std::unique_ptr<KLCache> kl_;
  std::unique_ptr<TLContext> tl_;
  std::unique_ptr<HeckeBarTable> bars_;
  std::optional<PreorderGraph> pre_[3];
  std::optional<CellPartition> cells_[3];
};

} // namespace coxtl

#endif
