// coxtl: exact Hecke-algebra, Kazhdan-Lusztig cell and Temperley-Lieb
// computations for finite Coxeter groups.
//
// JSON output schema (--format json), shared by every subcommand:
//   {
//     "command":  <string>,
//     "config":   { "type", "rank", "format", "threads", "long_run",
//                   "cache_dir"?, "capacity"? },
//     "results":  [ ... per-command records ... ],
//     "witnesses":[ { "elements": [words], "generator"?, "coefficient"?,
//                     "note" } ],
//     "timings":  { <label>: milliseconds }
//   }
// Exit status: 0 success, 1 verification failure (witness printed),
// 2 usage/configuration error.

#include "coxtl/verify.hpp"
#include "coxtl/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace coxtl;

namespace {

struct RunConfig {
  std::string type = "A";
  int rank = 0; // rank, or m for I2
  std::string format = "text";
  std::string cache_dir;
  int threads = 1;
  bool long_run = false;
  std::uint64_t capacity = 2'000'000;
  bool allow_d3 = false;
};

CoxeterType parse_type(const std::string& text, int rank) {
  if (text == "A") return CoxeterType::A;
  if (text == "B") return CoxeterType::B;
  if (text == "D") return CoxeterType::D;
  if (text == "I2") return CoxeterType::I2;
  if (text == "F") return CoxeterType::F4;
  if (text == "H") return rank == 3 ? CoxeterType::H3 : CoxeterType::H4;
  if (text == "E") {
    if (rank == 6) return CoxeterType::E6;
    if (rank == 7) return CoxeterType::E7;
    return CoxeterType::E8;
  }
  throw ContractError("unknown type tag '" + text + "'");
}

CoxeterGraph graph_of(const RunConfig& cfg) {
  if (cfg.rank <= 0) throw ContractError("--rank is required (m for type I2)");
  GraphOptions gopts;
  gopts.allow_d3_alias = cfg.allow_d3;
  return CoxeterGraph::build(parse_type(cfg.type, cfg.rank), cfg.rank, gopts);
}

SessionOptions session_options(const RunConfig& cfg) {
  SessionOptions opts;
  opts.table.max_group_order = cfg.capacity;
  opts.threads = cfg.threads;
  if (!cfg.cache_dir.empty()) opts.cache_dir = cfg.cache_dir;
  return opts;
}

// Accumulates the command's output in all three shapes; main() prints one.
struct Output {
  json results = json::array();
  json witnesses = json::array();
  json timings = json::object();
  std::vector<std::string> text;
  std::string csv_header;
  std::vector<std::string> csv;
  int exit_code = 0;

  void line(std::string s) { text.push_back(std::move(s)); }
};

json witness_json(const Witness& w) {
  json j;
  j["elements"] = w.elements;
  if (w.generator) j["generator"] = *w.generator;
  if (w.coefficient) j["coefficient"] = *w.coefficient;
  j["note"] = w.note;
  return j;
}

std::string witness_text(const Witness& w) {
  std::string s = "witness:";
  for (const auto& e : w.elements) s += " " + e;
  if (w.generator) s += " (via generator " + std::to_string(*w.generator) + ")";
  if (w.coefficient) s += " coefficient " + *w.coefficient;
  if (!w.note.empty()) s += " -- " + w.note;
  return s;
}

void add_verdict(Output& out, const Verdict& v) {
  json j;
  j["check"] = v.check;
  j["holds"] = v.holds;
  if (v.witness) j["witness"] = witness_json(*v.witness);
  j["wall_ms"] = v.wall_ms;
  for (const auto& [k, val] : v.stats) j["stats"][k] = val;
  out.results.push_back(std::move(j));
  out.timings[v.check] = v.wall_ms;
  out.line("condition " + v.check + ": " + (v.holds ? "holds" : "FAILS"));
  out.csv_header = "check,holds";
  out.csv.push_back(v.check + "," + (v.holds ? "true" : "false"));
  if (v.witness) {
    out.line("  " + witness_text(*v.witness));
    out.witnesses.push_back(witness_json(*v.witness));
  }
  if (!v.holds) out.exit_code = 1;
}

std::string hecke_term_string(const GroupTable& t, const HeckeElt& h, const char* basis) {
  if (h.is_zero()) return "0";
  std::string s;
  for (const auto& [x, p] : h.coords()) {
    if (!s.empty()) s += " + ";
    s += p.to_string() + " * " + basis + "(" + word_to_string(t.word(x)) + ")";
  }
  return s;
}

std::string tl_term_string(const GroupTable& t, const TLElt& u) {
  if (u.is_zero()) return "0";
  std::string s;
  for (const auto& [x, p] : u.coords()) {
    if (!s.empty()) s += " + ";
    s += p.to_string() + " * tt(" + word_to_string(t.word(x)) + ")";
  }
  return s;
}

json tl_coords_json(const GroupTable& t, const TLElt& u) {
  json arr = json::array();
  for (const auto& [x, p] : u.coords())
    arr.push_back({{"x", word_to_string(t.word(x))}, {"poly", p.to_string()}});
  return arr;
}

/* ----------------------------- commands ----------------------------- */

Output cmd_enumerate(Session& s, std::optional<int> max_len) {
  Output out;
  out.csv_header = "id,length,word";
  for (const CoxeterElement& e : enumerate(s.table(), max_len)) {
    std::string w = e.to_string();
    out.line(w);
    json j;
    j["id"] = e.id();
    j["length"] = e.length();
    j["word"] = w;
    out.results.push_back(std::move(j));
    out.csv.push_back(std::to_string(e.id()) + "," + std::to_string(e.length()) + "," + w);
  }
  return out;
}

Output cmd_fc(Session& s, bool count_only) {
  Output out;
  const GroupTable& t = *s.table();
  if (count_only) {
    out.line(std::to_string(t.fc_count()));
    out.results.push_back({{"fc_count", t.fc_count()}});
    out.csv_header = "fc_count";
    out.csv.push_back(std::to_string(t.fc_count()));
    return out;
  }
  out.csv_header = "id,length,word";
  for (EltId x : t.fc_elements()) {
    std::string w = word_to_string(t.word(x));
    out.line(w);
    out.results.push_back({{"id", x}, {"length", t.length(x)}, {"word", w}});
    out.csv.push_back(std::to_string(x) + "," + std::to_string(t.length(x)) + "," + w);
  }
  return out;
}

Output cmd_kl(Session& s, const std::string& wtext) {
  Output out;
  const GroupTable& t = *s.table();
  CoxeterElement w = CoxeterElement::parse(s.table(), wtext);
  HeckeElt c = s.kl().clprime(w.id());
  out.line("C'(" + w.to_string() + ") = " + hecke_term_string(t, c, "Tt"));
  json j;
  j["w"] = w.to_string();
  json terms = json::array();
  for (const auto& [x, p] : c.coords())
    terms.push_back({{"x", word_to_string(t.word(x))}, {"poly", p.to_string()}});
  j["coords"] = std::move(terms);
  out.results.push_back(std::move(j));
  out.csv_header = "x,poly";
  for (const auto& [x, p] : c.coords())
    out.csv.push_back(word_to_string(t.word(x)) + "," + p.to_string());
  return out;
}

Output cmd_mu(Session& s, const std::string& xtext, const std::string& wtext) {
  Output out;
  CoxeterElement x = CoxeterElement::parse(s.table(), xtext);
  CoxeterElement w = CoxeterElement::parse(s.table(), wtext);
  std::int64_t m = s.kl().mu(x.id(), w.id());
  out.line(std::to_string(m));
  out.results.push_back({{"x", x.to_string()}, {"w", w.to_string()}, {"mu", m}});
  out.csv_header = "x,w,mu";
  out.csv.push_back(x.to_string() + "," + w.to_string() + "," + std::to_string(m));
  return out;
}

Output cmd_theta(Session& s, const std::string& wtext) {
  Output out;
  const GroupTable& t = *s.table();
  CoxeterElement w = CoxeterElement::parse(s.table(), wtext);
  const TLElt& img = s.tl().theta_basis(w.id());
  out.line("theta(Tt(" + w.to_string() + ")) = " + tl_term_string(t, img));
  out.results.push_back({{"w", w.to_string()}, {"coords", tl_coords_json(t, img)}});
  out.csv_header = "x,poly";
  for (const auto& [x, p] : img.coords())
    out.csv.push_back(word_to_string(t.word(x)) + "," + p.to_string());
  return out;
}

Output cmd_tl_mult(Session& s, const std::string& utext, const std::string& vtext) {
  Output out;
  const GroupTable& t = *s.table();
  CoxeterElement u = CoxeterElement::parse(s.table(), utext);
  CoxeterElement v = CoxeterElement::parse(s.table(), vtext);
  TLElt prod = s.tl().mult(TLElt::unit(s.table(), u.id()), TLElt::unit(s.table(), v.id()));
  out.line("tt(" + u.to_string() + ") * tt(" + v.to_string() + ") = " +
           tl_term_string(t, prod));
  out.results.push_back(
      {{"u", u.to_string()}, {"v", v.to_string()}, {"coords", tl_coords_json(t, prod)}});
  out.csv_header = "x,poly";
  for (const auto& [x, p] : prod.coords())
    out.csv.push_back(word_to_string(t.word(x)) + "," + p.to_string());
  return out;
}

// Canonical-basis dump: one line per w, `<w-word> : <x-word>=<poly>, ...`.
Output cmd_canonical(Session& s) {
  Output out;
  const GroupTable& t = *s.table();
  out.csv_header = "w,x,poly";
  for (EltId w : t.fc_elements()) {
    const TLElt& c = s.tl().canonical(w);
    std::string ws = word_to_string(t.word(w));
    std::string line = ws + " :";
    bool first = true;
    for (const auto& [x, p] : c.coords()) {
      line += (first ? " " : ", ");
      line += word_to_string(t.word(x)) + "=" + p.to_string();
      first = false;
      out.csv.push_back(ws + "," + word_to_string(t.word(x)) + "," + p.to_string());
    }
    out.line(line);
    out.results.push_back({{"w", ws}, {"coords", tl_coords_json(t, c)}});
  }
  return out;
}

Output cmd_cells(Session& s, const std::string& side_text) {
  Output out;
  Side side = side_text == "left"    ? Side::Left
              : side_text == "right" ? Side::Right
                                     : Side::TwoSided;
  if (side_text != "left" && side_text != "right" && side_text != "two-sided")
    throw ContractError("--side must be left, right or two-sided");
  const GroupTable& t = *s.table();
  const CellPartition& part = s.cells(side);
  out.csv_header = "cell,size,members";
  for (std::size_t i = 0; i < part.cells.size(); ++i) {
    std::string members;
    for (EltId x : part.cells[i]) {
      if (!members.empty()) members += ' ';
      members += word_to_string(t.word(x));
    }
    out.line("cell " + std::to_string(i) + ": " + members);
    json j;
    j["index"] = i;
    j["min"] = word_to_string(t.word(part.cells[i].front()));
    j["size"] = part.cells[i].size();
    json m = json::array();
    for (EltId x : part.cells[i]) m.push_back(word_to_string(t.word(x)));
    j["members"] = std::move(m);
    out.results.push_back(std::move(j));
    out.csv.push_back(std::to_string(i) + "," + std::to_string(part.cells[i].size()) + "," +
                      members);
  }
  out.line(std::to_string(part.cells.size()) + " " + side_name(side) + " cells");
  return out;
}

Output cmd_verify(Session& s, const std::string& cond_text) {
  Output out;
  if (cond_text == "all") {
    for (const Verdict& v : verify_equivalence(s)) add_verdict(out, v);
    return out;
  }
  auto cond = parse_condition(cond_text);
  if (!cond) throw ContractError("--condition must be one of i..viii or all");
  add_verdict(out, check_condition(s, *cond));
  return out;
}

Output cmd_corollary(const RunConfig& cfg, bool single_graph) {
  Output out;
  std::vector<CoxeterGraph> graphs;
  if (single_graph) {
    graphs.push_back(graph_of(cfg));
  } else {
    for (int n = 2; n <= 4; ++n) graphs.push_back(CoxeterGraph::build(CoxeterType::A, n));
    for (int n = 2; n <= 4; ++n) graphs.push_back(CoxeterGraph::build(CoxeterType::B, n));
    for (int m = 3; m <= 8; ++m) graphs.push_back(CoxeterGraph::build(CoxeterType::I2, m));
    graphs.push_back(CoxeterGraph::build(CoxeterType::H3, 3));
    graphs.push_back(CoxeterGraph::build(CoxeterType::F4, 4));
    graphs.push_back(CoxeterGraph::build(CoxeterType::D, 4));
    graphs.push_back(CoxeterGraph::build(CoxeterType::D, 5));
    if (cfg.long_run) graphs.push_back(CoxeterGraph::build(CoxeterType::H4, 4));
  }
  out.csv_header = "graph,order,fc,wc_union_of_two_sided,contains_d4,consistent";
  for (const CoxeterGraph& g : graphs) {
    Session session(g, session_options(cfg));
    if (auto warn = session.load_kl_cache()) std::cerr << *warn << "\n";
    CorollaryRow row = corollary_row(session);
    session.flush_kl_cache();
    out.line(row.graph + ": W_c " + (row.wc_union_of_two_sided ? "is" : "is NOT") +
             " a union of two-sided cells; contains D4 subgraph: " +
             (row.contains_d4 ? "yes" : "no") + "; predicate " +
             (row.consistent ? "agrees" : "DISAGREES"));
    json j;
    j["graph"] = row.graph;
    j["order"] = row.order;
    j["fc"] = row.fc_count;
    j["wc_union_of_two_sided"] = row.wc_union_of_two_sided;
    j["contains_d4"] = row.contains_d4;
    j["consistent"] = row.consistent;
    j["wall_ms"] = row.wall_ms;
    out.results.push_back(std::move(j));
    out.timings[row.graph] = row.wall_ms;
    out.csv.push_back(row.graph + "," + std::to_string(row.order) + "," +
                      std::to_string(row.fc_count) + "," +
                      (row.wc_union_of_two_sided ? "true" : "false") + "," +
                      (row.contains_d4 ? "true" : "false") + "," +
                      (row.consistent ? "true" : "false"));
    if (!row.consistent) out.exit_code = 1;
  }
  return out;
}

Output cmd_report_b(Session& s) {
  Output out;
  const GroupTable& t = *s.table();
  Verdict rule = intersection_rule_B(s);
  FcCellReport report = fc_cell_report(s.kl(), s.threads());

  out.csv_header = "two_sided_min,right_min,left_min,k";
  for (const auto& cell : report.fc_cells) {
    std::string tmin = word_to_string(t.word(cell.members.front()));
    out.line("two-sided cell at " + tmin + " (size " + std::to_string(cell.members.size()) +
             "): " + std::to_string(cell.left_cells.size()) + " left x " +
             std::to_string(cell.right_cells.size()) + " right cells");
    json jcell;
    jcell["min"] = tmin;
    jcell["size"] = cell.members.size();
    auto cells_json = [&](const std::vector<FcCellReport::CellInfo>& infos) {
      json arr = json::array();
      for (const auto& info : infos) {
        json j;
        j["min"] = word_to_string(t.word(info.members.front()));
        j["size"] = info.members.size();
        json inv = json::array();
        for (EltId x : info.involutions) inv.push_back(word_to_string(t.word(x)));
        j["involutions"] = std::move(inv);
        arr.push_back(std::move(j));
      }
      return arr;
    };
    jcell["left_cells"] = cells_json(cell.left_cells);
    jcell["right_cells"] = cells_json(cell.right_cells);
    jcell["intersections"] = cell.intersections;
    out.results.push_back(std::move(jcell));

    for (std::size_t r = 0; r < cell.right_cells.size(); ++r) {
      std::string line = "  k row " + word_to_string(t.word(cell.right_cells[r].members.front())) + ":";
      for (std::size_t l = 0; l < cell.left_cells.size(); ++l) {
        line += " " + std::to_string(cell.intersections[r][l]);
        out.csv.push_back(tmin + "," +
                          word_to_string(t.word(cell.right_cells[r].members.front())) + "," +
                          word_to_string(t.word(cell.left_cells[l].members.front())) + "," +
                          std::to_string(cell.intersections[r][l]));
      }
      out.line(line);
    }
  }
  out.line(std::string("intersection rule: ") + (rule.holds ? "holds" : "FAILS"));
  out.timings["rule_ms"] = rule.wall_ms;
  if (rule.witness) {
    out.line("  " + witness_text(*rule.witness));
    out.witnesses.push_back(witness_json(*rule.witness));
  }
  if (!rule.holds) out.exit_code = 1;
  return out;
}

} // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("COXTL_CACHE_DIR")) cfg.cache_dir = env;

  CLI::App app{"exact Kazhdan-Lusztig cells and Temperley-Lieb quotients for finite "
               "Coxeter groups"};
  app.require_subcommand(1);
  app.fallthrough(); // group options may follow the subcommand
  app.add_option("--type", cfg.type, "Coxeter type tag: A, B, D, I2, F, H, E");
  app.add_option("--rank", cfg.rank, "rank (m for type I2)");
  app.add_option("--format", cfg.format, "output format: text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--cache-dir", cfg.cache_dir,
                 "KL cache directory (default: $COXTL_CACHE_DIR)");
  app.add_option("--threads", cfg.threads, "worker threads for preorders and verification");
  app.add_flag("--long-run", cfg.long_run, "include long-running groups (H4)");
  app.add_option("--capacity", cfg.capacity, "largest allowed group order");
  app.add_flag("--allow-d3", cfg.allow_d3, "accept D3 as an alias of A3");

  std::optional<int> max_len;
  bool fc_count = false;
  std::string w_arg, x_arg, u_arg, v_arg;
  std::string side = "left";
  std::string condition = "all";

  CLI::App* c_enum = app.add_subcommand("enumerate", "list the group elements");
  c_enum->add_option("--max-length", max_len, "only elements up to this length");
  CLI::App* c_fc = app.add_subcommand("fc", "list or count the fully commutative elements");
  c_fc->add_flag("--count", fc_count, "print the count only");
  CLI::App* c_kl = app.add_subcommand("kl", "print the Kazhdan-Lusztig basis element C'(w)");
  c_kl->add_option("w", w_arg, "element word, e.g. 1.2.1 (e for the identity)")->required();
  CLI::App* c_mu = app.add_subcommand("mu", "print mu(x, w)");
  c_mu->add_option("x", x_arg)->required();
  c_mu->add_option("w", w_arg)->required();
  CLI::App* c_cells = app.add_subcommand("cells", "print the cell partition");
  c_cells->add_option("--side", side, "left, right or two-sided");
  CLI::App* c_theta = app.add_subcommand("theta", "print the quotient image of Tt(w)");
  c_theta->add_option("w", w_arg)->required();
  CLI::App* c_canon = app.add_subcommand("canonical", "dump the canonical basis");
  CLI::App* c_tlm = app.add_subcommand("tl-mult", "multiply two tt basis elements");
  c_tlm->add_option("u", u_arg)->required();
  c_tlm->add_option("v", v_arg)->required();
  CLI::App* c_verify =
      app.add_subcommand("verify", "check the compatibility conditions i..viii");
  c_verify->add_option("--condition", condition, "i..viii or all");
  CLI::App* c_cor = app.add_subcommand(
      "corollary-table", "is W_c a union of two-sided cells, against the D4 predicate");
  CLI::App* c_repb =
      app.add_subcommand("report-b-intersections", "type-B cell intersection report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
      return app.exit(e);
    std::cerr << e.what() << "\n";
    return 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  Output out;
  std::string command;
  try {
    if (c_cor->parsed()) {
      command = "corollary-table";
      out = cmd_corollary(cfg, cfg.rank > 0);
    } else {
      Session session(graph_of(cfg), session_options(cfg));
      if (auto warn = session.load_kl_cache()) std::cerr << *warn << "\n";
      if (c_enum->parsed()) {
        command = "enumerate";
        out = cmd_enumerate(session, max_len);
      } else if (c_fc->parsed()) {
        command = "fc";
        out = cmd_fc(session, fc_count);
      } else if (c_kl->parsed()) {
        command = "kl";
        out = cmd_kl(session, w_arg);
      } else if (c_mu->parsed()) {
        command = "mu";
        out = cmd_mu(session, x_arg, w_arg);
      } else if (c_cells->parsed()) {
        command = "cells";
        out = cmd_cells(session, side);
      } else if (c_theta->parsed()) {
        command = "theta";
        out = cmd_theta(session, w_arg);
      } else if (c_canon->parsed()) {
        command = "canonical";
        out = cmd_canonical(session);
      } else if (c_tlm->parsed()) {
        command = "tl-mult";
        out = cmd_tl_mult(session, u_arg, v_arg);
      } else if (c_verify->parsed()) {
        command = "verify";
        out = cmd_verify(session, condition);
      } else if (c_repb->parsed()) {
        command = "report-b-intersections";
        out = cmd_report_b(session);
      }
      session.flush_kl_cache();
    }
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << " (raise --capacity to override)\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }

  const double total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();

  if (cfg.format == "json") {
    json doc;
    doc["command"] = command;
    json jcfg;
    jcfg["type"] = cfg.type;
    jcfg["rank"] = cfg.rank;
    jcfg["format"] = cfg.format;
    jcfg["threads"] = cfg.threads;
    jcfg["long_run"] = cfg.long_run;
    if (!cfg.cache_dir.empty()) jcfg["cache_dir"] = cfg.cache_dir;
    jcfg["capacity"] = cfg.capacity;
    doc["config"] = std::move(jcfg);
    doc["results"] = std::move(out.results);
    doc["witnesses"] = std::move(out.witnesses);
    out.timings["total_ms"] = total_ms;
    doc["timings"] = std::move(out.timings);
    std::cout << doc.dump(2) << "\n";
  } else if (cfg.format == "csv") {
    if (!out.csv_header.empty()) std::cout << out.csv_header << "\n";
    for (const auto& row : out.csv) std::cout << row << "\n";
  } else {
    for (const auto& line : out.text) std::cout << line << "\n";
  }
  return out.exit_code;
}
