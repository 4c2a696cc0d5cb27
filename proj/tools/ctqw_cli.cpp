// Copyright 2026 The ctqw-fid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ctqw: command-line frontend for graph generation, decomposition, walk
// simulation, invariant checks and localization scans.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 verification failure.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ctqw/ctqw.hpp"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphOptions {
  std::string file;
  std::string family;
  std::size_t n = 0;
  double p = 0.0;
  std::optional<std::uint64_t> seed;
};

struct PartitionOptions {
  std::string blocks_file;
  std::string strategy;
  std::vector<std::size_t> clique;
};

struct TimeOptions {
  double t_min = 0.0;
  double t_max = 2.0 * std::numbers::pi;
  std::size_t steps = 64;
};

struct OutputOptions {
  std::string format = "csv";
  std::string out;
};

// ---------------------------------------------------------------------------
// Input and output helpers.

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::fopen(path.c_str(), "wb");
    if (!file_) throw UsageError("cannot write '" + path + "'");
    owned_ = true;
  }
  Output(const Output&) = delete;
  Output& operator=(const Output&) = delete;
  ~Output() {
    if (owned_) std::fclose(file_);
  }

  void write(const std::string& s) {
    if (std::fwrite(s.data(), 1, s.size(), file_) != s.size()) throw UsageError("write failed");
  }

  void close() {
    if (!owned_) {
      if (std::fflush(file_) != 0) throw UsageError("write failed");
      return;
    }
    owned_ = false;
    if (std::fclose(file_) != 0) throw UsageError("write failed");
  }

 private:
  std::FILE* file_ = stdout;
  bool owned_ = false;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

bool want_json(const OutputOptions& o) { return o.format == "json"; }

std::string labels(const std::vector<std::size_t>& zero_based) {
  std::string s;
  for (std::size_t i = 0; i < zero_based.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(zero_based[i] + 1);
  }
  return s;
}

Json label_array(const std::vector<std::size_t>& zero_based) {
  Json a = Json::array();
  for (std::size_t v : zero_based) a.push_back(v + 1);
  return a;
}

// Writes a JSON array one element per line, so large tables stream.
class JsonArrayWriter {
 public:
  explicit JsonArrayWriter(Output& out) : out_(out) { out_.write("["); }
  void add(const Json& row) {
    out_.write(first_ ? "\n" : ",\n");
    out_.write(row.dump());
    first_ = false;
  }
  void finish() { out_.write(first_ ? "]\n" : "\n]\n"); }

 private:
  Output& out_;
  bool first_ = true;
};

// ---------------------------------------------------------------------------
// Graph, partition and time sources.

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  const char* env = std::getenv("CTQW_SEED");
  if (!env || !*env) return 0;
  const std::string_view text(env);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw UsageError("CTQW_SEED must be a non-negative integer, got '" + std::string(text) + "'");
  return value;
}

ctqw::Family family_or_throw(const std::string& name) {
  const auto family = ctqw::parse_family(name);
  if (!family) throw UsageError("unknown graph family '" + name + "'");
  return *family;
}

ctqw::Graph load_graph(const GraphOptions& o) {
  if (!o.file.empty() && !o.family.empty()) throw UsageError("give either --graph or --family, not both");
  if (!o.file.empty()) return ctqw::parse_edge_list(read_file(o.file));
  if (o.family.empty()) throw UsageError("a graph source is required: --graph FILE or --family NAME --n N");
  return ctqw::generate({family_or_throw(o.family), o.n, o.p, resolve_seed(o.seed)});
}

std::vector<ctqw::Vertex> to_zero_based(const std::vector<std::size_t>& labels, std::size_t n,
                                        const char* what) {
  std::vector<ctqw::Vertex> out;
  for (std::size_t label : labels) {
    if (label < 1 || label > n)
      throw UsageError(std::string(what) + " vertex " + std::to_string(label) + " out of range 1.." +
                       std::to_string(n));
    out.push_back(label - 1);
  }
  return out;
}

ctqw::FidResult load_partition(const ctqw::Graph& g, const PartitionOptions& o) {
  if (!o.blocks_file.empty()) return ctqw::verify_fid(g, ctqw::parse_blocks(read_file(o.blocks_file), g.order()));
  const std::string strategy = o.strategy.empty() ? "twin" : o.strategy;
  if (strategy != "clique" && !o.clique.empty()) throw UsageError("--clique needs --strategy clique");
  if (strategy == "trivial") return ctqw::trivial_partition(g);
  if (strategy == "singleton") return ctqw::singleton_partition(g);
  if (strategy == "twin") return ctqw::twin_coarsen(g);
  if (strategy == "dominating") {
    auto split = ctqw::dominating_split(g);
    if (!split) throw UsageError("graph has no dominating vertex");
    return std::move(*split);
  }
  if (strategy == "clique") {
    if (o.clique.empty()) throw UsageError("--strategy clique needs --clique V1,V2,...");
    return ctqw::clique_gateway_split(g, to_zero_based(o.clique, g.order(), "clique"));
  }
  throw UsageError("unknown strategy '" + strategy + "'");
}

std::vector<double> load_times(const TimeOptions& o) { return ctqw::time_grid(o.t_min, o.t_max, o.steps); }

void report_violation(const ctqw::FidViolation& v, const OutputOptions& out_opts, Output& out) {
  if (want_json(out_opts)) {
    Json doc;
    doc["valid"] = false;
    doc["violation"] = v.describe();
    out.write(doc.dump(2) + "\n");
  } else {
    out.write("violation," + csv_field(v.describe()) + "\n");
  }
  std::fprintf(stderr, "ctqw: not a decomposition: %s\n", v.describe().c_str());
}

// ---------------------------------------------------------------------------
// Option registration.

void add_graph_options(CLI::App& cmd, GraphOptions& o) {
  auto* file = cmd.add_option("--graph", o.file, "Edge-list file");
  auto* family = cmd.add_option("--family", o.family,
                                "Graph family: complete, star, path, cycle, erdos_renyi, threshold, edgeless");
  file->excludes(family);
  cmd.add_option("--n", o.n, "Vertex count for --family");
  cmd.add_option("--p", o.p, "Edge or join probability for random families");
  cmd.add_option("--seed", o.seed, "Seed for random families (falls back to CTQW_SEED, then 0)");
}

void add_partition_options(CLI::App& cmd, PartitionOptions& o) {
  auto* file = cmd.add_option("--blocks-file", o.blocks_file, "Partition file, one block per line");
  auto* strategy = cmd.add_option("--strategy", o.strategy, "Partition strategy (default twin)")
                       ->check(CLI::IsMember({"trivial", "singleton", "twin", "dominating", "clique"}));
  file->excludes(strategy);
  cmd.add_option("--clique", o.clique, "Clique vertices for --strategy clique")->delimiter(',');
}

void add_time_options(CLI::App& cmd, TimeOptions& o) {
  cmd.add_option("--t-min", o.t_min, "First sampled time")->capture_default_str();
  cmd.add_option("--t-max", o.t_max, "Last sampled time (default 2 pi)");
  cmd.add_option("--t-steps", o.steps, "Number of sampled times")->capture_default_str();
}

void add_output_options(CLI::App& cmd, OutputOptions& o) {
  cmd.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd.add_option("--out", o.out, "Output file (default stdout)");
}

// ---------------------------------------------------------------------------
// Commands.

int run_gen(const GraphOptions& g_opts, const std::string& out_path) {
  if (!g_opts.file.empty()) throw UsageError("gen takes --family, not --graph");
  const ctqw::Graph g = load_graph(g_opts);
  Output out(out_path);
  out.write(ctqw::serialize_edge_list(g));
  out.close();
  return kExitOk;
}

int run_decompose(const GraphOptions& g_opts, const PartitionOptions& p_opts, const OutputOptions& o) {
  const ctqw::Graph g = load_graph(g_opts);
  ctqw::FidResult result = load_partition(g, p_opts);
  Output out(o.out);
  if (const auto* v = std::get_if<ctqw::FidViolation>(&result)) {
    report_violation(*v, o, out);
    out.close();
    return kExitVerify;
  }
  const auto& p = std::get<ctqw::FidPartition>(result);
  const ctqw::Matrix lbar = ctqw::reduced_matrix(p);
  const std::size_t k = p.block_count();

  auto joined = [&](std::size_t i) {
    std::vector<std::size_t> js;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i && p.interconnected(i, j)) js.push_back(j);
    return js;
  };

  if (want_json(o)) {
    Json doc;
    doc["valid"] = true;
    doc["block_count"] = k;
    doc["blocks"] = Json::array();
    for (std::size_t i = 0; i < k; ++i) {
      Json row;
      row["block"] = i + 1;
      row["size"] = p.block_size(i);
      row["d_tilde"] = p.d_tilde(i);
      row["joined"] = label_array(joined(i));
      row["vertices"] = label_array(p.block(i));
      Json reduced = Json::array();
      for (std::size_t j = 0; j < k; ++j) reduced.push_back(lbar(i, j));
      row["reduced_row"] = reduced;
      doc["blocks"].push_back(row);
    }
    out.write(doc.dump(2) + "\n");
  } else {
    out.write(csv_row({"block", "size", "d_tilde", "joined", "vertices", "reduced_row"}));
    for (std::size_t i = 0; i < k; ++i) {
      std::string reduced;
      for (std::size_t j = 0; j < k; ++j) reduced += (j ? " " : "") + num(lbar(i, j));
      out.write(csv_row({std::to_string(i + 1), std::to_string(p.block_size(i)),
                         std::to_string(p.d_tilde(i)), labels(joined(i)), labels(p.block(i)), reduced}));
    }
  }
  out.close();
  return kExitOk;
}

int run_simulate(const GraphOptions& g_opts, const PartitionOptions& p_opts, const TimeOptions& t_opts,
                 std::size_t start, double eigen_tol, const OutputOptions& o) {
  const ctqw::Graph g = load_graph(g_opts);
  if (start < 1 || start > g.order())
    throw UsageError("--start " + std::to_string(start) + " out of range 1.." + std::to_string(g.order()));
  const std::vector<double> times = load_times(t_opts);
  ctqw::FidResult result = load_partition(g, p_opts);
  Output out(o.out);
  if (const auto* v = std::get_if<ctqw::FidViolation>(&result)) {
    report_violation(*v, o, out);
    out.close();
    return kExitVerify;
  }
  const auto& p = std::get<ctqw::FidPartition>(result);
  const ctqw::Vertex x = start - 1;
  const ctqw::FidWalk fid(g, p, eigen_tol);
  const ctqw::DirectWalk direct(g, eigen_tol);

  static const std::vector<std::string> kColumns{
      "x",        "y",     "t",          "block_x",          "block_y",        "p_fid",
      "p_direct", "abs_diff", "subgraph", "tilde",       "correction_const", "correction_cos",
      "correction_cross", "tilde_cross"};

  std::optional<JsonArrayWriter> json;
  if (want_json(o)) json.emplace(out);
  else out.write(csv_row(kColumns));

  double worst = 0.0;
  for (ctqw::Vertex y = 0; y < g.order(); ++y) {
    for (double t : times) {
      const ctqw::ProbabilityReport r = fid.probability(x, y, t);
      const double p_direct = direct.probability(x, y, t);
      const double diff = std::abs(r.probability - p_direct);
      worst = std::max(worst, diff);
      std::vector<std::optional<double>> terms(6);
      if (r.terms) {
        terms[0] = r.terms->subgraph;
        terms[1] = r.terms->tilde;
        terms[2] = r.terms->correction_const;
        terms[3] = r.terms->correction_cos;
        terms[4] = r.terms->correction_cross;
      }
      if (r.cross_term) terms[5] = *r.cross_term;

      if (json) {
        Json row;
        row["x"] = x + 1;
        row["y"] = y + 1;
        row["t"] = t;
        row["block_x"] = p.block_of(x) + 1;
        row["block_y"] = p.block_of(y) + 1;
        row["p_fid"] = clamp_probability(r.probability);
        row["p_direct"] = clamp_probability(p_direct);
        row["abs_diff"] = diff;
        for (std::size_t c = 0; c < terms.size(); ++c)
          row[kColumns[8 + c]] = terms[c] ? Json(*terms[c]) : Json(nullptr);
        json->add(row);
      } else {
        std::vector<std::string> fields{std::to_string(x + 1),
                                        std::to_string(y + 1),
                                        num(t),
                                        std::to_string(p.block_of(x) + 1),
                                        std::to_string(p.block_of(y) + 1),
                                        num(clamp_probability(r.probability)),
                                        num(clamp_probability(p_direct)),
                                        num(diff)};
        for (const auto& term : terms) fields.push_back(term ? num(*term) : "");
        out.write(csv_row(fields));
      }
    }
  }
  if (json) json->finish();
  out.close();
  std::fprintf(stderr, "ctqw: max |p_fid - p_direct| = %.3g\n", worst);
  return kExitOk;
}

int run_verify(const GraphOptions& g_opts, const PartitionOptions& p_opts, const TimeOptions& t_opts,
               const ctqw::InvariantTolerances& tol, const OutputOptions& o) {
  const ctqw::Graph g = load_graph(g_opts);
  const std::vector<double> times = load_times(t_opts);
  ctqw::FidResult result = load_partition(g, p_opts);
  Output out(o.out);
  if (const auto* v = std::get_if<ctqw::FidViolation>(&result)) {
    report_violation(*v, o, out);
    out.close();
    return kExitVerify;
  }
  const auto results = ctqw::check_invariants(g, std::get<ctqw::FidPartition>(result), times, tol);
  if (want_json(o)) {
    Json doc = Json::array();
    for (const auto& r : results) {
      Json row;
      row["invariant"] = r.name;
      row["passed"] = r.passed;
      row["max_error"] = r.max_error;
      row["tolerance"] = r.tolerance;
      row["witness"] = r.witness;
      doc.push_back(row);
    }
    out.write(doc.dump(2) + "\n");
  } else {
    out.write(csv_row({"invariant", "passed", "max_error", "tolerance", "witness"}));
    for (const auto& r : results)
      out.write(csv_row({r.name, r.passed ? "true" : "false", num(r.max_error), num(r.tolerance), r.witness}));
  }
  out.close();
  return ctqw::all_passed(results) ? kExitOk : kExitVerify;
}

struct ScanOptions {
  std::string family;
  std::string generator = "complete";
  double p = 1.0;
  std::optional<std::uint64_t> seed;
  std::size_t gateways = 2;
  std::string outer;
  std::vector<std::size_t> sizes;
  std::vector<double> times;
  double tol = ctqw::kEquivalenceTolerance;
  double eigen_tol = ctqw::kEigenTolerance;
};

int run_scan(const ScanOptions& s, const TimeOptions& t_opts, const OutputOptions& o) {
  ctqw::ScanFamily family;
  if (s.family == "dominating") {
    family = ctqw::DominatingScan{{family_or_throw(s.generator), 0, s.p, resolve_seed(s.seed)}};
  } else {
    ctqw::Graph outer = s.outer.empty() ? ctqw::path_graph(10) : ctqw::parse_edge_list(read_file(s.outer));
    family = ctqw::CliqueGatewayScan{s.gateways, std::move(outer)};
  }
  const std::vector<double> times = s.times.empty() ? load_times(t_opts) : s.times;
  if (std::adjacent_find(s.sizes.begin(), s.sizes.end(), std::greater_equal<>()) != s.sizes.end())
    throw UsageError("--sizes must be strictly ascending");

  Output out(o.out);
  std::optional<JsonArrayWriter> json;
  if (want_json(o)) json.emplace(out);
  else out.write(csv_row({"size", "block_size", "t", "return_probability", "one_minus_p", "bound", "within_bound"}));

  bool all_within = true;
  ctqw::stream_localization_scan(
      family, s.sizes, times,
      [&](const ctqw::ScanRow& row) {
        all_within = all_within && row.within_bound;
        const double p = clamp_probability(row.return_probability);
        if (json) {
          Json r;
          r["size"] = row.size;
          r["block_size"] = row.block_size;
          r["t"] = row.t;
          r["return_probability"] = p;
          r["one_minus_p"] = 1.0 - p;
          r["bound"] = row.bound;
          r["within_bound"] = row.within_bound;
          json->add(r);
        } else {
          out.write(csv_row({std::to_string(row.size), std::to_string(row.block_size), num(row.t), num(p),
                             num(1.0 - p), num(row.bound), row.within_bound ? "true" : "false"}));
        }
      },
      s.tol);
  if (json) json->finish();
  out.close();
  return all_within ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous-time quantum walks on graphs through fully interconnected decompositions", "ctqw"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ctqw 1.0.0");

  GraphOptions gen_graph;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a generated graph as an edge list");
  gen->add_option("--family", gen_graph.family, "Graph family")->required();
  gen->add_option("--n", gen_graph.n, "Vertex count")->required();
  gen->add_option("--p", gen_graph.p, "Edge or join probability for random families");
  gen->add_option("--seed", gen_graph.seed, "Seed (falls back to CTQW_SEED, then 0)");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  GraphOptions dec_graph;
  PartitionOptions dec_part;
  OutputOptions dec_out;
  auto* decompose = app.add_subcommand("decompose", "Build and check a decomposition, print its blocks");
  add_graph_options(*decompose, dec_graph);
  add_partition_options(*decompose, dec_part);
  add_output_options(*decompose, dec_out);

  GraphOptions sim_graph;
  PartitionOptions sim_part;
  TimeOptions sim_times;
  OutputOptions sim_out;
  std::size_t start = 1;
  double sim_eigen_tol = ctqw::kEigenTolerance;
  auto* simulate = app.add_subcommand("simulate", "Transition probabilities from a start vertex");
  add_graph_options(*simulate, sim_graph);
  add_partition_options(*simulate, sim_part);
  add_time_options(*simulate, sim_times);
  add_output_options(*simulate, sim_out);
  simulate->add_option("--start", start, "Start vertex (1-based)")->capture_default_str();
  simulate->add_option("--eigen-tol", sim_eigen_tol, "Eigensolver tolerance")->capture_default_str();

  GraphOptions ver_graph;
  PartitionOptions ver_part;
  TimeOptions ver_times;
  OutputOptions ver_out;
  ctqw::InvariantTolerances ver_tol;
  auto* verify = app.add_subcommand("verify", "Check spectral and walk invariants");
  add_graph_options(*verify, ver_graph);
  add_partition_options(*verify, ver_part);
  add_time_options(*verify, ver_times);
  add_output_options(*verify, ver_out);
  verify->add_option("--tol", ver_tol.equivalence, "Tolerance for walk-level checks")->capture_default_str();
  verify->add_option("--identity-tol", ver_tol.identity, "Tolerance for eigen identities")->capture_default_str();
  verify->add_option("--eigen-tol", ver_tol.eigen, "Eigensolver tolerance")->capture_default_str();

  ScanOptions scan_opts;
  TimeOptions scan_times;
  OutputOptions scan_out;
  auto* scan = app.add_subcommand("scan", "Return-probability scan over growing graphs");
  scan->add_option("--family", scan_opts.family, "Scan family")
      ->required()
      ->check(CLI::IsMember({"dominating", "clique"}));
  scan->add_option("--generator", scan_opts.generator, "Graph family for the dominating scan")
      ->capture_default_str();
  scan->add_option("--p", scan_opts.p, "Probability for a random generator")->capture_default_str();
  scan->add_option("--seed", scan_opts.seed, "Seed for a random generator (falls back to CTQW_SEED)");
  scan->add_option("--gateways", scan_opts.gateways, "Gateway count for the clique scan")->capture_default_str();
  scan->add_option("--outer", scan_opts.outer, "Outer graph edge-list file for the clique scan (default path on 10)");
  scan->add_option("--sizes", scan_opts.sizes, "Ascending sizes, comma separated")->required()->delimiter(',');
  scan->add_option("--times", scan_opts.times, "Explicit times, comma separated")->delimiter(',');
  scan->add_option("--tol", scan_opts.tol, "Slack on the bound check")->capture_default_str();
  add_time_options(*scan, scan_times);
  add_output_options(*scan, scan_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return run_gen(gen_graph, gen_out);
    if (*decompose) return run_decompose(dec_graph, dec_part, dec_out);
    if (*simulate) return run_simulate(sim_graph, sim_part, sim_times, start, sim_eigen_tol, sim_out);
    if (*verify) return run_verify(ver_graph, ver_part, ver_times, ver_tol, ver_out);
    if (*scan) return run_scan(scan_opts, scan_times, scan_out);
  } catch (const ctqw::ParseError& e) {
    std::fprintf(stderr, "ctqw: parse error: %s\n", e.what());
    return kExitUsage;
  } catch (const ctqw::InputError& e) {
    std::fprintf(stderr, "ctqw: error: %s\n", e.what());
    return kExitUsage;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "ctqw: error: %s\n", e.what());
    return kExitUsage;
  } catch (const ctqw::ConvergenceError& e) {
    std::fprintf(stderr, "ctqw: eigensolver failed: %s\n", e.what());
    return kExitVerify;
  }
  return kExitUsage;
}
