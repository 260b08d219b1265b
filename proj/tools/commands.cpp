#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "spgemm/galerkin.hpp"
#include "spgemm/matrix_market.hpp"
#include "spgemm/merge.hpp"
#include "spgemm/oracle.hpp"
#include "spgemm/parallel.hpp"
#include "spgemm/pipeline.hpp"
#include "spgemm/random.hpp"
#include "spgemm/stencil.hpp"

namespace spgemm::cli {
namespace {

using json = nlohmann::json;

struct VerificationFailure : Error {
  using Error::Error;
};

struct InputOptions {
  std::string input;
  std::string stencil;
  std::string random;  // <n>:<density>
  bool expand_symmetric = true;
};

struct CommonOptions {
  std::string precision = "f64";
  unsigned threads = 0;
  std::uint64_t seed = 1;
  std::string json_path;
  std::string csv_path;
};

template <class T>
struct NamedMatrix {
  std::string name;
  CsrMatrix<T> matrix;
  std::vector<Index> grid;  // empty unless generated from a stencil
};

template <class T>
NamedMatrix<T> load_one(const std::string& input, const std::string& stencil,
                        const std::string& random, bool expand_symmetric, std::uint64_t seed) {
  const int given = !input.empty() + !stencil.empty() + !random.empty();
  if (given != 1) throw CLI::ValidationError("exactly one of --input, --stencil, --random is required");
  if (!stencil.empty()) {
    const auto spec = parse_stencil_spec(stencil);
    return {spec.to_string(), gen_poisson<T>(spec), spec.dims};
  }
  if (!random.empty()) {
    const auto colon = random.find(':');
    if (colon == std::string::npos) throw Error("--random expects <n>:<density>");
    const auto n = static_cast<Index>(std::stoul(random.substr(0, colon)));
    const double density = std::stod(random.substr(colon + 1));
    return {"random:" + random, random_csr<T>(n, n, density, seed), {}};
  }
  auto loaded = read_matrix_market<T>(input, expand_symmetric);
  if (loaded.info.duplicates_fused > 0) {
    std::clog << input << ": fused " << loaded.info.duplicates_fused << " duplicate entries\n";
  }
  return {std::filesystem::path(input).stem().string(), std::move(loaded.matrix), {}};
}

class Sinks {
 public:
  explicit Sinks(const CommonOptions& common) {
    if (!common.json_path.empty()) {
      json_.open(common.json_path);
      if (!json_) throw Error("cannot write " + common.json_path);
    }
    if (!common.csv_path.empty()) {
      csv_.open(common.csv_path);
      if (!csv_) throw Error("cannot write " + common.csv_path);
    }
  }
  void json_line(const json& j) {
    if (json_.is_open()) json_ << j.dump() << '\n';
  }
  void csv(const std::string& text) {
    if (csv_.is_open()) csv_ << text;
  }
  bool has_csv() const { return csv_.is_open(); }

 private:
  std::ofstream json_;
  std::ofstream csv_;
};

double per_row(Offset n, Index rows) { return rows ? static_cast<double>(n) / rows : 0.0; }

json times_json(const StageTimes& t) {
  return {{"upper_bound", t.upper_bound_ms}, {"binning", t.binning_ms},
          {"precise_prepass", t.precise_prepass_ms}, {"compute", t.compute_ms},
          {"arrange", t.arrange_ms}, {"total", t.total_ms()}};
}

json memory_json(const MemoryFootprint& m) {
  return {{"inputs", m.inputs}, {"precise", m.precise}, {"upper", m.upper_bound},
          {"hybrid", m.hybrid}};
}

json report_json(const SpgemmReport& r, Offset nnz_a) {
  return {{"strategy", to_string(r.strategy)},
          {"n", r.rows},
          {"nnz_a", nnz_a},
          {"nnzr_a", per_row(nnz_a, r.rows)},
          {"flops", r.flops},
          {"nnz_upper", r.nnz_upper},
          {"nnzr_upper", per_row(r.nnz_upper, r.rows)},
          {"nnz_c", r.nnz_result},
          {"nnzr_c", per_row(r.nnz_result, r.rows)},
          {"gflops", r.gflops()},
          {"times_ms", times_json(r.times)},
          {"bytes", memory_json(r.memory)},
          {"temp_bytes", r.temp_bytes},
          {"realloc_count", r.realloc_count},
          {"realloc_bytes_copied", r.realloc_bytes_copied},
          {"bin_counts", r.bin_counts}};
}

std::vector<Strategy> strategies_from(const std::string& text) {
  if (text == "all") return {Strategy::kPrecise, Strategy::kHybrid, Strategy::kUpperBound};
  return {parse_strategy(text)};
}

FaultInjection parse_fault(const std::string& text) {
  if (text.empty() || text == "none") return FaultInjection::kNone;
  if (text == "heap") return FaultInjection::kHeapFusion;
  if (text == "esc") return FaultInjection::kEscFusion;
  if (text == "merge") return FaultInjection::kMergeFusion;
  throw Error("unknown fault '" + text + "'");
}

std::string fmt_count(double v) {
  std::ostringstream os;
  if (v >= 1e6) os << std::fixed << std::setprecision(1) << v / 1e6 << "M";
  else if (v >= 1e3) os << std::fixed << std::setprecision(1) << v / 1e3 << "K";
  else os << std::fixed << std::setprecision(0) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// square

struct SquareOptions {
  InputOptions input;
  CommonOptions common;
  std::string strategy = "hybrid";
  std::string regrow = "fresh";
  std::string fault;
  bool verify = false;
};

template <class T>
int square(const SquareOptions& opt, std::ostream& out) {
  const auto m = load_one<T>(opt.input.input, opt.input.stencil, opt.input.random,
                             opt.input.expand_symmetric, opt.common.seed);
  if (m.matrix.num_rows() != m.matrix.num_cols()) {
    throw DimensionMismatch("square: input is not square (" + std::to_string(m.matrix.num_rows()) +
                            "x" + std::to_string(m.matrix.num_cols()) + ")");
  }
  Sinks sinks(opt.common);
  SpgemmOptions so;
  so.workers = opt.common.threads;
  so.regrow = opt.regrow == "inplace" ? RegrowMode::kInPlace : RegrowMode::kFreshBlock;
  so.kernel.fault = parse_fault(opt.fault);

  std::optional<CsrMatrix<T>> reference;
  if (opt.verify) reference = spgemm_gustavson(m.matrix, m.matrix);

  const Offset nnz_a = m.matrix.nnz();
  out << std::left << std::setw(22) << "matrix" << std::setw(9) << "strategy" << std::right
      << std::setw(10) << "n" << std::setw(16) << "nnz(A),nnzr" << std::setw(18) << "nnz(C^),nnzr"
      << std::setw(16) << "nnz(C),nnzr" << std::setw(10) << "GFlop/s" << std::setw(14)
      << "bytes" << std::setw(9) << "reallocs" << std::setw(10) << "verified" << '\n';
  if (sinks.has_csv()) {
    sinks.csv("matrix,strategy,n,nnz_a,nnz_upper,nnz_c,flops,gflops,upper_bound_ms,binning_ms,"
              "precise_prepass_ms,compute_ms,arrange_ms,bytes_precise,bytes_upper,bytes_hybrid,"
              "realloc_count,verified\n");
  }

  bool all_ok = true;
  std::vector<SpgemmReport> reports;
  for (const auto strategy : strategies_from(opt.strategy)) {
    so.strategy = strategy;
    auto result = spgemm(m.matrix, m.matrix, so);
    const auto& r = result.report;
    std::string verified = "-";
    json j = report_json(r, nnz_a);
    j["command"] = "square";
    j["matrix"] = m.name;
    j["precision"] = opt.common.precision;
    if (reference) {
      const auto cmp = compare(result.c, *reference);
      verified = cmp.ok() ? "yes" : "NO";
      j["verified"] = cmp.ok();
      j["max_relative_error"] = cmp.max_relative_error;
      if (!cmp.ok()) {
        all_ok = false;
        j["first_difference"] = cmp.first_difference;
      }
    } else {
      j["verified"] = nullptr;
    }
    sinks.json_line(j);

    std::ostringstream a, ch, c;
    a << fmt_count(nnz_a) << "," << std::fixed << std::setprecision(1) << per_row(nnz_a, r.rows);
    ch << fmt_count(r.nnz_upper) << "," << std::fixed << std::setprecision(1)
       << per_row(r.nnz_upper, r.rows);
    c << fmt_count(r.nnz_result) << "," << std::fixed << std::setprecision(1)
      << per_row(r.nnz_result, r.rows);
    out << std::left << std::setw(22) << m.name << std::setw(9) << to_string(strategy) << std::right
        << std::setw(10) << r.rows << std::setw(16) << a.str() << std::setw(18) << ch.str()
        << std::setw(16) << c.str() << std::setw(10) << std::fixed << std::setprecision(3)
        << r.gflops() << std::setw(14) << r.memory.of(strategy) << std::setw(9) << r.realloc_count
        << std::setw(10) << verified << '\n';
    if (sinks.has_csv()) {
      std::ostringstream row;
      row << m.name << ',' << to_string(strategy) << ',' << r.rows << ',' << nnz_a << ','
          << r.nnz_upper << ',' << r.nnz_result << ',' << r.flops << ',' << r.gflops() << ','
          << r.times.upper_bound_ms << ',' << r.times.binning_ms << ','
          << r.times.precise_prepass_ms << ',' << r.times.compute_ms << ',' << r.times.arrange_ms
          << ',' << r.memory.precise << ',' << r.memory.upper_bound << ',' << r.memory.hybrid
          << ',' << r.realloc_count << ',' << verified << '\n';
      sinks.csv(row.str());
    }
    reports.push_back(r);
  }

  const auto& mem = reports.front().memory;
  out << "bytes: precise " << mem.precise << ", hybrid " << mem.hybrid << ", upper bound "
      << mem.upper_bound << "  (hybrid/precise " << std::setprecision(3)
      << static_cast<double>(mem.hybrid) / mem.precise << ", upper/precise "
      << static_cast<double>(mem.upper_bound) / mem.precise << ")\n";
  if (!all_ok) throw VerificationFailure("square: result differs from the reference product");
  return kOk;
}

// ---------------------------------------------------------------------------
// galerkin

struct GalerkinOptions {
  std::string stencil;
  CommonOptions common;
  std::string order = "both";
  int levels = 3;
  Index block = 2;
  bool verify = false;
};

template <class T>
int galerkin(const GalerkinOptions& opt, std::ostream& out) {
  const auto spec = parse_stencil_spec(opt.stencil);
  const auto a = gen_poisson<T>(spec);
  Sinks sinks(opt.common);
  SpgemmOptions so;
  so.workers = opt.common.threads;

  const bool want_ra = opt.order == "both" || opt.order == "RA_then_P";
  const bool want_ap = opt.order == "both" || opt.order == "AP_then_R";
  if (!want_ra && !want_ap) throw CLI::ValidationError("--order must be both, RA_then_P or AP_then_R");

  out << std::left << std::setw(6) << "level" << std::right << std::setw(10) << "fine n"
      << std::setw(10) << "coarse n" << std::setw(12) << "nnz(Ac)" << std::setw(16)
      << "(RA)P ms" << std::setw(16) << "R(AP) ms" << std::setw(10) << "equal" << '\n';
  if (sinks.has_csv()) sinks.csv("level,fine_n,coarse_n,coarse_nnz,order,first_ms,second_ms,equal\n");

  bool all_ok = true;
  CsrMatrix<T> current = a;
  auto dims = spec.dims;
  for (int level = 0; level < opt.levels; ++level) {
    const auto map = aggregate_grid(dims, opt.block);
    const auto p = prolongator<T>(map);
    std::optional<GalerkinResult<T>> ra, ap;
    if (want_ra) ra = galerkin_product(p, current, GalerkinOrder::kRAThenP, so);
    if (want_ap) ap = galerkin_product(p, current, GalerkinOrder::kAPThenR, so);
    const auto& coarse = ra ? ra->coarse : ap->coarse;

    bool equal = true;
    if (ra && ap) equal = compare(ra->coarse, ap->coarse, sizeof(T) == 4 ? 1e-5 : 1e-10).ok();
    if (opt.verify && current.num_rows() <= 4096) {
      const auto reference =
          spgemm_gustavson(spgemm_gustavson(transpose(p), current), p);
      equal = equal && compare(coarse, reference, sizeof(T) == 4 ? 1e-5 : 1e-10).ok();
    }
    all_ok = all_ok && equal;

    auto ms = [](const std::optional<GalerkinResult<T>>& g) {
      return g ? g->first.times.total_ms() + g->second.times.total_ms() + g->transpose_ms : 0.0;
    };
    out << std::left << std::setw(6) << level << std::right << std::setw(10) << current.num_rows()
        << std::setw(10) << coarse.num_rows() << std::setw(12) << coarse.nnz() << std::setw(16)
        << std::fixed << std::setprecision(3) << ms(ra) << std::setw(16) << ms(ap)
        << std::setw(10) << (equal ? "yes" : "NO") << '\n';

    const std::pair<GalerkinOrder, const std::optional<GalerkinResult<T>>*> runs[] = {
        {GalerkinOrder::kRAThenP, &ra}, {GalerkinOrder::kAPThenR, &ap}};
    for (const auto& [order, result] : runs) {
      if (!*result) continue;
      const auto* g = &**result;
      json j = {{"command", "galerkin"},
                {"stencil", spec.to_string()},
                {"precision", opt.common.precision},
                {"level", level},
                {"order", to_string(order)},
                {"fine_n", current.num_rows()},
                {"coarse_n", coarse.num_rows()},
                {"coarse_nnz", coarse.nnz()},
                {"transpose_ms", g->transpose_ms},
                {"first", report_json(g->first, 0)},
                {"second", report_json(g->second, 0)},
                {"equal", equal}};
      sinks.json_line(j);
      if (sinks.has_csv()) {
        std::ostringstream row;
        row << level << ',' << current.num_rows() << ',' << coarse.num_rows() << ','
            << coarse.nnz() << ',' << to_string(order) << ',' << g->first.times.total_ms() << ','
            << g->second.times.total_ms() << ',' << (equal ? 1 : 0) << '\n';
        sinks.csv(row.str());
      }
    }

    current = coarse;
    dims = coarse_grid_dims(dims, opt.block);
    if (current.num_rows() <= 1) break;
  }
  if (!all_ok) throw VerificationFailure("galerkin: association orders disagree");
  return kOk;
}

// ---------------------------------------------------------------------------
// mergebench

struct MergeBenchOptions {
  std::vector<std::size_t> sizes = {16, 32, 64, 128, 256, 512, 1024, 2048, 4096};
  std::string payload = "all";
  unsigned trials = 3;
  std::size_t total = std::size_t{1} << 22;
  CommonOptions common;
};

int mergebench(const MergeBenchOptions& opt, std::ostream& out) {
  Sinks sinks(opt.common);
  std::vector<merge::Payload> payloads;
  if (opt.payload == "all") {
    payloads = {merge::Payload::kNone, merge::Payload::kU32, merge::Payload::kU64};
  } else {
    payloads = {merge::parse_payload(opt.payload)};
  }
  std::vector<merge::BenchRow> rows;
  for (const auto p : payloads) {
    merge::BenchConfig config;
    config.sizes = opt.sizes;
    config.payload = p;
    config.trials = opt.trials;
    config.total_elements = opt.total;
    config.workers = opt.common.threads;
    config.seed = opt.common.seed;
    const auto part = merge::bench_merges(config);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  const auto csv = merge::bench_csv(rows);
  out << csv;
  sinks.csv(csv);
  for (const auto& r : rows) {
    sinks.json_line({{"command", "mergebench"},
                     {"algorithm", r.algorithm},
                     {"l", r.l},
                     {"payload", merge::to_string(r.payload)},
                     {"elements_per_second", r.elements_per_second}});
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// memreport

struct MemReportOptions {
  std::vector<std::string> inputs;
  std::vector<std::string> stencils;
  CommonOptions common;
  bool expand_symmetric = true;
};

template <class T>
int memreport(const MemReportOptions& opt, std::ostream& out) {
  if (opt.inputs.empty() && opt.stencils.empty()) {
    throw CLI::ValidationError("memreport needs at least one --input or --stencil");
  }
  Sinks sinks(opt.common);
  SpgemmOptions so;
  so.workers = opt.common.threads;
  so.strategy = Strategy::kHybrid;

  const std::string header =
      "matrix,precise_bytes,hybrid_bytes,upper_bytes,precise_ratio,hybrid_ratio,upper_ratio\n";
  out << header;
  sinks.csv(header);
  double inv_hybrid = 0, inv_upper = 0;
  std::size_t count = 0;
  auto one = [&](const NamedMatrix<T>& m) {
    const auto result = spgemm(m.matrix, m.matrix, so);
    const auto& mem = result.report.memory;
    // the hybrid run's own allocation must match the model it reports
    if (mem.inputs + result.report.temp_bytes != mem.hybrid) {
      throw Error("memreport: measured hybrid allocation disagrees with the model");
    }
    const double hr = static_cast<double>(mem.hybrid) / mem.precise;
    const double ur = static_cast<double>(mem.upper_bound) / mem.precise;
    inv_hybrid += 1.0 / hr;
    inv_upper += 1.0 / ur;
    ++count;
    std::ostringstream row;
    row << m.name << ',' << mem.precise << ',' << mem.hybrid << ',' << mem.upper_bound << ",1,"
        << hr << ',' << ur << '\n';
    out << row.str();
    sinks.csv(row.str());
    sinks.json_line({{"command", "memreport"}, {"matrix", m.name}, {"bytes", memory_json(mem)},
                     {"hybrid_ratio", hr}, {"upper_ratio", ur}});
  };
  for (const auto& path : opt.inputs) one(load_one<T>(path, "", "", opt.expand_symmetric, 0));
  for (const auto& s : opt.stencils) one(load_one<T>("", s, "", true, 0));

  std::ostringstream summary;
  summary << "Hmean,,,,1," << count / inv_hybrid << ',' << count / inv_upper << '\n';
  out << summary.str();
  sinks.csv(summary.str());
  sinks.json_line({{"command", "memreport"}, {"matrix", "Hmean"},
                   {"hybrid_ratio", count / inv_hybrid}, {"upper_ratio", count / inv_upper}});
  return kOk;
}

void add_common(CLI::App* cmd, CommonOptions& c) {
  cmd->add_option("--precision", c.precision, "f32 or f64")->check(CLI::IsMember({"f32", "f64"}));
  cmd->add_option("--threads", c.threads, "worker threads (0 = all hardware threads)");
  cmd->add_option("--seed", c.seed, "seed for generated inputs");
  cmd->add_option("--json", c.json_path, "write JSON lines here");
  cmd->add_option("--csv", c.csv_path, "write CSV here");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse matrix-matrix multiplication driver"};
  app.require_subcommand(1);

  SquareOptions sq;
  auto* square_cmd = app.add_subcommand("square", "compute C = A*A and report statistics");
  square_cmd->add_option("--input", sq.input.input, "Matrix Market file");
  square_cmd->add_option("--stencil", sq.input.stencil, "generated Poisson matrix, e.g. 3d7pt:32x32x32");
  square_cmd->add_option("--random", sq.input.random, "random <n>:<density> matrix");
  square_cmd->add_flag("!--no-expand-symmetric", sq.input.expand_symmetric,
                       "keep only the stored triangle of symmetric files");
  square_cmd->add_option("--strategy", sq.strategy, "hybrid, upper, precise or all")
      ->check(CLI::IsMember({"hybrid", "upper", "precise", "all"}));
  square_cmd->add_option("--regrow", sq.regrow, "fresh or inplace")
      ->check(CLI::IsMember({"fresh", "inplace"}));
  square_cmd->add_flag("--verify", sq.verify, "compare against the reference product");
  square_cmd->add_option("--inject-fault", sq.fault)->group("");
  add_common(square_cmd, sq.common);

  GalerkinOptions gk;
  auto* galerkin_cmd = app.add_subcommand("galerkin", "coarse operators P^T A P over several levels");
  galerkin_cmd->add_option("--stencil", gk.stencil, "generated Poisson matrix")->required();
  galerkin_cmd->add_option("--order", gk.order, "both, RA_then_P or AP_then_R");
  galerkin_cmd->add_option("--levels", gk.levels, "number of coarsening levels")
      ->check(CLI::PositiveNumber);
  galerkin_cmd->add_option("--block", gk.block, "aggregate width per grid direction (1 gives P = I)");
  galerkin_cmd->add_flag("--verify", gk.verify, "also check against the reference product");
  add_common(galerkin_cmd, gk.common);

  MergeBenchOptions mb;
  auto* merge_cmd = app.add_subcommand("mergebench", "throughput of the merge algorithms");
  merge_cmd->add_option("--sizes", mb.sizes, "sequence lengths l (powers of two in [16, 4096])")
      ->delimiter(',');
  merge_cmd->add_option("--payload", mb.payload, "none, u32, u64 or all");
  merge_cmd->add_option("--trials", mb.trials, "timed repetitions");
  merge_cmd->add_option("--total", mb.total, "elements merged per trial");
  add_common(merge_cmd, mb.common);

  MemReportOptions mr;
  auto* mem_cmd = app.add_subcommand("memreport", "memory of the three allocation strategies");
  mem_cmd->add_option("--input", mr.inputs, "Matrix Market files");
  mem_cmd->add_option("--stencil", mr.stencils, "generated Poisson matrices");
  add_common(mem_cmd, mr.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  try {
    const bool f32 = [&] {
      if (square_cmd->parsed()) return sq.common.precision == "f32";
      if (galerkin_cmd->parsed()) return gk.common.precision == "f32";
      if (mem_cmd->parsed()) return mr.common.precision == "f32";
      return false;
    }();
    if (square_cmd->parsed()) return f32 ? square<float>(sq, out) : square<double>(sq, out);
    if (galerkin_cmd->parsed()) return f32 ? galerkin<float>(gk, out) : galerkin<double>(gk, out);
    if (merge_cmd->parsed()) return mergebench(mb, out);
    if (mem_cmd->parsed()) return f32 ? memreport<float>(mr, out) : memreport<double>(mr, out);
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const CLI::Error& e) {
    err << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"spgemm_cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace spgemm::cli
