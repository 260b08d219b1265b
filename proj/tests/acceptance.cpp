// Acceptance suite: one PASS / FAIL / SKIP line per criterion.
//
// Dataset-dependent checks look for SuiteSparse Matrix Market files in
// $SPGEMM_DATA_DIR (default: <source>/data), either flat (<name>.mtx) or as
// unpacked archives (<name>/<name>.mtx).

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "../tools/commands.hpp"
#include "spgemm/galerkin.hpp"
#include "spgemm/matrix_market.hpp"
#include "spgemm/merge.hpp"
#include "spgemm/oracle.hpp"
#include "spgemm/parallel.hpp"
#include "spgemm/pipeline.hpp"
#include "spgemm/random.hpp"
#include "spgemm/stencil.hpp"
#include "test_util.hpp"

#ifndef SPGEMM_SOURCE_DIR
#define SPGEMM_SOURCE_DIR "."
#endif

namespace spgemm {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  const char* tag = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL" : "SKIP";
  if (o.verdict == Verdict::kFail) ++failures;
  std::cout << "[" << tag << "] " << std::setw(2) << id << " " << name << ": " << o.detail
            << std::endl;
}

Outcome guarded(const std::function<Outcome()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {Verdict::kFail, std::string("exception: ") + e.what()};
  }
}

// ---------------------------------------------------------------------------
// random corpus shared by criteria 1-3

template <class T>
struct Case {
  std::uint64_t seed;
  CsrMatrix<T> a;
  CsrMatrix<T> b;
};

template <class T>
std::vector<Case<T>> make_corpus(std::size_t count, std::uint64_t base_seed) {
  std::vector<Case<T>> out;
  const double densities[] = {0.004, 0.02, 0.06, 0.15, 0.4};
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint64_t seed = base_seed + k;
    std::mt19937_64 rng(seed);
    const Index n = 8 + static_cast<Index>(rng() % 249);  // 8..256
    if (k % 4 == 3) {
      // plain A^2 of a Bernoulli matrix
      const double d = densities[rng() % 5];
      auto a = random_csr<T>(n, n, d, seed, -1.0, 1.0);
      out.push_back({seed, a, a});
    } else {
      // rows pinned to the bin edges and to random sizes in every group
      auto ops = testing::targeted_operands<T>(n, testing::mixed_targets(rng, 26), rng,
                                               k % 2 == 0);
      out.push_back({seed, std::move(ops.a), std::move(ops.b)});
    }
  }
  return out;
}

struct CorpusStats {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  std::array<std::size_t, 6> rows_per_group{};
  std::set<Offset> boundary_hits;
  double max_rel = 0;
  double seconds = 0;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

template <class T>
void run_oracle_equivalence(const std::vector<Case<T>>& corpus, CorpusStats& s) {
  const auto t = Clock::now();
  const BinConfig bins;
  const std::set<Offset> edges(testing::boundary_targets().begin(), testing::boundary_targets().end());
  for (const auto& c : corpus) {
    ++s.cases;
    const auto u = stage1_upper_bound(c.a, c.b);
    for (Offset ui : u.u) {
      ++s.rows_per_group[bins.group_of(ui)];
      if (edges.count(ui)) s.boundary_hits.insert(ui);
    }
    const auto expected = spgemm_gustavson(c.a, c.b);
    const auto got = spgemm(c.a, c.b).c;
    const auto cmp = compare(got, expected, default_tolerance<T>());
    s.max_rel = std::max(s.max_rel, cmp.max_relative_error);
    if (!cmp.ok() || !validate(got).empty()) {
      s.fail("seed " + std::to_string(c.seed) + ": " + cmp.first_difference);
    }
  }
  s.seconds += seconds_since(t);
}

template <class T>
void run_strategy_invariance(const std::vector<Case<T>>& corpus, CorpusStats& s) {
  const auto t = Clock::now();
  for (const auto& c : corpus) {
    ++s.cases;
    SpgemmOptions opt;
    const auto hybrid = spgemm(c.a, c.b, opt).c;
    opt.strategy = Strategy::kUpperBound;
    const auto upper = spgemm(c.a, c.b, opt).c;
    opt.strategy = Strategy::kPrecise;
    const auto precise = spgemm(c.a, c.b, opt).c;
    const auto c1 = compare(upper, hybrid, default_tolerance<T>());
    const auto c2 = compare(precise, hybrid, default_tolerance<T>());
    if (!c1.ok() || !c2.ok()) {
      s.fail("seed " + std::to_string(c.seed) + ": " +
             (c1.ok() ? c2.first_difference : c1.first_difference));
    }
  }
  s.seconds += seconds_since(t);
}

template <class T>
void run_size_identities(const std::vector<Case<T>>& corpus, CorpusStats& s) {
  for (const auto& c : corpus) {
    ++s.cases;
    const auto u = stage1_upper_bound(c.a, c.b);
    if (2 * u.total() != count_flops(c.a, c.b)) {
      s.fail("seed " + std::to_string(c.seed) + ": sum of u_i differs from flops/2");
      continue;
    }
    const auto expected = spgemm_gustavson(c.a, c.b);
    for (Index i = 0; i < c.a.num_rows(); ++i) {
      if (u.u[i] < expected.row_nnz(i)) {
        s.fail("seed " + std::to_string(c.seed) + ": u_i below nnz in row " + std::to_string(i));
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// criterion 6: long rows with controlled duplicate density

// One row of A whose product has exactly `u` candidates over round(u * (1 -
// dup)) distinct columns, spread over B rows of at most 97 entries.
void append_growth_row(std::size_t u, double dup, std::mt19937_64& rng, Index num_cols,
                       std::vector<std::vector<Index>>& b_rows, std::vector<Index>& a_cols) {
  const std::size_t distinct = std::max<std::size_t>(1, std::llround(u * (1.0 - dup)));
  const auto pool = testing::random_subset(num_cols, static_cast<Index>(distinct), rng);
  const std::size_t chunk = std::min<std::size_t>(distinct, 97);
  for (std::size_t start = 0; start < u; start += chunk) {
    std::vector<Index> row;
    for (std::size_t p = start; p < std::min(u, start + chunk); ++p) row.push_back(pool[p % distinct]);
    std::sort(row.begin(), row.end());
    a_cols.push_back(static_cast<Index>(b_rows.size()));
    b_rows.push_back(std::move(row));
  }
}

Outcome progressive_growth() {
  std::mt19937_64 rng(606);
  const Index num_cols = 8192;
  std::vector<std::vector<Index>> b_rows;
  std::vector<Offset> a_ptr{0};
  std::vector<Index> a_cols;
  std::vector<std::pair<std::size_t, double>> cases;
  for (std::size_t u : {600u, 1500u, 5000u}) {
    for (double dup : {0.0, 0.5, 0.95}) {
      append_growth_row(u, dup, rng, num_cols, b_rows, a_cols);
      a_ptr.push_back(a_cols.size());
      cases.push_back({u, dup});
    }
  }
  const auto rows = static_cast<Index>(cases.size());
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<double> a_vals(a_cols.size());
  for (auto& v : a_vals) v = val(rng);
  std::vector<Offset> b_ptr{0};
  std::vector<Index> b_cols;
  std::vector<double> b_vals;
  for (const auto& r : b_rows) {
    for (Index c : r) {
      b_cols.push_back(c);
      b_vals.push_back(val(rng));
    }
    b_ptr.push_back(b_cols.size());
  }
  const auto inner = static_cast<Index>(b_rows.size());
  const auto a = make_checked<double>(rows, inner, a_ptr, a_cols, a_vals);
  const auto b = make_checked<double>(inner, num_cols, b_ptr, b_cols, b_vals);
  const auto expected = spgemm_gustavson(a, b);

  std::size_t chains = 0, events = 0;
  for (RegrowMode mode : {RegrowMode::kFreshBlock, RegrowMode::kInPlace}) {
    SpgemmOptions opt;
    opt.regrow = mode;
    const auto result = spgemm(a, b, opt);
    for (Index i = 0; i < rows; ++i) {
      const auto got = result.c.row(i);
      const auto want = expected.row(i);
      const std::string label = "u=" + std::to_string(cases[i].first) +
                                " dup=" + std::to_string(static_cast<int>(cases[i].second * 100)) + "%";
      if (row_upper_bound(i, a, b) != cases[i].first) return {Verdict::kFail, label + ": wrong u_i"};
      if (!std::ranges::equal(got.cols, want.cols) || !std::ranges::equal(got.values, want.values)) {
        return {Verdict::kFail, label + ": row differs from the oracle"};
      }
      Offset cap = 256;
      for (const auto& e : result.report.realloc_log) {
        if (e.row != i) continue;
        if (e.old_capacity != cap || e.new_capacity != 2 * cap) {
          return {Verdict::kFail, label + ": realloc " + std::to_string(e.old_capacity) + "->" +
                                      std::to_string(e.new_capacity) + " breaks the doubling chain"};
        }
        cap = e.new_capacity;
        ++events;
      }
      // the chain stops at the first capacity that holds the row
      if (cap < want.size() || (cap > 256 && cap / 2 >= want.size())) {
        return {Verdict::kFail, label + ": final capacity " + std::to_string(cap) + " for " +
                                    std::to_string(want.size()) + " entries"};
      }
      if (cap > 256) ++chains;
    }
  }
  if (chains == 0) return {Verdict::kFail, "no row needed to grow"};
  std::ostringstream os;
  os << rows << " rows x 2 regrow modes oracle-equal; " << chains << " doubling chains from 256 ("
     << events << " reallocs)";
  return {Verdict::kPass, os.str()};
}

// ---------------------------------------------------------------------------
// criterion 7

template <class V>
merge::KeyValueSeq<V> random_seq(std::size_t n, std::mt19937_64& rng, std::uint32_t range) {
  merge::KeyValueSeq<V> s;
  for (std::size_t p = 0; p < n; ++p) s.keys.push_back(static_cast<std::uint32_t>(rng() % range));
  std::sort(s.keys.begin(), s.keys.end());
  if constexpr (merge::KeyValueSeq<V>::kHasPayload) {
    for (std::size_t p = 0; p < n; ++p) s.values.push_back(static_cast<V>(rng()));
  }
  return s;
}

template <class V>
std::string merge_equivalence(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t l = 16; l <= 4096; l *= 2) {
    for (int pair = 0; pair < 1000; ++pair) {
      // alternate heavy-duplicate and wide key ranges
      const std::uint32_t range = pair % 2 == 0 ? static_cast<std::uint32_t>(l / 4) : 0xFFFFFFFFu;
      const auto a = random_seq<V>(l, rng, range);
      const auto b = random_seq<V>(l, rng, range);
      const auto expected = merge::merge_serial(a, b);
      const std::string where = " (l=" + std::to_string(l) + ", pair " + std::to_string(pair) + ")";
      if (merge::merge_ranking(a, b) != expected) return "ranking merge differs" + where;
      if (merge::merge_oddeven(a, b) != expected) return "odd-even merge differs" + where;
      if (merge::merge_bitonic(a, b) != expected) return "bitonic merge differs" + where;
      for (unsigned lanes : {1u, 2u, 4u, 8u, 16u}) {
        if (merge::merge_path(a, b, lanes) != expected) {
          return "merge path with " + std::to_string(lanes) + " lanes differs" + where;
        }
      }
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// dataset helpers

fs::path data_dir() {
  if (const char* env = std::getenv("SPGEMM_DATA_DIR")) return env;
  return fs::path(SPGEMM_SOURCE_DIR) / "data";
}

std::optional<fs::path> find_dataset(const std::string& label, const std::string& stem) {
  const auto dir = data_dir();
  for (const auto& candidate : {dir / (stem + ".mtx"), dir / stem / (stem + ".mtx"),
                                dir / (label + ".mtx")}) {
    if (fs::exists(candidate)) return candidate;
  }
  return std::nullopt;
}

struct TableRow {
  const char* label;
  const char* stem;
  double nnz_a_m;
  int nnzr_a;
  double nnz_upper_m;
  int nnzr_upper;
  double nnz_c_m;
  int nnzr_c;
};

// values as printed: millions to one decimal, per-row counts as integers
constexpr TableRow kTable[] = {
    {"Economics", "mac_econ_fwd500", 1.3, 6, 7.6, 37, 6.7, 32},
    {"Epidemiology", "mc2depi", 2.1, 4, 8.4, 16, 5.2, 10},
    {"Poisson3Da", "poisson3Da", 0.4, 26, 11.8, 871, 3.0, 219},
    {"QCD", "conf5_4-8x8-05", 1.9, 39, 74.8, 1521, 10.9, 222},
    {"Webbase", "webbase-1M", 3.1, 3, 69.5, 70, 51.1, 51},
};

bool matches_millions(Offset value, double shown) {
  return std::abs(static_cast<double>(value) / 1e6 - shown) <= 0.05 + 1e-9;
}

// per-row columns are integers; accept either rounding or truncation
bool matches_per_row(Offset value, Index rows, int shown) {
  const double x = static_cast<double>(value) / rows;
  return x >= shown - 0.5 && x < shown + 1.0;
}

Outcome table_reproduction() {
  std::ostringstream os;
  int found = 0;
  bool ok = true;
  for (const auto& row : kTable) {
    const auto path = find_dataset(row.label, row.stem);
    if (!path) continue;
    ++found;
    const auto a = read_matrix_market<double>(*path).matrix;
    const auto r = spgemm(a, a);
    const Index n = a.num_rows();
    const bool good = matches_millions(a.nnz(), row.nnz_a_m) &&
                      matches_per_row(a.nnz(), n, row.nnzr_a) &&
                      matches_millions(r.report.nnz_upper, row.nnz_upper_m) &&
                      matches_per_row(r.report.nnz_upper, n, row.nnzr_upper) &&
                      matches_millions(r.report.nnz_result, row.nnz_c_m) &&
                      matches_per_row(r.report.nnz_result, n, row.nnzr_c);
    ok = ok && good;
    os << row.label << (good ? " ok" : " MISMATCH") << " (nnz(A)=" << a.nnz()
       << ", nnz(C^)=" << r.report.nnz_upper << ", nnz(C)=" << r.report.nnz_result << "); ";
  }
  if (found == 0) {
    return {Verdict::kSkip, "no table matrices under " + data_dir().string()};
  }
  return {ok ? Verdict::kPass : Verdict::kFail, os.str()};
}

// Hybrid never exceeds the upper-bound allocation by more than the doubling
// overshoot of its long rows.
Outcome overshoot_invariant() {
  std::size_t cases = 0, exceeded_upper = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(900 + seed);
    const Index n = 530 + static_cast<Index>(rng() % 400);
    const auto ops = testing::targeted_operands<double>(n, testing::mixed_targets(rng, 40), rng,
                                                        seed % 2 == 0);
    const auto r = spgemm(ops.a, ops.b);
    const auto u = stage1_upper_bound(ops.a, ops.b);
    const BinConfig bins;
    std::uint64_t overshoot = 0;
    for (Index i = 0; i < n; ++i) {
      if (bins.group_of(u.u[i]) != 5) continue;
      const Offset cap = hybrid_final_capacity(u.u[i], r.c.row_nnz(i));
      if (cap > u.u[i]) overshoot += cap - u.u[i];
    }
    const auto& mem = r.report.memory;
    ++cases;
    if (mem.hybrid > mem.upper_bound) ++exceeded_upper;
    if (mem.hybrid > mem.upper_bound + overshoot * TempMatrix<double>::entry_bytes() ||
        mem.inputs + r.report.temp_bytes != mem.hybrid) {
      return {Verdict::kFail, "seed " + std::to_string(seed) + " violates the overshoot bound"};
    }
  }
  return {Verdict::kPass, "overshoot bound holds on " + std::to_string(cases) + "/" +
                              std::to_string(cases) + " random cases (" +
                              std::to_string(exceeded_upper) + " exceed the upper bound)"};
}

Outcome memory_ratios() {
  const auto desk = overshoot_invariant();
  if (desk.verdict != Verdict::kPass) return desk;
  const auto path = find_dataset("Protein", "pdb1HYS");
  if (!path) return {Verdict::kPass, desk.detail + "; Protein matrix absent, ratio check skipped"};
  const auto a = read_matrix_market<double>(*path).matrix;
  const auto r = spgemm(a, a);
  const auto& mem = r.report.memory;
  const double upper = static_cast<double>(mem.upper_bound) / mem.precise;
  const double hybrid = static_cast<double>(mem.hybrid) / mem.precise;
  const bool ok = std::abs(upper / 20.6 - 1.0) <= 0.15 && std::abs(hybrid / 2.7 - 1.0) <= 0.15;
  std::ostringstream os;
  os << desk.detail << "; Protein upper/precise " << std::setprecision(3) << upper
     << " (want 20.6 +-15%), hybrid/precise " << hybrid << " (want 2.7 +-15%)";
  return {ok ? Verdict::kPass : Verdict::kFail, os.str()};
}

// ---------------------------------------------------------------------------

double timed_square(unsigned threads) {
  std::ostringstream out, err;
  const auto t = Clock::now();
  const int code = cli::run({"square", "--stencil", "3d27pt:24x24x24", "--threads",
                             std::to_string(threads)},
                            out, err);
  if (code != cli::kOk) throw std::runtime_error("square exited with " + std::to_string(code) + ": " + err.str());
  return seconds_since(t);
}

int run_all() {
  std::cout << std::unitbuf;

  // criteria 1-3 share one corpus per precision class
  const auto corpus_d = make_corpus<double>(200, 1000);
  const auto corpus_f = make_corpus<float>(200, 5000);

  report(1, "oracle equivalence", guarded([&] {
           CorpusStats d, f;
           run_oracle_equivalence(corpus_d, d);
           run_oracle_equivalence(corpus_f, f);
           std::ostringstream os;
           const double secs = d.seconds + f.seconds;
           bool all_groups = true;
           for (int g = 1; g <= 5; ++g) {
             all_groups = all_groups && d.rows_per_group[g] > 0 && f.rows_per_group[g] > 0;
           }
           const bool all_edges = d.boundary_hits.size() == testing::boundary_targets().size() &&
                                  f.boundary_hits.size() == testing::boundary_targets().size();
           os << d.cases << " f64 + " << f.cases << " f32 cases, " << d.failures + f.failures
              << " mismatches, max rel err " << std::max(d.max_rel, f.max_rel) << "; rows per group";
           for (int g = 1; g <= 5; ++g) os << ' ' << d.rows_per_group[g] + f.rows_per_group[g];
           os << "; boundary u values hit " << d.boundary_hits.size() << "/"
              << testing::boundary_targets().size() << "; " << std::setprecision(3) << secs << " s";
           if (d.failures + f.failures) os << "; first: " << d.first_failure << f.first_failure;
           const bool ok = d.failures + f.failures == 0 && all_groups && all_edges && secs < 120;
           return Outcome{ok ? Verdict::kPass : Verdict::kFail, os.str()};
         }));

  report(2, "strategy invariance", guarded([&] {
           CorpusStats d, f;
           run_strategy_invariance(corpus_d, d);
           run_strategy_invariance(corpus_f, f);
           const double secs = d.seconds + f.seconds;
           std::ostringstream os;
           os << d.cases + f.cases << " cases, hybrid/upper/precise disagree on "
              << d.failures + f.failures << "; " << std::setprecision(3) << secs << " s";
           if (d.failures + f.failures) os << "; first: " << d.first_failure << f.first_failure;
           const bool ok = d.failures + f.failures == 0 && secs < 180;
           return Outcome{ok ? Verdict::kPass : Verdict::kFail, os.str()};
         }));

  report(3, "size identities", guarded([&] {
           CorpusStats d, f;
           run_size_identities(corpus_d, d);
           run_size_identities(corpus_f, f);
           // the stencil products too
           CorpusStats st;
           for (const char* spec : {"2d5pt:64x64", "2d9pt:40x40", "3d7pt:16", "3d27pt:12"}) {
             const auto a = gen_poisson<double>(parse_stencil_spec(spec));
             run_size_identities(std::vector<Case<double>>{{0, a, a}}, st);
           }
           const std::size_t bad = d.failures + f.failures + st.failures;
           std::ostringstream os;
           os << d.cases + f.cases + st.cases << " matrices, " << bad << " violations";
           if (bad) os << "; first: " << d.first_failure << f.first_failure << st.first_failure;
           return Outcome{bad == 0 ? Verdict::kPass : Verdict::kFail, os.str()};
         }));

  report(4, "stencil desk-scale reproduction", guarded([&] {
           const auto t = Clock::now();
           const auto big = gen_poisson<double>(Stencil::k2d5pt, {1024, 1024});
           const bool size_ok = big.num_rows() == 1048576u && big.num_cols() == 1048576u;
           std::ostringstream os;
           os << "2d5pt 1024x1024 has " << big.num_rows() << " rows";
           bool ok = size_ok;
           for (const char* spec : {"2d5pt:64x64", "3d7pt:16x16x16"}) {
             const auto a = gen_poisson<double>(parse_stencil_spec(spec));
             const auto got = spgemm(a, a).c;
             const auto cmp = compare(got, spgemm_gustavson(a, a));
             ok = ok && cmp.ok();
             os << "; " << spec << " A^2 " << (cmp.ok() ? "matches" : "DIFFERS") << " (nnz " << got.nnz()
                << ")";
           }
           const double secs = seconds_since(t);
           os << "; " << std::setprecision(3) << secs << " s";
           return Outcome{ok && secs < 30 ? Verdict::kPass : Verdict::kFail, os.str()};
         }));

  report(5, "galerkin associativity", guarded([&] {
           std::ostringstream os;
           bool ok = true;
           for (const char* spec : {"2d5pt:32x32", "2d9pt:32x32", "3d7pt:12x12x12", "3d27pt:12x12x12"}) {
             const auto s = parse_stencil_spec(spec);
             const auto a = gen_poisson<double>(s);
             const auto levels = galerkin_hierarchy(a, s.dims, 2, 3, {}, 1, 1e-10);
             double worst = 0;
             bool good = levels.size() == 3;
             for (const auto& l : levels) {
               good = good && l.agreement.ok();
               worst = std::max(worst, l.agreement.max_relative_error);
             }
             ok = ok && good;
             os << spec << ' ' << levels.size() << " levels " << (good ? "ok" : "FAILED")
                << " (max rel " << worst << "); ";
           }
           return Outcome{ok ? Verdict::kPass : Verdict::kFail, os.str()};
         }));

  report(6, "progressive growth", guarded(progressive_growth));

  report(7, "merge lab equivalence", guarded([&] {
           const auto t = Clock::now();
           std::string problem = merge_equivalence<merge::NoPayload>(71);
           if (problem.empty()) problem = merge_equivalence<std::uint32_t>(72);
           if (problem.empty()) problem = merge_equivalence<std::uint64_t>(73);
           std::ostringstream os;
           if (!problem.empty()) return Outcome{Verdict::kFail, problem};
           os << "1000 pairs x l in 2^4..2^12 x 3 payload widths, all variants equal the serial merge, "
                 "merge path lane-invariant; "
              << std::setprecision(3) << seconds_since(t) << " s";
           return Outcome{Verdict::kPass, os.str()};
         }));

  report(8, "table reproduction", guarded(table_reproduction));
  report(9, "memory ratios", guarded(memory_ratios));

  report(10, "3d27pt 24^3 smoke and speedup", guarded([&] {
           const unsigned hw = hardware_workers();
           const double one = timed_square(1);
           std::ostringstream os;
           os << std::setprecision(3) << "square 3d27pt:24^3 completed, 1 worker " << one << " s";
           if (hw < 4) {
             os << "; speedup check needs >= 4 hardware threads, this machine has " << hw;
             return Outcome{Verdict::kSkip, os.str()};
           }
           const double many = timed_square(hw);
           const double speedup = one / many;
           os << ", " << hw << " workers " << many << " s, speedup " << speedup << " (want > 1.5)";
           return Outcome{speedup > 1.5 ? Verdict::kPass : Verdict::kFail, os.str()};
         }));

  std::cout << (failures == 0 ? "acceptance: all criteria met or skipped\n"
                              : "acceptance: " + std::to_string(failures) + " criteria failed\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace spgemm

int main() { return spgemm::run_all(); }
