#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "lcsvd/benchmark.hpp"
#include "lcsvd/error.hpp"

using namespace lcsvd;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse(const std::string& s) {
  double v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

TEST_CASE("memory monitor samples at its nominal rate") {
  MemoryMonitor mon(200.0);
  mon.begin_window();
  std::this_thread::sleep_for(std::chrono::milliseconds(500));
  std::vector<char> block(64 << 20, 1);
  const auto peak = mon.window_peak();
  const auto s = mon.samples();
  CHECK(s.size() >= 50);
  CHECK(s.size() / s.back().seconds >= 100.0);
  CHECK(peak >= block.size());
  CHECK(current_rss_bytes() > 0);
}

TEST_CASE("benchmark ratios recompute exactly from the CSV") {
  BenchmarkConfig cfg{.j = 20000, .k = 400, .n_points = {30, 60}, .fractions = {0.5}, .runs = 2, .seed = 1};
  const auto recs = run_benchmark(cfg);
  REQUIRE(recs.size() == 2);
  for (const auto& r : recs) {
    CHECK_FALSE(r.skipped);
    CHECK(r.t_svd > 0);
    CHECK(r.t_lcsvd > 0);
    CHECK(r.t_oslcsvd > 0);
    CHECK(r.s_u_lcsvd > 1.0);
    CHECK(r.peak_mem_lcsvd <= r.peak_mem_svd);
  }
  const auto path = std::filesystem::temp_directory_path() / "lcsvd_unit_bench.csv";
  write_benchmark_csv(path, recs);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  const auto cols = split(header);
  auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
  };
  int rows = 0;
  while (std::getline(in, line)) {
    const auto f = split(line);
    REQUIRE(f.size() == cols.size());
    CHECK(parse(f[col("t_svd")]) / parse(f[col("t_lcsvd")]) == parse(f[col("s_u_lcsvd")]));
    CHECK(parse(f[col("t_svd")]) / parse(f[col("t_oslcsvd")]) == parse(f[col("s_u_oslcsvd")]));
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("no reduction gives a speed-up near one") {
  const auto recs = run_benchmark(BenchmarkConfig{.j = 1500, .k = 300, .n_points = {1500}, .fractions = {0.2}, .runs = 3, .seed = 2});
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].s_u_lcsvd >= 0.5);
  CHECK(recs[0].s_u_lcsvd <= 2.0);
}

TEST_CASE("configurations beyond the memory budget are skipped with a note") {
  const auto recs = run_benchmark(BenchmarkConfig{.j = 1000, .k = 100, .n_points = {10}, .fractions = {0.5}, .memory_budget = 1024});
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].skipped);
  CHECK(recs[0].note.find("skipped") != std::string::npos);
}

TEST_CASE("benchmark validation") {
  CHECK_THROWS_AS(run_benchmark(BenchmarkConfig{.j = 100, .k = 10, .n_points = {101}, .fractions = {0.5}}), ValidationError);
  CHECK_THROWS_AS(run_benchmark(BenchmarkConfig{.j = 100, .k = 10, .n_points = {1}, .fractions = {0.5}}), ValidationError);
}
