#include "lcsvd/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unistd.h>

#include "kernels.hpp"
#include "lcsvd/error.hpp"
#include "lcsvd/lcsvd.hpp"
#include "lcsvd/optimize.hpp"
#include "lcsvd/rng.hpp"
#include "lcsvd/synth.hpp"

namespace lcsvd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::string shortest(double v) {
  char buf[32];
  return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Restores the previous BLAS thread count on scope exit.
class SingleThreaded {
 public:
  SingleThreaded() { set_kernel_threads(1); }
  ~SingleThreaded() { set_kernel_threads(env_thread_cap().value_or(0)); }
};

}  // namespace

std::size_t current_rss_bytes() {
  std::ifstream in("/proc/self/statm");
  std::size_t size = 0, resident = 0;
  if (!(in >> size >> resident)) return 0;
  return resident * static_cast<std::size_t>(sysconf(_SC_PAGESIZE));
}

std::optional<std::size_t> available_memory_bytes() {
  std::ifstream in("/proc/meminfo");
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("MemAvailable:", 0) != 0) continue;
    std::istringstream ls(line.substr(13));
    std::size_t kib = 0;
    if (ls >> kib) return kib * 1024;
  }
  return std::nullopt;
}

MemoryMonitor::MemoryMonitor(double hz) : hz_(hz), start_(Clock::now()) {
  require(hz > 0.0, "MemoryMonitor: sampling rate must be positive");
  peak_ = current_rss_bytes();
  worker_ = std::thread([this] {
    const auto period = std::chrono::duration<double>(1.0 / hz_);
    auto next = Clock::now();
    while (!stop_.load(std::memory_order_relaxed)) {
      record();
      next += std::chrono::duration_cast<Clock::duration>(period);
      std::this_thread::sleep_until(next);
    }
  });
}

MemoryMonitor::~MemoryMonitor() {
  stop_ = true;
  if (worker_.joinable()) worker_.join();
}

void MemoryMonitor::record() {
  const auto rss = current_rss_bytes();
  {
    std::lock_guard lock(log_mutex_);
    log_.push_back({seconds_since(start_), rss});
  }
  auto seen = peak_.load();
  while (rss > seen && !peak_.compare_exchange_weak(seen, rss)) {
  }
}

void MemoryMonitor::begin_window() { peak_ = current_rss_bytes(); }

std::size_t MemoryMonitor::window_peak() {
  record();
  return peak_.load();
}

std::vector<MemoryMonitor::Sample> MemoryMonitor::samples() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

void set_kernel_threads(int threads) {
  if (threads > 0) kernels::set_threads(threads);
}

std::optional<int> env_thread_cap() {
  const char* raw = std::getenv("LCSVD_THREADS");
  if (!raw || !*raw) return std::nullopt;
  int v = 0;
  const std::string_view s(raw);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v <= 0)
    throw ValidationError("LCSVD_THREADS must be a positive integer, got '" + std::string(s) + "'");
  return v;
}

void BenchmarkConfig::validate() const {
  require(j >= 1 && k >= 1, "benchmark: J and K must be positive");
  require(rank >= 1 && rank <= std::min(j, k), "benchmark: rank must be in [1, min(J, K)]");
  require(!n_points.empty(), "benchmark: no n_points given");
  require(!fractions.empty(), "benchmark: no mode fractions given");
  require(runs >= 1, "benchmark: runs must be at least 1");
  for (auto n : n_points) require(n >= 1 && n <= j, "benchmark: n_points must be in [1, J]");
  for (auto f : fractions) {
    require(f > 0.0 && f <= 1.0, "benchmark: mode fractions must be in (0, 1]");
    for (auto n : n_points)
      require(modes_for(n, f) >= 1,
              "benchmark: n_points " + std::to_string(n) + " retains no modes at fraction " + shortest(f));
  }
}

std::size_t estimated_benchmark_bytes(std::size_t j, std::size_t k) {
  const double jk = static_cast<double>(j) * static_cast<double>(k) * sizeof(double);
  const double gram = static_cast<double>(k) * static_cast<double>(k) * sizeof(double);
  // Snapshot matrix, Gram matrix and eigenvectors, LAPACK workspace and slack.
  return static_cast<std::size_t>(1.05 * jk + 3.0 * gram + 128.0 * (1 << 20));
}

std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config) {
  config.validate();
  std::vector<BenchmarkRecord> records;
  auto blank = [&](std::size_t n, double f) {
    BenchmarkRecord r;
    r.dataset_id = config.dataset_id;
    r.j = config.j;
    r.k = config.k;
    r.n_points = n;
    r.mode_fraction = f;
    r.runs = config.runs;
    return r;
  };

  const auto need = estimated_benchmark_bytes(config.j, config.k);
  const auto budget = config.memory_budget ? config.memory_budget : available_memory_bytes();
  if (budget && need > *budget) {
    for (auto n : config.n_points)
      for (auto f : config.fractions) {
        auto r = blank(n, f);
        r.skipped = true;
        r.note = "skipped: needs about " + std::to_string(need >> 20) + " MiB, " + std::to_string(*budget >> 20) +
                 " MiB available";
        records.push_back(std::move(r));
      }
    return records;
  }

  SingleThreaded pin;
  const auto matrix = gen_noisy(SyntheticSpec{.kind = SyntheticKind::noisy_low_rank,
                                              .j = config.j,
                                              .k = config.k,
                                              .rank = config.rank,
                                              .noise_level = config.noise_level,
                                              .seed = config.seed});
  MemoryMonitor monitor;

  std::size_t max_modes = 1;
  for (auto n : config.n_points)
    for (auto f : config.fractions) max_modes = std::max(max_modes, modes_for(n, f));

  std::vector<double> t_svd;
  std::size_t peak_svd = 0;
  for (std::size_t r = 0; r < config.runs; ++r) {
    monitor.begin_window();
    const auto t0 = Clock::now();
    [[maybe_unused]] const auto f = svd_truncated(matrix.values(), ModeCountRule{max_modes});
    t_svd.push_back(seconds_since(t0));
    peak_svd = std::max(peak_svd, monitor.window_peak());
  }

  for (auto n : config.n_points) {
    for (auto fraction : config.fractions) {
      auto rec = blank(n, fraction);
      const auto n_modes = modes_for(n, fraction);
      const auto plan = make_plan_equidistant(config.j, config.k, n, config.k);
      std::vector<double> t_lc, t_os;
      for (std::size_t r = 0; r < config.runs; ++r) {
        monitor.begin_window();
        auto t0 = Clock::now();
        [[maybe_unused]] const auto lc = lcsvd_run(matrix, plan, ModeCountRule{n_modes}, {.materialize_reconstruction = false});
        t_lc.push_back(seconds_since(t0));
        rec.peak_mem_lcsvd = std::max(rec.peak_mem_lcsvd, monitor.window_peak());

        monitor.begin_window();
        t0 = Clock::now();
        [[maybe_unused]] const auto os = os_lcsvd_optimize(matrix, OsLcsvdConfig{.n_sensors = n,
                                                                .mode_fraction = fraction,
                                                                .tolerance_epsilon = 100.0,
                                                                .max_iterations = 1,
                                                                .seed = Rng::derive(config.seed, n, r),
                                                                .materialize_reconstruction = false});
        t_os.push_back(seconds_since(t0));
        rec.peak_mem_oslcsvd = std::max(rec.peak_mem_oslcsvd, monitor.window_peak());
      }
      rec.t_svd = median(t_svd);
      rec.t_svd_mean = mean(t_svd);
      rec.t_lcsvd = median(t_lc);
      rec.t_lcsvd_mean = mean(t_lc);
      rec.t_oslcsvd = median(t_os);
      rec.t_oslcsvd_mean = mean(t_os);
      rec.s_u_lcsvd = rec.t_svd / rec.t_lcsvd;
      rec.s_u_oslcsvd = rec.t_svd / rec.t_oslcsvd;
      rec.peak_mem_svd = peak_svd;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

void write_benchmark_csv(const std::filesystem::path& path, const std::vector<BenchmarkRecord>& records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "dataset_id,j,k,n_points,mode_fraction,runs,t_svd,t_lcsvd,t_oslcsvd,t_svd_mean,t_lcsvd_mean,"
         "t_oslcsvd_mean,s_u_lcsvd,s_u_oslcsvd,peak_mem_svd,peak_mem_lcsvd,peak_mem_oslcsvd,note\n";
  for (const auto& r : records) {
    out << csv_field(r.dataset_id) << ',' << r.j << ',' << r.k << ',' << r.n_points << ',' << shortest(r.mode_fraction)
        << ',' << r.runs << ',';
    if (r.skipped) {
      out << ",,,,,,,,,,," << csv_field(r.note) << '\n';
      continue;
    }
    out << shortest(r.t_svd) << ',' << shortest(r.t_lcsvd) << ',' << shortest(r.t_oslcsvd) << ','
        << shortest(r.t_svd_mean) << ',' << shortest(r.t_lcsvd_mean) << ',' << shortest(r.t_oslcsvd_mean) << ','
        << shortest(r.s_u_lcsvd) << ',' << shortest(r.s_u_oslcsvd) << ',' << r.peak_mem_svd << ','
        << r.peak_mem_lcsvd << ',' << r.peak_mem_oslcsvd << ',' << csv_field(r.note) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace lcsvd
