#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace lcsvd {

/// Resident set size of this process in bytes, from /proc/self/statm (0 if unavailable).
std::size_t current_rss_bytes();

/// MemAvailable from /proc/meminfo in bytes, if readable.
std::optional<std::size_t> available_memory_bytes();

/// Background thread sampling the resident set size at a fixed rate.
class MemoryMonitor {
 public:
  struct Sample {
    double seconds;  // since construction
    std::size_t rss;
  };

  explicit MemoryMonitor(double hz = 200.0);
  ~MemoryMonitor();
  MemoryMonitor(const MemoryMonitor&) = delete;
  MemoryMonitor& operator=(const MemoryMonitor&) = delete;

  /// Starts a new measurement window; the window peak restarts from the current RSS.
  void begin_window();
  /// Largest RSS seen since begin_window(), including a final sample taken now.
  std::size_t window_peak();

  std::vector<Sample> samples() const;
  double rate_hz() const { return hz_; }

 private:
  void record();

  double hz_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<bool> stop_{false};
  std::atomic<std::size_t> peak_{0};
  mutable std::mutex log_mutex_;
  std::vector<Sample> log_;
  std::thread worker_;
};

/// Caps the BLAS thread pool. 0 means "leave the library default".
void set_kernel_threads(int threads);
/// LCSVD_THREADS, when set to a positive integer.
std::optional<int> env_thread_cap();

struct BenchmarkConfig {
  std::string dataset_id = "noisy";
  std::size_t j = 0;
  std::size_t k = 0;
  std::size_t rank = 10;
  double noise_level = 0.05;
  std::vector<std::size_t> n_points;
  std::vector<double> fractions;
  std::size_t runs = 1;
  std::uint64_t seed = 0;
  /// Overrides MemAvailable when deciding whether a shape fits.
  std::optional<std::size_t> memory_budget;

  void validate() const;
};

struct BenchmarkRecord {
  std::string dataset_id;
  std::size_t j = 0, k = 0;
  std::size_t n_points = 0;
  double mode_fraction = 0.0;
  std::size_t runs = 0;
  // median over runs
  double t_svd = 0.0, t_lcsvd = 0.0, t_oslcsvd = 0.0;
  double t_svd_mean = 0.0, t_lcsvd_mean = 0.0, t_oslcsvd_mean = 0.0;
  double s_u_lcsvd = 0.0, s_u_oslcsvd = 0.0;
  std::size_t peak_mem_svd = 0, peak_mem_lcsvd = 0, peak_mem_oslcsvd = 0;
  bool skipped = false;
  std::string note;
};

/// Bytes the harness expects to need for a J x K case.
std::size_t estimated_benchmark_bytes(std::size_t j, std::size_t k);

/// One record per (n_points, fraction) pair. The full SVD is timed once per
/// shape (with the largest mode count of the sweep) and shared by its records.
/// Kernels are pinned to one thread for the duration.
std::vector<BenchmarkRecord> run_benchmark(const BenchmarkConfig& config);

void write_benchmark_csv(const std::filesystem::path& path, const std::vector<BenchmarkRecord>& records);

}  // namespace lcsvd
