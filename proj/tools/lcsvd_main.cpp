// lcsvd command-line front end. Talks to the library only through lcsvd.h.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lcsvd/lcsvd.h"

namespace {

namespace fs = std::filesystem;

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

// Library failure carrying the status it came from.
struct Failure {
  lcsvd_status status;
  std::string message;
};

void check(lcsvd_status s) {
  if (s != LCSVD_OK) throw Failure{s, lcsvd_last_error()};
}

int exit_code(lcsvd_status s) {
  switch (s) {
    case LCSVD_OK:
      return 0;
    case LCSVD_ERR_VALIDATION:
    case LCSVD_ERR_NUMERICAL:
      return 2;
    case LCSVD_NOT_CONVERGED:
      return 3;
    case LCSVD_ERR_IO:
      return 4;
    default:
      return kExitInternal;
  }
}

// Owning wrapper for an opaque handle.
template <class T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p_); }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using Dataset = Handle<lcsvd_dataset, lcsvd_dataset_free>;
using Factors = Handle<lcsvd_factors, lcsvd_factors_free>;
using Result = Handle<lcsvd_result, lcsvd_result_free>;
using Sensors = Handle<lcsvd_sensors, lcsvd_sensors_free>;
using Search = Handle<lcsvd_search, lcsvd_search_free>;
using Elbow = Handle<lcsvd_elbow, lcsvd_elbow_free>;
using Bench = Handle<lcsvd_bench, lcsvd_bench_free>;

[[noreturn]] void usage(const std::string& msg) { throw Failure{LCSVD_ERR_VALIDATION, msg}; }

lcsvd_rule parse_rule(const std::string& text) {
  const auto colon = text.find(':');
  const auto kind = text.substr(0, colon);
  const auto value = colon == std::string::npos ? std::string() : text.substr(colon + 1);
  try {
    std::size_t used = 0;
    if (kind == "tol") {
      const double eps = std::stod(value, &used);
      if (used == value.size()) return lcsvd_rule{LCSVD_RULE_TOLERANCE, eps, 0};
    } else if (kind == "modes") {
      const auto n = std::stoull(value, &used);
      if (used == value.size() && value.find('-') == std::string::npos)
        return lcsvd_rule{LCSVD_RULE_MODES, 0.0, static_cast<std::size_t>(n)};
    }
  } catch (const std::exception&) {
  }
  usage("--rule must be tol:<eps> or modes:<n>, got '" + text + "'");
}

lcsvd_format parse_format(const std::string& f) {
  if (f == "snt") return LCSVD_FORMAT_SNT;
  if (f == "csv") return LCSVD_FORMAT_CSV;
  usage("--format must be snt or csv");
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used == s.size() && s.find('-') == std::string::npos) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  usage("malformed " + what + " '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t b = 0;
  for (std::size_t e; (e = s.find(sep, b)) != std::string::npos; b = e + 1) out.push_back(s.substr(b, e - b));
  out.push_back(s.substr(b));
  return out;
}

void load(Dataset& ds, const std::string& path) { check(lcsvd_dataset_load(path.c_str(), ds.out())); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{LCSVD_ERR_IO, "cannot create " + dir + ": " + ec.message()};
}

struct Common {
  std::string input;
  std::string output_dir = ".";
  std::string format = "snt";
  std::uint64_t seed = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-cost SVD reconstruction, sensor placement and benchmarking"};
  app.require_subcommand(1);
  Common c;
  auto add_io = [&](CLI::App* sub, bool needs_input = true) {
    auto* in = sub->add_option("--input", c.input, "Snapshot file (SNT1 or CSV)");
    if (needs_input) in->required();
    sub->add_option("--output-dir", c.output_dir, "Directory for results")->capture_default_str();
    sub->add_option("--format", c.format, "Matrix output format: snt or csv")->capture_default_str();
    sub->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  };

  std::string rule_text = "tol:1e-8";
  auto* decompose = app.add_subcommand("decompose", "Truncated SVD of a snapshot file");
  add_io(decompose);
  decompose->add_option("--rule", rule_text, "tol:<eps> or modes:<n>")->capture_default_str();

  std::size_t n_sensors = 0;
  double fraction = 0.2;
  std::optional<std::string> place_rule;
  auto* place = app.add_subcommand("place-sensors", "QR-pivot sensor placement");
  add_io(place);
  place->add_option("--sensors", n_sensors, "Number of sensors")->required();
  place->add_option("--rule", place_rule, "Basis rule; defaults to modes:floor(fraction * sensors)");
  place->add_option("--fraction", fraction, "Mode fraction used when --rule is absent")->capture_default_str();

  std::string plan_text;
  std::size_t n_cols = 0;
  auto* reconstruct = app.add_subcommand("reconstruct", "lcSVD reconstruction from a reduced point set");
  add_io(reconstruct);
  reconstruct
      ->add_option("--plan", plan_text, "sensors:<sensors.csv> | equidistant:<n> | random:<n>")
      ->required();
  reconstruct->add_option("--cols", n_cols, "Snapshots kept in the reduced matrix (0 = all)")->capture_default_str();
  reconstruct->add_option("--fraction", fraction, "Modes kept per retained row")->capture_default_str();

  double epsilon = 1.0;
  std::size_t max_iterations = 100;
  auto* optimize = app.add_subcommand("optimize", "OS-lcSVD: sensor placement plus lcSVD until RRMSE < epsilon");
  add_io(optimize);
  optimize->add_option("--sensors", n_sensors, "Number of sensors")->required();
  optimize->add_option("--fraction", fraction, "Mode fraction")->capture_default_str();
  optimize->add_option("--epsilon", epsilon, "RRMSE tolerance in percent")->capture_default_str();
  optimize->add_option("--max-iterations", max_iterations, "Attempts before giving up")->capture_default_str();

  std::string range_text = "10:60:5";
  std::size_t runs = 10;
  auto* elbow = app.add_subcommand("elbow", "Uncertainty versus sensor count and its elbow");
  add_io(elbow);
  elbow->add_option("--range", range_text, "start:stop:step sensor counts")->capture_default_str();
  elbow->add_option("--fraction", fraction, "Mode fraction")->capture_default_str();
  elbow->add_option("--runs", runs, "Placements averaged per sensor count")->capture_default_str();

  lcsvd_search_config search_cfg{10, 5, 100, 100, 0.05, 0.2, 0};
  auto* search = app.add_subcommand("search-sensors", "Smallest sensor count whose RRMSE stops improving");
  add_io(search);
  search->add_option("--start", search_cfg.start, "First sensor count (>= 10)")->capture_default_str();
  search->add_option("--step", search_cfg.step, "Sensor count increment")->capture_default_str();
  search->add_option("--max-sensors", search_cfg.max_sensors, "Largest sensor count tried")->capture_default_str();
  search->add_option("--runs", search_cfg.runs_per_count, "Placements averaged per count")->capture_default_str();
  search->add_option("--stall", search_cfg.stall_threshold, "Relative improvement threshold")->capture_default_str();
  search->add_option("--fraction", search_cfg.mode_fraction, "Mode fraction")->capture_default_str();

  std::vector<std::string> shapes{"47850x6170"};
  std::string points_text = "30";
  std::string fractions_text = "0.5";
  std::size_t bench_rank = 10;
  double bench_noise = 0.05;
  std::size_t bench_runs = 1;
  std::size_t memory_mib = 0;
  auto* benchmark = app.add_subcommand("benchmark", "Time SVD, lcSVD and OS-lcSVD on synthetic data");
  add_io(benchmark, false);
  benchmark->add_option("--shape", shapes, "JxK, repeatable")->capture_default_str();
  benchmark->add_option("--points", points_text, "Comma-separated reduced point counts")->capture_default_str();
  benchmark->add_option("--fractions", fractions_text, "Comma-separated mode fractions")->capture_default_str();
  benchmark->add_option("--runs", bench_runs, "Timed runs per configuration")->capture_default_str();
  benchmark->add_option("--rank", bench_rank, "Rank of the synthetic data")->capture_default_str();
  benchmark->add_option("--noise", bench_noise, "Noise level of the synthetic data")->capture_default_str();
  benchmark->add_option("--memory-budget", memory_mib, "MiB available (0 reads MemAvailable)");

  std::string kind = "exact";
  std::string gen_output;
  lcsvd_synth_spec gen_spec{LCSVD_SYNTH_EXACT_RANK, 0, 0, 0, 0, 1, 0.0, 1.0, 0};
  auto* gen = app.add_subcommand("gen", "Write a synthetic dataset");
  gen->add_option("--kind", kind, "exact | noisy | wake")->capture_default_str();
  gen->add_option("--output", gen_output, "Output file")->required();
  gen->add_option("--format", c.format, "snt or csv")->capture_default_str();
  gen->add_option("--seed", gen_spec.seed, "Random seed")->capture_default_str();
  gen->add_option("--j", gen_spec.j, "Rows (exact, noisy)");
  gen->add_option("--nx", gen_spec.n_x, "Grid points in x (wake)");
  gen->add_option("--ny", gen_spec.n_y, "Grid points in y (wake)");
  gen->add_option("--k", gen_spec.k, "Snapshots")->required();
  gen->add_option("--rank", gen_spec.rank, "Rank")->capture_default_str();
  gen->add_option("--noise", gen_spec.noise_level, "Noise level")->capture_default_str();
  gen->add_option("--amplitude", gen_spec.amplitude, "Leading mode amplitude (wake)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    check(lcsvd_set_threads(0));

    if (*decompose) {
      const auto rule = parse_rule(rule_text);
      const auto fmt = parse_format(c.format);
      Dataset ds;
      load(ds, c.input);
      Factors f;
      check(lcsvd_decompose(ds.get(), rule, f.out()));
      check(lcsvd_factors_write(f.get(), ds.get(), c.output_dir.c_str(), fmt));
      std::printf("N = %zu modes written to %s\n", lcsvd_factors_count(f.get()), c.output_dir.c_str());
    } else if (*place) {
      const auto rule = place_rule ? parse_rule(*place_rule) : [&] {
        if (!(fraction > 0.0 && fraction <= 1.0)) usage("--fraction must be in (0, 1]");
        const auto n = static_cast<std::size_t>(fraction * static_cast<double>(n_sensors) + 1e-9);
        if (n < 1) usage("--sensors " + std::to_string(n_sensors) + " keeps no modes at this fraction");
        return lcsvd_rule{LCSVD_RULE_MODES, 0.0, n};
      }();
      Dataset ds;
      load(ds, c.input);
      Sensors s;
      check(lcsvd_place_sensors(ds.get(), rule, n_sensors, s.out()));
      ensure_dir(c.output_dir);
      const auto path = (fs::path(c.output_dir) / "sensors.csv").string();
      check(lcsvd_sensors_write(s.get(), ds.get(), path.c_str()));
      std::printf("%zu sensors written to %s\n", lcsvd_sensors_count(s.get()), path.c_str());
    } else if (*reconstruct) {
      const auto fmt = parse_format(c.format);
      const auto colon = plan_text.find(':');
      if (colon == std::string::npos) usage("--plan must be sensors:<file>, equidistant:<n> or random:<n>");
      const auto kind_name = plan_text.substr(0, colon);
      const auto arg = plan_text.substr(colon + 1);
      Dataset ds;
      load(ds, c.input);
      Sensors s;
      lcsvd_plan_spec plan{LCSVD_PLAN_EQUIDISTANT, nullptr, 0, n_cols, c.seed};
      if (kind_name == "sensors") {
        check(lcsvd_sensors_read(arg.c_str(), s.out()));
        plan.kind = LCSVD_PLAN_SENSORS;
        plan.sensors = s.get();
      } else if (kind_name == "equidistant" || kind_name == "random") {
        plan.kind = kind_name == "random" ? LCSVD_PLAN_RANDOM : LCSVD_PLAN_EQUIDISTANT;
        plan.n_rows = parse_count(arg, "row count");
      } else {
        usage("--plan must be sensors:<file>, equidistant:<n> or random:<n>");
      }
      Result r;
      check(lcsvd_reconstruct(ds.get(), &plan, fraction, r.out()));
      check(lcsvd_result_write(r.get(), ds.get(), c.output_dir.c_str(), fmt));
      std::printf("N = %zu, RRMSE = %.6g%%\n", lcsvd_result_modes(r.get()), lcsvd_result_rrmse(r.get()));
    } else if (*optimize) {
      const auto fmt = parse_format(c.format);
      Dataset ds;
      load(ds, c.input);
      Result r;
      Sensors s;
      const lcsvd_optimize_config cfg{n_sensors, fraction, epsilon, max_iterations, c.seed};
      const auto status = lcsvd_optimize(ds.get(), &cfg, r.out(), s.out());
      if (status != LCSVD_OK && status != LCSVD_NOT_CONVERGED) check(status);
      const std::string note = status == LCSVD_NOT_CONVERGED ? lcsvd_last_error() : "";
      check(lcsvd_result_write(r.get(), ds.get(), c.output_dir.c_str(), fmt));
      const auto path = (fs::path(c.output_dir) / "sensors.csv").string();
      check(lcsvd_sensors_write(s.get(), ds.get(), path.c_str()));
      std::printf("RRMSE = %.6g%% after %zu iteration(s)\n", lcsvd_result_rrmse(r.get()),
                  lcsvd_result_iterations(r.get()));
      if (status == LCSVD_NOT_CONVERGED) {
        std::fprintf(stderr, "lcsvd: %s\n", note.c_str());
        return exit_code(status);
      }
    } else if (*elbow) {
      const auto parts = split(range_text, ':');
      if (parts.size() != 3) usage("--range must be start:stop:step");
      const auto start = parse_count(parts[0], "range start");
      const auto stop = parse_count(parts[1], "range stop");
      const auto step = parse_count(parts[2], "range step");
      if (step == 0 || stop < start) usage("--range needs step > 0 and stop >= start");
      std::vector<std::size_t> counts;
      for (auto n = start; n <= stop; n += step) counts.push_back(n);
      Dataset ds;
      load(ds, c.input);
      Elbow e;
      check(lcsvd_elbow_curve(ds.get(), counts.data(), counts.size(), fraction, runs, c.seed, e.out()));
      check(lcsvd_elbow_write(e.get(), c.output_dir.c_str()));
      for (std::size_t i = 0; i < lcsvd_elbow_components(e.get()); ++i)
        std::printf("component %zu: elbow at %zu sensors\n", i, lcsvd_elbow_at(e.get(), i));
    } else if (*search) {
      search_cfg.seed = c.seed;
      Dataset ds;
      load(ds, c.input);
      Search s;
      check(lcsvd_search_sensors(ds.get(), &search_cfg, s.out()));
      check(lcsvd_search_write(s.get(), c.output_dir.c_str()));
      std::printf("N_s = %zu, epsilon = %.1f%%%s\n", lcsvd_search_optimum(s.get()), lcsvd_search_epsilon(s.get()),
                  lcsvd_search_stalled(s.get()) ? "" : " (max_sensors reached)");
    } else if (*benchmark) {
      std::vector<std::size_t> points;
      for (const auto& p : split(points_text, ',')) points.push_back(parse_count(p, "point count"));
      std::vector<double> fractions;
      for (const auto& f : split(fractions_text, ',')) {
        try {
          std::size_t used = 0;
          fractions.push_back(std::stod(f, &used));
          if (used != f.size()) throw std::invalid_argument(f);
        } catch (const std::exception&) {
          usage("malformed fraction '" + f + "'");
        }
      }
      ensure_dir(c.output_dir);
      const auto path = (fs::path(c.output_dir) / "benchmark.csv").string();
      Bench all;
      for (const auto& shape : shapes) {
        const auto dims = split(shape, 'x');
        if (dims.size() != 2) usage("--shape must be JxK, got '" + shape + "'");
        const lcsvd_bench_config cfg{parse_count(dims[0], "J"), parse_count(dims[1], "K"), bench_rank, bench_noise,
                                     points.data(), points.size(), fractions.data(), fractions.size(),
                                     bench_runs, c.seed, memory_mib << 20};
        if (!all.get()) {
          check(lcsvd_benchmark(&cfg, all.out()));
        } else {
          Bench b;
          check(lcsvd_benchmark(&cfg, b.out()));
          check(lcsvd_bench_merge(all.get(), b.get()));
        }
        check(lcsvd_bench_write(all.get(), path.c_str()));
      }
      for (std::size_t i = 0; i < lcsvd_bench_count(all.get()); ++i) {
        lcsvd_bench_record rec;
        check(lcsvd_bench_get(all.get(), i, &rec));
        if (rec.skipped) {
          std::printf("%zux%zu J-bar=%zu: skipped (see %s)\n", rec.j, rec.k, rec.n_points, path.c_str());
          continue;
        }
        std::printf("%zux%zu J-bar=%zu f=%g: t_svd=%.3fs t_lcsvd=%.3fs t_oslcsvd=%.3fs S_u=%.1f / %.1f\n", rec.j,
                    rec.k, rec.n_points, rec.mode_fraction, rec.t_svd, rec.t_lcsvd, rec.t_oslcsvd, rec.s_u_lcsvd,
                    rec.s_u_oslcsvd);
      }
    } else if (*gen) {
      const auto fmt = parse_format(c.format);
      if (kind == "exact")
        gen_spec.kind = LCSVD_SYNTH_EXACT_RANK;
      else if (kind == "noisy")
        gen_spec.kind = LCSVD_SYNTH_NOISY;
      else if (kind == "wake")
        gen_spec.kind = LCSVD_SYNTH_OSCILLATORY_WAKE;
      else
        usage("--kind must be exact, noisy or wake");
      Dataset ds;
      check(lcsvd_generate(&gen_spec, ds.out()));
      const auto parent = fs::path(gen_output).parent_path();
      if (!parent.empty()) ensure_dir(parent.string());
      check(lcsvd_dataset_save(ds.get(), gen_output.c_str(), fmt));
      std::printf("%zu x %zu written to %s\n", lcsvd_dataset_rows(ds.get()), lcsvd_dataset_cols(ds.get()),
                  gen_output.c_str());
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "lcsvd: %s\n", f.message.c_str());
    return exit_code(f.status);
  }
  return 0;
}
