#include "lcsvd/lcsvd.h"

#include <cstring>
#include <json.hpp>
#include <new>
#include <string>

#include "lcsvd/benchmark.hpp"
#include "lcsvd/error.hpp"
#include "lcsvd/io.hpp"
#include "lcsvd/lcsvd.hpp"
#include "lcsvd/optimize.hpp"
#include "lcsvd/reports.hpp"
#include "lcsvd/synth.hpp"

struct lcsvd_dataset {
  lcsvd::SnapshotMatrix matrix;
};

struct lcsvd_factors {
  lcsvd::TruncatedFactorization factors;
  lcsvd::TruncationRule rule;
};

struct lcsvd_result {
  lcsvd::LcsvdResult result;
  std::size_t n_sensors = 0;
  double rrmse = 0.0;
  std::size_t iterations = 0;
  nlohmann::json summary = nlohmann::json::object();
};

struct lcsvd_sensors {
  lcsvd::SensorSet sensors;
};

struct lcsvd_search {
  lcsvd::SensorCountSearchResult result;
  lcsvd::SensorCountSearchConfig config;
  double mode_fraction;
};

struct lcsvd_elbow {
  std::vector<lcsvd::ElbowCurve> curves;
  double mode_fraction;
  std::size_t runs;
};

struct lcsvd_bench {
  std::vector<lcsvd::BenchmarkRecord> records;
};

namespace {

thread_local std::string last_error;

template <class F>
lcsvd_status guarded(F&& body) {
  try {
    last_error.clear();
    return body();
  } catch (const lcsvd::Error& e) {
    last_error = e.what();
    switch (e.code()) {
      case lcsvd::ErrorCode::validation:
        return LCSVD_ERR_VALIDATION;
      case lcsvd::ErrorCode::io:
        return LCSVD_ERR_IO;
      case lcsvd::ErrorCode::numerical:
        return LCSVD_ERR_NUMERICAL;
    }
    return LCSVD_ERR_INTERNAL;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return LCSVD_ERR_INTERNAL;
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return LCSVD_ERR_VALIDATION;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LCSVD_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) throw lcsvd::ValidationError(std::string(what) + " must not be null");
}

lcsvd::TruncationRule to_rule(const lcsvd_rule& r) {
  lcsvd::TruncationRule rule;
  if (r.kind == LCSVD_RULE_TOLERANCE)
    rule = lcsvd::ToleranceRule{r.epsilon};
  else if (r.kind == LCSVD_RULE_MODES)
    rule = lcsvd::ModeCountRule{r.count};
  else
    throw lcsvd::ValidationError("unknown truncation rule kind");
  lcsvd::validate_rule(rule);
  return rule;
}

lcsvd::MatrixFormat to_format(lcsvd_format f) {
  if (f == LCSVD_FORMAT_SNT) return lcsvd::MatrixFormat::snt;
  if (f == LCSVD_FORMAT_CSV) return lcsvd::MatrixFormat::csv;
  throw lcsvd::ValidationError("unknown output format");
}

lcsvd::TensorShape to_shape(const lcsvd_shape& s) {
  lcsvd::TensorShape shape{.n_comp = s.n_comp, .n_x = s.n_x, .n_y = s.n_y, .n_z = std::nullopt, .n_t = s.n_t};
  if (s.n_z > 0) shape.n_z = s.n_z;
  shape.validate();
  return shape;
}

void copy_out(const double* src, std::size_t count, double* out, std::size_t capacity) {
  need(out, "output buffer");
  if (capacity < count)
    throw lcsvd::ValidationError("output buffer holds " + std::to_string(capacity) + " values, " +
                                 std::to_string(count) + " needed");
  std::memcpy(out, src, count * sizeof(double));
}

void copy_matrix(const Eigen::MatrixXd& m, double* out, std::size_t capacity) {
  copy_out(m.data(), static_cast<std::size_t>(m.size()), out, capacity);
}

template <class T>
lcsvd_status emit(T* object, T** out) {
  *out = object;
  return LCSVD_OK;
}

const char* plan_name(lcsvd_plan_kind k) {
  switch (k) {
    case LCSVD_PLAN_SENSORS:
      return "sensors";
    case LCSVD_PLAN_EQUIDISTANT:
      return "equidistant";
    case LCSVD_PLAN_RANDOM:
      return "random";
  }
  return "unknown";
}

}  // namespace

extern "C" {

LCSVD_API const char* lcsvd_last_error(void) { return last_error.c_str(); }

LCSVD_API const char* lcsvd_version(void) { return "1.0.0"; }

LCSVD_API lcsvd_status lcsvd_set_threads(int threads) {
  return guarded([&] {
    if (threads < 0) throw lcsvd::ValidationError("thread count must be non-negative");
    lcsvd::set_kernel_threads(threads > 0 ? threads : lcsvd::env_thread_cap().value_or(1));
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_dataset_load(const char* path, lcsvd_dataset** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    return emit(new lcsvd_dataset{lcsvd::load_dataset(path)}, out);
  });
}

LCSVD_API lcsvd_status lcsvd_dataset_from_matrix(const double* values, size_t j, size_t k, lcsvd_dataset** out) {
  return guarded([&] {
    need(values, "values");
    need(out, "out");
    if (j == 0 || k == 0) throw lcsvd::ValidationError("matrix dimensions must be positive");
    Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(values, static_cast<Eigen::Index>(j),
                                                          static_cast<Eigen::Index>(k));
    return emit(new lcsvd_dataset{lcsvd::SnapshotMatrix(std::move(m))}, out);
  });
}

LCSVD_API lcsvd_status lcsvd_dataset_from_tensor(const double* values, const lcsvd_shape* shape,
                                                 lcsvd_dataset** out) {
  return guarded([&] {
    need(values, "values");
    need(shape, "shape");
    need(out, "out");
    const auto s = to_shape(*shape);
    if (shape->u_inf < 0.0) throw lcsvd::ValidationError("u_inf must be non-negative");
    lcsvd::SnapshotTensor t(s, std::span<const double>(values, s.value_count()),
                            shape->u_inf > 0.0 ? std::optional<double>(shape->u_inf) : std::nullopt);
    return emit(new lcsvd_dataset{lcsvd::flatten(std::move(t))}, out);
  });
}

LCSVD_API lcsvd_status lcsvd_dataset_save(const lcsvd_dataset* ds, const char* path, lcsvd_format format) {
  return guarded([&] {
    need(ds, "dataset");
    need(path, "path");
    if (to_format(format) == lcsvd::MatrixFormat::csv)
      lcsvd::write_matrix_csv(path, ds->matrix.values());
    else if (ds->matrix.origin())
      lcsvd::write_snt(path, lcsvd::unflatten(ds->matrix));
    else
      lcsvd::write_snt(path, ds->matrix.values());
    return LCSVD_OK;
  });
}

LCSVD_API size_t lcsvd_dataset_rows(const lcsvd_dataset* ds) { return ds ? ds->matrix.j() : 0; }
LCSVD_API size_t lcsvd_dataset_cols(const lcsvd_dataset* ds) { return ds ? ds->matrix.k() : 0; }

LCSVD_API lcsvd_status lcsvd_dataset_shape(const lcsvd_dataset* ds, lcsvd_shape* out) {
  return guarded([&] {
    need(ds, "dataset");
    need(out, "out");
    const auto& origin = ds->matrix.origin();
    if (!origin) throw lcsvd::ValidationError("dataset has no tensor layout");
    const auto& s = origin->shape;
    *out = lcsvd_shape{s.n_comp, s.n_x, s.n_y, s.n_z.value_or(0), s.n_t, origin->u_inf.value_or(0.0)};
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_dataset_copy(const lcsvd_dataset* ds, double* out, size_t capacity) {
  return guarded([&] {
    need(ds, "dataset");
    copy_matrix(ds->matrix.values(), out, capacity);
    return LCSVD_OK;
  });
}

LCSVD_API void lcsvd_dataset_free(lcsvd_dataset* ds) { delete ds; }

LCSVD_API lcsvd_status lcsvd_generate(const lcsvd_synth_spec* spec, lcsvd_dataset** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    lcsvd::SyntheticSpec s{.j = spec->j,
                           .n_x = spec->n_x,
                           .n_y = spec->n_y,
                           .k = spec->k,
                           .rank = spec->rank,
                           .noise_level = spec->noise_level,
                           .amplitude = spec->amplitude == 0.0 ? 1.0 : spec->amplitude,
                           .seed = spec->seed};
    switch (spec->kind) {
      case LCSVD_SYNTH_EXACT_RANK:
        s.kind = lcsvd::SyntheticKind::exact_rank;
        return emit(new lcsvd_dataset{lcsvd::gen_exact_rank(s)}, out);
      case LCSVD_SYNTH_NOISY:
        s.kind = lcsvd::SyntheticKind::noisy_low_rank;
        return emit(new lcsvd_dataset{lcsvd::gen_noisy(s)}, out);
      case LCSVD_SYNTH_OSCILLATORY_WAKE:
        s.kind = lcsvd::SyntheticKind::oscillatory_wake;
        return emit(new lcsvd_dataset{lcsvd::flatten(lcsvd::gen_oscillatory_wake(s))}, out);
    }
    throw lcsvd::ValidationError("unknown synthetic kind");
  });
}

LCSVD_API lcsvd_status lcsvd_decompose(const lcsvd_dataset* ds, lcsvd_rule rule, lcsvd_factors** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(out, "out");
    const auto r = to_rule(rule);
    return emit(new lcsvd_factors{lcsvd::svd_truncated(ds->matrix.values(), r), r}, out);
  });
}

LCSVD_API size_t lcsvd_factors_count(const lcsvd_factors* f) { return f ? f->factors.n_retained() : 0; }

LCSVD_API lcsvd_status lcsvd_factors_singular_values(const lcsvd_factors* f, double* out, size_t capacity) {
  return guarded([&] {
    need(f, "factors");
    copy_matrix(f->factors.singular_values, out, capacity);
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_factors_modes(const lcsvd_factors* f, double* out, size_t capacity) {
  return guarded([&] {
    need(f, "factors");
    copy_matrix(f->factors.modes, out, capacity);
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_factors_coefficients(const lcsvd_factors* f, double* out, size_t capacity) {
  return guarded([&] {
    need(f, "factors");
    copy_matrix(f->factors.coefficients, out, capacity);
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_factors_write(const lcsvd_factors* f, const lcsvd_dataset* source, const char* dir,
                                          lcsvd_format format) {
  return guarded([&] {
    need(f, "factors");
    need(source, "source");
    need(dir, "dir");
    lcsvd::write_decomposition(dir, source->matrix, f->factors, f->rule, to_format(format));
    return LCSVD_OK;
  });
}

LCSVD_API void lcsvd_factors_free(lcsvd_factors* f) { delete f; }

LCSVD_API lcsvd_status lcsvd_place_sensors(const lcsvd_dataset* ds, lcsvd_rule rule, size_t p,
                                          lcsvd_sensors** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(out, "out");
    if (p > ds->matrix.j())
      throw lcsvd::ValidationError(std::to_string(p) + " sensors requested but J = " +
                                   std::to_string(ds->matrix.j()));
    const auto basis = lcsvd::svd_truncated(ds->matrix.values(), to_rule(rule));
    std::optional<lcsvd::TensorShape> layout;
    if (ds->matrix.origin()) layout = ds->matrix.origin()->shape;
    return emit(new lcsvd_sensors{lcsvd::place_sensors(basis, p, layout)}, out);
  });
}

LCSVD_API lcsvd_status lcsvd_sensors_read(const char* path, lcsvd_sensors** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    return emit(new lcsvd_sensors{lcsvd::read_sensors_csv(path)}, out);
  });
}

LCSVD_API lcsvd_status lcsvd_sensors_write(const lcsvd_sensors* s, const lcsvd_dataset* layout, const char* path) {
  return guarded([&] {
    need(s, "sensors");
    need(path, "path");
    std::optional<lcsvd::TensorShape> shape;
    if (layout && layout->matrix.origin()) shape = layout->matrix.origin()->shape;
    lcsvd::write_sensors_csv(path, s->sensors, shape);
    return LCSVD_OK;
  });
}

LCSVD_API size_t lcsvd_sensors_count(const lcsvd_sensors* s) { return s ? s->sensors.p() : 0; }

LCSVD_API lcsvd_status lcsvd_sensors_indices(const lcsvd_sensors* s, size_t* out, size_t capacity) {
  return guarded([&] {
    need(s, "sensors");
    need(out, "out");
    const auto& idx = s->sensors.indices;
    if (capacity < idx.size()) throw lcsvd::ValidationError("output buffer too small");
    std::copy(idx.begin(), idx.end(), out);
    return LCSVD_OK;
  });
}

LCSVD_API void lcsvd_sensors_free(lcsvd_sensors* s) { delete s; }

LCSVD_API lcsvd_status lcsvd_reconstruct(const lcsvd_dataset* ds, const lcsvd_plan_spec* plan, double mode_fraction,
                                        lcsvd_result** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(plan, "plan");
    need(out, "out");
    const auto& m = ds->matrix;
    const std::size_t n_cols = plan->n_cols == 0 ? m.k() : plan->n_cols;
    auto make = [&]() -> lcsvd::ReductionPlan {
      switch (plan->kind) {
        case LCSVD_PLAN_SENSORS:
          need(plan->sensors, "plan sensors");
          return lcsvd::make_plan_from_rows(m.j(), m.k(), plan->sensors->sensors.indices);
        case LCSVD_PLAN_EQUIDISTANT:
          return lcsvd::make_plan_equidistant(m.j(), m.k(), plan->n_rows, n_cols);
        case LCSVD_PLAN_RANDOM:
          return lcsvd::make_plan_random(m.j(), m.k(), plan->n_rows, n_cols, plan->seed);
      }
      throw lcsvd::ValidationError("unknown plan kind");
    };
    const auto p = make();
    const auto n_modes = lcsvd::modes_for(p.rows().size(), mode_fraction);
    if (n_modes < 1)
      throw lcsvd::ValidationError(std::to_string(p.rows().size()) + " retained rows keep no modes at fraction " +
                                   std::to_string(mode_fraction));
    auto r = std::make_unique<lcsvd_result>();
    r->result = lcsvd::lcsvd_run(m, p, lcsvd::ModeCountRule{n_modes});
    r->n_sensors = p.rows().size();
    r->rrmse = lcsvd::rrmse(m.values(), r->result.reconstruction);
    r->summary["plan"] = plan_name(plan->kind);
    r->summary["n_rows"] = p.rows().size();
    r->summary["n_cols"] = p.cols().size();
    r->summary["mode_fraction"] = mode_fraction;
    if (plan->kind == LCSVD_PLAN_RANDOM) r->summary["seed"] = plan->seed;
    return emit(r.release(), out);
  });
}

LCSVD_API size_t lcsvd_result_modes(const lcsvd_result* r) { return r ? r->result.n_retained() : 0; }
LCSVD_API size_t lcsvd_result_sensor_count(const lcsvd_result* r) { return r ? r->n_sensors : 0; }
LCSVD_API double lcsvd_result_rrmse(const lcsvd_result* r) { return r ? r->rrmse : 0.0; }
LCSVD_API size_t lcsvd_result_iterations(const lcsvd_result* r) { return r ? r->iterations : 0; }

LCSVD_API lcsvd_status lcsvd_result_reconstruction(const lcsvd_result* r, double* out, size_t capacity) {
  return guarded([&] {
    need(r, "result");
    if (r->result.has_reconstruction())
      copy_matrix(r->result.reconstruction, out, capacity);
    else
      copy_matrix(r->result.reconstruct(), out, capacity);
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_result_write(const lcsvd_result* r, const lcsvd_dataset* source, const char* dir,
                                         lcsvd_format format) {
  return guarded([&] {
    need(r, "result");
    need(source, "source");
    need(dir, "dir");
    lcsvd::write_reconstruction(dir, source->matrix, r->result, r->n_sensors, to_format(format), r->summary.dump());
    return LCSVD_OK;
  });
}

LCSVD_API void lcsvd_result_free(lcsvd_result* r) { delete r; }

LCSVD_API lcsvd_status lcsvd_optimize(const lcsvd_dataset* ds, const lcsvd_optimize_config* config,
                                     lcsvd_result** result, lcsvd_sensors** sensors) {
  return guarded([&] {
    need(ds, "dataset");
    need(config, "config");
    need(result, "result");
    need(sensors, "sensors");
    lcsvd::OsLcsvdConfig c{.n_sensors = config->n_sensors,
                           .mode_fraction = config->mode_fraction,
                           .tolerance_epsilon = config->epsilon_percent,
                           .max_iterations = config->max_iterations,
                           .seed = config->seed,
                           .materialize_reconstruction = true};
    auto outcome = lcsvd::os_lcsvd_optimize(ds->matrix, c);
    auto r = std::make_unique<lcsvd_result>();
    r->n_sensors = outcome.sensors.p();
    r->rrmse = outcome.rrmse_percent;
    r->iterations = outcome.iterations;
    r->result = std::move(outcome.result);
    r->summary["converged"] = outcome.converged;
    r->summary["iterations"] = outcome.iterations;
    r->summary["epsilon_percent"] = config->epsilon_percent;
    r->summary["mode_fraction"] = config->mode_fraction;
    r->summary["seed"] = config->seed;
    auto& history = r->summary["rrmse_history"] = nlohmann::json::array();
    for (double h : outcome.history) history.push_back(std::isfinite(h) ? nlohmann::json(h) : nlohmann::json());
    auto s = std::make_unique<lcsvd_sensors>(lcsvd_sensors{std::move(outcome.sensors)});
    *result = r.release();
    *sensors = s.release();
    if (!outcome.converged) {
      last_error = "OS-lcSVD did not reach RRMSE < " + std::to_string(config->epsilon_percent) + "% in " +
                   std::to_string(outcome.iterations) + " iterations";
      return LCSVD_NOT_CONVERGED;
    }
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_search_sensors(const lcsvd_dataset* ds, const lcsvd_search_config* config,
                                           lcsvd_search** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(config, "config");
    need(out, "out");
    lcsvd::SensorCountSearchConfig c{.start = config->start,
                                     .step = config->step,
                                     .max_sensors = config->max_sensors,
                                     .runs_per_count = config->runs_per_count,
                                     .stall_threshold = config->stall_threshold,
                                     .seed = config->seed};
    auto res = lcsvd::find_optimal_sensor_count(ds->matrix, c, config->mode_fraction);
    return emit(new lcsvd_search{std::move(res), c, config->mode_fraction}, out);
  });
}

LCSVD_API size_t lcsvd_search_optimum(const lcsvd_search* s) { return s ? s->result.n_opt : 0; }
LCSVD_API double lcsvd_search_epsilon(const lcsvd_search* s) { return s ? s->result.epsilon : 0.0; }
LCSVD_API int lcsvd_search_stalled(const lcsvd_search* s) { return s && s->result.stalled ? 1 : 0; }

LCSVD_API lcsvd_status lcsvd_search_write(const lcsvd_search* s, const char* dir) {
  return guarded([&] {
    need(s, "search");
    need(dir, "dir");
    lcsvd::write_search(dir, s->result, s->config, s->mode_fraction);
    return LCSVD_OK;
  });
}

LCSVD_API void lcsvd_search_free(lcsvd_search* s) { delete s; }

LCSVD_API lcsvd_status lcsvd_elbow_curve(const lcsvd_dataset* ds, const size_t* sensor_counts, size_t n_counts,
                                        double mode_fraction, size_t runs, uint64_t seed, lcsvd_elbow** out) {
  return guarded([&] {
    need(ds, "dataset");
    need(sensor_counts, "sensor_counts");
    need(out, "out");
    const std::vector<std::size_t> range(sensor_counts, sensor_counts + n_counts);
    auto curves = lcsvd::elbow_curve(ds->matrix, range, mode_fraction, runs, seed);
    return emit(new lcsvd_elbow{std::move(curves), mode_fraction, runs}, out);
  });
}

LCSVD_API size_t lcsvd_elbow_components(const lcsvd_elbow* e) { return e ? e->curves.size() : 0; }

LCSVD_API size_t lcsvd_elbow_at(const lcsvd_elbow* e, size_t component) {
  return e && component < e->curves.size() ? e->curves[component].elbow : 0;
}

LCSVD_API lcsvd_status lcsvd_elbow_uncertainty(const lcsvd_elbow* e, size_t component, double* out,
                                              size_t capacity) {
  return guarded([&] {
    need(e, "elbow");
    if (component >= e->curves.size()) throw lcsvd::ValidationError("component out of range");
    std::vector<double> u;
    for (const auto& p : e->curves[component].points) u.push_back(p.uncertainty);
    copy_out(u.data(), u.size(), out, capacity);
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_elbow_write(const lcsvd_elbow* e, const char* dir) {
  return guarded([&] {
    need(e, "elbow");
    need(dir, "dir");
    lcsvd::write_elbow(dir, e->curves, e->mode_fraction, e->runs);
    return LCSVD_OK;
  });
}

LCSVD_API void lcsvd_elbow_free(lcsvd_elbow* e) { delete e; }

LCSVD_API lcsvd_status lcsvd_benchmark(const lcsvd_bench_config* config, lcsvd_bench** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    lcsvd::BenchmarkConfig c;
    c.j = config->j;
    c.k = config->k;
    c.rank = config->rank;
    c.noise_level = config->noise_level;
    if (config->n_n_points) {
      need(config->n_points, "n_points");
      c.n_points.assign(config->n_points, config->n_points + config->n_n_points);
    }
    if (config->n_fractions) {
      need(config->fractions, "fractions");
      c.fractions.assign(config->fractions, config->fractions + config->n_fractions);
    }
    c.runs = config->runs;
    c.seed = config->seed;
    if (config->memory_budget) c.memory_budget = config->memory_budget;
    return emit(new lcsvd_bench{lcsvd::run_benchmark(c)}, out);
  });
}

LCSVD_API size_t lcsvd_bench_count(const lcsvd_bench* b) { return b ? b->records.size() : 0; }

LCSVD_API lcsvd_status lcsvd_bench_get(const lcsvd_bench* b, size_t i, lcsvd_bench_record* out) {
  return guarded([&] {
    need(b, "bench");
    need(out, "out");
    if (i >= b->records.size()) throw lcsvd::ValidationError("record index out of range");
    const auto& r = b->records[i];
    *out = lcsvd_bench_record{r.j,
                              r.k,
                              r.n_points,
                              r.mode_fraction,
                              r.runs,
                              r.t_svd,
                              r.t_lcsvd,
                              r.t_oslcsvd,
                              r.t_svd_mean,
                              r.t_lcsvd_mean,
                              r.t_oslcsvd_mean,
                              r.s_u_lcsvd,
                              r.s_u_oslcsvd,
                              r.peak_mem_svd,
                              r.peak_mem_lcsvd,
                              r.peak_mem_oslcsvd,
                              r.skipped ? 1 : 0};
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_bench_merge(lcsvd_bench* into, const lcsvd_bench* from) {
  return guarded([&] {
    need(into, "into");
    need(from, "from");
    into->records.insert(into->records.end(), from->records.begin(), from->records.end());
    return LCSVD_OK;
  });
}

LCSVD_API lcsvd_status lcsvd_bench_write(const lcsvd_bench* b, const char* csv_path) {
  return guarded([&] {
    need(b, "bench");
    need(csv_path, "csv_path");
    lcsvd::write_benchmark_csv(csv_path, b->records);
    return LCSVD_OK;
  });
}

LCSVD_API void lcsvd_bench_free(lcsvd_bench* b) { delete b; }

}  // extern "C"
