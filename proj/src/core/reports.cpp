#include "lcsvd/reports.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>

#include "lcsvd/error.hpp"
#include "lcsvd/error_metrics.hpp"
#include "lcsvd/io.hpp"

namespace lcsvd {

namespace {

using nlohmann::json;

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.precision(17);
  return out;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

MatrixFormat parse_format(const std::string& name) {
  if (name == "snt") return MatrixFormat::snt;
  if (name == "csv") return MatrixFormat::csv;
  throw ValidationError("unknown format '" + name + "' (expected snt or csv)");
}

TruncationRule parse_rule(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError("rule must be tol:<eps> or modes:<n>, got '" + text + "'");
  const auto kind = text.substr(0, colon);
  const auto value = text.substr(colon + 1);
  const char* b = value.data();
  const char* e = value.data() + value.size();
  TruncationRule rule;
  if (kind == "tol") {
    double eps = 0.0;
    const auto res = std::from_chars(b, e, eps);
    if (value.empty() || res.ec != std::errc() || res.ptr != e)
      throw ValidationError("malformed tolerance '" + value + "'");
    rule = ToleranceRule{eps};
  } else if (kind == "modes") {
    std::size_t n = 0;
    const auto res = std::from_chars(b, e, n);
    if (value.empty() || res.ec != std::errc() || res.ptr != e)
      throw ValidationError("malformed mode count '" + value + "'");
    rule = ModeCountRule{n};
  } else {
    throw ValidationError("rule must be tol:<eps> or modes:<n>, got '" + text + "'");
  }
  validate_rule(rule);
  return rule;
}

std::string describe_rule(const TruncationRule& rule) {
  if (const auto* t = std::get_if<ToleranceRule>(&rule)) return "tol:" + json(t->epsilon).dump();
  return "modes:" + std::to_string(std::get<ModeCountRule>(rule).count);
}

void write_matrix(const std::filesystem::path& dir, const std::string& stem, const Eigen::MatrixXd& matrix,
                  MatrixFormat format, const std::optional<TensorOrigin>& layout) {
  if (format == MatrixFormat::csv) {
    write_matrix_csv(dir / (stem + ".csv"), matrix);
    return;
  }
  if (layout && layout->shape.spatial_size() == static_cast<std::size_t>(matrix.rows())) {
    TensorShape shape = layout->shape;
    shape.n_t = static_cast<std::size_t>(matrix.cols());
    write_snt(dir / (stem + ".snt"), SnapshotTensor(shape, matrix, layout->u_inf));
  } else {
    write_snt(dir / (stem + ".snt"), matrix);
  }
}

void write_decomposition(const std::filesystem::path& dir, const SnapshotMatrix& source,
                         const TruncatedFactorization& f, const TruncationRule& rule, MatrixFormat format) {
  ensure_directory(dir);
  write_matrix(dir, "modes", f.modes, format, source.origin());
  write_matrix(dir, "coefficients", f.coefficients, format);
  auto sv = open_csv(dir / "singular_values.csv");
  sv << "index,sigma\n";
  for (Eigen::Index i = 0; i < f.singular_values.size(); ++i) sv << i << ',' << f.singular_values(i) << '\n';
  if (!sv) throw IoError("failed writing singular_values.csv");

  json j;
  j["j"] = source.j();
  j["k"] = source.k();
  j["rule"] = describe_rule(rule);
  j["n_modes"] = f.n_retained();
  j["singular_values"] = vector_json(f.singular_values);
  const double total = source.values().squaredNorm();
  j["energy_fraction"] = total > 0.0 ? f.singular_values.squaredNorm() / total : 0.0;
  write_json(dir / "summary.json", j);
}

SnapshotTensor as_tensor(const Eigen::MatrixXd& values, const std::optional<TensorOrigin>& origin) {
  if (origin) return SnapshotTensor(origin->shape, values, origin->u_inf);
  TensorShape shape{.n_comp = 1,
                    .n_x = static_cast<std::size_t>(values.rows()),
                    .n_y = 1,
                    .n_z = std::nullopt,
                    .n_t = static_cast<std::size_t>(values.cols())};
  return SnapshotTensor(shape, values);
}

SnapshotTensor as_tensor(const SnapshotMatrix& matrix) { return as_tensor(matrix.values(), matrix.origin()); }

void write_reconstruction(const std::filesystem::path& dir, const SnapshotMatrix& source, const LcsvdResult& result,
                          std::size_t n_sensors, MatrixFormat format, const std::string& extra_json) {
  ensure_directory(dir);
  const Eigen::MatrixXd rec = result.has_reconstruction() ? result.reconstruction : result.reconstruct();
  write_matrix(dir, "reconstruction", rec, format, source.origin());
  write_matrix(dir, "recovered_modes", result.recovered_modes, format, source.origin());
  write_matrix(dir, "recovered_coefficients", result.recovered_coefficients, format);

  const auto report = build_error_report(as_tensor(source), as_tensor(rec, source.origin()), n_sensors);
  write_error_report(report, dir / "error_report");

  json j = json::parse(extra_json);
  require(j.is_object(), "write_reconstruction: extra summary must be a JSON object");
  j["j"] = source.j();
  j["k"] = source.k();
  j["n_sensors"] = n_sensors;
  j["n_modes"] = result.n_retained();
  j["rrmse_percent"] = report.rrmse_percent;
  j["singular_values"] = vector_json(result.reduced_factorization.singular_values);
  j["compression_rate"] = {{"exact", report.compression.exact}, {"rounded", report.compression.rounded}};
  write_json(dir / "summary.json", j);
}

void write_search(const std::filesystem::path& dir, const SensorCountSearchResult& result,
                  const SensorCountSearchConfig& config, double mode_fraction) {
  ensure_directory(dir);
  auto csv = open_csv(dir / "search_curve.csv");
  csv << "n_sensors,n_modes,mean_rrmse\n";
  for (const auto& p : result.curve)
    csv << p.n_sensors << ',' << modes_for(p.n_sensors, mode_fraction) << ',' << p.mean_rrmse << '\n';
  if (!csv) throw IoError("failed writing search_curve.csv");

  json j;
  j["n_opt"] = result.n_opt;
  j["epsilon_percent"] = result.epsilon;
  j["stalled"] = result.stalled;
  j["mode_fraction"] = mode_fraction;
  j["start"] = config.start;
  j["step"] = config.step;
  j["max_sensors"] = config.max_sensors;
  j["runs_per_count"] = config.runs_per_count;
  j["stall_threshold"] = config.stall_threshold;
  j["seed"] = config.seed;
  write_json(dir / "search.json", j);
}

void write_elbow(const std::filesystem::path& dir, const std::vector<ElbowCurve>& curves, double mode_fraction,
                 std::size_t runs) {
  ensure_directory(dir);
  json j;
  j["mode_fraction"] = mode_fraction;
  j["runs_per_count"] = runs;
  j["components"] = json::array();
  for (const auto& c : curves) {
    auto csv = open_csv(dir / ("elbow_" + std::to_string(c.component) + ".csv"));
    csv << "n_sensors,bias,uncertainty\n";
    for (const auto& p : c.points) csv << p.n_sensors << ',' << p.bias << ',' << p.uncertainty << '\n';
    if (!csv) throw IoError("failed writing elbow curve");
    j["components"].push_back({{"component", c.component}, {"elbow", c.elbow}});
  }
  write_json(dir / "elbow.json", j);
}

}  // namespace lcsvd
