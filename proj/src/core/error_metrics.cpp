#include "lcsvd/error_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <string>

#include "lcsvd/error.hpp"
#include "lcsvd/io.hpp"
#include "lcsvd/optimize.hpp"

namespace lcsvd {

namespace {

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

SnapshotTensor map_tensor(const SnapshotTensor& t, const Eigen::MatrixXd& values) {
  return SnapshotTensor(t.shape(), values, t.u_inf());
}

}  // namespace

BiasUncertainty bias_uncertainty(std::span<const double> errors) {
  require(!errors.empty(), "bias_uncertainty: empty sample");
  double mean = 0.0, m2 = 0.0;
  std::size_t n = 0;
  for (double e : errors) {
    ++n;
    const double delta = e - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (e - mean);
  }
  return {mean, std::sqrt(std::max(m2, 0.0) / static_cast<double>(n))};
}

double Histogram::integral() const {
  double total = 0.0;
  for (std::size_t i = 0; i < densities.size(); ++i) total += densities[i] * (edges[i + 1] - edges[i]);
  return total;
}

Histogram density_curve(std::span<const double> errors) {
  require(!errors.empty(), "density_curve: empty sample");
  for (double e : errors) require(std::isfinite(e), "density_curve: non-finite sample");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  const auto n = static_cast<double>(sorted.size());

  Histogram h;
  if (hi == lo) {
    h.edges = {lo - 0.5, lo + 0.5};
    h.densities = {1.0};
    return h;
  }

  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  std::size_t bins = kMinBins;
  if (iqr > 0.0) {
    const double width = 2.0 * iqr / std::cbrt(n);
    const double wanted = std::ceil((hi - lo) / width);
    bins = static_cast<std::size_t>(std::clamp(wanted, static_cast<double>(kMinBins), static_cast<double>(kMaxBins)));
  }
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;

  std::vector<std::size_t> counts(bins, 0);
  for (double e : sorted) {
    auto b = static_cast<std::size_t>((e - lo) / width);
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.densities[i] = static_cast<double>(counts[i]) / (n * (h.edges[i + 1] - h.edges[i]));
  return h;
}

CompressionRate compression_rate(std::size_t j, std::size_t n_sensors) {
  require(n_sensors >= 1, "compression_rate: need at least one sensor");
  require(n_sensors <= j, "compression_rate: more sensors than spatial points");
  CompressionRate c;
  c.exact = static_cast<double>(j) / static_cast<double>(n_sensors);
  // Integer round-half-up avoids floating ties such as 682.5.
  c.rounded = static_cast<long long>((2 * j + n_sensors) / (2 * n_sensors));
  return c;
}

std::vector<double> component_errors(const Eigen::MatrixXd& original, const Eigen::MatrixXd& reconstructed,
                                     const TensorShape& shape, std::size_t component, double scale) {
  require(original.rows() == reconstructed.rows() && original.cols() == reconstructed.cols(),
          "component_errors: shape mismatch");
  require(static_cast<std::size_t>(original.rows()) == shape.spatial_size(), "component_errors: layout mismatch");
  require(component < shape.n_comp, "component_errors: component out of range");
  const auto block = static_cast<Eigen::Index>(shape.points_per_component());
  const Eigen::Index first = static_cast<Eigen::Index>(component) * block;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(block * original.cols()));
  for (Eigen::Index t = 0; t < original.cols(); ++t)
    for (Eigen::Index r = first; r < first + block; ++r)
      out.push_back((original(r, t) - reconstructed(r, t)) / scale);
  return out;
}

std::vector<BiasUncertainty> component_statistics(const Eigen::MatrixXd& original,
                                                  const Eigen::MatrixXd& reconstructed,
                                                  const TensorShape& shape, std::optional<double> u_inf) {
  std::vector<BiasUncertainty> out;
  for (std::size_t c = 0; c < shape.n_comp; ++c)
    out.push_back(bias_uncertainty(component_errors(original, reconstructed, shape, c, u_inf.value_or(1.0))));
  return out;
}

ErrorReport build_error_report(const SnapshotTensor& original, const SnapshotTensor& reconstructed,
                               std::size_t n_sensors) {
  if (!(original.shape() == reconstructed.shape()))
    throw ValidationError("build_error_report: original and reconstructed shapes differ");
  const auto& shape = original.shape();
  const Eigen::MatrixXd diff = original.values() - reconstructed.values();

  ErrorReport report{
      .errors = map_tensor(original, diff),
      .normalized = std::nullopt,
      .abs_error = map_tensor(original, diff.cwiseAbs()),
      .worst_snapshot = {},
      .histograms = {},
      .statistics = {},
      .compression = {},
  };
  if (original.u_inf()) report.normalized = map_tensor(original, diff / *original.u_inf());

  const auto block = static_cast<Eigen::Index>(shape.points_per_component());
  for (std::size_t c = 0; c < shape.n_comp; ++c) {
    const auto rows = report.abs_error.values().middleRows(static_cast<Eigen::Index>(c) * block, block);
    Eigen::Index worst = 0;
    rows.colwise().maxCoeff().maxCoeff(&worst);
    report.worst_snapshot.push_back(static_cast<std::size_t>(worst));

    const auto sample =
        component_errors(original.values(), reconstructed.values(), shape, c, original.u_inf().value_or(1.0));
    report.histograms.push_back(density_curve(sample));
    report.statistics.push_back(bias_uncertainty(sample));
  }
  report.n_sensors = n_sensors;
  report.compression = compression_rate(shape.spatial_size(), n_sensors);
  report.rrmse_percent = rrmse(original.values(), reconstructed.values());
  return report;
}

void write_error_report(const ErrorReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto& shape = report.errors.shape();
  nlohmann::json j;
  j["n_sensors"] = report.n_sensors;
  j["rrmse_percent"] = report.rrmse_percent;
  j["compression_rate"] = {{"exact", report.compression.exact}, {"rounded", report.compression.rounded}};
  j["normalized_by_u_inf"] = report.normalized_by_u_inf();
  if (!report.normalized_by_u_inf()) j["note"] = "dataset carries no u_inf; errors are not normalized";
  j["components"] = nlohmann::json::array();

  const auto block = static_cast<Eigen::Index>(shape.points_per_component());
  for (std::size_t c = 0; c < shape.n_comp; ++c) {
    j["components"].push_back({{"component", c},
                               {"bias", report.statistics[c].bias},
                               {"uncertainty", report.statistics[c].uncertainty},
                               {"worst_snapshot", report.worst_snapshot[c]},
                               {"histogram_bins", report.histograms[c].densities.size()}});

    const auto hist_path = dir / ("error_hist_" + std::to_string(c) + ".csv");
    std::ofstream hist(hist_path);
    if (!hist) throw IoError("cannot write " + hist_path.string());
    hist.precision(17);
    hist << "edge,density\n";
    const auto& h = report.histograms[c];
    for (std::size_t i = 0; i < h.densities.size(); ++i) hist << h.edges[i] << ',' << h.densities[i] << '\n';
    hist << h.edges.back() << ",0\n";
    if (!hist) throw IoError("failed writing " + hist_path.string());

    TensorShape single = shape;
    single.n_comp = 1;
    single.n_t = 1;
    Eigen::MatrixXd worst = report.abs_error.values().block(static_cast<Eigen::Index>(c) * block,
                                                            static_cast<Eigen::Index>(report.worst_snapshot[c]),
                                                            block, 1);
    write_snt(dir / ("abs_error_worst_" + std::to_string(c) + ".snt"),
              SnapshotTensor(single, std::move(worst), report.abs_error.u_inf()));
  }

  const auto path = dir / "report.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace lcsvd
