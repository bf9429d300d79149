#include "lcsvd/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lcsvd/error.hpp"

namespace lcsvd {

namespace {

constexpr std::string_view kMagic = "SNT1";
// Longest header we accept before giving up on finding the newline.
constexpr std::size_t kMaxHeader = 512;

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_values(std::ofstream& out, const double* data, std::size_t count) {
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      auto bits = std::bit_cast<std::uint64_t>(data[i]);
      bits = __builtin_bswap64(bits);
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
}

void write_snt_raw(const std::filesystem::path& path, const TensorShape& shape, std::optional<double> u_inf,
                   const Eigen::MatrixXd& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kMagic << ' ' << shape.n_comp << ' ' << shape.n_x << ' ' << shape.n_y << ' ' << shape.depth() << ' '
      << shape.n_t << ' ' << format_double(u_inf.value_or(0.0)) << '\n';
  write_values(out, values.data(), static_cast<std::size_t>(values.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

std::size_t parse_count(const std::string& token, const char* field) {
  std::size_t v = 0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw ValidationError(std::string("SNT1 header: malformed ") + field + " '" + token + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double parse_double(const std::string& raw, const std::filesystem::path& path, std::size_t line_no) {
  const auto s = trim(raw);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": malformed number '" + s + "'");
  return v;
}

}  // namespace

void write_snt(const std::filesystem::path& path, const SnapshotTensor& tensor) {
  write_snt_raw(path, tensor.shape(), tensor.u_inf(), tensor.values());
}

void write_snt(const std::filesystem::path& path, const Eigen::MatrixXd& matrix) {
  TensorShape shape{.n_comp = 1,
                    .n_x = static_cast<std::size_t>(matrix.rows()),
                    .n_y = 1,
                    .n_z = std::nullopt,
                    .n_t = static_cast<std::size_t>(matrix.cols())};
  write_snt_raw(path, shape, std::nullopt, matrix);
}

SnapshotTensor read_snt(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header;
  char ch = 0;
  while (header.size() < kMaxHeader && in.get(ch) && ch != '\n') header.push_back(ch);
  if (ch != '\n') throw ValidationError(path.string() + ": malformed SNT1 header (no header line)");

  std::istringstream hs(header);
  std::vector<std::string> tok;
  for (std::string t; hs >> t;) tok.push_back(t);
  if (tok.size() != 7 || tok[0] != kMagic)
    throw ValidationError(path.string() + ": malformed SNT1 header '" + header + "'");

  TensorShape shape;
  shape.n_comp = parse_count(tok[1], "n_comp");
  shape.n_x = parse_count(tok[2], "n_x");
  shape.n_y = parse_count(tok[3], "n_y");
  const auto n_z = parse_count(tok[4], "n_z");
  if (n_z != 1) shape.n_z = n_z;
  shape.n_t = parse_count(tok[5], "n_t");
  double u_inf = 0.0;
  {
    const auto res = std::from_chars(tok[6].data(), tok[6].data() + tok[6].size(), u_inf);
    if (res.ec != std::errc() || res.ptr != tok[6].data() + tok[6].size())
      throw ValidationError(path.string() + ": malformed SNT1 u_inf '" + tok[6] + "'");
  }
  try {
    shape.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  if (u_inf < 0.0) throw ValidationError(path.string() + ": negative u_inf");

  Eigen::MatrixXd values(static_cast<Eigen::Index>(shape.spatial_size()), static_cast<Eigen::Index>(shape.n_t));
  const auto bytes = static_cast<std::streamsize>(shape.value_count() * sizeof(double));
  in.read(reinterpret_cast<char*>(values.data()), bytes);
  if (in.gcount() != bytes)
    throw IoError(path.string() + ": truncated payload (expected " + std::to_string(bytes) + " bytes)");
  if (in.peek() != std::char_traits<char>::eof())
    throw ValidationError(path.string() + ": trailing bytes after payload");
  if constexpr (std::endian::native != std::endian::little) {
    for (Eigen::Index i = 0; i < values.size(); ++i)
      values.data()[i] = std::bit_cast<double>(__builtin_bswap64(std::bit_cast<std::uint64_t>(values.data()[i])));
  }
  return SnapshotTensor(shape, std::move(values), u_inf > 0.0 ? std::optional<double>(u_inf) : std::nullopt);
}

SnapshotMatrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> data;
  std::size_t cols = 0, rows = 0, line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (cols == 0) cols = cells.size();
    if (cells.size() != cols)
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) +
                            " columns, found " + std::to_string(cells.size()));
    for (const auto& c : cells) data.push_back(parse_double(c, path, line_no));
    ++rows;
  }
  if (rows == 0) throw ValidationError(path.string() + ": empty CSV matrix");
  // data is row-major J x K
  Eigen::MatrixXd m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      data.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  return SnapshotMatrix(std::move(m));
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

SnapshotMatrix load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  const bool is_snt = in.gcount() == 4 && std::string_view(magic, 4) == kMagic;
  const bool empty = in.gcount() == 0;
  in.close();
  if (is_snt) return flatten(read_snt(path));
  if (empty) throw ValidationError(path.string() + ": malformed SNT1 header (empty file)");
  return read_matrix_csv(path);
}

void write_sensors_csv(const std::filesystem::path& path, const SensorSet& sensors,
                       const std::optional<TensorShape>& layout) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "index,component,x,y,z\n";
  for (std::size_t i = 0; i < sensors.indices.size(); ++i) {
    GridPoint p;
    if (sensors.grid_coords) {
      p = (*sensors.grid_coords)[i];
    } else if (layout) {
      p = decode_row(*layout, sensors.indices[i]);
    } else {
      p.x = sensors.indices[i];
    }
    out << sensors.indices[i] << ',' << p.component << ',' << p.x << ',' << p.y << ',' << p.z << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

SensorSet read_sensors_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  SensorSet out;
  std::vector<GridPoint> coords;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#' || t.rfind("index", 0) == 0) continue;
    const auto cells = split(t, ',');
    if (cells.size() != 5)
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected index,component,x,y,z");
    std::size_t v[5];
    for (int i = 0; i < 5; ++i) {
      const auto c = trim(cells[static_cast<std::size_t>(i)]);
      const auto res = std::from_chars(c.data(), c.data() + c.size(), v[i]);
      if (c.empty() || res.ec != std::errc() || res.ptr != c.data() + c.size())
        throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": malformed integer '" + c + "'");
    }
    out.indices.push_back(v[0]);
    coords.push_back(GridPoint{v[1], v[2], v[3], v[4]});
  }
  if (out.indices.empty()) throw ValidationError(path.string() + ": no sensors listed");
  out.grid_coords = std::move(coords);
  return out;
}

}  // namespace lcsvd
