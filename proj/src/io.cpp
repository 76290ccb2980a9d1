#include "glomap/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace glomap {

namespace {

constexpr std::string_view kLabelPrefix = "label:";
constexpr std::string_view kCoordPrefix = "coord:";

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  for (auto& c : cells) {
    while (!c.empty() && (c.front() == ' ' || c.front() == '\t')) c.remove_prefix(1);
    while (!c.empty() && (c.back() == ' ' || c.back() == '\t' || c.back() == '\r')) c.remove_suffix(1);
  }
  return cells;
}

template <typename T>
bool parse_number(std::string_view cell, T& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return res.ec == std::errc() && res.ptr == cell.data() + cell.size();
}

void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

template <typename T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&v, bytes, sizeof(T));
    return v;
  }
}

}  // namespace

DataMatrix parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    for (auto c : split_commas(line)) header.emplace_back(c);
    break;
  }
  if (header.empty()) throw ParseError("missing header row", line_no);

  enum class Kind { kFeature, kLabel, kCoord };
  std::vector<Kind> kinds;
  DataMatrix m;
  std::vector<std::string> coord_names;
  for (const auto& h : header) {
    if (h.rfind(kLabelPrefix, 0) == 0) {
      kinds.push_back(Kind::kLabel);
      m.labels.push_back({h.substr(kLabelPrefix.size()), {}});
    } else if (h.rfind(kCoordPrefix, 0) == 0) {
      kinds.push_back(Kind::kCoord);
      coord_names.push_back(h);
    } else {
      kinds.push_back(Kind::kFeature);
    }
  }
  const auto n_features = std::count(kinds.begin(), kinds.end(), Kind::kFeature);
  if (n_features == 0) throw ParseError("header has no feature columns", line_no);
  if (!coord_names.empty() && coord_names.size() != 2) {
    throw ParseError("expected exactly two coord: columns", line_no);
  }

  std::vector<double> values;
  std::vector<double> coords;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw ParseError("row has " + std::to_string(cells.size()) + " columns, expected " +
                           std::to_string(header.size()),
                       line_no);
    }
    std::size_t label_idx = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (kinds[c] == Kind::kLabel) {
        int v = 0;
        if (!parse_number(cells[c], v)) {
          throw ParseError("non-integer label '" + std::string(cells[c]) + "'", line_no);
        }
        m.labels[label_idx++].values.push_back(v);
      } else {
        double v = 0.0;
        if (!parse_number(cells[c], v) || !std::isfinite(v)) {
          throw ParseError("non-numeric cell '" + std::string(cells[c]) + "'", line_no);
        }
        (kinds[c] == Kind::kFeature ? values : coords).push_back(v);
      }
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("no data rows", line_no);

  m.points = Eigen::Map<const Matrix>(values.data(), rows, n_features);
  if (!coord_names.empty()) m.coords2d = Eigen::Map<const Matrix>(coords.data(), rows, 2);
  return m;
}

DataMatrix load_matrix(const std::filesystem::path& path) {
  try {
    return parse_matrix_csv(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string format_matrix_csv(const DataMatrix& m) {
  std::string out;
  out.reserve(static_cast<std::size_t>(m.rows()) * static_cast<std::size_t>(m.cols() + 4) * 20);
  for (Index c = 0; c < m.cols(); ++c) {
    if (c) out += ',';
    out += 'x' + std::to_string(c);
  }
  if (m.coords2d) out += ",coord:c0,coord:c1";
  for (const auto& l : m.labels) out += "," + std::string(kLabelPrefix) + l.name;
  out += '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) out += ',';
      append_double(out, m.points(r, c));
    }
    if (m.coords2d) {
      out += ',';
      append_double(out, (*m.coords2d)(r, 0));
      out += ',';
      append_double(out, (*m.coords2d)(r, 1));
    }
    for (const auto& l : m.labels) out += ',' + std::to_string(l.values[r]);
    out += '\n';
  }
  return out;
}

void save_matrix(const std::filesystem::path& path, const DataMatrix& m) {
  m.validate();
  write_file(path, format_matrix_csv(m));
}

void save_embedding(const std::filesystem::path& path, const Embedding& e,
                    const std::vector<LabelVector>& labels) {
  std::string out;
  for (Index c = 0; c < e.dim(); ++c) {
    if (c) out += ',';
    out += 'z' + std::to_string(c);
  }
  for (const auto& l : labels) out += "," + std::string(kLabelPrefix) + l.name;
  out += '\n';
  for (Index r = 0; r < e.size(); ++r) {
    for (Index c = 0; c < e.dim(); ++c) {
      if (c) out += ',';
      append_double(out, e.z(r, c));
    }
    for (const auto& l : labels) out += ',' + std::to_string(l.values.at(r));
    out += '\n';
  }
  write_file(path, out);
}

DataMatrix load_embedding(const std::filesystem::path& path) { return load_matrix(path); }

void write_binary_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write("GLMX", 4);
  const std::uint64_t dims[2] = {to_little_endian(static_cast<std::uint64_t>(m.rows())),
                                 to_little_endian(static_cast<std::uint64_t>(m.cols()))};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  std::vector<double> row(static_cast<std::size_t>(m.cols()));
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      const double v = m(r, c);
      row[c] = to_little_endian(std::isinf(v) ? std::numeric_limits<double>::quiet_NaN() : v);
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

Matrix read_binary_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  char magic[4];
  std::uint64_t dims[2];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!in || std::memcmp(magic, "GLMX", 4) != 0) {
    throw Error("'" + path.string() + "' is not a GLMX matrix file");
  }
  const auto rows = static_cast<Index>(to_little_endian(dims[0]));
  const auto cols = static_cast<Index>(to_little_endian(dims[1]));
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(m.size() * static_cast<Index>(sizeof(double))));
  if (!in) throw Error("'" + path.string() + "' is truncated");
  if constexpr (std::endian::native != std::endian::little) {
    for (Index k = 0; k < m.size(); ++k) m.data()[k] = to_little_endian(m.data()[k]);
  }
  return m;
}

}  // namespace glomap
