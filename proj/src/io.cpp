#include "hmean/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace hmean {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_real(const std::string& s, int line_no) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size())
    throw ParseError("line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

const char* kind_name(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Euclidean: return "euclidean";
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::Spd: return "spd";
  }
  return "?";
}

}  // namespace

ManifoldKind parse_manifold_kind(const std::string& name) {
  if (name == "euclidean") return ManifoldKind::Euclidean;
  if (name == "sphere") return ManifoldKind::Sphere;
  if (name == "spd") return ManifoldKind::Spd;
  throw ParseError("unknown manifold '" + name + "'");
}

Sample read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty dataset");
  const auto header = split_csv(line);
  if (header.size() != 3 || header[0] != kFormatVersion)
    throw ParseError("expected header '" + std::string(kFormatVersion) +
                     ",<manifold>,<k>'");
  const ManifoldKind kind = parse_manifold_kind(header[1]);
  int k = 0;
  try {
    k = std::stoi(header[2]);
  } catch (const std::exception&) {
    throw ParseError("bad dimension '" + header[2] + "'");
  }
  if (k < 1) throw ParseError("dimension must be >= 1");
  const ManifoldTag tag{kind, k};

  std::vector<ManifoldPoint> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (static_cast<int>(fields.size()) != tag.ambient_size())
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(tag.ambient_size()) + " values, got " +
                       std::to_string(fields.size()));
    Eigen::VectorXd coords(tag.ambient_size());
    for (std::size_t i = 0; i < fields.size(); ++i)
      coords[static_cast<int>(i)] = parse_real(fields[i], line_no);

    switch (kind) {
      case ManifoldKind::Euclidean:
        points.push_back(ManifoldPoint::euclidean(coords));
        break;
      case ManifoldKind::Sphere: {
        const double norm = coords.norm();
        if (std::abs(norm - 1.0) > 1e-6)
          throw ParseError("line " + std::to_string(line_no) +
                           ": sphere row norm " + std::to_string(norm) +
                           " too far from 1");
        points.push_back(ManifoldPoint::sphere(coords / norm));
        break;
      }
      case ManifoldKind::Spd: {
        Eigen::MatrixXd m(k, k);
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) m(i, j) = coords[i * k + j];
        try {
          points.push_back(ManifoldPoint::spd(m));
        } catch (const std::exception& e) {
          throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        break;
      }
    }
  }
  if (points.empty()) throw ParseError("dataset has no points");
  return Sample::of(std::move(points));
}

Sample read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_dataset(in);
}

void write_dataset(const Sample& sample, std::ostream& out) {
  const ManifoldTag& tag = sample.tag;
  out << kFormatVersion << ',' << kind_name(tag.kind) << ',' << tag.k << '\n';
  char buf[64];
  for (const auto& p : sample.points) {
    for (int i = 0; i < p.coords.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p.coords[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_dataset_file(const Sample& sample, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_dataset(sample, out);
}

}  // namespace hmean
