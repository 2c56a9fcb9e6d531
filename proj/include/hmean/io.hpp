#pragma once

#include <iosfwd>
#include <string>

#include "hmean/loss.hpp"

namespace hmean {

inline constexpr const char* kFormatVersion = "rmm-v1";

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Point datasets as CSV. The first line is a header
/// "rmm-v1,<euclidean|sphere|spd>,<k>"; every following line holds one point:
/// k values for R^k, k+1 for S^k (renormalized when the norm is within 1e-6
/// of one, rejected otherwise), k*k row-major for SPD(k). Values are written
/// with 17 significant digits so a write/read cycle is lossless.
Sample read_dataset(std::istream& in);
Sample read_dataset_file(const std::string& path);
void write_dataset(const Sample& sample, std::ostream& out);
void write_dataset_file(const Sample& sample, const std::string& path);

/// Parses "euclidean", "sphere", or "spd" (case-sensitive).
ManifoldKind parse_manifold_kind(const std::string& name);

}  // namespace hmean
