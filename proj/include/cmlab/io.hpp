#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmlab/manifold.hpp"
#include "json.hpp"

namespace cmlab {

using Json = nlohmann::ordered_json;

/// Contents of a point-set / rule file:
///
///   # manifold=torus:2
///   0.25,0.5,0.1
///   ...
///
/// Rows hold chart coordinates optionally followed by a weight; all rows
/// must agree on whether the weight column is present. Blank lines and
/// further '#' lines are skipped.
struct PointFile {
  Manifold manifold = Manifold::circle();
  std::vector<Point> points;
  std::vector<double> weights;  // 1/N each when the file has no weight column
  bool has_weights = false;
};

/// Throws Error("bad_point_file") with the path and line number on any
/// malformed content, Error("io_error") if the file cannot be read.
PointFile read_point_file(const std::string& path);
void write_point_file(const std::string& path, const Manifold& m, const std::vector<Point>& points,
                      const std::vector<double>* weights = nullptr);

/// "%.17g"; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double v);

/// Serializes with every floating-point number printed to 17 significant
/// digits (non-finite numbers as null) and keys in insertion order.
std::string dump_json(const Json& value, int indent = 2);

/// Writes the whole string, replacing the file. Throws Error("io_error").
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace cmlab
