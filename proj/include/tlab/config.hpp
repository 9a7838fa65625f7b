#pragma once

#include "tlab/geometry.hpp"
#include "tlab/herglotz.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tlab {

using Json = nlohmann::json;

/// Typed access to a JSON object; errors name the offending key path.
class JsonReader {
 public:
  explicit JsonReader(const Json& j, std::string path = "$");

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const;
  JsonReader child(const std::string& key) const;
  std::string key_path(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;
  Point point(const std::string& key) const;
  Point point(const std::string& key, const Point& fallback) const;
  Complex complex(const std::string& key, Complex fallback) const;

  const Json& raw() const { return j_; }

 private:
  const Json& at(const std::string& key) const;
  const Json& j_;
  std::string path_;
};

/// {"kind": "polygon", "vertices": [[x, y], ...]} or {"kind": "disk", "center": [x, y], "radius": r}
Domain parse_domain(const JsonReader& r);
/// {"kind": "constant", "value": v | [re, im]} or {"kind": "expression", "name": "linear" | "gaussian", ...}
Contrast parse_contrast(const JsonReader& r);
/// {"M": M, "coeffs": [[re, im], ...]} for m = -M..M, or the sparse form
/// {"truncation": M, "coefficients": [[m, re, im], ...]}
HerglotzKernel parse_kernel(const JsonReader& r);
Json kernel_to_json(const HerglotzKernel& g);

Json domain_to_json(const Domain& d);

Json load_json_file(const std::string& path);

/// Unit square [-1/2, 1/2]^2.
PolygonDomain unit_square();

}  // namespace tlab
