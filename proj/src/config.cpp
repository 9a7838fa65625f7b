#include "tlab/config.hpp"

#include <cmath>
#include <fstream>

namespace tlab {

JsonReader::JsonReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
}

bool JsonReader::has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

const Json& JsonReader::at(const std::string& key) const {
  if (!has(key)) throw ConfigError(key_path(key) + ": missing required key");
  return j_.at(key);
}

JsonReader JsonReader::child(const std::string& key) const { return JsonReader(at(key), key_path(key)); }

double JsonReader::number(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_number()) throw ConfigError(key_path(key) + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key_path(key) + ": expected a finite number");
  return d;
}

double JsonReader::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int JsonReader::integer(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_number_integer()) throw ConfigError(key_path(key) + ": expected an integer");
  return v.get<int>();
}

int JsonReader::integer(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::string JsonReader::string(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_string()) throw ConfigError(key_path(key) + ": expected a string");
  return v.get<std::string>();
}

std::string JsonReader::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool JsonReader::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (!v.is_boolean()) throw ConfigError(key_path(key) + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> JsonReader::numbers(const std::string& key) const {
  const Json& v = at(key);
  if (!v.is_array()) throw ConfigError(key_path(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ConfigError(key_path(key) + "[" + std::to_string(i) + "]: expected a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::vector<double> JsonReader::numbers(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

Point JsonReader::point(const std::string& key) const {
  const auto v = numbers(key);
  if (v.size() != 2) throw ConfigError(key_path(key) + ": expected [x, y]");
  return {v[0], v[1]};
}

Point JsonReader::point(const std::string& key, const Point& fallback) const {
  return has(key) ? point(key) : fallback;
}

Complex JsonReader::complex(const std::string& key, Complex fallback) const {
  if (!has(key)) return fallback;
  const Json& v = at(key);
  if (v.is_number()) return v.get<double>();
  const auto p = numbers(key);
  if (p.size() != 2) throw ConfigError(key_path(key) + ": expected a number or [re, im]");
  return {p[0], p[1]};
}

Domain parse_domain(const JsonReader& r) {
  const std::string kind = r.string("kind");
  if (kind == "polygon") {
    if (!r.has("vertices")) throw ConfigError(r.key_path("vertices") + ": missing required key");
    const Json& v = r.raw().at("vertices");
    if (!v.is_array()) throw ConfigError(r.key_path("vertices") + ": expected an array of [x, y]");
    Points pts;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = r.key_path("vertices") + "[" + std::to_string(i) + "]";
      if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number()) {
        throw ConfigError(p + ": expected [x, y]");
      }
      pts.emplace_back(v[i][0].get<double>(), v[i][1].get<double>());
    }
    try {
      return PolygonDomain::from_vertices(std::move(pts));
    } catch (const GeometryError& e) {
      throw ConfigError(r.key_path("vertices") + ": " + e.what());
    }
  }
  if (kind == "disk") {
    DiskDomain d;
    d.center = r.point("center", Point::Zero());
    d.radius = r.number("radius");
    if (!(d.radius > 0.0)) throw ConfigError(r.key_path("radius") + ": must be positive");
    return d;
  }
  throw ConfigError(r.key_path("kind") + ": unknown domain kind '" + kind + "'");
}

Contrast parse_contrast(const JsonReader& r) {
  const std::string kind = r.string("kind");
  if (kind == "constant") {
    if (!r.has("value")) throw ConfigError(r.key_path("value") + ": missing required key");
    return Contrast::constant_value(r.complex("value", 0.0));
  }
  if (kind == "expression") {
    const std::string name = r.string("name");
    if (name == "linear") {
      // phi = c0 + c1 x + c2 y
      const Complex c0 = r.complex("c0", 1.0);
      const Complex c1 = r.complex("c1", 0.0);
      const Complex c2 = r.complex("c2", 0.0);
      return Contrast::function("linear", [=](const Point& p) { return c0 + c1 * p.x() + c2 * p.y(); });
    }
    if (name == "gaussian") {
      // phi = base + amplitude exp(-|x - center|^2 / width^2)
      const Complex base = r.complex("base", 1.0);
      const Complex amp = r.complex("amplitude", 0.5);
      const Point c = r.point("center", Point::Zero());
      const double w = r.number("width", 0.5);
      if (!(w > 0.0)) throw ConfigError(r.key_path("width") + ": must be positive");
      return Contrast::function("gaussian", [=](const Point& p) {
        return base + amp * std::exp(-(p - c).squaredNorm() / (w * w));
      });
    }
    throw ConfigError(r.key_path("name") + ": unknown expression '" + name + "'");
  }
  throw ConfigError(r.key_path("kind") + ": unknown contrast kind '" + kind + "'");
}

HerglotzKernel parse_kernel(const JsonReader& r) {
  if (r.has("M")) {
    const int M = r.integer("M");
    if (M < 0 || M > kMaxKernelTruncation) throw ConfigError(r.key_path("M") + ": out of range");
    const Json& v = r.raw().contains("coeffs") ? r.raw().at("coeffs") : Json();
    if (!v.is_array() || v.size() != static_cast<std::size_t>(2 * M + 1)) {
      throw ConfigError(r.key_path("coeffs") + ": expected 2M + 1 entries [re, im]");
    }
    Eigen::VectorXcd c(2 * M + 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_array() || v[i].size() != 2 || !v[i][0].is_number() || !v[i][1].is_number()) {
        throw ConfigError(r.key_path("coeffs") + "[" + std::to_string(i) + "]: expected [re, im]");
      }
      c[static_cast<Eigen::Index>(i)] = Complex(v[i][0].get<double>(), v[i][1].get<double>());
    }
    return HerglotzKernel(c);
  }
  const int M = r.integer("truncation");
  if (M < 0 || M > kMaxKernelTruncation) throw ConfigError(r.key_path("truncation") + ": out of range");
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * M + 1);
  if (r.has("coefficients")) {
    const Json& v = r.raw().at("coefficients");
    if (!v.is_array()) throw ConfigError(r.key_path("coefficients") + ": expected [[m, re, im], ...]");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = r.key_path("coefficients") + "[" + std::to_string(i) + "]";
      if (!v[i].is_array() || v[i].size() != 3 || !v[i][0].is_number_integer()) {
        throw ConfigError(p + ": expected [m, re, im]");
      }
      const int m = v[i][0].get<int>();
      if (std::abs(m) > M) throw ConfigError(p + ": |m| exceeds truncation");
      c[m + M] = Complex(v[i][1].get<double>(), v[i][2].get<double>());
    }
  }
  return HerglotzKernel(c);
}

Json kernel_to_json(const HerglotzKernel& g) {
  Json c = Json::array();
  for (const Complex& z : g.coeffs()) c.push_back({z.real(), z.imag()});
  return {{"M", g.truncation()}, {"coeffs", c}, {"l2_norm", g.l2_norm()}};
}

Json domain_to_json(const Domain& d) {
  if (const auto* disk = std::get_if<DiskDomain>(&d)) {
    return {{"kind", "disk"}, {"center", {disk->center.x(), disk->center.y()}}, {"radius", disk->radius}};
  }
  Json v = Json::array();
  for (const Point& p : std::get<PolygonDomain>(d).vertices()) v.push_back({p.x(), p.y()});
  return {{"kind", "polygon"}, {"vertices", v}};
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

PolygonDomain unit_square() {
  return PolygonDomain::from_vertices({Point(-0.5, -0.5), Point(0.5, -0.5), Point(0.5, 0.5), Point(-0.5, 0.5)});
}

}  // namespace tlab
