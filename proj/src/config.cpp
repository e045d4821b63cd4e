#include "hcband/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "../vendor/json.hpp"

namespace hcband {

using nlohmann::json;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw config_error(msg); }

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      fail("unknown key \"" + item.key() + "\" in " + where);
}

double require_number(const json& obj, const char* key, double fallback,
                      const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(std::string(key) + " in " + where + " must be a number");
  return obj[key].get<double>();
}

int require_int(const json& obj, const char* key, int fallback,
                const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    fail(std::string(key) + " in " + where + " must be an integer");
  return obj[key].get<int>();
}

Vec3 parse_vec3(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != 3) fail(where + " must be a 3-vector");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!arr[static_cast<size_t>(i)].is_number())
      fail(where + " must hold numbers");
    v[i] = arr[static_cast<size_t>(i)].get<double>();
  }
  return v;
}

InclusionShape parse_geometry(const json& g, std::optional<BufferedGeometry>* buffer) {
  expect_keys(g, {"spheres", "buffer"}, "geometry");
  if (!g.contains("spheres") || !g["spheres"].is_array() || g["spheres"].empty())
    fail("geometry.spheres must be a nonempty array");
  InclusionShape shape;
  for (const json& s : g["spheres"]) {
    expect_keys(s, {"center", "radius"}, "geometry.spheres[]");
    Sphere sphere;
    sphere.center = parse_vec3(s.value("center", json::array({0.5, 0.5, 0.5})),
                               "geometry.spheres[].center");
    if (!s.contains("radius") || !s["radius"].is_number())
      fail("geometry.spheres[].radius must be a number");
    sphere.radius = s["radius"].get<double>();
    shape.spheres.push_back(sphere);
  }
  try {
    validate_shape(shape);
  } catch (const geometry_error& e) {
    fail(e.what());
  }
  if (g.contains("buffer")) {
    expect_keys(g["buffer"], {"a", "b"}, "geometry.buffer");
    BufferedGeometry buf;
    buf.a = require_number(g["buffer"], "a", 0.0, "geometry.buffer");
    buf.b = require_number(g["buffer"], "b", 0.0, "geometry.buffer");
    try {
      validate_buffered(buf);
    } catch (const geometry_error& e) {
      fail(e.what());
    }
    *buffer = buf;
  }
  return shape;
}

AlphaSpec parse_alpha(const json& a) {
  AlphaSpec spec;
  expect_keys(a, {"point", "list", "path", "samples_per_leg"}, "alpha");
  const int forms = static_cast<int>(a.contains("point")) +
                    static_cast<int>(a.contains("list")) +
                    static_cast<int>(a.contains("path"));
  if (forms != 1) fail("alpha needs exactly one of: point, list, path");
  if (a.contains("point")) {
    spec.mode = AlphaMode::point;
    spec.points.push_back(parse_vec3(a["point"], "alpha.point"));
  } else if (a.contains("list")) {
    spec.mode = AlphaMode::list;
    if (!a["list"].is_array() || a["list"].empty())
      fail("alpha.list must be a nonempty array of 3-vectors");
    for (const json& p : a["list"])
      spec.points.push_back(parse_vec3(p, "alpha.list[]"));
  } else {
    spec.mode = AlphaMode::path;
    if (!a["path"].is_string() || a["path"].get<std::string>() != "gamma-x-m-r")
      fail("alpha.path must be the string \"gamma-x-m-r\"");
  }
  spec.samples_per_leg = require_int(a, "samples_per_leg", 32, "alpha");
  if (spec.samples_per_leg < 1) fail("alpha.samples_per_leg must be >= 1");
  for (const Vec3& p : spec.points)
    for (int i = 0; i < 3; ++i)
      if (!(p[i] > -M_PI && p[i] <= M_PI))
        fail("alpha components must lie in (-pi, pi]");
  return spec;
}

json canonical_json(const RunConfig& cfg) {
  // nlohmann's default object is key-sorted, which makes dump() canonical.
  json doc;
  json spheres = json::array();
  for (const Sphere& s : cfg.shape.spheres)
    spheres.push_back(json{{"center", {s.center[0], s.center[1], s.center[2]}},
                           {"radius", s.radius}});
  doc["geometry"]["spheres"] = spheres;
  if (cfg.buffer)
    doc["geometry"]["buffer"] = {{"a", cfg.buffer->a}, {"b", cfg.buffer->b}};
  doc["cutoff_N"] = cfg.cutoff_N;
  doc["delta_snap"] = cfg.delta_snap;
  json contrasts = json::array();
  for (Complex k : cfg.contrasts) {
    if (k.imag() == 0.0)
      contrasts.push_back(k.real());
    else
      contrasts.push_back(json::array({k.real(), k.imag()}));
  }
  doc["contrasts"] = contrasts;
  switch (cfg.alpha.mode) {
    case AlphaMode::point:
      doc["alpha"]["point"] = {cfg.alpha.points[0][0], cfg.alpha.points[0][1],
                               cfg.alpha.points[0][2]};
      break;
    case AlphaMode::list: {
      json list = json::array();
      for (const Vec3& p : cfg.alpha.points)
        list.push_back(json::array({p[0], p[1], p[2]}));
      doc["alpha"]["list"] = list;
      break;
    }
    case AlphaMode::path:
      doc["alpha"]["path"] = "gamma-x-m-r";
      break;
  }
  doc["alpha"]["samples_per_leg"] = cfg.alpha.samples_per_leg;
  doc["series"] = {{"group_index", cfg.series.group_index},
                   {"max_order", cfg.series.max_order},
                   {"quadrature_M", cfg.series.quadrature_M}};
  doc["bands"] = {{"count", cfg.bands.count}};
  doc["tolerances"] = {{"eig_residual", cfg.tol.eig_residual},
                       {"cluster", cfg.tol.cluster},
                       {"moment", cfg.tol.moment}};
  if (!cfg.output_path.empty()) doc["output"] = cfg.output_path;
  return doc;
}

void finalize(RunConfig& cfg) {
  const json doc = canonical_json(cfg);
  cfg.canonical = doc.dump();
  cfg.hash = fnv1a64(cfg.canonical);
  cfg.geometry_hash = fnv1a64(doc["geometry"].dump());
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("config root must be a JSON object");
  expect_keys(doc,
              {"geometry", "cutoff_N", "delta_snap", "contrasts", "alpha",
               "series", "bands", "tolerances", "output"},
              "config");

  RunConfig cfg = default_config();
  cfg.buffer.reset();

  if (doc.contains("geometry")) {
    cfg.shape = parse_geometry(doc["geometry"], &cfg.buffer);
  }
  cfg.cutoff_N = require_int(doc, "cutoff_N", cfg.cutoff_N, "config");
  if (cfg.cutoff_N < 0) fail("cutoff_N must be >= 0");
  cfg.delta_snap = require_number(doc, "delta_snap", cfg.delta_snap, "config");
  if (!(cfg.delta_snap > 0.0 && cfg.delta_snap < 0.25))
    fail("delta_snap must lie in (0, 1/4)");

  if (doc.contains("contrasts")) {
    if (!doc["contrasts"].is_array() || doc["contrasts"].empty())
      fail("contrasts must be a nonempty array");
    cfg.contrasts.clear();
    for (const json& k : doc["contrasts"]) {
      if (k.is_number()) {
        cfg.contrasts.emplace_back(k.get<double>(), 0.0);
      } else if (k.is_array() && k.size() == 2 && k[0].is_number() &&
                 k[1].is_number()) {
        cfg.contrasts.emplace_back(k[0].get<double>(), k[1].get<double>());
      } else {
        fail("each contrast must be a number or [re, im]");
      }
    }
  }

  if (doc.contains("alpha")) cfg.alpha = parse_alpha(doc["alpha"]);

  if (doc.contains("series")) {
    const json& s = doc["series"];
    expect_keys(s, {"group_index", "max_order", "quadrature_M"}, "series");
    cfg.series.group_index =
        require_int(s, "group_index", cfg.series.group_index, "series");
    cfg.series.max_order =
        require_int(s, "max_order", cfg.series.max_order, "series");
    cfg.series.quadrature_M =
        require_int(s, "quadrature_M", cfg.series.quadrature_M, "series");
    if (cfg.series.group_index < 1) fail("series.group_index must be >= 1");
    if (cfg.series.max_order < 1) fail("series.max_order must be >= 1");
    if (cfg.series.quadrature_M < 16) fail("series.quadrature_M must be >= 16");
  }

  if (doc.contains("bands")) {
    expect_keys(doc["bands"], {"count"}, "bands");
    cfg.bands.count = require_int(doc["bands"], "count", cfg.bands.count, "bands");
    if (cfg.bands.count < 1) fail("bands.count must be >= 1");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    expect_keys(t, {"eig_residual", "cluster", "moment"}, "tolerances");
    cfg.tol.eig_residual =
        require_number(t, "eig_residual", cfg.tol.eig_residual, "tolerances");
    cfg.tol.cluster = require_number(t, "cluster", cfg.tol.cluster, "tolerances");
    cfg.tol.moment = require_number(t, "moment", cfg.tol.moment, "tolerances");
    if (!(cfg.tol.eig_residual > 0.0 && cfg.tol.cluster > 0.0 &&
          cfg.tol.moment > 0.0))
      fail("tolerances must be positive");
  }

  if (doc.contains("output")) {
    if (!doc["output"].is_string()) fail("output must be a string path");
    cfg.output_path = doc["output"].get<std::string>();
  }

  finalize(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.shape.spheres.push_back(Sphere{Vec3(0.5, 0.5, 0.5), 0.25});
  cfg.buffer = BufferedGeometry{0.25, 0.35};
  cfg.cutoff_N = 2;
  // At N = 2 the discrete resonances of the reference sphere sit around
  // lambda 0.81-0.86 and the interior block ends at 0.754 (over the
  // acceptance quasimomenta), so 1 - delta = 0.8 separates the two cleanly;
  // tighter thresholds leave the curl-free-in-host block empty at this
  // resolution and the high-contrast machinery has nothing to expand around.
  cfg.delta_snap = 0.2;
  cfg.contrasts = {Complex(5.0, 0.0), Complex(20.0, 0.0), Complex(100.0, 0.0),
                   Complex(5.0, 5.0)};
  cfg.alpha.mode = AlphaMode::point;
  cfg.alpha.points = {Vec3(1.0, 0.0, 0.0)};
  cfg.alpha.samples_per_leg = 32;
  finalize(cfg);
  return cfg;
}

}  // namespace hcband
