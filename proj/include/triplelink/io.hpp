#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "triplelink/builders.hpp"
#include "triplelink/diagram.hpp"
#include "triplelink/errors.hpp"
#include "triplelink/link.hpp"

namespace triplelink {

using nlohmann::json;

// --- link files ----------------------------------------------------------------
//
// { "components": [ { "cos": [[w,x,y,z], ...], "sin": [[w,x,y,z], ...] }, x3 ] }
// cos rows are harmonics k = 0..K, sin rows k = 1..K.

inline TrigCurve curve_from_json(const json& j, const std::string& where) {
  if (!j.contains("cos") || !j.contains("sin"))
    fail(errc::io_error, where + ": component needs 'cos' and 'sin' arrays");
  auto rows = [&](const json& arr, const char* name) {
    std::vector<Vec4> out;
    if (!arr.is_array()) fail(errc::io_error, where + ": '" + name + "' must be an array");
    for (size_t k = 0; k < arr.size(); ++k) {
      const json& row = arr[k];
      if (!row.is_array() || row.size() != 4)
        fail(errc::io_error, where + ": '" + name + "' row " + std::to_string(k) +
                                 " must hold 4 floats");
      out.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(),
                     row[3].get<double>()});
    }
    return out;
  };
  return TrigCurve(rows(j["cos"], "cos"), rows(j["sin"], "sin"));
}

inline json curve_to_json(const TrigCurve& c) {
  json j;
  j["cos"] = json::array();
  j["sin"] = json::array();
  for (const Vec4& v : c.cos_coeffs()) j["cos"].push_back({v[0], v[1], v[2], v[3]});
  for (const Vec4& v : c.sin_coeffs()) j["sin"].push_back({v[0], v[1], v[2], v[3]});
  return j;
}

inline Link3 link_from_json(const json& j) {
  if (!j.contains("components") || !j["components"].is_array() || j["components"].size() != 3)
    fail(errc::io_error, "link file: expected 'components' with exactly 3 entries");
  Link3 link;
  const char* names[3] = {"component X", "component Y", "component Z"};
  TrigCurve* slots[3] = {&link.X, &link.Y, &link.Z};
  for (int i = 0; i < 3; ++i) *slots[i] = curve_from_json(j["components"][i], names[i]);
  link.validate();
  return link;
}

inline json link_to_json(const Link3& link) {
  json j;
  j["components"] = {curve_to_json(link.X), curve_to_json(link.Y), curve_to_json(link.Z)};
  return j;
}

// --- open-book spec files --------------------------------------------------------
//
// { "X": { "winding": n, "theta_perturbation": [[a,b],...],
//          "w_cos": [[re,im],...], "w_sin": [[re,im],...] }, "Y": {...} }

inline OpenBookSpec open_book_spec_from_json(const json& j, const std::string& where) {
  OpenBookSpec spec;
  if (!j.contains("winding")) fail(errc::io_error, where + ": missing 'winding'");
  spec.winding = j["winding"].get<int>();
  auto pairs = [&](const char* key) {
    std::vector<std::array<double, 2>> out;
    if (!j.contains(key)) return out;
    for (const auto& row : j[key]) {
      if (!row.is_array() || row.size() != 2)
        fail(errc::io_error, where + ": '" + std::string(key) + "' rows must hold 2 floats");
      out.push_back({row[0].get<double>(), row[1].get<double>()});
    }
    return out;
  };
  spec.theta_perturbation = pairs("theta_perturbation");
  spec.w_cos = pairs("w_cos");
  spec.w_sin = pairs("w_sin");
  if (spec.w_cos.empty()) fail(errc::io_error, where + ": 'w_cos' must not be empty");
  spec.validate();
  return spec;
}

inline Link3 open_book_link_from_json(const json& j) {
  if (!j.contains("X") || !j.contains("Y"))
    fail(errc::io_error, "open-book file: expected 'X' and 'Y' specs");
  return build_open_book_link(open_book_spec_from_json(j["X"], "X"),
                              open_book_spec_from_json(j["Y"], "Y"));
}

// --- diagram files ----------------------------------------------------------------
//
// { "curves": [ { "vertices": [[s,t],...], "framing": n, "vertical_winding": r } ],
//   "points": [ { "at": [s,t], "sign": +-1, "framing": n } ] }

inline ToralDiagram diagram_from_json(const json& j) {
  ToralDiagram d;
  if (j.contains("curves"))
    for (const auto& c : j["curves"]) {
      if (!c.contains("vertices")) fail(errc::io_error, "diagram: curve without 'vertices'");
      TorusPolyline poly;
      for (const auto& v : c["vertices"]) {
        if (!v.is_array() || v.size() != 2)
          fail(errc::io_error, "diagram: vertices must be [s,t] pairs");
        poly.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
      }
      long long framing = c.value("framing", 0LL);
      long long winding = c.value("vertical_winding", 0LL);
      d.components.push_back(make_curve(std::move(poly), framing, winding));
    }
  if (j.contains("points"))
    for (const auto& p : j["points"]) {
      if (!p.contains("at")) fail(errc::io_error, "diagram: point without 'at'");
      int sign = p.value("sign", 1);
      long long framing = p.value("framing", 0LL);
      d.components.push_back(
          make_point(p["at"][0].get<double>(), p["at"][1].get<double>(), sign, framing));
    }
  d.validate();
  return d;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(errc::io_error, "cannot parse '" + path + "': " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  if (path.empty()) fail(errc::io_error, "empty output path");
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
  out << text;
}

// --- built-in registry --------------------------------------------------------------
//
// Names: borromean | unlink | clasp | generic-borromean | split | lpqr:p,q,r
// Anything else is treated as a path to a link file (or an open-book spec file
// holding "X"/"Y").

inline Link3 resolve_link(const std::string& source) {
  if (source == "borromean") return builtin_borromean();
  if (source == "unlink") return builtin_unlink();
  if (source == "clasp") return builtin_clasp();
  if (source == "generic-borromean") return builtin_generic_borromean();
  if (source == "split") return builtin_split_pages();
  if (source.rfind("lpqr:", 0) == 0) {
    int p, q, r;
    char c1, c2;
    std::istringstream is(source.substr(5));
    if (!(is >> p >> c1 >> q >> c2 >> r) || c1 != ',' || c2 != ',')
      fail(errc::bad_input, "lpqr spec must look like lpqr:5,3,-2");
    return builtin_generic_lpqr(p, q, r);
  }
  json j = load_json_file(source);
  if (j.contains("components")) return link_from_json(j);
  if (j.contains("X")) return open_book_link_from_json(j);
  fail(errc::io_error, "'" + source + "': unrecognized link file layout");
}

} // namespace triplelink
