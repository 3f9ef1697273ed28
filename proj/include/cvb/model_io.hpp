#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cvb/error.hpp"
#include "cvb/fit2d.hpp"
#include "cvb/rectify.hpp"

namespace cvb {

inline constexpr int kModelVersion = 1;

/// Shortest-free decimal rendering with 17 significant digits. Always carries
/// a '.' or exponent so the value reads back as a floating-point number
/// (keeps the sign of -0.0).
[[nodiscard]] inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void write_submodel(std::string& out, std::string_view name, const ChebModel2D& m, const SubFitStats& st,
                           bool last) {
  out += "  \"";
  out += name;
  out += "\": {\n";
  out += "    \"xmap\": [" + format_real(m.xmap.lo()) + ", " + format_real(m.xmap.hi()) + "],\n";
  out += "    \"ymap\": [" + format_real(m.ymap.lo()) + ", " + format_real(m.ymap.hi()) + "],\n";
  out += "    \"stats\": {\"terms\": " + std::to_string(st.terms) +
         ", \"max_abs_residual\": " + format_real(st.max_abs_residual) +
         ", \"rms_residual\": " + format_real(st.rms_residual) +
         ", \"converged\": " + (st.converged ? "true" : "false") + "},\n";
  out += "    \"terms\": [";
  bool first = true;
  for (const auto& [t, a] : m.coeffs) {  // visit order
    out += first ? "\n" : ",\n";
    out += "      [" + std::to_string(t.i) + ", " + std::to_string(t.j) + ", " + format_real(a) + "]";
    first = false;
  }
  out += first ? "]\n" : "\n    ]\n";
  out += last ? "  }\n" : "  },\n";
}

using json = nlohmann::json;

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("field '" + path + "': expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
  return *it;
}

inline double real_of(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError("field '" + path + "': expected a number");
  return v.get<double>();
}

inline std::size_t count_of(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) throw ParseError("field '" + path + "': expected a non-negative integer");
  return v.get<std::size_t>();
}

inline DomainMap map_of(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) throw ParseError("field '" + path + "': expected [lo, hi]");
  try {
    return {real_of(v[0], path + "[0]"), real_of(v[1], path + "[1]")};
  } catch (const ArgumentError& e) {
    throw ParseError("field '" + path + "': " + e.what());
  }
}

inline ChebModel2D read_submodel(const json& doc, const std::string& name, std::size_t degree_bound,
                                 SubFitStats& stats) {
  const auto& rec = field(doc, name, "");
  ChebModel2D m;
  m.degree_bound = degree_bound;
  m.xmap = map_of(field(rec, "xmap", name), name + ".xmap");
  m.ymap = map_of(field(rec, "ymap", name), name + ".ymap");
  const auto& terms = field(rec, "terms", name);
  if (!terms.is_array()) throw ParseError("field '" + name + ".terms': expected a list");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto path = name + ".terms[" + std::to_string(k) + "]";
    const auto& t = terms[k];
    if (!t.is_array() || t.size() != 3) throw ParseError("field '" + path + "': expected [i, j, coefficient]");
    const TermIndex idx{count_of(t[0], path + "[0]"), count_of(t[1], path + "[1]")};
    if (idx.degree() >= degree_bound) throw ParseError("field '" + path + "': term exceeds degree_bound");
    if (!m.coeffs.emplace(idx, real_of(t[2], path + "[2]")).second)
      throw ParseError("field '" + path + "': duplicate term");
  }
  if (const auto it = rec.find("stats"); it != rec.end()) {
    const auto sp = name + ".stats";
    stats.terms = count_of(field(*it, "terms", sp), sp + ".terms");
    stats.max_abs_residual = real_of(field(*it, "max_abs_residual", sp), sp + ".max_abs_residual");
    stats.rms_residual = real_of(field(*it, "rms_residual", sp), sp + ".rms_residual");
    const auto& conv = field(*it, "converged", sp);
    if (!conv.is_boolean()) throw ParseError("field '" + sp + ".converged': expected true/false");
    stats.converged = conv.get<bool>();
  }
  return m;
}

}  // namespace detail

/// Canonical JSON document for a calibration model. Terms are listed in
/// visit order and every real carries 17 significant digits, so
/// save(load(save(m))) == save(m) byte for byte.
[[nodiscard]] inline std::string save_model(const CalibrationModel& model) {
  std::string out = "{\n";
  out += "  \"version\": " + std::to_string(kModelVersion) + ",\n";
  out += "  \"epsilon\": " + format_real(model.epsilon) + ",\n";
  out += "  \"inverse_epsilon\": " + format_real(model.inverse_epsilon) + ",\n";
  out += "  \"degree_bound\": " + std::to_string(model.degree_bound) + ",\n";
  detail::write_submodel(out, "fwd_x", model.fwd_x, model.stats_fwd_x, false);
  detail::write_submodel(out, "fwd_y", model.fwd_y, model.stats_fwd_y, false);
  detail::write_submodel(out, "inv_u", model.inv_u, model.stats_inv_u, false);
  detail::write_submodel(out, "inv_v", model.inv_v, model.stats_inv_v, true);
  out += "}\n";
  return out;
}

[[nodiscard]] inline CalibrationModel load_model(std::string_view text) {
  detail::json doc;
  try {
    doc = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    const auto upto = text.substr(0, std::min<std::size_t>(e.byte, text.size()));
    const auto line = 1 + std::count(upto.begin(), upto.end(), '\n');
    throw ParseError("model document line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("model document: top level must be an object");

  const auto& ver = detail::field(doc, "version", "");
  if (!ver.is_number_integer()) throw ParseError("field 'version': expected an integer");
  if (ver.get<long long>() != kModelVersion)
    throw VersionError("unsupported model version " + std::to_string(ver.get<long long>()));

  CalibrationModel model;
  model.epsilon = detail::real_of(detail::field(doc, "epsilon", ""), "epsilon");
  model.inverse_epsilon = model.epsilon;
  if (const auto it = doc.find("inverse_epsilon"); it != doc.end())
    model.inverse_epsilon = detail::real_of(*it, "inverse_epsilon");
  model.degree_bound = detail::count_of(detail::field(doc, "degree_bound", ""), "degree_bound");
  if (model.degree_bound < 1) throw ParseError("field 'degree_bound': must be >= 1");

  model.fwd_x = detail::read_submodel(doc, "fwd_x", model.degree_bound, model.stats_fwd_x);
  model.fwd_y = detail::read_submodel(doc, "fwd_y", model.degree_bound, model.stats_fwd_y);
  model.inv_u = detail::read_submodel(doc, "inv_u", model.degree_bound, model.stats_inv_u);
  model.inv_v = detail::read_submodel(doc, "inv_v", model.degree_bound, model.stats_inv_v);
  return model;
}

}  // namespace cvb
