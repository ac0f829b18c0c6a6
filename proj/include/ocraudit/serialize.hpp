#ifndef OCRAUDIT_SERIALIZE_HPP
#define OCRAUDIT_SERIALIZE_HPP

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ocraudit/classify.hpp"
#include "ocraudit/kb.hpp"
#include "ocraudit/synth.hpp"

namespace ocraudit {

using json = nlohmann::json;

namespace detail {

/// Floats in reports are quantized to 6 decimal places so that dumps are
/// byte-stable across platforms.
inline double round6(double v) { return std::round(v * 1e6) / 1e6; }

inline json box_to_json(const Box& box) {
  return json{{"x", box.x}, {"y", box.y}, {"w", box.w}, {"h", box.h}};
}

inline Box box_from_json(const json& j) {
  return Box{j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(),
             j.at("h").get<int>()};
}

inline json separation_to_json(const SeparationResult& r) {
  return json{{"separated", r.separated},
              {"char_interval", {r.char_interval.first, r.char_interval.second}},
              {"bg_interval", {r.bg_interval.first, r.bg_interval.second}},
              {"gap", r.gap}};
}

inline SeparationResult separation_from_json(const json& j) {
  SeparationResult r;
  r.separated = j.at("separated").get<bool>();
  r.char_interval = {j.at("char_interval").at(0).get<int>(),
                     j.at("char_interval").at(1).get<int>()};
  r.bg_interval = {j.at("bg_interval").at(0).get<int>(),
                   j.at("bg_interval").at(1).get<int>()};
  r.gap = j.at("gap").get<int>();
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// AuditReport
// ---------------------------------------------------------------------------

inline json to_json(const AuditReport& report) {
  json j;
  j["level"] = std::string(to_string(report.level));
  j["required_grade"] = std::string(to_string(report.required_grade));
  j["mask_provenance"] = std::string(to_string(report.mask_provenance));
  j["global"] = detail::separation_to_json(report.global_separation);

  json regions = json::array();
  for (const RegionAudit& r : report.regions) {
    json entry;
    entry["box"] = detail::box_to_json(r.box);
    entry["sep"] = detail::separation_to_json(r.separation);
    entry["sat"] = json{{"blown_out", r.saturation.blown_out},
                        {"blocked_up", r.saturation.blocked_up},
                        {"white_fraction",
                         detail::round6(r.saturation.white_fraction)},
                        {"black_fraction",
                         detail::round6(r.saturation.black_fraction)}};
    entry["bg_fallback"] = r.bg_fallback;
    regions.push_back(std::move(entry));
  }
  j["regions"] = std::move(regions);

  json failing = json::array();
  for (const Box& box : report.failing_regions) {
    failing.push_back(detail::box_to_json(box));
  }
  j["failing_regions"] = std::move(failing);

  j["policy"] = json{{"alpha", detail::round6(report.policy.separation.alpha)},
                     {"min_gap", report.policy.separation.min_gap},
                     {"pad", report.policy.pad},
                     {"t_black", report.policy.saturation.t_black},
                     {"t_white", report.policy.saturation.t_white},
                     {"f_sat", detail::round6(report.policy.saturation.f_sat)},
                     {"connectivity", report.policy.connectivity},
                     {"merge_gap", report.policy.merge_gap}};
  return j;
}

inline AuditReport audit_report_from_json(const json& j) {
  AuditReport report;
  report.level = parse_level(j.at("level").get<std::string>());
  report.required_grade = parse_grade(j.at("required_grade").get<std::string>());
  const std::string provenance = j.at("mask_provenance").get<std::string>();
  if (provenance == "ground_truth") {
    report.mask_provenance = MaskProvenance::GroundTruth;
  } else if (provenance == "estimated") {
    report.mask_provenance = MaskProvenance::Estimated;
  } else {
    throw ValidationError("unknown mask_provenance '" + provenance + "'");
  }
  report.global_separation = detail::separation_from_json(j.at("global"));

  for (const json& entry : j.at("regions")) {
    RegionAudit r;
    r.box = detail::box_from_json(entry.at("box"));
    r.separation = detail::separation_from_json(entry.at("sep"));
    const json& sat = entry.at("sat");
    r.saturation.blown_out = sat.at("blown_out").get<bool>();
    r.saturation.blocked_up = sat.at("blocked_up").get<bool>();
    r.saturation.white_fraction = sat.at("white_fraction").get<double>();
    r.saturation.black_fraction = sat.at("black_fraction").get<double>();
    r.bg_fallback = entry.at("bg_fallback").get<bool>();
    report.regions.push_back(std::move(r));
  }
  for (const json& box : j.at("failing_regions")) {
    report.failing_regions.push_back(detail::box_from_json(box));
  }

  const json& policy = j.at("policy");
  report.policy.separation.alpha = policy.at("alpha").get<double>();
  report.policy.separation.min_gap = policy.at("min_gap").get<int>();
  report.policy.pad = policy.at("pad").get<int>();
  report.policy.saturation.t_black = policy.at("t_black").get<int>();
  report.policy.saturation.t_white = policy.at("t_white").get<int>();
  report.policy.saturation.f_sat = policy.at("f_sat").get<double>();
  report.policy.connectivity = policy.at("connectivity").get<int>();
  report.policy.merge_gap = policy.at("merge_gap").get<int>();
  return report;
}

inline std::string to_text(const AuditReport& report) {
  std::ostringstream out;
  out << "illumination audit\n";
  out << "  level:          " << to_string(report.level) << "\n";
  out << "  required grade: " << to_string(report.required_grade) << "\n";
  out << "  mask:           "
      << (report.mask_provenance == MaskProvenance::GroundTruth
              ? "ground truth"
              : "ESTIMATED (best-effort thresholding; unreliable under "
                "non-uniform illumination)")
      << "\n";
  const SeparationResult& g = report.global_separation;
  out << "  global:         " << (g.separated ? "separated" : "overlap")
      << "  char [" << g.char_interval.first << ", " << g.char_interval.second
      << "]  bg [" << g.bg_interval.first << ", " << g.bg_interval.second
      << "]  gap " << g.gap << "\n";
  out << "  regions:        " << report.regions.size() << " analyzed, "
      << report.failing_regions.size() << " failing\n";
  for (const RegionAudit& r : report.regions) {
    out << "    box (" << r.box.x << ", " << r.box.y << ", " << r.box.w
        << ", " << r.box.h << ")  "
        << (r.separation.separated ? "separated" : "overlap") << "  gap "
        << r.separation.gap;
    if (r.saturation.blown_out) out << "  BLOWN-OUT";
    if (r.saturation.blocked_up) out << "  BLOCKED-UP";
    if (r.bg_fallback) out << "  (global background substituted)";
    out << "\n";
  }
  const AuditPolicy& p = report.policy;
  out << "  policy:         alpha=" << p.separation.alpha
      << " min_gap=" << p.separation.min_gap << " pad=" << p.pad
      << " t_black=" << p.saturation.t_black
      << " t_white=" << p.saturation.t_white << " f_sat=" << p.saturation.f_sat
      << " connectivity=" << p.connectivity << " merge_gap=" << p.merge_gap
      << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// DiagnosisReport
// ---------------------------------------------------------------------------

inline json to_json(const DiagnosisReport& report) {
  json j;
  j["no_detected_phenomena"] = report.no_detected_phenomena;

  json phenomena = json::array();
  for (Phenomenon p : report.phenomena) {
    phenomena.push_back(std::string(to_string(p)));
  }
  j["phenomena"] = std::move(phenomena);

  json groups = json::array();
  for (const ClassificationGroup& group : report.groups) {
    json matches = json::array();
    for (const PhenomenonMatch& match : group.matches) {
      json codes = json::array();
      for (const std::string& code : match.codes) codes.push_back(code);
      matches.push_back(json{{"phenomenon", std::string(to_string(match.phenomenon))},
                             {"codes", std::move(codes)}});
    }
    groups.push_back(
        json{{"classification", std::string(to_string(group.classification))},
             {"phenomena", std::move(matches)}});
  }
  j["classifications"] = std::move(groups);

  json factors = json::array();
  for (const FactorEntry& entry : report.factors) {
    factors.push_back(
        json{{"code", entry.code},
             {"classification", std::string(to_string(entry.classification))},
             {"description", entry.description},
             {"remediation", entry.remediation}});
  }
  j["factors"] = std::move(factors);
  return j;
}

inline std::string to_text(const DiagnosisReport& report) {
  std::ostringstream out;
  out << "diagnosis\n";
  if (report.no_detected_phenomena) {
    out << "  no detected phenomena\n";
    return out.str();
  }
  out << "  phenomena:";
  for (Phenomenon p : report.phenomena) out << " " << to_string(p);
  out << "\n";
  for (const ClassificationGroup& group : report.groups) {
    out << "  " << to_string(group.classification) << ":\n";
    for (const PhenomenonMatch& match : group.matches) {
      out << "    " << to_string(match.phenomenon) << ":";
      for (const std::string& code : match.codes) out << " " << code;
      out << "\n";
    }
  }
  out << "  factors to recheck:\n";
  for (const FactorEntry& entry : report.factors) {
    out << "    " << entry.code << "  " << entry.description;
    if (!entry.remediation.empty()) out << "  [hint: " << entry.remediation << "]";
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// PlanReport / UsageProfile
// ---------------------------------------------------------------------------

inline json to_json(const PlanReport& report) {
  json j;
  json conditions = json::array();
  for (const std::string& c : report.conditions) conditions.push_back(c);
  j["conditions"] = std::move(conditions);

  const auto items_to_json = [](const std::vector<PlanItem>& items) {
    json array = json::array();
    for (const PlanItem& item : items) {
      array.push_back(json{{"code", item.code},
                           {"description", item.description},
                           {"note", item.note}});
    }
    return array;
  };
  j["matched"] = items_to_json(report.matched);
  j["not_applicable"] = items_to_json(report.not_applicable);

  json unreviewed = json::array();
  for (const std::string& code : report.unreviewed) unreviewed.push_back(code);
  j["unreviewed"] = std::move(unreviewed);
  return j;
}

inline std::string to_text(const PlanReport& report) {
  std::ostringstream out;
  out << "augmentation plan\n";
  out << "  usage conditions:\n";
  for (const std::string& c : report.conditions) out << "    - " << c << "\n";
  out << "  variation axes to prepare (" << report.matched.size() << "):\n";
  for (const PlanItem& item : report.matched) {
    out << "    " << item.code << "  " << item.description;
    if (!item.note.empty()) out << "  (" << item.note << ")";
    out << "\n";
  }
  out << "  not applicable (" << report.not_applicable.size() << "):\n";
  for (const PlanItem& item : report.not_applicable) {
    out << "    " << item.code << "  " << item.note << "\n";
  }
  out << "  unreviewed (" << report.unreviewed.size() << "):";
  for (const std::string& code : report.unreviewed) out << " " << code;
  out << "\n";
  return out.str();
}

inline UsageProfile usage_profile_from_json(const json& j) {
  UsageProfile profile;
  if (j.contains("conditions")) {
    for (const json& c : j.at("conditions")) {
      profile.conditions.push_back(c.get<std::string>());
    }
  }
  if (j.contains("judgments")) {
    for (const auto& [code, body] : j.at("judgments").items()) {
      Judgment judgment;
      judgment.match = body.at("match").get<bool>();
      if (body.contains("note")) judgment.note = body.at("note").get<std::string>();
      profile.judgments[code] = std::move(judgment);
    }
  }
  return profile;
}

// ---------------------------------------------------------------------------
// SceneSpec
// ---------------------------------------------------------------------------

inline SceneSpec scene_spec_from_json(const json& j) {
  SceneSpec spec;
  spec.width = j.at("width").get<int>();
  spec.height = j.at("height").get<int>();
  if (j.contains("bg_level")) spec.bg_level = j.at("bg_level").get<int>();
  if (j.contains("char_level")) spec.char_level = j.at("char_level").get<int>();
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint32_t>();
  if (j.contains("noise_sigma")) {
    spec.noise_sigma = j.at("noise_sigma").get<double>();
  }
  if (j.contains("glyphs")) {
    for (const json& g : j.at("glyphs")) {
      Glyph glyph;
      glyph.digit = g.at("digit").get<int>();
      glyph.x = g.at("x").get<int>();
      glyph.y = g.at("y").get<int>();
      if (g.contains("scale")) glyph.scale = g.at("scale").get<int>();
      spec.glyphs.push_back(glyph);
    }
  }
  if (j.contains("fields")) {
    for (const json& f : j.at("fields")) {
      const std::string type = f.at("type").get<std::string>();
      if (type == "uniform") {
        spec.fields.push_back(Uniform{f.at("m").get<double>()});
      } else if (type == "linear_gradient") {
        LinearGradient g;
        g.m0 = f.at("m0").get<double>();
        g.m1 = f.at("m1").get<double>();
        const std::string axis = f.at("axis").get<std::string>();
        if (axis == "x") {
          g.axis = LinearGradient::Axis::X;
        } else if (axis == "y") {
          g.axis = LinearGradient::Axis::Y;
        } else {
          throw ValidationError("gradient axis must be 'x' or 'y'");
        }
        spec.fields.push_back(g);
      } else if (type == "spotlight") {
        Spotlight s;
        s.cx = f.at("cx").get<double>();
        s.cy = f.at("cy").get<double>();
        s.sigma = f.at("sigma").get<double>();
        s.amplitude = f.at("amplitude").get<double>();
        spec.fields.push_back(s);
      } else if (type == "shadow_rect") {
        ShadowRect r;
        r.box = detail::box_from_json(f.at("box"));
        r.m = f.at("m").get<double>();
        spec.fields.push_back(r);
      } else {
        throw ValidationError("unknown field type '" + type + "'");
      }
    }
  }
  return spec;
}

/// Parses a JSON document from a file; I/O failures and JSON syntax errors
/// are distinguished from schema violations.
inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

inline SceneSpec load_scene_spec(const std::string& path) {
  try {
    return scene_spec_from_json(load_json(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": invalid scene spec: " + e.what());
  }
}

inline UsageProfile load_usage_profile(const std::string& path) {
  try {
    return usage_profile_from_json(load_json(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": invalid usage profile: " + e.what());
  }
}

/// Canonical dump used for all report output: sorted keys (nlohmann objects
/// are alphabetically ordered), two-space indent, trailing newline.
inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

}  // namespace ocraudit

#endif  // OCRAUDIT_SERIALIZE_HPP
