#ifndef OCRAUDIT_KB_HPP
#define OCRAUDIT_KB_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <utility>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ocraudit/classify.hpp"
#include "ocraudit/image.hpp"

namespace ocraudit {

/// Observable image degradation modes that disturbance factors link to.
/// Closed enumeration; extending it is a KB schema change.
enum class Phenomenon {
  BlockedUpShadows,
  BlownOutHighlights,
  Shading,
  Shiny,
  LowContrast,
  LowDefinition,
  Fading,
  Defocus,
  MotionBlur,
  Tilt,
  ShadowOverlap,
  Shielding,
};

inline constexpr std::pair<Phenomenon, std::string_view> kPhenomenonNames[] = {
    {Phenomenon::BlockedUpShadows, "blocked_up_shadows"},
    {Phenomenon::BlownOutHighlights, "blown_out_highlights"},
    {Phenomenon::Shading, "shading"},
    {Phenomenon::Shiny, "shiny"},
    {Phenomenon::LowContrast, "low_contrast"},
    {Phenomenon::LowDefinition, "low_definition"},
    {Phenomenon::Fading, "fading"},
    {Phenomenon::Defocus, "defocus"},
    {Phenomenon::MotionBlur, "motion_blur"},
    {Phenomenon::Tilt, "tilt"},
    {Phenomenon::ShadowOverlap, "shadow_overlap"},
    {Phenomenon::Shielding, "shielding"},
};

inline std::string_view to_string(Phenomenon p) {
  for (const auto& [value, name] : kPhenomenonNames) {
    if (value == p) return name;
  }
  return "?";
}

inline Phenomenon parse_phenomenon(std::string_view name) {
  for (const auto& [value, candidate] : kPhenomenonNames) {
    if (candidate == name) return value;
  }
  throw ValidationError("unknown phenomenon '" + std::string(name) + "'");
}

/// Source element of the digitization process a factor belongs to.
enum class FactorClass { Illuminant, Obstacle, Object, CameraPhotographer };

inline constexpr FactorClass kFactorClassOrder[] = {
    FactorClass::Illuminant, FactorClass::Obstacle, FactorClass::Object,
    FactorClass::CameraPhotographer};

inline std::string_view to_string(FactorClass c) {
  switch (c) {
    case FactorClass::Illuminant:
      return "illuminant";
    case FactorClass::Obstacle:
      return "obstacle";
    case FactorClass::Object:
      return "object";
    case FactorClass::CameraPhotographer:
      return "camera_photographer";
  }
  return "?";
}

inline FactorClass parse_factor_class(std::string_view name) {
  if (name == "illuminant") return FactorClass::Illuminant;
  if (name == "obstacle") return FactorClass::Obstacle;
  if (name == "object") return FactorClass::Object;
  if (name == "camera_photographer") return FactorClass::CameraPhotographer;
  throw ValidationError("unknown classification '" + std::string(name) + "'");
}

inline char factor_class_prefix(FactorClass c) {
  switch (c) {
    case FactorClass::Illuminant:
      return 'L';
    case FactorClass::Obstacle:
      return 'O';
    case FactorClass::Object:
      return 'T';
    case FactorClass::CameraPhotographer:
      return 'C';
  }
  return '?';
}

/// Where an entry comes from: the published factor table, a local extension,
/// or a code whose table row is not publicly available.
enum class Provenance { Paper, UserExtension, PlaceholderUnknown };

inline std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Paper:
      return "paper";
    case Provenance::UserExtension:
      return "user_extension";
    case Provenance::PlaceholderUnknown:
      return "placeholder_unknown";
  }
  return "?";
}

inline Provenance parse_provenance(std::string_view name) {
  if (name == "paper") return Provenance::Paper;
  if (name == "user_extension") return Provenance::UserExtension;
  if (name == "placeholder_unknown") return Provenance::PlaceholderUnknown;
  throw ValidationError("unknown provenance '" + std::string(name) + "'");
}

/// One coded external disturbance factor, e.g. L-05.
struct FactorEntry {
  std::string code;
  FactorClass classification = FactorClass::Illuminant;
  std::string description;
  std::set<Phenomenon> phenomena;
  Provenance provenance = Provenance::Paper;
  std::string remediation;  // optional per-code hint

  friend bool operator==(const FactorEntry&, const FactorEntry&) = default;
};

inline bool valid_factor_code(std::string_view code) {
  return code.size() == 4 &&
         (code[0] == 'L' || code[0] == 'O' || code[0] == 'T' ||
          code[0] == 'C') &&
         code[1] == '-' && std::isdigit(static_cast<unsigned char>(code[2])) &&
         std::isdigit(static_cast<unsigned char>(code[3]));
}

/// The external disturbance factor table. Immutable after load; queries are
/// read-only and safe for concurrent use.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  explicit KnowledgeBase(std::vector<FactorEntry> entries)
      : entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      validate_entry(entries_[i]);
      if (!index_.emplace(entries_[i].code, i).second) {
        throw ValidationError("duplicate factor code '" + entries_[i].code +
                              "'");
      }
    }
  }

  static KnowledgeBase parse(std::istream& in);
  static KnowledgeBase parse(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  const std::vector<FactorEntry>& entries() const { return entries_; }

  const FactorEntry* find(std::string_view code) const {
    const auto it = index_.find(std::string(code));
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  bool contains(std::string_view code) const { return find(code) != nullptr; }

  /// Tab-separated line format, one entry per line. Reparsing the result
  /// reproduces the entries structurally (comments are not preserved).
  std::string serialize() const {
    std::ostringstream out;
    out << "# code\tclassification\tdescription\tphenomena\tprovenance\tremediation\n";
    for (const FactorEntry& e : entries_) {
      out << e.code << '\t' << to_string(e.classification) << '\t'
          << e.description << '\t';
      bool first = true;
      for (Phenomenon p : e.phenomena) {
        if (!first) out << ';';
        out << to_string(p);
        first = false;
      }
      out << '\t' << to_string(e.provenance) << '\t' << e.remediation << '\n';
    }
    return out.str();
  }

 private:
  static void validate_entry(const FactorEntry& entry) {
    if (!valid_factor_code(entry.code)) {
      throw ValidationError("malformed factor code '" + entry.code +
                            "' (expected [LOTC]-NN)");
    }
    if (entry.code[0] != factor_class_prefix(entry.classification)) {
      throw ValidationError(
          "factor code '" + entry.code + "' prefix does not match classification '" +
          std::string(to_string(entry.classification)) + "'");
    }
  }

  std::vector<FactorEntry> entries_;
  std::map<std::string, std::size_t> index_;
};

inline KnowledgeBase KnowledgeBase::parse(std::istream& in) {
  std::vector<FactorEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5 && fields.size() != 6) {
      throw ValidationError(
          "kb line " + std::to_string(line_no) +
          ": expected 5 or 6 tab-separated fields, got " +
          std::to_string(fields.size()));
    }

    FactorEntry entry;
    entry.code = fields[0];
    try {
      entry.classification = parse_factor_class(fields[1]);
      if (!fields[3].empty()) {
        std::istringstream phenomena(fields[3]);
        std::string name;
        while (std::getline(phenomena, name, ';')) {
          entry.phenomena.insert(parse_phenomenon(name));
        }
      }
      entry.provenance = parse_provenance(fields[4]);
    } catch (const ValidationError& e) {
      throw ValidationError("kb line " + std::to_string(line_no) + ": " +
                            e.what());
    }
    entry.description = fields[2];
    if (fields.size() == 6) entry.remediation = fields[5];
    entries.push_back(std::move(entry));
  }
  return KnowledgeBase(std::move(entries));
}

inline KnowledgeBase load_kb(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open file");
  return KnowledgeBase::parse(in);
}

// ---------------------------------------------------------------------------
// Diagnosis: phenomena observed in a capture -> factors to recheck.
// ---------------------------------------------------------------------------

struct PhenomenonMatch {
  Phenomenon phenomenon;
  std::vector<std::string> codes;  // ascending
};

struct ClassificationGroup {
  FactorClass classification;
  std::vector<PhenomenonMatch> matches;  // only phenomena with >= 1 code
};

struct DiagnosisReport {
  std::vector<Phenomenon> phenomena;  // requested, in enumeration order
  std::vector<ClassificationGroup> groups;  // all four classifications, fixed order
  std::vector<FactorEntry> factors;  // deduplicated, classification order then code
  bool no_detected_phenomena = false;
};

/// All factors linked to each requested phenomenon, grouped by
/// classification in the fixed order Illuminant, Obstacle, Object,
/// Camera/Photographer. Links on user_extension entries participate only
/// when `include_extensions` is set.
inline DiagnosisReport phenomena_to_factors(const KnowledgeBase& kb,
                                            const std::set<Phenomenon>& phenomena,
                                            bool include_extensions = false) {
  if (phenomena.empty()) {
    throw ValidationError("empty phenomena set");
  }

  DiagnosisReport report;
  report.phenomena.assign(phenomena.begin(), phenomena.end());

  std::vector<std::string> factor_codes;
  for (FactorClass c : kFactorClassOrder) {
    ClassificationGroup group;
    group.classification = c;
    for (Phenomenon p : phenomena) {
      PhenomenonMatch match;
      match.phenomenon = p;
      for (const FactorEntry& entry : kb.entries()) {
        if (entry.classification != c) continue;
        if (entry.provenance == Provenance::UserExtension &&
            !include_extensions) {
          continue;
        }
        if (entry.phenomena.count(p)) match.codes.push_back(entry.code);
      }
      std::sort(match.codes.begin(), match.codes.end());
      if (!match.codes.empty()) {
        for (const std::string& code : match.codes) {
          factor_codes.push_back(code);
        }
        group.matches.push_back(std::move(match));
      }
    }
    report.groups.push_back(std::move(group));
  }

  std::sort(factor_codes.begin(), factor_codes.end());
  factor_codes.erase(std::unique(factor_codes.begin(), factor_codes.end()),
                     factor_codes.end());
  for (FactorClass c : kFactorClassOrder) {
    for (const std::string& code : factor_codes) {
      const FactorEntry* entry = kb.find(code);
      if (entry && entry->classification == c) {
        report.factors.push_back(*entry);
      }
    }
  }
  return report;
}

/// Maps audit findings to phenomena and delegates to phenomena_to_factors.
/// Separation failure (global or per-region) reads as shading; saturation
/// flags read as blown-out highlights / blocked-up shadows. Phenomena the
/// audit cannot observe (shiny, tilt, ...) are never inferred.
inline DiagnosisReport diagnose_from_audit(const KnowledgeBase& kb,
                                           const AuditReport& audit,
                                           bool include_extensions = false) {
  std::set<Phenomenon> phenomena;
  if (!audit.global_separation.separated) {
    phenomena.insert(Phenomenon::Shading);
  }
  for (const RegionAudit& region : audit.regions) {
    if (!region.separation.separated) phenomena.insert(Phenomenon::Shading);
    if (region.saturation.blown_out) {
      phenomena.insert(Phenomenon::BlownOutHighlights);
    }
    if (region.saturation.blocked_up) {
      phenomena.insert(Phenomenon::BlockedUpShadows);
    }
  }

  if (phenomena.empty()) {
    DiagnosisReport report;
    report.no_detected_phenomena = true;
    for (FactorClass c : kFactorClassOrder) {
      report.groups.push_back(ClassificationGroup{c, {}});
    }
    return report;
  }
  return phenomena_to_factors(kb, phenomena, include_extensions);
}

// ---------------------------------------------------------------------------
// Augmentation planning: usage conditions -> training-data variation axes.
// ---------------------------------------------------------------------------

struct Judgment {
  bool match = false;
  std::string note;
};

/// Organized usage conditions plus per-factor match judgments against them.
struct UsageProfile {
  std::vector<std::string> conditions;
  std::map<std::string, Judgment> judgments;  // code -> judgment
};

struct PlanItem {
  std::string code;
  std::string description;
  std::string note;
};

struct PlanReport {
  std::vector<std::string> conditions;
  std::vector<PlanItem> matched;         // the augmentation axes to prepare
  std::vector<PlanItem> not_applicable;  // judged Mismatch
  std::vector<std::string> unreviewed;   // KB codes with no judgment
};

namespace detail {

inline bool code_order(const KnowledgeBase& kb, const std::string& a,
                       const std::string& b) {
  const FactorEntry* ea = kb.find(a);
  const FactorEntry* eb = kb.find(b);
  const int ca = static_cast<int>(ea->classification);
  const int cb = static_cast<int>(eb->classification);
  return ca != cb ? ca < cb : a < b;
}

}  // namespace detail

/// Exactly the codes judged Match become the plan; Mismatch and unjudged
/// codes are reported separately and never planned.
inline PlanReport plan_augmentation(const KnowledgeBase& kb,
                                    const UsageProfile& profile) {
  for (const auto& [code, judgment] : profile.judgments) {
    if (!kb.contains(code)) {
      throw ValidationError("judgment on unknown factor code '" + code + "'");
    }
  }

  PlanReport report;
  report.conditions = profile.conditions;

  std::vector<std::string> codes;
  for (const FactorEntry& entry : kb.entries()) codes.push_back(entry.code);
  std::sort(codes.begin(), codes.end(),
            [&kb](const std::string& a, const std::string& b) {
              return detail::code_order(kb, a, b);
            });

  for (const std::string& code : codes) {
    const FactorEntry* entry = kb.find(code);
    const auto it = profile.judgments.find(code);
    if (it == profile.judgments.end()) {
      report.unreviewed.push_back(code);
    } else if (it->second.match) {
      report.matched.push_back(
          PlanItem{code, entry->description, it->second.note});
    } else {
      report.not_applicable.push_back(
          PlanItem{code, entry->description, it->second.note});
    }
  }
  return report;
}

}  // namespace ocraudit

#endif  // OCRAUDIT_KB_HPP
