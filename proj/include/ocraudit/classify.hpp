#ifndef OCRAUDIT_CLASSIFY_HPP
#define OCRAUDIT_CLASSIFY_HPP

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "ocraudit/histogram.hpp"
#include "ocraudit/image.hpp"
#include "ocraudit/regions.hpp"
#include "ocraudit/separation.hpp"

namespace ocraudit {

/// Severity of illumination non-uniformity, ordered I < II < III.
///   I   — character and background distributions separate globally.
///   II  — they overlap globally but separate within every one-character
///         region.
///   III — at least one region fails to separate; tonal clipping (blocked-up
///         shadows, blown-out highlights) lands here too.
enum class IlluminationLevel { I, II, III };

/// Declared robustness of an OCR device, ordered A < AA < X by capability.
enum class OcrGrade { A, AA, X };

inline std::string_view to_string(IlluminationLevel level) {
  switch (level) {
    case IlluminationLevel::I:
      return "I";
    case IlluminationLevel::II:
      return "II";
    case IlluminationLevel::III:
      return "III";
  }
  return "?";
}

inline std::string_view to_string(OcrGrade grade) {
  switch (grade) {
    case OcrGrade::A:
      return "A";
    case OcrGrade::AA:
      return "AA";
    case OcrGrade::X:
      return "X";
  }
  return "?";
}

inline IlluminationLevel parse_level(std::string_view text) {
  if (text == "I") return IlluminationLevel::I;
  if (text == "II") return IlluminationLevel::II;
  if (text == "III") return IlluminationLevel::III;
  throw ValidationError("unknown illumination level '" + std::string(text) +
                        "' (expected I, II or III)");
}

inline OcrGrade parse_grade(std::string_view text) {
  if (text == "A") return OcrGrade::A;
  if (text == "AA") return OcrGrade::AA;
  if (text == "X") return OcrGrade::X;
  throw ValidationError("unknown OCR grade '" + std::string(text) +
                        "' (expected A, AA or X)");
}

/// Minimum device grade that still functions well at the given level.
inline OcrGrade grade_required(IlluminationLevel level) {
  switch (level) {
    case IlluminationLevel::I:
      return OcrGrade::A;
    case IlluminationLevel::II:
      return OcrGrade::AA;
    case IlluminationLevel::III:
      return OcrGrade::X;
  }
  throw ValidationError("invalid illumination level");
}

/// Usage guidance bundled per grade.
inline const std::vector<std::string>& grade_guidance(OcrGrade grade) {
  static const std::vector<std::string> grade_a = {
      "It is primarily used indoors.",
      "A condition with uniform illumination that minimizes non-uniform "
      "illumination is ideal. In an environment with only one light source, "
      "keep the document/form at a distance from the light source.",
      "Ensure that shadows from surrounding objects or the photographer do "
      "not overlap with any part of the document/form as much as possible. "
      "If certain parts of the document/form inevitably end up in shadow, "
      "take measures to diminish those shadows; for instance, by using "
      "multiple light sources from different positions."};
  static const std::vector<std::string> grade_aa = {
      "It can be used indoors with almost no restrictions. However, ensure "
      "not to expose it to illumination light with strong directivity, such "
      "as intense spotlight lighting. Additionally, ensure that the strong "
      "shadows created by the illumination light do not partially overlap "
      "the document or form surface.",
      "When using it outdoors, take care to avoid the effects of direct "
      "sunlight. For example, ensure that the strong shadows cast by direct "
      "sunlight do not partially overlap the document or form surface."};
  static const std::vector<std::string> grade_x = {
      "It can be used both indoors and outdoors with almost no restrictions.",
      "However, at present, it is difficult to develop an OCR system that "
      "can operate in a general-purpose manner regardless of the occurrence "
      "of any of the three levels of non-uniform illumination. In addition, "
      "technological innovations, such as advances in camera technology and "
      "the interpolation of missing information through knowledge "
      "utilization are required."};
  switch (grade) {
    case OcrGrade::A:
      return grade_a;
    case OcrGrade::AA:
      return grade_aa;
    case OcrGrade::X:
      return grade_x;
  }
  throw ValidationError("invalid OCR grade");
}

struct Suitability {
  bool suitable = false;
  std::vector<std::string> guidance;  // usage guidance for the device grade
};

/// A device suits a capture condition when its grade meets or exceeds the
/// grade the level requires.
inline Suitability device_suitable(OcrGrade device, IlluminationLevel level) {
  Suitability s;
  s.suitable = static_cast<int>(device) >=
               static_cast<int>(grade_required(level));
  s.guidance = grade_guidance(device);
  return s;
}

enum class MaskProvenance { GroundTruth, Estimated };

inline std::string_view to_string(MaskProvenance p) {
  return p == MaskProvenance::GroundTruth ? "ground_truth" : "estimated";
}

/// Everything the audit pipeline can be tuned with. `connectivity`,
/// `merge_gap` and `pad` configure region construction; the rest configure
/// the per-histogram tests. The report echoes the whole set.
struct AuditPolicy {
  SeparationPolicy separation;
  SaturationPolicy saturation;
  int pad = 2;
  int connectivity = 8;
  int merge_gap = 0;
};

inline void validate(const AuditPolicy& policy) {
  validate(policy.separation);
  validate(policy.saturation);
  if (policy.pad < 0) throw ValidationError("pad must be >= 0");
  if (policy.connectivity != 4 && policy.connectivity != 8) {
    throw ValidationError("connectivity must be 4 or 8");
  }
  if (policy.merge_gap < 0) throw ValidationError("merge_gap must be >= 0");
}

struct RegionAudit {
  Box box;
  SeparationResult separation;
  SaturationFlags saturation;
  bool bg_fallback = false;  // region had no local Background pixels; the
                             // global Background histogram substituted
};

struct AuditReport {
  IlluminationLevel level = IlluminationLevel::I;
  OcrGrade required_grade = OcrGrade::A;
  SeparationResult global_separation;
  std::vector<RegionAudit> regions;
  std::vector<Box> failing_regions;
  MaskProvenance mask_provenance = MaskProvenance::GroundTruth;
  AuditPolicy policy;
};

/// Classifies the illumination level of one document image.
///
/// Level I when the global histograms separate; otherwise regions are
/// required and the verdict is Level II when all of them separate, Level III
/// with the failing boxes listed when any does not. Character pixels for a
/// region come from its box, Background pixels from the box dilated by the
/// region's pad (falling back to the global Background histogram if the
/// padded box has none).
///
/// Supplied regions are always evaluated for the report, but the level
/// decision consults them only after global separation fails, and
/// failing_regions is populated only for a Level III verdict.
inline AuditReport classify_level(const GrayImage& image,
                                  const PixelClassMask& mask,
                                  const std::vector<CharRegion>& regions,
                                  const AuditPolicy& policy = {},
                                  MaskProvenance provenance =
                                      MaskProvenance::GroundTruth) {
  validate(policy);
  if (!mask.same_dimensions(image)) {
    throw ValidationError("mask dimensions do not match image");
  }

  const Histogram global_char =
      compute_histogram(image, mask, PixelClass::Character);
  const Histogram global_bg =
      compute_histogram(image, mask, PixelClass::Background);
  if (global_char.total == 0) {
    throw ValidationError("mask contains no Character pixels");
  }
  if (global_bg.total == 0) {
    throw ValidationError("mask contains no Background pixels");
  }

  AuditReport report;
  report.mask_provenance = provenance;
  report.policy = policy;
  report.global_separation =
      check_separation(global_char, global_bg, policy.separation);

  std::vector<const CharRegion*> ordered;
  ordered.reserve(regions.size());
  for (const CharRegion& r : regions) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const CharRegion* a, const CharRegion* b) {
                     return a->box.y != b->box.y ? a->box.y < b->box.y
                                                 : a->box.x < b->box.x;
                   });

  std::vector<Box> failing;
  for (const CharRegion* region : ordered) {
    const Box box = region->box;
    if (box.empty() || box.x < 0 || box.y < 0 ||
        box.right() > image.width() || box.bottom() > image.height()) {
      throw ValidationError("region box outside image bounds");
    }
    const Histogram h_char =
        compute_histogram(image, mask, PixelClass::Character, box);
    if (h_char.total == 0) {
      throw ValidationError("region contains no Character pixels");
    }
    const Box padded = box.dilated(region->pad).clipped(image.bounds());
    Histogram h_bg =
        compute_histogram(image, mask, PixelClass::Background, padded);

    RegionAudit audit;
    audit.box = box;
    if (h_bg.total == 0) {
      audit.bg_fallback = true;
      h_bg = global_bg;
    }
    audit.separation = check_separation(h_char, h_bg, policy.separation);
    audit.saturation = detect_saturation(image, mask, *region,
                                         policy.saturation,
                                         audit.separation.separated);
    if (!audit.separation.separated || audit.saturation.blown_out ||
        audit.saturation.blocked_up) {
      failing.push_back(box);
    }
    report.regions.push_back(std::move(audit));
  }

  if (report.global_separation.separated) {
    report.level = IlluminationLevel::I;
  } else {
    if (report.regions.empty()) {
      throw ValidationError(
          "global separation fails and no regions were supplied; Level II/III "
          "is undecidable without one-character regions");
    }
    if (failing.empty()) {
      report.level = IlluminationLevel::II;
    } else {
      report.level = IlluminationLevel::III;
      report.failing_regions = std::move(failing);
    }
  }
  report.required_grade = grade_required(report.level);
  return report;
}

}  // namespace ocraudit

#endif  // OCRAUDIT_CLASSIFY_HPP
