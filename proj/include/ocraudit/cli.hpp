#ifndef OCRAUDIT_CLI_HPP
#define OCRAUDIT_CLI_HPP

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ocraudit/classify.hpp"
#include "ocraudit/image_io.hpp"
#include "ocraudit/kb.hpp"
#include "ocraudit/regions.hpp"
#include "ocraudit/serialize.hpp"
#include "ocraudit/synth.hpp"
#include "ocraudit/threshold.hpp"

namespace ocraudit {

inline constexpr const char* kCliVersion = "ocr-audit 0.1.0";

/// Exit codes are a total function of the outcome class, so the tool can
/// gate capture pipelines: analyze returns the level code directly.
struct ExitCode {
  static constexpr int Ok = 0;        // success; analyze: Level I
  static constexpr int LevelII = 10;  // analyze: Level II
  static constexpr int LevelIII = 20; // analyze: Level III
  static constexpr int Io = 1;        // unreadable or undecodable input
  static constexpr int Invalid = 2;   // contract violation in input or flags
};

namespace detail {

struct OutputOptions {
  bool json = false;
  std::string out_path;  // empty: stdout
};

inline void add_output_flags(CLI::App* cmd, OutputOptions* opts) {
  auto* json_flag = cmd->add_flag("--json", opts->json, "Emit JSON");
  cmd->add_flag("--text", "Emit human-readable text (default)")
      ->excludes(json_flag);
  cmd->add_option("--out", opts->out_path, "Write output to a file instead of stdout");
}

inline void write_output(const std::string& content,
                         const OutputOptions& opts) {
  if (opts.out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw IoError(opts.out_path + ": cannot open file for writing");
  out << content;
  if (!out) throw IoError(opts.out_path + ": write failed");
}

inline std::string resolve_kb_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("OCR_AUDITOR_KB"); env && *env) {
    return env;
  }
  throw ValidationError(
      "no knowledge base given (use --kb or set OCR_AUDITOR_KB)");
}

inline std::set<Phenomenon> parse_phenomena_csv(const std::string& csv) {
  std::set<Phenomenon> result;
  std::istringstream in(csv);
  std::string name;
  while (std::getline(in, name, ',')) {
    if (!name.empty()) result.insert(parse_phenomenon(name));
  }
  if (result.empty()) throw ValidationError("empty phenomena list");
  return result;
}

struct AnalyzeArgs {
  std::string image_path;
  std::string mask_path;
  std::string regions_path;
  AuditPolicy policy;
  OutputOptions output;
};

inline int run_analyze(const AnalyzeArgs& args) {
  const GrayImage image = load_gray_image(args.image_path);

  PixelClassMask mask(1, 1);
  MaskProvenance provenance = MaskProvenance::GroundTruth;
  if (!args.mask_path.empty()) {
    mask = load_mask(args.mask_path, image);
  } else {
    std::cerr << "warning: no mask supplied; estimating character/background "
                 "classes by global thresholding, which is unreliable under "
                 "non-uniform illumination\n";
    mask = estimate_mask(image);
    provenance = MaskProvenance::Estimated;
  }

  std::vector<CharRegion> regions;
  if (!args.regions_path.empty()) {
    regions = load_region_sidecar(args.regions_path, mask, args.policy.pad);
  } else {
    regions = extract_char_regions(mask, args.policy.connectivity,
                                   args.policy.merge_gap, args.policy.pad);
  }

  const AuditReport report =
      classify_level(image, mask, regions, args.policy, provenance);

  write_output(args.output.json ? dump_report(to_json(report))
                                : to_text(report),
               args.output);

  switch (report.level) {
    case IlluminationLevel::I:
      return ExitCode::Ok;
    case IlluminationLevel::II:
      return ExitCode::LevelII;
    case IlluminationLevel::III:
      return ExitCode::LevelIII;
  }
  return ExitCode::Invalid;
}

struct GradeArgs {
  std::string level;
  std::string device;
  OutputOptions output;
};

inline int run_grade(const GradeArgs& args) {
  const IlluminationLevel level = parse_level(args.level);
  const OcrGrade required = grade_required(level);

  json j;
  j["level"] = std::string(to_string(level));
  j["required_grade"] = std::string(to_string(required));
  json guidance = json::array();
  for (const std::string& line : grade_guidance(required)) {
    guidance.push_back(line);
  }
  j["guidance"] = std::move(guidance);

  std::ostringstream text;
  text << "level:          " << to_string(level) << "\n";
  text << "required grade: " << to_string(required) << "\n";
  text << "guidance:\n";
  for (const std::string& line : grade_guidance(required)) {
    text << "  - " << line << "\n";
  }

  if (!args.device.empty()) {
    const OcrGrade device = parse_grade(args.device);
    const Suitability s = device_suitable(device, level);
    j["device"] = std::string(to_string(device));
    j["suitable"] = s.suitable;
    json device_guidance = json::array();
    for (const std::string& line : s.guidance) device_guidance.push_back(line);
    j["device_guidance"] = std::move(device_guidance);

    text << "device:         " << to_string(device) << " ("
         << (s.suitable ? "suitable" : "NOT suitable") << ")\n";
    text << "device guidance:\n";
    for (const std::string& line : s.guidance) text << "  - " << line << "\n";
  }

  write_output(args.output.json ? dump_report(j) : text.str(), args.output);
  return ExitCode::Ok;
}

struct DiagnoseArgs {
  std::string phenomena_csv;
  std::string report_path;
  std::string kb_path;
  bool include_extensions = false;
  OutputOptions output;
};

inline int run_diagnose(const DiagnoseArgs& args) {
  const KnowledgeBase kb = load_kb(resolve_kb_path(args.kb_path));

  DiagnosisReport report;
  if (!args.phenomena_csv.empty()) {
    report = phenomena_to_factors(kb, parse_phenomena_csv(args.phenomena_csv),
                                  args.include_extensions);
  } else {
    const AuditReport audit = audit_report_from_json(load_json(args.report_path));
    report = diagnose_from_audit(kb, audit, args.include_extensions);
  }

  write_output(args.output.json ? dump_report(to_json(report))
                                : to_text(report),
               args.output);
  return ExitCode::Ok;
}

struct PlanArgs {
  std::string profile_path;
  std::string kb_path;
  OutputOptions output;
};

inline int run_plan(const PlanArgs& args) {
  const KnowledgeBase kb = load_kb(resolve_kb_path(args.kb_path));
  const UsageProfile profile = load_usage_profile(args.profile_path);
  const PlanReport report = plan_augmentation(kb, profile);
  write_output(args.output.json ? dump_report(to_json(report))
                                : to_text(report),
               args.output);
  return ExitCode::Ok;
}

struct SynthArgs {
  std::string spec_path;
  std::string out_image;
  std::string out_mask;
};

inline int run_synth(const SynthArgs& args) {
  const SceneSpec spec = load_scene_spec(args.spec_path);
  const auto [image, mask] = render(spec);
  save_pgm(image, args.out_image);
  save_mask(mask, args.out_mask);
  return ExitCode::Ok;
}

inline int run_kb_validate(const std::string& kb_path) {
  const KnowledgeBase kb = load_kb(resolve_kb_path(kb_path));
  std::cout << "ok: " << kb.entries().size() << " factors\n";
  return ExitCode::Ok;
}

}  // namespace detail

/// Entry point shared by the binary and the tests. args[0] is the program
/// name. Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Audits document/form captures for illumination "
               "non-uniformity, maps severity levels to required OCR grades, "
               "and runs the disturbance-factor workflows (diagnosis and "
               "augmentation planning)."};
  app.set_version_flag("--version", std::string(kCliVersion));
  app.require_subcommand(1);

  detail::AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand(
      "analyze", "Classify illumination non-uniformity (exit 0/10/20 for "
                 "Level I/II/III)");
  analyze->add_option("--image", analyze_args.image_path,
                      "Document image (PGM; PNG when built with libpng)")
      ->required();
  analyze->add_option("--mask", analyze_args.mask_path,
                      "Ground-truth pixel-class mask (PGM: 0=character, "
                      "255=background, 128=ignore); estimated when omitted");
  analyze->add_option("--regions", analyze_args.regions_path,
                      "Region sidecar ('x y w h' per line); overrides "
                      "connected-component extraction");
  analyze->add_option("--alpha", analyze_args.policy.separation.alpha,
                      "Trim fraction for class intervals [0, 0.5)")
      ->capture_default_str();
  analyze->add_option("--min-gap", analyze_args.policy.separation.min_gap,
                      "Minimum value gap for separation (>= 1)")
      ->capture_default_str();
  analyze->add_option("--pad", analyze_args.policy.pad,
                      "Background context margin around region boxes")
      ->capture_default_str();
  analyze->add_option("--t-black", analyze_args.policy.saturation.t_black,
                      "Values <= t_black count as blocked up")
      ->capture_default_str();
  analyze->add_option("--t-white", analyze_args.policy.saturation.t_white,
                      "Values >= t_white count as blown out")
      ->capture_default_str();
  analyze->add_option("--f-sat", analyze_args.policy.saturation.f_sat,
                      "Clipped fraction that raises a saturation flag")
      ->capture_default_str();
  analyze->add_option("--connectivity", analyze_args.policy.connectivity,
                      "Connected-component connectivity (4 or 8)")
      ->capture_default_str();
  analyze->add_option("--merge-gap", analyze_args.policy.merge_gap,
                      "Merge components whose boxes dilated by this gap touch")
      ->capture_default_str();
  detail::add_output_flags(analyze, &analyze_args.output);

  detail::GradeArgs grade_args;
  auto* grade = app.add_subcommand(
      "grade", "Map an illumination level to the required OCR grade");
  grade->add_option("--level", grade_args.level, "Illumination level (I, II, III)")
      ->required();
  grade->add_option("--device", grade_args.device,
                    "Also check whether a device of this grade (A, AA, X) suits "
                    "the level");
  detail::add_output_flags(grade, &grade_args.output);

  detail::DiagnoseArgs diagnose_args;
  auto* diagnose = app.add_subcommand(
      "diagnose", "List disturbance factors to recheck for observed phenomena");
  auto* phenomena_opt =
      diagnose->add_option("--phenomena", diagnose_args.phenomena_csv,
                           "Comma-separated phenomenon names");
  diagnose->add_option("--from-report", diagnose_args.report_path,
                       "Derive phenomena from an analyze JSON report")
      ->excludes(phenomena_opt);
  diagnose->add_option("--kb", diagnose_args.kb_path,
                       "Factor table path (default: $OCR_AUDITOR_KB)");
  diagnose->add_flag("--include-extensions", diagnose_args.include_extensions,
                     "Include links on user_extension entries");
  detail::add_output_flags(diagnose, &diagnose_args.output);

  detail::PlanArgs plan_args;
  auto* plan = app.add_subcommand(
      "plan", "Derive training-data variation axes from a usage profile");
  plan->add_option("--profile", plan_args.profile_path,
                   "Usage profile JSON (conditions[] and judgments{})")
      ->required();
  plan->add_option("--kb", plan_args.kb_path,
                   "Factor table path (default: $OCR_AUDITOR_KB)");
  detail::add_output_flags(plan, &plan_args.output);

  detail::SynthArgs synth_args;
  auto* synth = app.add_subcommand(
      "synth", "Render a synthetic document image and mask from a scene spec");
  synth->add_option("--spec", synth_args.spec_path, "Scene spec JSON")
      ->required();
  synth->add_option("--out", synth_args.out_image, "Output image (PGM)")
      ->required();
  synth->add_option("--out-mask", synth_args.out_mask, "Output mask (PGM)")
      ->required();

  std::string kb_validate_path;
  auto* kb_validate =
      app.add_subcommand("kb-validate", "Validate a factor table file");
  kb_validate->add_option("--kb", kb_validate_path,
                          "Factor table path (default: $OCR_AUDITOR_KB)");

  std::vector<std::string> argv(args);
  if (argv.empty()) argv.push_back("ocr-audit");

  try {
    std::vector<const char*> ptrs;
    ptrs.reserve(argv.size());
    for (const std::string& a : argv) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ExitCode::Invalid;
  }

  try {
    if (app.got_subcommand(analyze)) return detail::run_analyze(analyze_args);
    if (app.got_subcommand(grade)) return detail::run_grade(grade_args);
    if (app.got_subcommand(diagnose)) {
      if (diagnose_args.phenomena_csv.empty() &&
          diagnose_args.report_path.empty()) {
        throw ValidationError("diagnose requires --phenomena or --from-report");
      }
      return detail::run_diagnose(diagnose_args);
    }
    if (app.got_subcommand(plan)) return detail::run_plan(plan_args);
    if (app.got_subcommand(synth)) return detail::run_synth(synth_args);
    if (app.got_subcommand(kb_validate)) {
      return detail::run_kb_validate(kb_validate_path);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCode::Io;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCode::Invalid;
  }
  return ExitCode::Invalid;
}

}  // namespace ocraudit

#endif  // OCRAUDIT_CLI_HPP
