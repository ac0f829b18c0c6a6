#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <string>
#include <vector>

#include "ocraudit/kb.hpp"
#include "test_util.hpp"

using namespace ocraudit;

namespace {

KnowledgeBase seed_kb() {
  return load_kb((testutil::source_dir() / "data" / "factors.tsv").string());
}

std::vector<std::string> codes_of(const DiagnosisReport& report,
                                  FactorClass c, Phenomenon p) {
  for (const ClassificationGroup& group : report.groups) {
    if (group.classification != c) continue;
    for (const PhenomenonMatch& match : group.matches) {
      if (match.phenomenon == p) return match.codes;
    }
  }
  return {};
}

}  // namespace

TEST_CASE("seed KB loads with a full complement of factors", "[kb]") {
  const KnowledgeBase kb = seed_kb();
  CHECK(kb.entries().size() >= 25);
  REQUIRE(kb.contains("L-05"));
  CHECK(kb.find("L-05")->remediation ==
        "Try imaging without using the flash.");
  REQUIRE(kb.contains("L-04"));
  CHECK(kb.find("L-04")->provenance == Provenance::PlaceholderUnknown);
  // Gaps in the numbering stay absent.
  CHECK_FALSE(kb.contains("L-08"));
  CHECK_FALSE(kb.contains("O-04"));
  CHECK_FALSE(kb.contains("T-05"));
}

TEST_CASE("KB validation failures", "[kb]") {
  SECTION("duplicate code") {
    CHECK_THROWS_AS(
        KnowledgeBase::parse("L-01\tilluminant\tA\t\tpaper\n"
                             "L-01\tilluminant\tB\t\tpaper\n"),
        ValidationError);
  }
  SECTION("prefix does not match classification") {
    CHECK_THROWS_AS(KnowledgeBase::parse("O-99\tilluminant\tA\t\tpaper\n"),
                    ValidationError);
  }
  SECTION("unknown phenomenon") {
    CHECK_THROWS_AS(
        KnowledgeBase::parse("L-01\tilluminant\tA\tglare\tpaper\n"),
        ValidationError);
  }
  SECTION("unknown provenance") {
    CHECK_THROWS_AS(
        KnowledgeBase::parse("L-01\tilluminant\tA\t\tguesswork\n"),
        ValidationError);
  }
  SECTION("malformed code") {
    CHECK_THROWS_AS(KnowledgeBase::parse("L-1\tilluminant\tA\t\tpaper\n"),
                    ValidationError);
    CHECK_THROWS_AS(KnowledgeBase::parse("Z-01\tilluminant\tA\t\tpaper\n"),
                    ValidationError);
  }
  SECTION("wrong field count reports the line") {
    try {
      KnowledgeBase::parse("# comment\nL-01\tilluminant\n");
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
}

TEST_CASE("serialize/parse round-trip is structural identity", "[kb][property]") {
  const KnowledgeBase kb = seed_kb();
  const KnowledgeBase reparsed = KnowledgeBase::parse(kb.serialize());
  CHECK(reparsed.entries() == kb.entries());
  // And a second generation is byte-identical.
  CHECK(reparsed.serialize() == kb.serialize());
}

TEST_CASE("phenomena_to_factors reproduces the published example sets",
          "[kb]") {
  const KnowledgeBase kb = seed_kb();
  const DiagnosisReport report = phenomena_to_factors(
      kb, {Phenomenon::BlownOutHighlights, Phenomenon::Shading,
           Phenomenon::Shiny});

  CHECK(codes_of(report, FactorClass::Illuminant,
                 Phenomenon::BlownOutHighlights) ==
        std::vector<std::string>{"L-01", "L-05", "L-07", "L-10"});
  CHECK(codes_of(report, FactorClass::Illuminant, Phenomenon::Shading) ==
        std::vector<std::string>{"L-02", "L-03", "L-05", "L-07", "L-09",
                                 "L-10"});
  CHECK(codes_of(report, FactorClass::Object, Phenomenon::Shiny) ==
        std::vector<std::string>{"T-01", "T-02", "T-03", "T-04", "T-24",
                                 "T-25"});
  CHECK(codes_of(report, FactorClass::CameraPhotographer,
                 Phenomenon::BlownOutHighlights) ==
        std::vector<std::string>{"C-03", "C-10", "C-11", "C-13", "C-14",
                                 "C-15", "C-24"});

  // The obstacle row stays empty by default (its links are extensions).
  for (const ClassificationGroup& group : report.groups) {
    if (group.classification == FactorClass::Obstacle) {
      CHECK(group.matches.empty());
    }
  }

  // Blocked-up shadows reproduces its printed factor row as well.
  const DiagnosisReport blocked =
      phenomena_to_factors(kb, {Phenomenon::BlockedUpShadows});
  CHECK(codes_of(blocked, FactorClass::Illuminant,
                 Phenomenon::BlockedUpShadows) ==
        std::vector<std::string>{"L-01", "L-04", "L-06", "L-07", "L-10"});
}

TEST_CASE("extension links appear only on request", "[kb]") {
  const KnowledgeBase kb = seed_kb();
  const DiagnosisReport without =
      phenomena_to_factors(kb, {Phenomenon::Shading}, false);
  CHECK(codes_of(without, FactorClass::Obstacle, Phenomenon::Shading).empty());

  const DiagnosisReport with =
      phenomena_to_factors(kb, {Phenomenon::Shading}, true);
  CHECK(codes_of(with, FactorClass::Obstacle, Phenomenon::Shading) ==
        std::vector<std::string>{"O-01"});
}

TEST_CASE("phenomena_to_factors rejects an empty set and is complete",
          "[kb][property]") {
  const KnowledgeBase kb = seed_kb();
  CHECK_THROWS_AS(phenomena_to_factors(kb, {}), ValidationError);

  // Completeness: brute-force scan of the KB finds exactly the same codes.
  testutil::Rng rng(11);
  const Phenomenon all[] = {
      Phenomenon::BlockedUpShadows, Phenomenon::BlownOutHighlights,
      Phenomenon::Shading,          Phenomenon::Shiny,
      Phenomenon::LowContrast,      Phenomenon::LowDefinition,
      Phenomenon::Fading,           Phenomenon::Defocus,
      Phenomenon::MotionBlur,       Phenomenon::Tilt,
      Phenomenon::ShadowOverlap,    Phenomenon::Shielding};
  for (int trial = 0; trial < 120; ++trial) {
    std::set<Phenomenon> request;
    const int k = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) request.insert(all[rng() % 12]);
    const bool extensions = rng() % 2 == 0;

    const DiagnosisReport report =
        phenomena_to_factors(kb, request, extensions);

    std::set<std::string> expected;
    for (const FactorEntry& entry : kb.entries()) {
      if (entry.provenance == Provenance::UserExtension && !extensions) {
        continue;
      }
      for (Phenomenon p : request) {
        if (entry.phenomena.count(p)) expected.insert(entry.code);
      }
    }
    std::set<std::string> got;
    for (const FactorEntry& entry : report.factors) {
      CHECK(kb.contains(entry.code));  // soundness
      got.insert(entry.code);
    }
    REQUIRE(got == expected);

    // Determinism: identical inputs give identical reports.
    const DiagnosisReport again =
        phenomena_to_factors(kb, request, extensions);
    REQUIRE(again.factors == report.factors);
  }
}

TEST_CASE("diagnosis factor list is grouped by classification then code",
          "[kb]") {
  const KnowledgeBase kb = seed_kb();
  const DiagnosisReport report = phenomena_to_factors(
      kb, {Phenomenon::BlownOutHighlights, Phenomenon::Shiny});
  REQUIRE_FALSE(report.factors.empty());
  for (std::size_t i = 1; i < report.factors.size(); ++i) {
    const auto& a = report.factors[i - 1];
    const auto& b = report.factors[i];
    const int ca = static_cast<int>(a.classification);
    const int cb = static_cast<int>(b.classification);
    CHECK((ca < cb || (ca == cb && a.code < b.code)));
  }
}

TEST_CASE("diagnose_from_audit maps findings to phenomena", "[kb]") {
  const KnowledgeBase kb = seed_kb();

  AuditReport audit;
  audit.global_separation.separated = true;
  audit.level = IlluminationLevel::I;

  SECTION("clean audit reports no detected phenomena") {
    const DiagnosisReport report = diagnose_from_audit(kb, audit);
    CHECK(report.no_detected_phenomena);
    CHECK(report.factors.empty());
    CHECK(report.phenomena.empty());
    CHECK(report.groups.size() == 4);
  }

  SECTION("separation failure alone reads as shading, nothing else") {
    audit.global_separation.separated = false;
    audit.regions.push_back(RegionAudit{});
    audit.regions[0].separation.separated = false;
    const DiagnosisReport report = diagnose_from_audit(kb, audit);
    REQUIRE(report.phenomena == std::vector<Phenomenon>{Phenomenon::Shading});
    std::set<std::string> expected{"L-02", "L-03", "L-05", "L-07", "L-09",
                                   "L-10"};
    std::set<std::string> got;
    for (const FactorEntry& entry : report.factors) got.insert(entry.code);
    CHECK(got == expected);
  }

  SECTION("saturation flags add the clipping phenomena") {
    audit.global_separation.separated = false;
    RegionAudit blown;
    blown.separation.separated = false;
    blown.saturation.blown_out = true;
    RegionAudit blocked;
    blocked.separation.separated = false;
    blocked.saturation.blocked_up = true;
    audit.regions = {blown, blocked};
    const DiagnosisReport report = diagnose_from_audit(kb, audit);
    const std::set<Phenomenon> phenomena(report.phenomena.begin(),
                                         report.phenomena.end());
    CHECK(phenomena == std::set<Phenomenon>{Phenomenon::BlockedUpShadows,
                                            Phenomenon::BlownOutHighlights,
                                            Phenomenon::Shading});
    bool has_c13 = false;
    for (const FactorEntry& entry : report.factors) {
      has_c13 |= entry.code == "C-13";
    }
    CHECK(has_c13);
  }
}

TEST_CASE("plan_augmentation extracts exactly the matched factors", "[kb]") {
  const KnowledgeBase kb = seed_kb();
  UsageProfile profile;
  profile.conditions = {
      "Laying the flyer as flat as possible on an office desk",
      "Standing by the desk while holding a smartphone to image the flyer"};
  profile.judgments["O-01"] = {true,
                               "Possibility of shadows being cast by the "
                               "photographer or similar factors"};
  profile.judgments["O-02"] = {true,
                               "Possibility of occlusion caused by straps or "
                               "similar objects"};
  profile.judgments["O-03"] = {false, "An LED illumination with almost no directivity"};
  profile.judgments["O-06"] = {false, "No influence from weather because it is indoors"};
  profile.judgments["O-07"] = {false, "The lens will be kept clean and used"};
  profile.judgments["O-08"] = {false, "No substances adhered to the flyer"};

  const PlanReport plan = plan_augmentation(kb, profile);
  REQUIRE(plan.matched.size() == 2);
  CHECK(plan.matched[0].code == "O-01");
  CHECK(plan.matched[1].code == "O-02");
  CHECK(plan.not_applicable.size() == 4);
  CHECK(plan.unreviewed.size() == kb.entries().size() - 6);

  // Planner exclusion: no mismatched code in the plan.
  for (const PlanItem& item : plan.matched) {
    CHECK(item.code != "O-03");
    CHECK(item.code != "O-06");
    CHECK(item.code != "O-07");
    CHECK(item.code != "O-08");
  }
}

TEST_CASE("plan with no judgments leaves everything unreviewed", "[kb]") {
  const KnowledgeBase kb = seed_kb();
  const PlanReport plan = plan_augmentation(kb, UsageProfile{});
  CHECK(plan.matched.empty());
  CHECK(plan.not_applicable.empty());
  CHECK(plan.unreviewed.size() == kb.entries().size());
}

TEST_CASE("judgment on an unknown code is rejected", "[kb]") {
  const KnowledgeBase kb = seed_kb();
  UsageProfile profile;
  profile.judgments["Z-01"] = {true, ""};
  CHECK_THROWS_AS(plan_augmentation(kb, profile), ValidationError);
}

TEST_CASE("planner exclusion holds under random judgments", "[kb][property]") {
  const KnowledgeBase kb = seed_kb();
  testutil::Rng rng(8080);
  for (int trial = 0; trial < 100; ++trial) {
    UsageProfile profile;
    std::set<std::string> matched, mismatched;
    for (const FactorEntry& entry : kb.entries()) {
      const int roll = static_cast<int>(rng() % 3);
      if (roll == 0) {
        profile.judgments[entry.code] = {true, "m"};
        matched.insert(entry.code);
      } else if (roll == 1) {
        profile.judgments[entry.code] = {false, "x"};
        mismatched.insert(entry.code);
      }
    }
    const PlanReport plan = plan_augmentation(kb, profile);
    std::set<std::string> planned;
    for (const PlanItem& item : plan.matched) planned.insert(item.code);
    REQUIRE(planned == matched);
    for (const PlanItem& item : plan.not_applicable) {
      REQUIRE(mismatched.count(item.code) == 1);
    }
    REQUIRE(plan.matched.size() + plan.not_applicable.size() +
                plan.unreviewed.size() ==
            kb.entries().size());
  }
}
