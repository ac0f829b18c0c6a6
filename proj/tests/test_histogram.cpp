#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "ocraudit/histogram.hpp"
#include "test_util.hpp"

using namespace ocraudit;

TEST_CASE("histogram counts one class in one scope", "[histogram]") {
  const GrayImage img = testutil::make_image(2, 2, {10, 10, 200, 200});
  const PixelClassMask mask = testutil::mask_from_art("##|..");

  const Histogram chars = compute_histogram(img, mask, PixelClass::Character);
  CHECK(chars.total == 2);
  CHECK(chars.bins[10] == 2);

  const Histogram bg = compute_histogram(img, mask, PixelClass::Background);
  CHECK(bg.total == 2);
  CHECK(bg.bins[200] == 2);

  const Histogram column0 = compute_histogram(img, mask, PixelClass::Character,
                                              Box{0, 0, 1, 2});
  CHECK(column0.total == 1);
  CHECK(column0.bins[10] == 1);
}

TEST_CASE("ignore pixels never count", "[histogram]") {
  const GrayImage img = testutil::make_image(3, 1, {5, 6, 7});
  const PixelClassMask mask = testutil::mask_from_art("#?.");
  CHECK(compute_histogram(img, mask, PixelClass::Character).total == 1);
  CHECK(compute_histogram(img, mask, PixelClass::Background).total == 1);
  CHECK_THROWS_AS(compute_histogram(img, mask, PixelClass::Ignore),
                  ValidationError);
}

TEST_CASE("scope must stay within bounds", "[histogram]") {
  const GrayImage img(4, 4);
  const PixelClassMask mask(4, 4);
  CHECK_THROWS_AS(
      compute_histogram(img, mask, PixelClass::Character, Box{2, 2, 3, 1}),
      ValidationError);
  CHECK_THROWS_AS(
      compute_histogram(img, mask, PixelClass::Character, Box{-1, 0, 2, 2}),
      ValidationError);
  CHECK_THROWS_AS(compute_histogram(img, PixelClassMask(3, 3),
                                    PixelClass::Character),
                  ValidationError);
}

TEST_CASE("histogram conservation", "[histogram][property]") {
  testutil::Rng rng(17);
  for (int trial = 0; trial < 120; ++trial) {
    const GrayImage img = testutil::random_image(rng, 32);
    const PixelClassMask mask =
        testutil::random_mask(rng, img.width(), img.height(), 0.3, 0.1);
    const auto chars = compute_histogram(img, mask, PixelClass::Character);
    const auto bg = compute_histogram(img, mask, PixelClass::Background);
    CHECK(chars.total + bg.total + mask.count(PixelClass::Ignore) ==
          static_cast<std::uint64_t>(img.width()) * img.height());
  }
}

TEST_CASE("trimmed interval basics", "[histogram]") {
  Histogram h;

  SECTION("degenerate distribution is untouched by trimming") {
    for (int i = 0; i < 100; ++i) h.add(42);
    CHECK(trimmed_interval(h, 0.01) == std::pair{42, 42});
  }
  SECTION("alpha 0 is exact support") {
    h.add(3);
    h.add(9);
    h.add(200);
    CHECK(trimmed_interval(h, 0.0) == std::pair{3, 200});
  }
  SECTION("trim drops the lone outlier") {
    for (int i = 0; i < 99; ++i) h.add(50);
    h.add(255);
    CHECK(trimmed_interval(h, 0.02) == std::pair{50, 50});
  }
  SECTION("empty histogram") {
    CHECK_THROWS_AS(trimmed_interval(h, 0.0), ValidationError);
  }
  SECTION("alpha range") {
    h.add(1);
    CHECK_THROWS_AS(trimmed_interval(h, 0.5), ValidationError);
    CHECK_THROWS_AS(trimmed_interval(h, -0.1), ValidationError);
  }
}

TEST_CASE("trimmed interval agrees with the sort-based oracle",
          "[histogram][oracle]") {
  testutil::Rng rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 200);
    Histogram h;
    std::vector<int> values;
    for (int i = 0; i < n; ++i) {
      const int v = static_cast<int>(rng() % 256);
      h.add(static_cast<std::uint8_t>(v));
      values.push_back(v);
    }
    const double alpha = (rng() % 50) / 100.0;  // [0, 0.49]
    CHECK(trimmed_interval(h, alpha) ==
          testutil::trimmed_interval_by_sort(values, alpha));
  }
}
