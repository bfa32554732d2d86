#include <random>

#include "doctest.h"

#include "ricegrade/imgproc.hpp"
#include "ricegrade/segmentation.hpp"
#include "test_util.hpp"

using namespace ricegrade;

TEST_SUITE_BEGIN("imgproc");

TEST_CASE("luma conversion")
{
  RgbImage rgb(3, 1);
  rgb.set(0, 0, 255, 255, 255);
  rgb.set(1, 0, 0, 0, 0);
  rgb.set(2, 0, 100, 150, 50);
  const GrayImage gray = to_grayscale(rgb, 0.05);
  CHECK(gray.at(0, 0) == 255);
  CHECK(gray.at(1, 0) == 0);
  CHECK(gray.at(2, 0) == 124);  // round(29.9 + 88.05 + 5.7)
  CHECK(gray.calibration_mm_per_px == 0.05);
  CHECK_THROWS_AS(to_grayscale(RgbImage{}, 1.0), std::invalid_argument);
}

TEST_CASE("contrast stretch endpoints and midpoint") {
  GrayImage img(3, 1);
  img.at(0, 0) = 50;
  img.at(1, 0) = 100;
  img.at(2, 0) = 150;
  const GrayImage stretched = contrast_stretch(img);
  CHECK(stretched.at(0, 0) == 0);
  CHECK(stretched.at(1, 0) == 128);  // round(50 * 255 / 100)
  CHECK(stretched.at(2, 0) == 255);
}

TEST_CASE("contrast stretch leaves a constant image alone") {
  GrayImage img(4, 4, 77);
  const GrayImage out = contrast_stretch(img);
  for (auto p : out.pixels) CHECK(p == 77);
}

TEST_CASE("contrast stretch is idempotent") {
  std::mt19937 gen(42);
  for (int trial = 0; trial < 25; ++trial) {
    const GrayImage img = testutil::random_gray(16, 16, gen);
    const GrayImage once = contrast_stretch(img);
    const GrayImage twice = contrast_stretch(once);
    CHECK(once.pixels == twice.pixels);
  }
}

TEST_CASE("brightness levels") {
  GrayImage img(2, 1);
  img.at(0, 0) = 100;
  img.at(1, 0) = 200;

  const GrayImage level1 = adjust_brightness(img, 1);
  CHECK(level1.pixels == img.pixels);  // identity level

  CHECK(adjust_brightness(img, 5).at(0, 0) == 200);  // 100 * 2.00
  CHECK(adjust_brightness(img, 3).at(1, 0) == 255);  // 300 clamps

  CHECK_THROWS_AS(adjust_brightness(img, 0), std::invalid_argument);
  CHECK_THROWS_AS(adjust_brightness(img, 6), std::invalid_argument);
}

TEST_CASE("brightness is monotone across levels") {
  std::mt19937 gen(7);
  const GrayImage img = testutil::random_gray(12, 12, gen);
  GrayImage prev = adjust_brightness(img, 1);
  for (int level = 2; level <= 5; ++level) {
    const GrayImage next = adjust_brightness(img, level);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
      CHECK(next.pixels[i] >= prev.pixels[i]);
    }
    prev = next;
  }
}

TEST_CASE("binarize with explicit thresholds") {
  GrayImage img(4, 4, 200);
  const auto all_fg = binarize(img, 128);
  CHECK(all_fg.threshold == 128);
  for (auto p : all_fg.image.pixels) CHECK(p == 1);

  const auto zero = binarize(img, 0);
  for (auto p : zero.image.pixels) CHECK(p == 1);  // everything >= 0

  CHECK_THROWS_AS(binarize(img, 256), std::invalid_argument);
}

TEST_CASE("Otsu splits a two-level image between the modes") {
  GrayImage img(10, 10);
  for (int i = 0; i < 100; ++i) img.pixels[i] = i < 50 ? 40 : 215;
  const auto result = binarize(img);
  CHECK(result.threshold > 40);
  CHECK(result.threshold <= 215);
  CHECK(result.image.pixels[0] == 0);    // 40 -> background
  CHECK(result.image.pixels[99] == 1);   // 215 -> foreground

  // Exhaustive oracle: no threshold beats the one chosen, and the chosen one
  // is the smallest maximizer.
  auto between_class = [&](int t) {
    double w0 = 0, w1 = 0, s0 = 0, s1 = 0;
    for (auto p : img.pixels) {
      if (p < t) {
        w0 += 1;
        s0 += p;
      } else {
        w1 += 1;
        s1 += p;
      }
    }
    if (w0 == 0 || w1 == 0) return -1.0;
    const double mu0 = s0 / w0, mu1 = s1 / w1;
    const double n = static_cast<double>(img.pixels.size());
    return (w0 / n) * (w1 / n) * (mu0 - mu1) * (mu0 - mu1);
  };
  const double chosen = between_class(result.threshold);
  for (int t = 1; t < 256; ++t) {
    CHECK(between_class(t) <= chosen);
    if (between_class(t) == chosen) {
      CHECK(t >= result.threshold);
    }
  }
}

TEST_CASE("Otsu on a constant image keeps it all background") {
  GrayImage img(4, 4, 30);
  const auto result = binarize(img);
  for (auto p : result.image.pixels) CHECK(p == 0);
}

TEST_CASE("small region removal boundary is strict") {
  // 10x10 = 100 px component: removed below 100, retained at 100.
  BinaryImage img(30, 12);
  testutil::fill_axis_rect(img, 1, 1, 10, 10, std::uint8_t{1});

  const BinaryImage removed = remove_small_regions(img, 101);
  CHECK(std::count(removed.pixels.begin(), removed.pixels.end(), 1) == 0);

  const BinaryImage kept = remove_small_regions(img, 100);
  CHECK(std::count(kept.pixels.begin(), kept.pixels.end(), 1) == 100);

  SUBCASE("empty image stays empty") {
    BinaryImage blank(5, 5);
    const BinaryImage out = remove_small_regions(blank, 10);
    CHECK(std::count(out.pixels.begin(), out.pixels.end(), 1) == 0);
  }

  SUBCASE("idempotent") {
    std::mt19937 gen(3);
    const BinaryImage noisy = testutil::random_binary(24, 24, gen);
    const BinaryImage once = remove_small_regions(noisy, 8);
    const BinaryImage twice = remove_small_regions(once, 8);
    CHECK(once.pixels == twice.pixels);
  }
}

TEST_CASE("median filter") {
  SUBCASE("isolated pixel disappears") {
    BinaryImage img(5, 5);
    img.at(2, 2) = 1;
    const BinaryImage out = median_filter(img, 3);
    CHECK(std::count(out.pixels.begin(), out.pixels.end(), 1) == 0);
  }

  SUBCASE("constant image unchanged") {
    GrayImage img(6, 6, 99);
    CHECK(median_filter(img, 3).pixels == img.pixels);
  }

  SUBCASE("matches the sort-based oracle") {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
      const GrayImage img = testutil::random_gray(5, 5, gen);
      for (int window : {3, 5}) {
        const GrayImage out = median_filter(img, window);
        for (int y = 0; y < img.height; ++y) {
          for (int x = 0; x < img.width; ++x) {
            CHECK(out.at(x, y) == testutil::median_oracle(img, x, y, window));
          }
        }
      }
    }
  }

  SUBCASE("even or tiny windows are rejected") {
    GrayImage img(4, 4, 1);
    CHECK_THROWS_AS(median_filter(img, 4), std::invalid_argument);
    CHECK_THROWS_AS(median_filter(img, 1), std::invalid_argument);
  }

  SUBCASE("output values come from the input value set") {
    std::mt19937 gen(13);
    GrayImage img(8, 8);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(10 + 20 * (gen() % 5));
    const GrayImage out = median_filter(img, 3);
    for (auto p : out.pixels) {
      CHECK((p - 10) % 20 == 0);
      CHECK(p >= 10);
      CHECK(p <= 90);
    }
  }
}

TEST_CASE("all ops preserve geometry and calibration") {
  std::mt19937 gen(5);
  GrayImage img = testutil::random_gray(9, 7, gen, 0.0375);
  for (const GrayImage& out :
       {contrast_stretch(img), adjust_brightness(img, 4), median_filter(img, 3)}) {
    CHECK(out.width == img.width);
    CHECK(out.height == img.height);
    CHECK(out.calibration_mm_per_px == img.calibration_mm_per_px);
  }
  const auto bin = binarize(img, 100);
  CHECK(bin.image.width == img.width);
  CHECK(bin.image.height == img.height);
  CHECK(bin.image.calibration_mm_per_px == img.calibration_mm_per_px);
}

TEST_SUITE_END();
