#include <numeric>
#include <random>

#include "doctest.h"

#include "ricegrade/chalk.hpp"
#include "test_util.hpp"

using namespace ricegrade;

namespace {

Grain grain_from_image(const GrayImage& img) {
  Grain grain;
  grain.pixel_indices.resize(img.pixels.size());
  std::iota(grain.pixel_indices.begin(), grain.pixel_indices.end(), 0);
  grain.pixel_count = static_cast<int>(img.pixels.size());
  return grain;
}

}  // namespace

TEST_SUITE_BEGIN("chalk");

TEST_CASE("kmeans with K=1 converges to the arithmetic mean") {
  std::mt19937 gen(101);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> values;
    const int n = 5 + static_cast<int>(gen() % 200);
    for (int i = 0; i < n; ++i) values.push_back(static_cast<double>(gen() % 256));
    const auto result = kmeans(values, 1, 1e-6, 100, trial);
    const double mean =
        std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    CHECK(result.centers.size() == 1);
    CHECK(result.centers[0] == doctest::Approx(mean).epsilon(1e-12));
  }
}

TEST_CASE("two well separated groups find their means") {
  const std::vector<double> values = {0, 1, 2, 100, 101, 102};
  for (std::uint64_t seed : {0ull, 1ull, 2ull, 7ull, 99ull}) {
    auto result = kmeans(values, 2, 1e-9, 100, seed);
    std::sort(result.centers.begin(), result.centers.end());
    CHECK(result.centers[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(result.centers[1] == doctest::Approx(101.0).epsilon(1e-9));
  }
}

TEST_CASE("sse history never increases") {
  std::mt19937 gen(55);
  for (int k : {1, 2, 3}) {
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<double> values;
      for (int i = 0; i < 120; ++i) values.push_back(static_cast<double>(gen() % 256));
      const auto result = kmeans(values, k, 1e-7, 50, trial * 13 + k);
      REQUIRE(!result.sse_history.empty());
      for (std::size_t i = 1; i < result.sse_history.size(); ++i) {
        CHECK(result.sse_history[i] <= result.sse_history[i - 1]);
      }
      CHECK(result.iterations ==
            static_cast<int>(result.sse_history.size()));
    }
  }
}

TEST_CASE("same seed reproduces the run bit for bit") {
  std::mt19937 gen(31);
  std::vector<double> values;
  for (int i = 0; i < 300; ++i) values.push_back(static_cast<double>(gen() % 256));
  const auto a = kmeans(values, 3, 1e-6, 40, 12345);
  const auto b = kmeans(values, 3, 1e-6, 40, 12345);
  CHECK(a.centers == b.centers);
  CHECK(a.assignments == b.assignments);
  CHECK(a.sse_history == b.sse_history);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("centers equal the member means at convergence") {
  std::mt19937 gen(71);
  std::vector<double> values;
  for (int i = 0; i < 200; ++i) values.push_back(static_cast<double>(gen() % 256));
  const auto result = kmeans(values, 3, 1e-9, 200, 5);
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (result.assignments[i] == c) {
        sum += values[i];
        ++count;
      }
    }
    if (count > 0) {
      CHECK(result.centers[c] == doctest::Approx(sum / count).epsilon(1e-9));
    }
  }
}

TEST_CASE("kmeans rejects bad input") {
  CHECK_THROWS_AS(kmeans(std::vector<double>{}, 1, 1e-3, 10, 0),
                  std::invalid_argument);
  const std::vector<double> constant = {5, 5, 5};
  CHECK_THROWS_AS(kmeans(constant, 2, 1e-3, 10, 0), std::invalid_argument);
  const std::vector<double> values = {1, 2, 3};
  CHECK_THROWS_AS(kmeans(values, 0, 1e-3, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(kmeans(values, 1, 0.0, 10, 0), std::invalid_argument);
}

TEST_CASE("uniform grain has no chalk at rho > 1") {
  GrayImage img(10, 10, 180);
  const Grain grain = grain_from_image(img);
  const ChalkMask mask = segment_chalk(grain, img);
  CHECK(mask.cluster_center == doctest::Approx(180.0).epsilon(1e-12));
  CHECK(mask.threshold == doctest::Approx(207.0).epsilon(1e-12));
  CHECK(mask.chalky_px == 0);
  CHECK(mask.ratio == 0.0);
}

TEST_CASE("bright fifth of the grain is chalky") {
  // 80 px at 100 and 20 px at 250: mean 130, T = 149.5, ratio 0.20.
  GrayImage img(10, 10, 100);
  for (int i = 0; i < 20; ++i) img.pixels[i] = 250;
  const Grain grain = grain_from_image(img);
  const ChalkMask mask = segment_chalk(grain, img);
  CHECK(mask.cluster_center == doctest::Approx(130.0).epsilon(1e-12));
  CHECK(mask.threshold == doctest::Approx(149.5).epsilon(1e-12));
  CHECK(mask.chalky_px == 20);
  CHECK(mask.ratio == doctest::Approx(0.20).epsilon(1e-12));
}

TEST_CASE("rho zero marks everything chalky") {
  GrayImage img(6, 6, 40);
  const Grain grain = grain_from_image(img);
  ChalkParams params;
  params.rho = 0.0;
  CHECK(segment_chalk(grain, img, params).ratio == 1.0);
}

TEST_CASE("chalk ratio ignores pixel ordering") {
  std::mt19937 gen(8);
  GrayImage img(12, 12);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(gen() % 256);
  Grain grain = grain_from_image(img);
  const double base = segment_chalk(grain, img).ratio;
  std::shuffle(grain.pixel_indices.begin(), grain.pixel_indices.end(), gen);
  CHECK(segment_chalk(grain, img).ratio == base);
}

TEST_CASE("chalkiness combines ratio and prevalence") {
  auto mask_with_ratio = [](double ratio) {
    ChalkMask m;
    m.ratio = ratio;
    return m;
  };

  SUBCASE("worked fixture: W_D 0.20, 30 of 100") {
    std::vector<ChalkMask> masks;
    for (int i = 0; i < 30; ++i) masks.push_back(mask_with_ratio(0.20));
    for (int i = 0; i < 70; ++i) masks.push_back(mask_with_ratio(0.0));
    const auto result = chalkiness(masks);
    CHECK(result.n0 == 100);
    CHECK(result.n1 == 30);
    CHECK(result.w_d == doctest::Approx(0.20).epsilon(1e-12));
    CHECK(result.d == doctest::Approx(0.06).epsilon(1e-12));
  }

  SUBCASE("no chalky grains means zero chalkiness") {
    std::vector<ChalkMask> masks(5, mask_with_ratio(0.0));
    const auto result = chalkiness(masks);
    CHECK(result.n1 == 0);
    CHECK(result.d == 0.0);
  }

  SUBCASE("mixed ratios") {
    std::vector<ChalkMask> masks;
    for (double r : {0.1, 0.2, 0.3, 0.4}) masks.push_back(mask_with_ratio(r));
    for (int i = 0; i < 6; ++i) masks.push_back(mask_with_ratio(0.0));
    const auto result = chalkiness(masks);
    CHECK(result.w_d == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(result.d == doctest::Approx(0.10).epsilon(1e-12));
  }

  SUBCASE("d never exceeds w_d or the prevalence") {
    std::mt19937 gen(17);
    std::uniform_real_distribution<double> ratio(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<ChalkMask> masks;
      const int n = 1 + static_cast<int>(gen() % 40);
      for (int i = 0; i < n; ++i) masks.push_back(mask_with_ratio(ratio(gen)));
      const auto result = chalkiness(masks);
      CHECK(result.d <= result.w_d + 1e-15);
      CHECK(result.d <=
            static_cast<double>(result.n1) / result.n0 + 1e-15);
    }
  }

  SUBCASE("empty input is rejected") {
    CHECK_THROWS_AS(chalkiness({}), std::invalid_argument);
  }
}

TEST_CASE("luminance sweep") {
  GrayImage img(20, 20, 90);
  testutil::fill_axis_rect(img, 6, 6, 6, 6, std::uint8_t{140});
  const Grain grain = grain_from_image(img);

  SUBCASE("level 1 matches the plain segmentation") {
    const auto rows = luminance_sweep(img, grain);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].level == 1);
    CHECK(rows[0].chalk_ratio == segment_chalk(grain, img).ratio);
  }

  SUBCASE("ratios never decrease across levels") {
    std::mt19937 gen(23);
    for (int trial = 0; trial < 10; ++trial) {
      GrayImage noisy = testutil::random_gray(15, 15, gen);
      const Grain g = grain_from_image(noisy);
      const auto rows = luminance_sweep(noisy, g);
      for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].chalk_ratio >= rows[i - 1].chalk_ratio);
      }
    }
  }

  SUBCASE("saturated grain stays fully chalky when T fits in range") {
    GrayImage saturated(8, 8, 255);
    const Grain g = grain_from_image(saturated);
    ChalkParams params;
    params.rho = 1.0;  // T = 255
    const auto rows = luminance_sweep(saturated, g, params);
    for (const auto& row : rows) CHECK(row.chalk_ratio == 1.0);
  }
}

TEST_SUITE_END();
