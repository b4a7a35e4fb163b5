#include "lotpoly/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

namespace lotpoly {
namespace {

using testutil::random_mask;

// Brute-force tally, independent of the implementation.
ConfusionCounts confusion_oracle(const BinaryMask& pred, const BinaryMask& gt) {
  ConfusionCounts c;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      const bool p = pred.at(x, y) != 0;
      const bool g = gt.at(x, y) != 0;
      if (p && g) ++c.tp;
      if (p && !g) ++c.fp;
      if (!p && g) ++c.fn;
      if (!p && !g) ++c.tn;
    }
  }
  return c;
}

// Naive loss evaluated in long double, usable for |x| small enough to avoid
// overflow.
double bce_naive(const LogitField& f) {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < f.logits.size(); ++i) {
    const long double s = 1.0L / (1.0L + std::exp(-static_cast<long double>(f.logits[i])));
    const long double y = f.labels[i];
    sum += -(f.pos_weight * y * std::log(s) + (1.0L - y) * std::log(1.0L - s));
  }
  return static_cast<double>(sum / static_cast<long double>(f.logits.size()));
}

LogitField single_pixel(double x, std::uint8_t y, double w) {
  LogitField f;
  f.width = 1;
  f.height = 1;
  f.logits = {x};
  f.labels = {y};
  f.pos_weight = w;
  return f;
}

TEST(Confusion, AllOnesPerfect) {
  const BinaryMask ones(8, 8, std::uint8_t{1});
  const ConfusionCounts c = confusion(ones, ones);
  EXPECT_EQ(c.tp, 64u);
  EXPECT_EQ(c.fp + c.fn + c.tn, 0u);
}

TEST(Confusion, AllMissed) {
  const BinaryMask zeros(8, 8, std::uint8_t{0});
  const BinaryMask ones(8, 8, std::uint8_t{1});
  const ConfusionCounts c = confusion(zeros, ones);
  EXPECT_EQ(c.fn, 64u);
  EXPECT_EQ(c.tp + c.fp + c.tn, 0u);
}

TEST(Confusion, MatchesOracleOnRandomPairs) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 100; ++i) {
    const BinaryMask p = random_mask(rng, 8, 8, 0.5);
    const BinaryMask g = random_mask(rng, 8, 8, 0.5);
    const ConfusionCounts got = confusion(p, g);
    const ConfusionCounts want = confusion_oracle(p, g);
    EXPECT_EQ(got.tp, want.tp);
    EXPECT_EQ(got.fp, want.fp);
    EXPECT_EQ(got.fn, want.fn);
    EXPECT_EQ(got.tn, want.tn);
  }
}

TEST(Confusion, DimensionMismatchThrows) {
  EXPECT_THROW(confusion(BinaryMask(4, 4), BinaryMask(4, 5)), ValidationError);
}

TEST(Confusion, CountsAreMergeable) {
  std::mt19937_64 rng(23);
  const BinaryMask p1 = random_mask(rng, 16, 16, 0.4);
  const BinaryMask g1 = random_mask(rng, 16, 16, 0.4);
  const BinaryMask p2 = random_mask(rng, 16, 16, 0.6);
  const BinaryMask g2 = random_mask(rng, 16, 16, 0.6);
  const ConfusionCounts merged = confusion(p1, g1) + confusion(p2, g2);
  EXPECT_EQ(merged.total(), 512u);
}

TEST(Iou, PerfectPrediction) {
  const BinaryMask ones(4, 4, std::uint8_t{1});
  const ConfusionCounts c = confusion(ones, ones);
  EXPECT_DOUBLE_EQ(iou_parking(c), 1.0);
  EXPECT_DOUBLE_EQ(iou_background(c), 1.0);
  EXPECT_DOUBLE_EQ(miou(c), 1.0);
}

TEST(Iou, EmptyPredHalfGt) {
  // gt covers half the tile, prediction is empty.
  BinaryMask gt(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 2; ++x) gt.set(x, y, true);
  const ConfusionCounts c = confusion(BinaryMask(4, 4), gt);
  EXPECT_DOUBLE_EQ(iou_parking(c), 0.0);
  EXPECT_DOUBLE_EQ(iou_background(c), 0.5);
  EXPECT_DOUBLE_EQ(miou(c), 0.25);
}

TEST(Iou, ZeroOverZeroConvention) {
  const BinaryMask zeros(4, 4);
  const ConfusionCounts c = confusion(zeros, zeros);
  EXPECT_DOUBLE_EQ(iou_parking(c), 1.0);
  EXPECT_DOUBLE_EQ(miou(c), 1.0);
}

TEST(Iou, SymmetricInArguments) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 20; ++i) {
    const BinaryMask a = random_mask(rng, 16, 16, 0.5);
    const BinaryMask b = random_mask(rng, 16, 16, 0.5);
    EXPECT_DOUBLE_EQ(iou_parking(confusion(a, b)), iou_parking(confusion(b, a)));
  }
}

TEST(Iou, MiouMatchesPerClassOracle) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const BinaryMask p = random_mask(rng, 16, 16, 0.5);
    const BinaryMask g = random_mask(rng, 16, 16, 0.5);
    const ConfusionCounts c = confusion_oracle(p, g);
    const double iou_pos = (c.tp + c.fp + c.fn) == 0
                               ? 1.0
                               : double(c.tp) / double(c.tp + c.fp + c.fn);
    const double iou_neg = (c.tn + c.fn + c.fp) == 0
                               ? 1.0
                               : double(c.tn) / double(c.tn + c.fn + c.fp);
    EXPECT_DOUBLE_EQ(miou(confusion(p, g)), (iou_pos + iou_neg) / 2.0);
  }
}

TEST(PixelAccuracy, Basics) {
  const BinaryMask ones(4, 4, std::uint8_t{1});
  const BinaryMask zeros(4, 4);
  EXPECT_DOUBLE_EQ(pixel_accuracy(confusion(ones, ones)), 1.0);
  EXPECT_DOUBLE_EQ(pixel_accuracy(confusion(zeros, ones)), 0.0);
  const ConfusionCounts c{50, 10, 10, 30};
  EXPECT_DOUBLE_EQ(pixel_accuracy(c), 0.8);
}

TEST(MetricRanges, WithinUnitInterval) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 30; ++i) {
    const BinaryMask p = random_mask(rng, 16, 16, 0.3);
    const BinaryMask g = random_mask(rng, 16, 16, 0.7);
    const ConfusionCounts c = confusion(p, g);
    EXPECT_GE(miou(c), 0.0);
    EXPECT_LE(miou(c), 1.0);
    EXPECT_GE(pixel_accuracy(c), 0.0);
    EXPECT_LE(pixel_accuracy(c), 1.0);
    if (p == g) {
      EXPECT_DOUBLE_EQ(miou(c), 1.0);
    } else {
      EXPECT_LT(miou(c), 1.0);
    }
  }
}

TEST(WeightedBce, ZeroLogitPositive) {
  EXPECT_NEAR(weighted_bce_logits(single_pixel(0.0, 1, 1.0)), std::log(2.0), 1e-12);
}

TEST(WeightedBce, ClassWeightScalesPositiveTerm) {
  const double w = 1.0 / 0.21;
  EXPECT_NEAR(weighted_bce_logits(single_pixel(0.0, 1, w)), w * std::log(2.0), 1e-9);
}

TEST(WeightedBce, StableAtExtremeLogits) {
  EXPECT_LT(weighted_bce_logits(single_pixel(40.0, 1, 1.0)), 1e-15);
  EXPECT_NEAR(weighted_bce_logits(single_pixel(-40.0, 1, 1.0)), 40.0, 1e-12);
  EXPECT_LT(weighted_bce_logits(single_pixel(-40.0, 0, 1.0)), 1e-15);
  EXPECT_TRUE(std::isfinite(weighted_bce_logits(single_pixel(-1e4, 1, 1.0))));
  EXPECT_TRUE(std::isfinite(weighted_bce_logits(single_pixel(1e4, 0, 1.0))));
}

TEST(WeightedBce, AgreesWithNaiveFormInModerateRange) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> logit(-20.0, 20.0);
  std::uniform_int_distribution<int> label(0, 1);
  LogitField f;
  f.width = 16;
  f.height = 16;
  f.pos_weight = 1.0 / 0.21;
  for (int i = 0; i < 256; ++i) {
    f.logits.push_back(logit(rng));
    f.labels.push_back(static_cast<std::uint8_t>(label(rng)));
  }
  EXPECT_NEAR(weighted_bce_logits(f), bce_naive(f), 1e-12);
}

TEST(WeightedBce, MonotoneInLogit) {
  double prev = weighted_bce_logits(single_pixel(-5.0, 1, 2.0));
  for (double x = -4.5; x <= 5.0; x += 0.5) {
    const double cur = weighted_bce_logits(single_pixel(x, 1, 2.0));
    EXPECT_LT(cur, prev);
    prev = cur;
  }
  prev = weighted_bce_logits(single_pixel(-5.0, 0, 2.0));
  for (double x = -4.5; x <= 5.0; x += 0.5) {
    const double cur = weighted_bce_logits(single_pixel(x, 0, 2.0));
    EXPECT_GT(cur, prev);
    prev = cur;
  }
}

TEST(WeightedBce, NegativeTermIndependentOfWeight) {
  EXPECT_DOUBLE_EQ(weighted_bce_logits(single_pixel(1.3, 0, 1.0)),
                   weighted_bce_logits(single_pixel(1.3, 0, 100.0)));
}

TEST(WeightedBce, ValidationErrors) {
  LogitField f;
  f.width = 2;
  f.height = 1;
  f.logits = {0.0};
  f.labels = {0, 1};
  EXPECT_THROW(weighted_bce_logits(f), ValidationError);
  f.logits = {0.0, 1.0};
  f.pos_weight = 0.0;
  EXPECT_THROW(weighted_bce_logits(f), ValidationError);
}

}  // namespace
}  // namespace lotpoly
