#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "lotpoly/error.hpp"
#include "lotpoly/raster.hpp"

namespace lotpoly {

// Pixel tallies with parking as the positive class. Counts are mergeable, so
// per-tile tallies reduce to dataset totals.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }

  ConfusionCounts& operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    tn += o.tn;
    return *this;
  }
  friend ConfusionCounts operator+(ConfusionCounts a, const ConfusionCounts& b) {
    return a += b;
  }
};

inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw ValidationError("confusion: mask dimensions differ");
  }
  ConfusionCounts c;
  const auto& p = pred.values();
  const auto& g = gt.values();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i]) {
      g[i] ? ++c.tp : ++c.fp;
    } else {
      g[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

// IoU per class; 0/0 (class absent on both sides) counts as 1.0.
inline double iou_parking(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tp + c.fp + c.fn;
  return denom == 0 ? 1.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

inline double iou_background(const ConfusionCounts& c) {
  const std::uint64_t denom = c.tn + c.fn + c.fp;
  return denom == 0 ? 1.0 : static_cast<double>(c.tn) / static_cast<double>(denom);
}

inline double miou(const ConfusionCounts& c) {
  return (iou_parking(c) + iou_background(c)) / 2.0;
}

inline double pixel_accuracy(const ConfusionCounts& c) {
  const std::uint64_t t = c.total();
  return t == 0 ? 1.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(t);
}

// Per-pixel logits and labels for the weighted BCE evaluation.
struct LogitField {
  int width = 0;
  int height = 0;
  std::vector<double> logits;        // x_n, row-major
  std::vector<std::uint8_t> labels;  // y_n in {0,1}
  double pos_weight = 1.0;           // w applied to the positive term

  void validate() const {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (width < 1 || height < 1 || logits.size() != n || labels.size() != n) {
      throw ValidationError("LogitField dimensions inconsistent");
    }
    if (!(pos_weight > 0.0)) {
      throw ValidationError("LogitField pos_weight must be positive");
    }
  }
};

namespace detail {

// log(1 + exp(t)) without overflow.
inline double softplus(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

}  // namespace detail

// Mean over pixels of -[w*y*log(sigmoid(x)) + (1-y)*log(1-sigmoid(x))],
// evaluated in the stable softplus form: w*y*softplus(-x) + (1-y)*softplus(x).
inline double weighted_bce_logits(const LogitField& f) {
  f.validate();
  double sum = 0.0;
  for (std::size_t i = 0; i < f.logits.size(); ++i) {
    const double x = f.logits[i];
    sum += f.labels[i] ? f.pos_weight * detail::softplus(-x) : detail::softplus(x);
  }
  return sum / static_cast<double>(f.logits.size());
}

}  // namespace lotpoly
