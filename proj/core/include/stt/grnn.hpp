#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stt/frontend.hpp"
#include "stt/matrix.hpp"
#include "stt/mfcc.hpp"

namespace stt {

inline constexpr double kDefaultSpread = 0.5;

/// Generalized regression network. Every training pattern is a pattern-layer
/// neuron (a row of `centers`) paired with a target row. Prediction is the
/// kernel-weighted average of target rows,
///
///   y_j = sum_i w_ij h_i / sum_i h_i,   h_i = exp(-|C_i - x|^2 / (2 sigma^2)).
struct GrnnModel {
  Matrix centers;  // n x d
  Matrix targets;  // n x L
  double spread = kDefaultSpread;
  std::vector<std::string> labels;
  FrontendConfig frontend;
  MfccConfig mfcc;

  std::size_t pattern_count() const noexcept { return centers.rows(); }
  std::size_t feature_dim() const noexcept { return centers.cols(); }
  std::size_t label_count() const noexcept { return labels.size(); }

  /// Throws MalformedModel if shapes or values are inconsistent.
  void check() const;
};

struct LabeledFeatures {
  FeatureVector features;
  std::string label;
};

struct Recognition {
  std::string label;
  std::vector<double> scores;
  double confidence = 0.0;
};

/// One-pass training: stores every example verbatim with a one-hot target.
/// Labels are the sorted distinct label names.
GrnnModel train(std::span<const LabeledFeatures> examples, double spread = kDefaultSpread,
                const FrontendConfig& frontend = {}, const MfccConfig& mfcc = {});

/// General regression model over arbitrary target rows; `labels` names the
/// target columns.
GrnnModel make_regression_model(Matrix centers, Matrix targets, double spread,
                                std::vector<std::string> labels);

/// Per-column outputs y_j. The exponent is shifted by the nearest squared
/// distance, which cancels in the ratio, so the nearest pattern has weight 1.
std::vector<double> predict_scores(const GrnnModel& model, std::span<const double> x);

/// argmax of predict_scores; ties go to the lowest label index.
Recognition classify(const GrnnModel& model, std::span<const double> x);

/// Binary model format, little-endian:
///   "GRNN", u32 version (1), u32 feature_dim, u32 n, u32 L, f64 spread,
///   L x (u32 byte length, UTF-8 label bytes),
///   11 x f64 config block (see kConfigFieldOrder in grnn.cpp),
///   n*d f64 centers row-major, n*L f64 targets row-major.
std::vector<std::uint8_t> serialize_model(const GrnnModel& model);
GrnnModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const GrnnModel& model, const std::filesystem::path& path);
GrnnModel load_model(const std::filesystem::path& path);

}  // namespace stt
