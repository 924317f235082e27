#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stt/frontend.hpp"
#include "stt/matrix.hpp"

namespace stt {

struct MfccConfig {
  int n_filters = 26;
  int n_coeffs = 13;
  double f_min = 300.0;
  double f_max = 3400.0;
  double log_floor = 1e-10;
  int target_frames = 20;
  /// When false the zeroth cepstral coefficient is skipped and the
  /// coefficients are c(1)..c(n_coeffs).
  bool include_c0 = true;

  void validate(int sample_rate) const;
  std::size_t feature_dim() const {
    return static_cast<std::size_t>(target_frames) * static_cast<std::size_t>(n_coeffs);
  }

  friend bool operator==(const MfccConfig&, const MfccConfig&) = default;
};

/// Fixed-length utterance encoding: target_frames x n_coeffs cepstra,
/// frame-major.
struct FeatureVector {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  operator std::span<const double>() const noexcept { return values; }
};

double mel_scale(double hz);
double mel_to_hz(double mel);

/// Triangular filters between f_min and f_max, equally spaced in mel. Rows
/// are filters, columns are the fft_size/2 + 1 power-spectrum bins.
Matrix mel_filterbank(const MfccConfig& config, int sample_rate, std::size_t fft_size);

/// DCT-II (orthonormal) of the log filterbank energies.
std::vector<double> frame_mfcc(std::span<const double> power, const Matrix& filterbank,
                               const MfccConfig& config);

/// Resamples a frame sequence (rows) to `target` rows by linear interpolation
/// of every column along the frame axis.
Matrix time_normalize(const Matrix& frames, std::size_t target);

/// Holds a filterbank for one configuration and turns segments into
/// feature vectors.
class FeatureExtractor {
 public:
  FeatureExtractor(FrontendConfig frontend, MfccConfig mfcc,
                   int sample_rate = kPipelineSampleRate);

  /// Per-frame MFCCs before time normalization.
  Matrix cepstra(std::span<const double> segment) const;

  FeatureVector operator()(std::span<const double> segment) const;

  const FrontendConfig& frontend() const noexcept { return frontend_; }
  const MfccConfig& mfcc() const noexcept { return mfcc_; }
  const Matrix& filterbank() const noexcept { return filterbank_; }

 private:
  FrontendConfig frontend_;
  MfccConfig mfcc_;
  int sample_rate_;
  Matrix filterbank_;
};

FeatureVector extract_features(std::span<const double> segment,
                               const FrontendConfig& frontend = {},
                               const MfccConfig& mfcc = {},
                               int sample_rate = kPipelineSampleRate);

}  // namespace stt
