#include "stt/mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stt/error.hpp"

namespace stt {

void MfccConfig::validate(int sample_rate) const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfigInvalid, what); };
  if (sample_rate <= 0) fail("sample_rate must be positive");
  if (!(f_min >= 0.0 && f_min < f_max)) fail("f_min must satisfy 0 <= f_min < f_max");
  if (f_max > sample_rate / 2.0) {
    fail("f_max " + std::to_string(f_max) + " exceeds the Nyquist frequency");
  }
  if (n_filters < 1) fail("n_filters must be positive");
  const int highest = include_c0 ? n_coeffs : n_coeffs + 1;
  if (n_coeffs < 1 || highest > n_filters) fail("n_coeffs must lie in [1, n_filters]");
  if (!(log_floor > 0.0)) fail("log_floor must be positive");
  if (target_frames < 2) fail("target_frames must be at least 2");
}

double mel_scale(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

Matrix mel_filterbank(const MfccConfig& config, int sample_rate, std::size_t fft_size) {
  config.validate(sample_rate);
  const std::size_t bins = fft_size / 2 + 1;
  const int points = config.n_filters + 2;
  const double mel_lo = mel_scale(config.f_min);
  const double mel_hi = mel_scale(config.f_max);

  std::vector<std::size_t> edge(points);
  for (int p = 0; p < points; ++p) {
    const double mel = mel_lo + (mel_hi - mel_lo) * p / (points - 1);
    const double bin = mel_to_hz(mel) * static_cast<double>(fft_size) / sample_rate;
    edge[p] = static_cast<std::size_t>(std::lround(bin));
    if (p > 0 && edge[p] <= edge[p - 1]) {
      throw Error(ErrorCode::kConfigInvalid,
                  std::to_string(config.n_filters) + " filters are too many for a " +
                      std::to_string(fft_size) + "-point FFT over the band");
    }
  }

  Matrix fb(static_cast<std::size_t>(config.n_filters), bins);
  for (int m = 0; m < config.n_filters; ++m) {
    const std::size_t lo = edge[m];
    const std::size_t peak = edge[m + 1];
    const std::size_t hi = edge[m + 2];
    for (std::size_t k = lo; k <= hi && k < bins; ++k) {
      double v;
      if (k <= peak) {
        v = static_cast<double>(k - lo) / static_cast<double>(peak - lo);
      } else {
        v = static_cast<double>(hi - k) / static_cast<double>(hi - peak);
      }
      fb(m, k) = v;
    }
  }
  return fb;
}

std::vector<double> frame_mfcc(std::span<const double> power, const Matrix& filterbank,
                               const MfccConfig& config) {
  if (power.size() != filterbank.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "power spectrum has " + std::to_string(power.size()) + " bins, filterbank expects " +
                    std::to_string(filterbank.cols()));
  }
  const std::size_t filters = filterbank.rows();
  std::vector<double> log_energy(filters);
  for (std::size_t m = 0; m < filters; ++m) {
    const auto weights = filterbank.row(m);
    double e = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) e += weights[k] * power[k];
    log_energy[m] = std::log(std::max(config.log_floor, e));
  }

  const std::size_t first = config.include_c0 ? 0 : 1;
  const auto count = static_cast<std::size_t>(config.n_coeffs);
  const double M = static_cast<double>(filters);
  std::vector<double> coeffs(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t j = first + c;
    double sum = 0.0;
    for (std::size_t m = 0; m < filters; ++m) {
      sum += log_energy[m] * std::cos(std::numbers::pi * static_cast<double>(j) *
                                      (static_cast<double>(m) + 0.5) / M);
    }
    coeffs[c] = sum * std::sqrt((j == 0 ? 1.0 : 2.0) / M);
  }
  return coeffs;
}

Matrix time_normalize(const Matrix& frames, std::size_t target) {
  const std::size_t actual = frames.rows();
  if (actual == target) return frames;
  if (actual < 2 || target < 2) {
    throw Error(ErrorCode::kSegmentTooShort, "time normalization needs at least two frames");
  }
  Matrix out(target, frames.cols());
  const double step = static_cast<double>(actual - 1) / static_cast<double>(target - 1);
  for (std::size_t t = 0; t < target; ++t) {
    const double pos = step * static_cast<double>(t);
    const auto lo = std::min(static_cast<std::size_t>(pos), actual - 2);
    const double frac = pos - static_cast<double>(lo);
    for (std::size_t c = 0; c < frames.cols(); ++c) {
      out(t, c) = (1.0 - frac) * frames(lo, c) + frac * frames(lo + 1, c);
    }
  }
  return out;
}

FeatureExtractor::FeatureExtractor(FrontendConfig frontend, MfccConfig mfcc, int sample_rate)
    : frontend_(frontend), mfcc_(mfcc), sample_rate_(sample_rate) {
  frontend_.validate(sample_rate_);
  filterbank_ = mel_filterbank(mfcc_, sample_rate_, frontend_.fft_size);
}

Matrix FeatureExtractor::cepstra(std::span<const double> segment) const {
  const Matrix power = power_frames(segment, frontend_, sample_rate_);
  Matrix out(power.rows(), static_cast<std::size_t>(mfcc_.n_coeffs));
  for (std::size_t t = 0; t < power.rows(); ++t) {
    const auto c = frame_mfcc(power.row(t), filterbank_, mfcc_);
    std::copy(c.begin(), c.end(), out.row(t).begin());
  }
  return out;
}

FeatureVector FeatureExtractor::operator()(std::span<const double> segment) const {
  const Matrix frames = cepstra(segment);
  if (frames.rows() < 2) {
    throw Error(ErrorCode::kSegmentTooShort,
                "segment of " + std::to_string(segment.size()) + " samples yields " +
                    std::to_string(frames.rows()) + " frame(s); at least two are needed");
  }
  const Matrix normalized = time_normalize(frames, static_cast<std::size_t>(mfcc_.target_frames));
  const auto data = normalized.data();
  return FeatureVector{{data.begin(), data.end()}};
}

FeatureVector extract_features(std::span<const double> segment, const FrontendConfig& frontend,
                               const MfccConfig& mfcc, int sample_rate) {
  return FeatureExtractor(frontend, mfcc, sample_rate)(segment);
}

}  // namespace stt
