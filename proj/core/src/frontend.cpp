#include "stt/frontend.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "stt/error.hpp"

namespace stt {
namespace {

const std::vector<double>& cached_window(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<double>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, hamming_window(n)).first;
  return it->second;
}

}  // namespace

void FrontendConfig::validate(int sample_rate) const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfigInvalid, what); };
  if (sample_rate <= 0) fail("sample_rate must be positive");
  if (!(preemphasis_a >= 0.9 && preemphasis_a <= 1.0)) fail("preemphasis_a must lie in [0.9, 1.0]");
  if (!(hop.count() > 0.0)) fail("hop must be positive");
  if (!(hop < frame_len)) fail("hop must be shorter than frame_len");
  const std::size_t frame = frame_samples(sample_rate);
  if (frame < 2) fail("frame_len must span at least two samples");
  if (hop_samples(sample_rate) == 0) fail("hop is shorter than one sample");
  if (!std::has_single_bit(fft_size)) fail("fft_size must be a power of two");
  if (fft_size < frame) {
    fail("fft_size " + std::to_string(fft_size) + " is smaller than the " +
         std::to_string(frame) + "-sample frame");
  }
}

std::vector<double> preemphasize(std::span<const double> samples, double a) {
  std::vector<double> out(samples.size());
  double previous = 0.0;
  for (std::size_t n = 0; n < samples.size(); ++n) {
    out[n] = samples[n] - a * previous;
    previous = samples[n];
  }
  return out;
}

std::vector<double> hamming_window(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
  }
  // Exact symmetry; cos() is not bitwise symmetric about pi.
  for (std::size_t i = 0; i < n / 2; ++i) w[n - 1 - i] = w[i];
  return w;
}

std::size_t frame_count(std::size_t length, std::size_t frame, std::size_t hop) {
  if (length <= frame) return length == 0 ? 0 : 1;
  return (length - frame + hop - 1) / hop + 1;
}

Matrix frame_and_window(std::span<const double> segment, const FrontendConfig& config,
                        int sample_rate) {
  config.validate(sample_rate);
  const std::size_t frame = config.frame_samples(sample_rate);
  const std::size_t hop = config.hop_samples(sample_rate);
  if (segment.size() < frame) {
    throw Error(ErrorCode::kSegmentTooShort, std::to_string(segment.size()) +
                                                 " samples is shorter than one " +
                                                 std::to_string(frame) + "-sample frame");
  }
  const auto& window = cached_window(frame);
  const std::size_t count = frame_count(segment.size(), frame, hop);
  Matrix frames(count, frame);
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t start = t * hop;
    auto row = frames.row(t);
    for (std::size_t n = 0; n < frame && start + n < segment.size(); ++n) {
      row[n] = window[n] * segment[start + n];
    }
  }
  return frames;
}

void fft(std::span<std::complex<double>> data) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if (!std::has_single_bit(n)) {
    throw Error(ErrorCode::kConfigInvalid, "FFT size " + std::to_string(n) + " is not a power of two");
  }
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles from the exact angle rather than by repeated multiplication.
      const std::complex<double> w = std::polar(1.0, angle * static_cast<double>(k));
      for (std::size_t i = k; i < n; i += len) {
        // Written out: std::complex operator* takes the slow Annex G path.
        const std::complex<double> u = data[i];
        const std::complex<double> x = data[i + half];
        const std::complex<double> v(x.real() * w.real() - x.imag() * w.imag(),
                                     x.real() * w.imag() + x.imag() * w.real());
        data[i] = u + v;
        data[i + half] = u - v;
      }
    }
  }
}

std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size) {
  if (frame.size() > fft_size) {
    throw Error(ErrorCode::kDimensionMismatch, "frame of " + std::to_string(frame.size()) +
                                                   " samples exceeds fft_size " +
                                                   std::to_string(fft_size));
  }
  std::vector<std::complex<double>> buf(fft_size);
  for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  fft(buf);
  std::vector<double> power(fft_size / 2 + 1);
  const double scale = 1.0 / static_cast<double>(fft_size);
  for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]) * scale;
  return power;
}

Matrix power_frames(std::span<const double> segment, const FrontendConfig& config,
                    int sample_rate) {
  const auto emphasized = preemphasize(segment, config.preemphasis_a);
  const Matrix frames = frame_and_window(emphasized, config, sample_rate);
  Matrix power(frames.rows(), config.fft_size / 2 + 1);
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    const auto p = power_spectrum(frames.row(t), config.fft_size);
    std::copy(p.begin(), p.end(), power.row(t).begin());
  }
  return power;
}

}  // namespace stt
