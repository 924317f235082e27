#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "stt/matrix.hpp"
#include "stt/units.hpp"

namespace stt {

struct FrontendConfig {
  double preemphasis_a = 0.9375;
  Millis frame_len{25.0};
  Millis hop{10.0};
  std::size_t fft_size = 256;

  void validate(int sample_rate) const;
  std::size_t frame_samples(int sample_rate) const { return to_samples(frame_len, sample_rate); }
  std::size_t hop_samples(int sample_rate) const { return to_samples(hop, sample_rate); }

  friend bool operator==(const FrontendConfig&, const FrontendConfig&) = default;
};

/// y(0) = s(0), y(n) = s(n) - a*s(n-1).
std::vector<double> preemphasize(std::span<const double> samples, double a);

/// Symmetric Hamming window, w(n) = 0.54 - 0.46 cos(2 pi n / (N - 1)).
std::vector<double> hamming_window(std::size_t n);

/// Number of frames `frame_and_window` produces: frames advance by `hop`
/// until one reaches the end of the segment.
std::size_t frame_count(std::size_t length, std::size_t frame, std::size_t hop);

/// Splits a segment into overlapping frames, zero-pads the final partial
/// frame, and applies the Hamming window. One row per frame.
Matrix frame_and_window(std::span<const double> segment, const FrontendConfig& config,
                        int sample_rate = kPipelineSampleRate);

/// In-place iterative radix-2 FFT. Size must be a power of two.
void fft(std::span<std::complex<double>> data);

/// |X(k)|^2 / fft_size for k = 0..fft_size/2 of the zero-padded frame.
std::vector<double> power_spectrum(std::span<const double> frame, std::size_t fft_size);

/// Pre-emphasis, framing, windowing, and power spectrum of every frame.
/// Result is frame_count x (fft_size/2 + 1).
Matrix power_frames(std::span<const double> segment, const FrontendConfig& config,
                    int sample_rate = kPipelineSampleRate);

}  // namespace stt
