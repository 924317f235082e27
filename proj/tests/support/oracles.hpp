#pragma once

// Straightforward reference evaluations used to check the library. Nothing
// here calls into the code under test.

#include <vector>

namespace stt::testing {

struct OracleFrontend {
  double a = 0.9375;
  int frame = 200;
  int hop = 80;
  int fft_size = 256;
};

struct OracleMfcc {
  int filters = 26;
  int coeffs = 13;
  double f_min = 300.0;
  double f_max = 3400.0;
  double log_floor = 1e-10;
  int target_frames = 20;
};

/// Full feature vector, one formula at a time: pre-emphasis, framing with a
/// zero-padded last frame, Hamming window, direct DFT, triangular mel
/// filters, natural log, orthonormal DCT-II, and linear time normalization.
std::vector<double> mfcc_oracle(const std::vector<double>& segment, const OracleFrontend& fe,
                                const OracleMfcc& mf, int sample_rate = 8000);

/// Direct DFT power |X(k)|^2 / N for k = 0..N/2.
std::vector<double> dft_power(const std::vector<double>& frame, int fft_size);

/// Unshifted kernel regression: y_j = sum w_ij h_i / sum h_i with
/// h_i = exp(-|c_i - x|^2 / (2 sigma^2)).
std::vector<double> grnn_oracle(const std::vector<std::vector<double>>& centers,
                                const std::vector<std::vector<double>>& targets, double sigma,
                                const std::vector<double>& x);

}  // namespace stt::testing
