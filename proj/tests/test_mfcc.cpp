#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stt/error.hpp"
#include "stt/mfcc.hpp"

using namespace stt;

namespace {

std::vector<double> two_tone(std::size_t n, double f1, double f2, double gain = 0.5) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = double(i) / 8000.0;
    x[i] = gain * (std::sin(2 * std::numbers::pi * f1 * t) + 0.5 * std::sin(2 * std::numbers::pi * f2 * t + 1.0));
  }
  return x;
}

}  // namespace

TEST_CASE("mel_scale") {
  CHECK(mel_scale(0.0) == 0.0);
  CHECK(mel_scale(700.0) == doctest::Approx(781.1729).epsilon(1e-6));
  CHECK(mel_scale(1000.0) == doctest::Approx(999.9855).epsilon(1e-6));
  for (double f = 0; f < 4000; f += 97) {
    CHECK(mel_scale(f + 1) > mel_scale(f));
    CHECK(mel_to_hz(mel_scale(f)) == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("filterbank shape") {
  const MfccConfig cfg;
  const Matrix fb = mel_filterbank(cfg, 8000, 256);
  REQUIRE(fb.rows() == 26);
  REQUIRE(fb.cols() == 129);

  // Expected peak bins: interior mel points mapped back to Hz, nearest bin.
  const double lo = 2595 * std::log10(1 + 300 / 700.0), hi = 2595 * std::log10(1 + 3400 / 700.0);
  for (std::size_t m = 0; m < 26; ++m) {
    const double mel = lo + (hi - lo) * double(m + 1) / 27.0;
    const double hz = 700 * (std::pow(10, mel / 2595) - 1);
    const auto expected = static_cast<std::ptrdiff_t>(std::lround(hz * 256 / 8000));
    const auto row = fb.row(m);
    const auto peak = std::max_element(row.begin(), row.end()) - row.begin();
    CHECK(peak == expected);
    CHECK(row[static_cast<std::size_t>(peak)] == 1.0);
    CHECK(*std::min_element(row.begin(), row.end()) >= 0.0);
    if (m + 1 < 26) {
      // Filter m falls to zero exactly at filter m+1's peak, and filter m+1
      // rises from zero at filter m's peak.
      const auto next = fb.row(m + 1);
      const auto next_peak = std::max_element(next.begin(), next.end()) - next.begin();
      CHECK(row[static_cast<std::size_t>(next_peak)] == 0.0);
      CHECK(next[static_cast<std::size_t>(peak)] == 0.0);
      for (auto k = peak + 1; k < next_peak; ++k) {
        CHECK(row[static_cast<std::size_t>(k)] > 0.0);
        CHECK(next[static_cast<std::size_t>(k)] > 0.0);
      }
    }
  }
}

TEST_CASE("filterbank config errors") {
  MfccConfig cfg;
  cfg.f_max = 4500;
  CHECK_THROWS_AS(mel_filterbank(cfg, 8000, 256), Error);
  cfg = {};
  cfg.n_filters = 80;  // more filters than bins in the band
  try {
    mel_filterbank(cfg, 8000, 256);
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kConfigInvalid);
  }
  cfg = {};
  cfg.n_coeffs = 27;
  CHECK_THROWS_AS(cfg.validate(8000), Error);
  cfg = {};
  cfg.target_frames = 1;
  CHECK_THROWS_AS(cfg.validate(8000), Error);
}

TEST_CASE("frame_mfcc of silence has only c0") {
  const MfccConfig cfg;
  const Matrix fb = mel_filterbank(cfg, 8000, 256);
  const auto c = frame_mfcc(std::vector<double>(129, 0.0), fb, cfg);
  REQUIRE(c.size() == 13);
  CHECK(c[0] == doctest::Approx(std::log(1e-10) * std::sqrt(26.0)));
  for (std::size_t j = 1; j < 13; ++j) CHECK(std::abs(c[j]) < 1e-9);
}

TEST_CASE("1 kHz tone excites the filter centred nearest 1 kHz") {
  const MfccConfig cfg;
  const Matrix fb = mel_filterbank(cfg, 8000, 256);
  // Bin 32 is exactly 1000 Hz.
  std::vector<double> x(256);
  for (std::size_t n = 0; n < 256; ++n) x[n] = std::cos(2 * std::numbers::pi * 32.0 * double(n) / 256.0);
  const auto p = power_spectrum(x, 256);
  std::size_t best = 0, nearest = 0;
  double best_e = -1, nearest_d = 1e9;
  for (std::size_t m = 0; m < fb.rows(); ++m) {
    double e = 0;
    for (std::size_t k = 0; k < 129; ++k) e += fb(m, k) * p[k];
    if (e > best_e) best_e = e, best = m;
    const auto row = fb.row(m);
    const double centre_hz = double(std::max_element(row.begin(), row.end()) - row.begin()) * 8000 / 256;
    if (std::abs(centre_hz - 1000) < nearest_d) nearest_d = std::abs(centre_hz - 1000), nearest = m;
  }
  CHECK(best == nearest);
}

TEST_CASE("scaling the power spectrum changes only c0") {
  const MfccConfig cfg;
  const Matrix fb = mel_filterbank(cfg, 8000, 256);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> p(129);
  for (double& v : p) v = u(rng);
  const auto base = frame_mfcc(p, fb, cfg);
  for (double alpha : {1e-3, 0.5, 7.0, 1e4}) {
    auto q = p;
    for (double& v : q) v *= alpha;
    const auto c = frame_mfcc(q, fb, cfg);
    CHECK(c[0] == doctest::Approx(base[0] + std::log(alpha) * std::sqrt(26.0)).epsilon(1e-12));
    for (std::size_t j = 1; j < 13; ++j) CHECK(std::abs(c[j] - base[j]) < 1e-9);
  }
}

TEST_CASE("time_normalize") {
  SUBCASE("identity at the target length") {
    Matrix m(20, 3);
    for (std::size_t i = 0; i < 60; ++i) m.data()[i] = double(i) * 0.1;
    CHECK(time_normalize(m, 20) == m);
  }
  SUBCASE("constant rows stay constant") {
    for (std::size_t rows : {2u, 7u, 20u, 55u}) {
      Matrix m(rows, 2);
      for (std::size_t r = 0; r < rows; ++r) m(r, 0) = 1.5, m(r, 1) = -2.0;
      const auto out = time_normalize(m, 20);
      for (std::size_t r = 0; r < 20; ++r) {
        CHECK(out(r, 0) == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(out(r, 1) == doctest::Approx(-2.0).epsilon(1e-15));
      }
    }
  }
  SUBCASE("linear ramps are reproduced exactly and endpoints preserved") {
    Matrix m(5, 1);
    for (std::size_t r = 0; r < 5; ++r) m(r, 0) = 2.0 * double(r);
    const auto out = time_normalize(m, 9);
    for (std::size_t r = 0; r < 9; ++r) CHECK(out(r, 0) == doctest::Approx(double(r)));
    CHECK(out(0, 0) == 0.0);
    CHECK(out(8, 0) == 8.0);
  }
  SUBCASE("idempotent") {
    Matrix m(13, 2);
    for (std::size_t i = 0; i < 26; ++i) m.data()[i] = std::sin(double(i));
    const auto once = time_normalize(m, 20);
    CHECK(time_normalize(once, 20) == once);
  }
}

TEST_CASE("extract_features with exactly target_frames frames is the raw cepstra") {
  // 200 + 19 * 80 samples gives 20 frames.
  const auto x = two_tone(1720, 440, 1800);
  const FeatureExtractor fx(FrontendConfig{}, MfccConfig{});
  const Matrix ceps = fx.cepstra(x);
  REQUIRE(ceps.rows() == 20);
  const auto f = fx(x);
  REQUIRE(f.size() == 260);
  for (std::size_t i = 0; i < 260; ++i) CHECK(f.values[i] == ceps.data()[i]);
}

TEST_CASE("extract_features matches the step-by-step oracle") {
  for (std::size_t len : {201u, 777u, 1720u, 3000u}) {
    const auto x = two_tone(len, 523.0, 2100.0);
    const auto f = extract_features(x);
    const auto ref = stt::testing::mfcc_oracle(x, {}, {});
    REQUIRE(f.size() == ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(f.values[i] - ref[i]) < 1e-9);
  }
}

TEST_CASE("feature length and finiteness") {
  std::mt19937 rng(2);
  std::uniform_int_distribution<std::size_t> len(201, 9000);
  std::normal_distribution<double> g(0.0, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(len(rng));
    for (double& v : x) v = g(rng);
    const auto f = extract_features(x);
    CHECK(f.size() == 260);
    for (double v : f.values) CHECK(std::isfinite(v));
  }
  const auto zeros = extract_features(std::vector<double>(900, 0.0));
  for (double v : zeros.values) CHECK(std::isfinite(v));
}

TEST_CASE("amplitude scaling moves only the c0 positions") {
  const auto x = two_tone(2400, 311.0, 1450.0);
  const auto base = extract_features(x);
  for (double alpha : {0.05, 0.3, 2.0}) {
    auto y = x;
    for (double& v : y) v *= alpha;
    const auto f = extract_features(y);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i % 13 == 0) continue;
      CHECK(std::abs(f.values[i] - base.values[i]) < 1e-6);
    }
  }
}

TEST_CASE("segments too short for two frames") {
  try {
    extract_features(std::vector<double>(200, 0.1));
    FAIL("expected SegmentTooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSegmentTooShort);
  }
}

TEST_CASE("dropping c0 shifts the coefficient window") {
  MfccConfig with;
  MfccConfig without;
  without.include_c0 = false;
  const auto x = two_tone(1720, 440, 1800);
  const auto a = extract_features(x, {}, with);
  without.n_coeffs = 12;
  const auto b = extract_features(x, {}, without);
  REQUIRE(b.size() == 240);
  CHECK(b.values[0] == doctest::Approx(a.values[1]).epsilon(1e-12));
  CHECK(b.values[11] == doctest::Approx(a.values[12]).epsilon(1e-12));
}
