#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stt/stt.hpp"

namespace {

// One second of a vowel-like tone with a noise floor, surrounded by silence.
stt::AudioBuffer word(double f0, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.002);
  stt::AudioBuffer b;
  b.sample_rate = stt::kPipelineSampleRate;
  b.samples.resize(12000);
  for (std::size_t n = 0; n < b.samples.size(); ++n) {
    const double t = double(n) / b.sample_rate;
    double s = noise(rng);
    if (n >= 2000 && n < 10000) {
      for (int h = 1; h <= 8; ++h) s += 0.3 / h * std::sin(2 * std::numbers::pi * f0 * h * t);
    }
    b.samples[n] = s;
  }
  return b;
}

void BM_Preemphasize(benchmark::State& state) {
  const auto b = word(140.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(stt::preemphasize(b.samples, 0.9375));
  state.SetItemsProcessed(state.iterations() * std::int64_t(b.samples.size()));
}
BENCHMARK(BM_Preemphasize);

void BM_Fft256(benchmark::State& state) {
  std::vector<std::complex<double>> x(256);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.1 * double(i));
  for (auto _ : state) {
    auto y = x;
    stt::fft(y);
    benchmark::DoNotOptimize(y.data());
  }
}
BENCHMARK(BM_Fft256);

void BM_VadDetect(benchmark::State& state) {
  const auto b = word(140.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(stt::detect(b));
}
BENCHMARK(BM_VadDetect);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto b = word(140.0, 3);
  stt::FeatureExtractor extract({}, {}, b.sample_rate);
  for (auto _ : state) benchmark::DoNotOptimize(extract(b.samples));
}
BENCHMARK(BM_ExtractFeatures);

void BM_GrnnClassify(benchmark::State& state) {
  const auto patterns = std::size_t(state.range(0));
  std::mt19937 rng(4);
  std::normal_distribution<double> g;
  std::vector<stt::LabeledFeatures> examples;
  for (std::size_t i = 0; i < patterns; ++i) {
    stt::LabeledFeatures e;
    e.label = "w" + std::to_string(i % 10);
    e.features.values.resize(260);
    for (auto& v : e.features.values) v = g(rng);
    examples.push_back(std::move(e));
  }
  const auto model = stt::train(examples, 0.5);
  std::vector<double> probe(260);
  for (auto& v : probe) v = g(rng);
  for (auto _ : state) benchmark::DoNotOptimize(stt::classify(model, probe));
}
BENCHMARK(BM_GrnnClassify)->Arg(30)->Arg(300)->Arg(3000);

void BM_RecognizeIsolated(benchmark::State& state) {
  std::vector<stt::LabeledFeatures> examples;
  for (int i = 0; i < 10; ++i) {
    const auto b = word(100.0 + 20.0 * i, unsigned(i));
    examples.push_back({stt::extract_features(b.samples), "w" + std::to_string(i)});
  }
  const auto model = stt::train(examples);
  const auto probe = word(150.0, 99);
  for (auto _ : state) benchmark::DoNotOptimize(stt::recognize_isolated(model, probe));
}
BENCHMARK(BM_RecognizeIsolated);

}  // namespace

BENCHMARK_MAIN();
