#include "stt/vad.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stt/error.hpp"

namespace stt {
namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Thresholds shared by the frame pass and the block refinement pass.
struct DecisionRule {
  double energy_threshold;
  double unvoiced_threshold;
  double zcr_threshold;

  bool operator()(double energy, double zcr) const {
    return energy > energy_threshold || (zcr > zcr_threshold && energy > unvoiced_threshold);
  }
};

struct Run {
  std::size_t first;
  std::size_t last;  // inclusive
};

// Runs of true decisions, bridging gaps of up to `hangover` false entries and
// dropping runs spanning fewer than `min_len` entries.
std::vector<Run> speech_runs(const std::vector<bool>& decisions, int hangover, int min_len) {
  std::vector<Run> runs;
  const auto bridge = static_cast<std::size_t>(std::max(hangover, 0));
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    if (!decisions[i]) continue;
    if (!runs.empty() && i - runs.back().last - 1 <= bridge) {
      runs.back().last = i;
    } else {
      runs.push_back({i, i});
    }
  }
  std::erase_if(runs, [min_len](const Run& r) {
    return r.last - r.first + 1 < static_cast<std::size_t>(std::max(min_len, 1));
  });
  return runs;
}

// Energy and ZCR of samples[start, start + len), zero-padded past the end.
std::pair<double, double> padded_features(std::span<const double> samples, std::size_t start,
                                          std::size_t len) {
  const std::size_t avail = start < samples.size() ? std::min(len, samples.size() - start) : 0;
  const auto present = samples.subspan(start, avail);
  double sum = 0.0;
  for (double x : present) sum += x * x;
  const double energy = sum / static_cast<double>(len);
  // Trailing zeros never add a crossing, only lengthen the denominator.
  double zcr = 0.0;
  if (len >= 2 && present.size() >= 2) {
    zcr = frame_zcr(present) * static_cast<double>(present.size() - 1) /
          static_cast<double>(len - 1);
  }
  return {energy, zcr};
}

}  // namespace

void VadConfig::validate(int sample_rate) const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfigInvalid, what); };
  if (sample_rate <= 0) fail("sample_rate must be positive");
  if (!(hop.count() > 0.0)) fail("hop must be positive");
  if (!(frame_len > hop)) fail("frame_len must exceed hop");
  if (to_samples(hop, sample_rate) == 0) fail("hop is shorter than one sample");
  if (!(energy_ratio > 0.0 && energy_ratio < 1.0)) fail("energy_ratio must lie in (0, 1)");
  if (!(zcr_threshold >= 0.0 && zcr_threshold <= 1.0)) fail("zcr_threshold must lie in [0, 1]");
  if (!(energy_floor > 0.0)) fail("energy_floor must be positive");
  if (!(unvoiced_ratio > 0.0 && unvoiced_ratio <= 1.0)) fail("unvoiced_ratio must lie in (0, 1]");
  if (hangover_frames < 0) fail("hangover_frames must be non-negative");
  if (min_speech_frames < 1) fail("min_speech_frames must be at least 1");
  if (min_gap.count() < 0.0) fail("min_gap must be non-negative");
}

double frame_energy(std::span<const double> frame) {
  double sum = 0.0;
  for (double x : frame) sum += x * x;
  return frame.empty() ? 0.0 : sum / static_cast<double>(frame.size());
}

double frame_zcr(std::span<const double> frame) {
  if (frame.size() < 2) return 0.0;
  std::size_t crossings = 0;
  int previous = 0;
  for (double x : frame) {
    const int s = sign_of(x);
    if (s == 0) continue;
    if (previous != 0 && s != previous) ++crossings;
    previous = s;
  }
  return static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
}

VadResult detect(const AudioBuffer& buffer, const VadConfig& config) {
  config.validate(buffer.sample_rate);
  const std::span<const double> samples = buffer.samples;
  const std::size_t frame = to_samples(config.frame_len, buffer.sample_rate);
  const std::size_t hop = to_samples(config.hop, buffer.sample_rate);
  if (samples.size() < frame) {
    throw Error(ErrorCode::kBufferTooShort, std::to_string(samples.size()) +
                                                " samples is shorter than one " +
                                                std::to_string(frame) + "-sample VAD frame");
  }

  VadResult result;
  const std::size_t count = (samples.size() - frame + hop - 1) / hop + 1;
  result.frames.reserve(count);
  double max_energy = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = i * hop;
    const auto [energy, zcr] = padded_features(samples, start, frame);
    result.frames.push_back({i, start, energy, zcr, false});
    max_energy = std::max(max_energy, energy);
  }

  const double e_thr = std::max(config.energy_floor, config.energy_ratio * max_energy);
  const DecisionRule rule{e_thr, std::max(config.energy_floor, config.unvoiced_ratio * e_thr),
                          config.zcr_threshold};
  result.energy_threshold = e_thr;

  std::vector<bool> decisions(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto& f = result.frames[i];
    f.decision = rule(f.energy, f.zcr);
    decisions[i] = f.decision;
  }

  // Candidate regions: the samples covered by each frame run. Regions of
  // neighbouring runs can overlap because frames do, so merge them.
  std::vector<SpeechSegment> regions;
  for (const Run& run : speech_runs(decisions, config.hangover_frames, config.min_speech_frames)) {
    SpeechSegment r{run.first * hop, std::min(samples.size(), run.last * hop + frame)};
    if (!regions.empty() && r.start_sample <= regions.back().end_sample) {
      regions.back().end_sample = std::max(regions.back().end_sample, r.end_sample);
    } else {
      regions.push_back(r);
    }
  }

  // Refine each region on a hop-sized block grid.
  for (const SpeechSegment& region : regions) {
    const std::size_t blocks = (region.length() + hop - 1) / hop;
    std::vector<bool> block_speech(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t start = region.start_sample + b * hop;
      const std::size_t len = std::min(hop, region.end_sample - start);
      const auto block = samples.subspan(start, len);
      block_speech[b] = rule(frame_energy(block), frame_zcr(block));
    }
    const auto runs = speech_runs(block_speech, config.hangover_frames, config.min_speech_frames);
    if (runs.empty()) {
      result.segments.push_back(region);
      continue;
    }
    for (const Run& run : runs) {
      result.segments.push_back(
          {region.start_sample + run.first * hop,
           std::min(region.end_sample, region.start_sample + (run.last + 1) * hop)});
    }
  }
  return result;
}

std::vector<SpeechSegment> group_segments(std::span<const SpeechSegment> segments,
                                          std::size_t min_gap_samples) {
  std::vector<SpeechSegment> groups;
  for (const SpeechSegment& s : segments) {
    if (!groups.empty() && s.start_sample - groups.back().end_sample < min_gap_samples) {
      groups.back().end_sample = s.end_sample;
    } else {
      groups.push_back(s);
    }
  }
  return groups;
}

}  // namespace stt
