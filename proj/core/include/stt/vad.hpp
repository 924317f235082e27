#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stt/audio_io.hpp"
#include "stt/units.hpp"

namespace stt {

struct VadConfig {
  Millis frame_len{150.0};
  Millis hop{40.0};
  /// Energy threshold as a fraction of the loudest frame's energy.
  double energy_ratio = 0.05;
  /// Crossings per sample above which a quieter frame still counts as speech.
  double zcr_threshold = 0.25;
  double energy_floor = 1e-6;
  /// Energy a high-ZCR frame needs, as a fraction of the energy threshold.
  double unvoiced_ratio = 0.4;
  int hangover_frames = 1;
  int min_speech_frames = 2;
  /// Silence that separates words during transcription.
  Millis min_gap{160.0};

  /// Throws ConfigInvalid naming the offending field.
  void validate(int sample_rate) const;
};

struct FrameFeatures {
  std::size_t index = 0;
  std::size_t start_sample = 0;
  double energy = 0.0;
  double zcr = 0.0;
  bool decision = false;
};

/// Half-open sample interval [start_sample, end_sample).
struct SpeechSegment {
  std::size_t start_sample = 0;
  std::size_t end_sample = 0;

  std::size_t length() const noexcept { return end_sample - start_sample; }
  friend bool operator==(const SpeechSegment&, const SpeechSegment&) = default;
};

struct VadResult {
  std::vector<FrameFeatures> frames;
  std::vector<SpeechSegment> segments;
  /// E_thr: the energy a frame must exceed to be voiced.
  double energy_threshold = 0.0;
};

/// Mean squared sample value.
double frame_energy(std::span<const double> frame);

/// Sign changes per adjacent pair. Zeros take the sign of the last nonzero
/// sample, so a run of zeros never produces a crossing by itself.
double frame_zcr(std::span<const double> frame);

/// Energy/ZCR voice activity detection.
///
/// Frames of `frame_len` every `hop` are classified against a threshold
/// relative to the loudest frame. Runs of speech frames (gaps of up to
/// `hangover_frames` bridged, runs shorter than `min_speech_frames` dropped)
/// form candidate regions; each region is then re-examined in hop-sized
/// blocks with the same decision rule so that segment edges and internal
/// pauses are located to within one hop.
VadResult detect(const AudioBuffer& buffer, const VadConfig& config = {});

/// Merges segments separated by fewer than `min_gap_samples` of silence.
std::vector<SpeechSegment> group_segments(std::span<const SpeechSegment> segments,
                                          std::size_t min_gap_samples);

}  // namespace stt
