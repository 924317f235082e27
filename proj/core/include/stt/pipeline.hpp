#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stt/audio_io.hpp"
#include "stt/grnn.hpp"
#include "stt/lexicon.hpp"
#include "stt/mfcc.hpp"
#include "stt/vad.hpp"

namespace stt {

struct TrainingOptions {
  FrontendConfig frontend;
  MfccConfig mfcc;
  VadConfig vad;
  double spread = kDefaultSpread;
};

/// Word-level speech region of a buffer: VAD segments separated by less
/// than `vad.min_gap` are joined, and the longest group is returned.
/// Throws NoSpeechDetected.
SpeechSegment locate_utterance(const AudioBuffer& buffer, const VadConfig& vad = {});

/// Features of the located utterance under the given configs.
FeatureVector utterance_features(const AudioBuffer& buffer, const FrontendConfig& frontend,
                                 const MfccConfig& mfcc, const VadConfig& vad = {});

/// One example per file. Errors are rethrown with the file path attached.
std::vector<LabeledFeatures> dataset_features(std::span<const DatasetEntry> entries,
                                              const TrainingOptions& options);

GrnnModel train_from_dataset(const std::filesystem::path& root,
                             const TrainingOptions& options = {});

/// Recognizes a buffer holding one utterance, using the configs stored in
/// the model.
Recognition recognize_isolated(const GrnnModel& model, const AudioBuffer& buffer,
                               const VadConfig& vad = {});

struct TranscriptWord {
  SpeechSegment segment;
  Recognition recognition;
  /// Label, or the lexicon word when syllables were mapped.
  std::string text;
  bool in_lexicon = true;
};

struct Transcript {
  std::vector<TranscriptWord> words;
  std::string text;
};

/// Splits the buffer into words at silences of at least `vad.min_gap` and
/// recognizes each word independently. Throws NoSpeechDetected when the
/// buffer holds no speech.
Transcript transcribe(const GrnnModel& model, const AudioBuffer& buffer,
                      const VadConfig& vad = {});

struct WordRecognition {
  std::string text;
  bool in_lexicon = false;
  std::vector<Recognition> syllables;
};

/// Classifies each buffer as one syllable and looks the sequence up in the
/// lexicon. Unknown sequences come back concatenated, flagged out of lexicon.
WordRecognition recognize_word_by_syllables(const GrnnModel& model,
                                            std::span<const AudioBuffer> buffers,
                                            const SyllableLexicon& lexicon,
                                            const VadConfig& vad = {});

/// Transcription where every VAD segment inside a word is a syllable and
/// each word is spelled through the lexicon.
Transcript transcribe_syllables(const GrnnModel& model, const AudioBuffer& buffer,
                                const SyllableLexicon& lexicon, const VadConfig& vad = {});

/// "start,end,label,confidence" rows with a header line.
std::string transcript_csv(const Transcript& transcript);

}  // namespace stt
