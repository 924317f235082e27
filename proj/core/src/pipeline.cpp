#include "stt/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "stt/error.hpp"

namespace stt {
namespace {

std::vector<SpeechSegment> word_groups(const AudioBuffer& buffer, const VadConfig& vad,
                                       std::vector<SpeechSegment>* segments = nullptr) {
  require_pipeline_rate(buffer);
  VadResult result = detect(buffer, vad);
  if (result.segments.empty()) throw Error(ErrorCode::kNoSpeechDetected, "no speech detected");
  auto groups = group_segments(result.segments, to_samples(vad.min_gap, buffer.sample_rate));
  if (segments) *segments = std::move(result.segments);
  return groups;
}

std::span<const double> slice(const AudioBuffer& buffer, const SpeechSegment& s) {
  return std::span<const double>(buffer.samples).subspan(s.start_sample, s.length());
}

std::string join(const std::vector<TranscriptWord>& words) {
  std::string text;
  for (const auto& w : words) {
    if (!text.empty()) text += ' ';
    text += w.text;
  }
  return text;
}

WordRecognition spell(const std::vector<Recognition>& syllables, const SyllableLexicon& lexicon) {
  WordRecognition out;
  out.syllables = syllables;
  std::vector<std::string> labels;
  for (const auto& r : syllables) labels.push_back(r.label);
  if (auto word = lexicon.lookup(labels)) {
    out.text = *word;
    out.in_lexicon = true;
  } else {
    for (const auto& l : labels) out.text += l;
    out.in_lexicon = false;
  }
  return out;
}

}  // namespace

SpeechSegment locate_utterance(const AudioBuffer& buffer, const VadConfig& vad) {
  const auto groups = word_groups(buffer, vad);
  // max_element keeps the earliest of equally long groups.
  return *std::max_element(groups.begin(), groups.end(),
                           [](const SpeechSegment& a, const SpeechSegment& b) {
                             return a.length() < b.length();
                           });
}

FeatureVector utterance_features(const AudioBuffer& buffer, const FrontendConfig& frontend,
                                 const MfccConfig& mfcc, const VadConfig& vad) {
  const SpeechSegment s = locate_utterance(buffer, vad);
  return extract_features(slice(buffer, s), frontend, mfcc, buffer.sample_rate);
}

std::vector<LabeledFeatures> dataset_features(std::span<const DatasetEntry> entries,
                                              const TrainingOptions& options) {
  const FeatureExtractor extractor(options.frontend, options.mfcc);
  std::vector<LabeledFeatures> examples;
  examples.reserve(entries.size());
  for (const auto& entry : entries) {
    try {
      const AudioBuffer buffer = load_wav(entry.path);
      const SpeechSegment s = locate_utterance(buffer, options.vad);
      examples.push_back({extractor(slice(buffer, s)), entry.label});
    } catch (const Error& e) {
      if (e.message().starts_with(entry.path.string())) throw;
      throw Error(e.code(), entry.path.string() + ": " + e.message());
    }
  }
  return examples;
}

GrnnModel train_from_dataset(const std::filesystem::path& root, const TrainingOptions& options) {
  const auto entries = scan_dataset(root);
  const auto examples = dataset_features(entries, options);
  return train(examples, options.spread, options.frontend, options.mfcc);
}

Recognition recognize_isolated(const GrnnModel& model, const AudioBuffer& buffer,
                               const VadConfig& vad) {
  const FeatureVector x = utterance_features(buffer, model.frontend, model.mfcc, vad);
  return classify(model, x.values);
}

Transcript transcribe(const GrnnModel& model, const AudioBuffer& buffer, const VadConfig& vad) {
  const auto groups = word_groups(buffer, vad);
  const FeatureExtractor extractor(model.frontend, model.mfcc, buffer.sample_rate);
  Transcript t;
  for (const SpeechSegment& g : groups) {
    TranscriptWord w;
    w.segment = g;
    w.recognition = classify(model, extractor(slice(buffer, g)).values);
    w.text = w.recognition.label;
    t.words.push_back(std::move(w));
  }
  t.text = join(t.words);
  return t;
}

WordRecognition recognize_word_by_syllables(const GrnnModel& model,
                                            std::span<const AudioBuffer> buffers,
                                            const SyllableLexicon& lexicon,
                                            const VadConfig& vad) {
  std::vector<Recognition> syllables;
  for (std::size_t i = 0; i < buffers.size(); ++i) {
    try {
      syllables.push_back(recognize_isolated(model, buffers[i], vad));
    } catch (const Error& e) {
      throw Error(e.code(), "syllable " + std::to_string(i) + ": " + e.message());
    }
  }
  return spell(syllables, lexicon);
}

Transcript transcribe_syllables(const GrnnModel& model, const AudioBuffer& buffer,
                                const SyllableLexicon& lexicon, const VadConfig& vad) {
  std::vector<SpeechSegment> segments;
  const auto groups = word_groups(buffer, vad, &segments);
  const FeatureExtractor extractor(model.frontend, model.mfcc, buffer.sample_rate);
  Transcript t;
  auto seg = segments.begin();
  for (const SpeechSegment& g : groups) {
    std::vector<Recognition> syllables;
    for (; seg != segments.end() && seg->end_sample <= g.end_sample; ++seg) {
      syllables.push_back(classify(model, extractor(slice(buffer, *seg)).values));
    }
    WordRecognition word = spell(syllables, lexicon);
    TranscriptWord w;
    w.segment = g;
    // A word's confidence is that of its least certain syllable.
    w.recognition = *std::min_element(
        word.syllables.begin(), word.syllables.end(),
        [](const Recognition& a, const Recognition& b) { return a.confidence < b.confidence; });
    w.recognition.label = word.text;
    w.text = word.text;
    w.in_lexicon = word.in_lexicon;
    t.words.push_back(std::move(w));
  }
  t.text = join(t.words);
  return t;
}

std::string transcript_csv(const Transcript& transcript) {
  std::ostringstream out;
  out << "start_sample,end_sample,label,confidence\n";
  out.precision(6);
  for (const auto& w : transcript.words) {
    out << w.segment.start_sample << ',' << w.segment.end_sample << ',' << w.text << ','
        << std::fixed << w.recognition.confidence << '\n';
  }
  return out.str();
}

}  // namespace stt
