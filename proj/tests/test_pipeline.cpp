#include <fstream>
#include <iterator>

#include "doctest.h"
#include "stt/error.hpp"
#include "stt/pipeline.hpp"
#include "synth.hpp"

using namespace stt;
namespace st = stt::testing;

namespace {

// Shared small dataset: four classes, three clean variants each.
struct Fixture {
  st::TempDir dir;
  st::SyntheticDataset data = st::make_dataset({"ca", "go", "ma", "to"}, 3, 555);
  GrnnModel model;

  Fixture() {
    st::write_dataset(dir / "train", data.labels, data.train);
    model = train_from_dataset(dir / "train");
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

ErrorCode code_of(auto&& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected an stt::Error");
  return ErrorCode::kIoFailure;
}

std::vector<std::uint8_t> file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("train_from_dataset shapes") {
  auto& f = fixture();
  CHECK(f.model.pattern_count() == 12);
  CHECK(f.model.label_count() == 4);
  CHECK(f.model.feature_dim() == 260);
  CHECK(f.model.labels == std::vector<std::string>{"ca", "go", "ma", "to"});
}

TEST_CASE("36 syllable classes give 36 labels") {
  const std::vector<std::string> syllables = {
      "be", "com", "in", "out", "ply", "pose", "press", "side", "sup", "vi", "ta", "tion",
      "ti", "ma", "no", "re", "po", "si", "lo", "de", "di", "ca", "car", "na",
      "mo", "go", "to", "la", "ra", "ing", "vo", "va", "do", "ba", "pa", "ko"};
  REQUIRE(syllables.size() == 36);
  st::TempDir dir;
  std::vector<std::vector<st::Utterance>> one_each;
  // Profiles need not be distinct here; only the label table matters.
  for (std::size_t i = 0; i < syllables.size(); ++i) {
    st::VoiceProfile p;
    p.f1_start = 300.0 + 15.0 * double(i);
    one_each.push_back({st::synthesize(p, {})});
  }
  st::write_dataset(dir.path(), syllables, one_each);
  const auto model = train_from_dataset(dir.path());
  CHECK(model.label_count() == 36);
  CHECK(model.pattern_count() == 36);
}

TEST_CASE("a silent training file is reported with its path") {
  st::TempDir dir;
  auto& f = fixture();
  st::write_dataset(dir.path(), {"ca"}, {{f.data.train[0][0]}});
  std::filesystem::create_directories(dir / "quiet");
  write_wav(dir / "quiet" / "empty.wav", st::silence(8000));
  std::string message;
  CHECK(code_of([&] { train_from_dataset(dir.path()); }, &message) == ErrorCode::kNoSpeechDetected);
  CHECK(message.find("empty.wav") != std::string::npos);
}

TEST_CASE("non-8 kHz input is rejected") {
  st::TempDir dir;
  AudioBuffer b = fixture().data.train[0][0].buffer;
  b.sample_rate = 16000;
  std::filesystem::create_directories(dir / "ca");
  write_wav(dir / "ca" / "a.wav", b);
  CHECK(code_of([&] { train_from_dataset(dir.path()); }) == ErrorCode::kSampleRateMismatch);
  CHECK(code_of([&] { recognize_isolated(fixture().model, b); }) == ErrorCode::kSampleRateMismatch);
}

TEST_CASE("recognize_isolated") {
  auto& f = fixture();
  for (std::size_t c = 0; c < f.data.labels.size(); ++c) {
    for (const auto& u : f.data.train[c]) {
      const auto r = recognize_isolated(f.model, u.buffer);
      CHECK(r.label == f.data.labels[c]);
    }
    for (const auto& u : f.data.test[c]) CHECK(recognize_isolated(f.model, u.buffer).label == f.data.labels[c]);
  }
  CHECK(code_of([&] { recognize_isolated(f.model, st::silence(8000)); }) == ErrorCode::kNoSpeechDetected);
}

TEST_CASE("locate_utterance finds the synthetic word") {
  const auto& u = fixture().data.train[1][0];
  const auto s = locate_utterance(u.buffer);
  CHECK(std::labs(long(s.start_sample) - long(u.truth.start_sample)) <= 320);
  CHECK(std::labs(long(s.end_sample) - long(u.truth.end_sample)) <= 320);
}

TEST_CASE("transcribe") {
  auto& f = fixture();
  SUBCASE("one word agrees with isolated recognition") {
    const auto& u = f.data.train[2][1];
    const auto t = transcribe(f.model, u.buffer);
    REQUIRE(t.words.size() == 1);
    const auto r = recognize_isolated(f.model, u.buffer);
    CHECK(t.words[0].recognition.label == r.label);
    CHECK(t.words[0].recognition.scores == r.scores);
    CHECK(t.text == r.label);
  }
  SUBCASE("two words with 300 ms silence") {
    const auto buf = st::concatenate({f.data.train[3][0], f.data.train[0][2]}, 0.3);
    const auto t = transcribe(f.model, buf);
    REQUIRE(t.words.size() == 2);
    CHECK(t.text == "to ca");
    CHECK(t.words[0].segment.end_sample <= t.words[1].segment.start_sample);
  }
  SUBCASE("k words in order") {
    std::vector<st::Utterance> parts;
    std::string expected;
    for (std::size_t k = 0; k < 5; ++k) {
      const std::size_t c = (k * 3) % 4;
      parts.push_back(f.data.train[c][k % 3]);
      expected += (k ? " " : "") + f.data.labels[c];
    }
    CHECK(transcribe(f.model, st::concatenate(parts, 0.25)).text == expected);
  }
  SUBCASE("silence") {
    CHECK(code_of([&] { transcribe(f.model, st::silence(12000)); }) == ErrorCode::kNoSpeechDetected);
  }
}

TEST_CASE("transcript_csv") {
  Transcript t;
  TranscriptWord w;
  w.segment = {10, 900};
  w.text = "go";
  w.recognition.confidence = 0.75;
  t.words.push_back(w);
  CHECK(transcript_csv(t) == "start_sample,end_sample,label,confidence\n10,900,go,0.750000\n");
}

TEST_CASE("recognize_word_by_syllables") {
  auto& f = fixture();
  SyllableLexicon lex;
  lex.add("cargo", {"ca", "go"});
  lex.add("tomato", {"to", "ma", "to"});
  lex.add("ma", {"ma"});
  const auto& tr = f.data.train;

  auto word = recognize_word_by_syllables(f.model, std::vector<AudioBuffer>{tr[0][0].buffer, tr[1][1].buffer}, lex);
  CHECK(word.text == "cargo");
  CHECK(word.in_lexicon);
  CHECK(word.syllables.size() == 2);

  word = recognize_word_by_syllables(
      f.model, std::vector<AudioBuffer>{tr[3][0].buffer, tr[2][0].buffer, tr[3][1].buffer}, lex);
  CHECK(word.text == "tomato");

  word = recognize_word_by_syllables(f.model, std::vector<AudioBuffer>{tr[2][2].buffer}, lex);
  CHECK(word.text == "ma");
  CHECK(word.in_lexicon);

  word = recognize_word_by_syllables(f.model, std::vector<AudioBuffer>{tr[1][0].buffer, tr[0][0].buffer}, lex);
  CHECK(word.text == "goca");
  CHECK_FALSE(word.in_lexicon);

  std::string message;
  CHECK(code_of([&] {
          recognize_word_by_syllables(f.model, std::vector<AudioBuffer>{tr[0][0].buffer, st::silence(8000)}, lex);
        },
                &message) == ErrorCode::kNoSpeechDetected);
  CHECK(message.find("syllable 1") != std::string::npos);
}

TEST_CASE("transcribe_syllables spells words from their syllables") {
  auto& f = fixture();
  SyllableLexicon lex;
  lex.add("cargo", {"ca", "go"});
  lex.add("mato", {"ma", "to"});
  const auto& tr = f.data.train;
  // 100 ms between syllables, 400 ms between words.
  auto syllable_gap = [&](std::vector<st::Utterance> parts) {
    st::Utterance u;
    u.buffer = st::concatenate(parts, 0.1, 0.0);
    u.truth = {0, u.buffer.size()};
    return u;
  };
  const auto buf = st::concatenate({syllable_gap({tr[0][0], tr[1][0]}), syllable_gap({tr[2][1], tr[3][1]})}, 0.4);
  const auto t = transcribe_syllables(f.model, buf, lex);
  REQUIRE(t.words.size() == 2);
  CHECK(t.text == "cargo mato");
  CHECK(t.words[0].in_lexicon);
}

TEST_CASE("identical inputs give a bit-identical model file") {
  auto& f = fixture();
  st::TempDir dir;
  save_model(train_from_dataset(f.dir / "train"), dir / "a.grnn");
  save_model(train_from_dataset(f.dir / "train"), dir / "b.grnn");
  CHECK(file_bytes(dir / "a.grnn") == file_bytes(dir / "b.grnn"));
}

TEST_CASE("configs stored in the model drive recognition") {
  auto& f = fixture();
  TrainingOptions opts;
  opts.mfcc.n_coeffs = 10;
  opts.mfcc.target_frames = 16;
  opts.frontend.preemphasis_a = 0.97;
  const auto model = train_from_dataset(f.dir / "train", opts);
  CHECK(model.feature_dim() == 160);

  st::TempDir dir;
  save_model(model, dir / "m.grnn");
  const auto loaded = load_model(dir / "m.grnn");
  CHECK(loaded.mfcc.n_coeffs == 10);
  for (std::size_t c = 0; c < f.data.labels.size(); ++c) {
    CHECK(recognize_isolated(loaded, f.data.train[c][0].buffer).label == f.data.labels[c]);
  }
}
