// stt: train, recognize, transcribe and evaluate small-vocabulary models.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "stt/stt.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Raised when a parsed flag fails its config's checks.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  double preemphasis_a = stt::FrontendConfig{}.preemphasis_a;
  double frame_len = stt::FrontendConfig{}.frame_len.count();
  double hop = stt::FrontendConfig{}.hop.count();
  std::size_t fft_size = stt::FrontendConfig{}.fft_size;
  stt::MfccConfig mfcc;
  bool no_c0 = false;
  double spread = stt::kDefaultSpread;

  double vad_frame_len = stt::VadConfig{}.frame_len.count();
  double vad_hop = stt::VadConfig{}.hop.count();
  double min_gap = stt::VadConfig{}.min_gap.count();
  stt::VadConfig vad;

  int verbosity = 0;
};

void add_frontend_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--preemphasis-a", o.preemphasis_a, "pre-emphasis coefficient")->capture_default_str();
  cmd->add_option("--frame-len", o.frame_len, "analysis frame length, ms")->capture_default_str();
  cmd->add_option("--hop", o.hop, "analysis hop, ms")->capture_default_str();
  cmd->add_option("--fft-size", o.fft_size, "FFT length (power of two)")->capture_default_str();
  cmd->add_option("--n-filters", o.mfcc.n_filters, "mel filters")->capture_default_str();
  cmd->add_option("--n-coeffs", o.mfcc.n_coeffs, "cepstral coefficients kept")->capture_default_str();
  cmd->add_option("--f-min", o.mfcc.f_min, "lowest filter edge, Hz")->capture_default_str();
  cmd->add_option("--f-max", o.mfcc.f_max, "highest filter edge, Hz")->capture_default_str();
  cmd->add_option("--log-floor", o.mfcc.log_floor, "floor applied before the log")->capture_default_str();
  cmd->add_option("--target-frames", o.mfcc.target_frames, "frames after time normalization")
      ->capture_default_str();
  cmd->add_flag("--no-c0", o.no_c0, "drop c0, keep c1..c(n-coeffs)");
}

void add_vad_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--vad-frame-len", o.vad_frame_len, "VAD frame length, ms")->capture_default_str();
  cmd->add_option("--vad-hop", o.vad_hop, "VAD hop, ms")->capture_default_str();
  cmd->add_option("--energy-ratio", o.vad.energy_ratio, "threshold relative to loudest frame")
      ->capture_default_str();
  cmd->add_option("--zcr-threshold", o.vad.zcr_threshold, "zero-crossing rate for unvoiced speech")
      ->capture_default_str();
  cmd->add_option("--energy-floor", o.vad.energy_floor, "absolute energy floor")->capture_default_str();
  cmd->add_option("--unvoiced-ratio", o.vad.unvoiced_ratio, "energy fraction required of unvoiced frames")
      ->capture_default_str();
  cmd->add_option("--hangover-frames", o.vad.hangover_frames, "silent frames bridged inside speech")
      ->capture_default_str();
  cmd->add_option("--min-speech-frames", o.vad.min_speech_frames, "shortest kept speech run")
      ->capture_default_str();
  cmd->add_option("--min-gap", o.min_gap, "silence that separates words, ms")->capture_default_str();
}

// Config checks report field names; rewrite them as the flags that set them.
std::string name_flags(std::string message, const std::map<std::string, std::string>& flags) {
  for (const auto& [field, flag] : flags) {
    message = std::regex_replace(message, std::regex("\\b" + field + "\\b"), flag);
  }
  return message;
}

template <typename Config>
void check(const Config& config, const std::map<std::string, std::string>& flags) {
  try {
    config.validate(stt::kPipelineSampleRate);
  } catch (const stt::Error& e) {
    throw UsageError(name_flags(e.message(), flags));
  }
}

stt::FrontendConfig frontend(const Options& o) {
  stt::FrontendConfig f;
  f.preemphasis_a = o.preemphasis_a;
  f.frame_len = stt::Millis(o.frame_len);
  f.hop = stt::Millis(o.hop);
  f.fft_size = o.fft_size;
  check(f, {{"preemphasis_a", "--preemphasis-a"},
            {"frame_len", "--frame-len"},
            {"hop", "--hop"},
            {"fft_size", "--fft-size"}});
  return f;
}

stt::MfccConfig mfcc(const Options& o) {
  stt::MfccConfig m = o.mfcc;
  m.include_c0 = !o.no_c0;
  check(m, {{"n_filters", "--n-filters"},
            {"n_coeffs", "--n-coeffs"},
            {"f_min", "--f-min"},
            {"f_max", "--f-max"},
            {"log_floor", "--log-floor"},
            {"target_frames", "--target-frames"}});
  return m;
}

stt::VadConfig vad(const Options& o) {
  stt::VadConfig v = o.vad;
  v.frame_len = stt::Millis(o.vad_frame_len);
  v.hop = stt::Millis(o.vad_hop);
  v.min_gap = stt::Millis(o.min_gap);
  check(v, {{"frame_len", "--vad-frame-len"},
            {"hop", "--vad-hop"},
            {"energy_ratio", "--energy-ratio"},
            {"zcr_threshold", "--zcr-threshold"},
            {"energy_floor", "--energy-floor"},
            {"unvoiced_ratio", "--unvoiced-ratio"},
            {"hangover_frames", "--hangover-frames"},
            {"min_speech_frames", "--min-speech-frames"},
            {"min_gap", "--min-gap"}});
  return v;
}

stt::AudioBuffer load_input(const std::string& path) {
  auto buffer = stt::load_wav(path);
  stt::require_pipeline_rate(buffer);
  return buffer;
}

void print_segments(const std::vector<stt::SpeechSegment>& segments) {
  for (const auto& s : segments) std::cerr << "segment " << s.start_sample << " " << s.end_sample << "\n";
}

int cmd_train(const Options& o, const std::string& data, const std::string& out) {
  stt::TrainingOptions opts;
  opts.frontend = frontend(o);
  opts.mfcc = mfcc(o);
  opts.vad = vad(o);
  if (!(o.spread > 0.0)) throw UsageError("--spread must be positive");
  opts.spread = o.spread;
  const auto model = stt::train_from_dataset(data, opts);
  stt::save_model(model, out);
  std::cout << "n " << model.pattern_count() << "\nL " << model.label_count() << "\nfeature_dim "
            << model.feature_dim() << "\n";
  if (o.verbosity > 0) {
    for (const auto& l : model.labels) std::cerr << "label " << l << "\n";
  }
  return 0;
}

int cmd_recognize(const Options& o, const std::string& model_path, const std::string& file) {
  const auto v = vad(o);
  const auto model = stt::load_model(model_path);
  const auto buffer = load_input(file);
  const auto r = stt::recognize_isolated(model, buffer, v);
  if (o.verbosity > 0) {
    const auto s = stt::locate_utterance(buffer, v);
    print_segments({s});
    for (std::size_t j = 0; j < model.labels.size(); ++j) {
      std::cerr << model.labels[j] << " " << r.scores[j] << "\n";
    }
  }
  std::cout << r.label << "\t" << std::fixed << std::setprecision(6) << r.confidence << "\n";
  return 0;
}

int cmd_transcribe(const Options& o, const std::string& model_path, const std::string& lexicon_path,
                   bool csv, const std::string& file) {
  const auto v = vad(o);
  const auto model = stt::load_model(model_path);
  stt::Transcript t;
  if (lexicon_path.empty()) {
    t = stt::transcribe(model, load_input(file), v);
  } else {
    const auto lexicon = stt::SyllableLexicon::load(lexicon_path);
    lexicon.validate_against(model.labels);
    t = stt::transcribe_syllables(model, load_input(file), lexicon, v);
  }
  if (o.verbosity > 0) {
    for (const auto& w : t.words) {
      std::cerr << w.segment.start_sample << " " << w.segment.end_sample << " " << w.text
                << (w.in_lexicon ? "" : " (not in lexicon)") << "\n";
    }
  }
  if (csv) {
    std::cout << stt::transcript_csv(t);
  } else {
    std::cout << t.text << "\n";
  }
  return 0;
}

int cmd_eval(const Options& o, const std::string& model_path, const std::string& data) {
  const auto v = vad(o);
  const auto model = stt::load_model(model_path);
  const auto report = stt::evaluate(model, std::filesystem::path(data), v);
  std::cout << report.to_text();
  return 0;
}

int cmd_vad_inspect(const Options& o, const std::string& file) {
  const auto v = vad(o);
  const auto buffer = stt::load_wav(file);
  const auto result = stt::detect(buffer, v);
  std::cout << "frame_index,start_sample,energy,zcr,decision\n" << std::setprecision(9);
  for (const auto& f : result.frames) {
    std::cout << f.index << "," << f.start_sample << "," << f.energy << "," << f.zcr << ","
              << (f.decision ? 1 : 0) << "\n";
  }
  std::cout << "# energy_threshold " << result.energy_threshold << "\n";
  for (const auto& s : result.segments) std::cout << "# segment " << s.start_sample << " " << s.end_sample << "\n";
  return 0;
}

int cmd_features(const Options& o, const std::string& model_path, const std::string& file) {
  stt::FrontendConfig f;
  stt::MfccConfig m;
  if (model_path.empty()) {
    f = frontend(o);
    m = mfcc(o);
  } else {
    const auto model = stt::load_model(model_path);
    f = model.frontend;
    m = model.mfcc;
  }
  const auto features = stt::utterance_features(load_input(file), f, m, vad(o));
  std::cout << std::setprecision(9);
  for (std::size_t i = 0; i < features.values.size(); ++i) {
    std::cout << (i ? "," : "") << features.values[i];
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Small-vocabulary speech recognizer (VAD, MFCC, GRNN)", "stt"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("-v,--verbose", o.verbosity, "more diagnostics on stderr (repeatable)");

  std::string data, out, model, lexicon, file;
  bool csv = false;

  auto* train = app.add_subcommand("train", "train a model from root/<label>/<file>.wav");
  train->add_option("--data", data, "dataset root")->required()->check(CLI::ExistingDirectory);
  train->add_option("--out", out, "model file to write")->required();
  train->add_option("--spread", o.spread, "GRNN spread")->capture_default_str();
  add_frontend_flags(train, o);
  add_vad_flags(train, o);

  auto* recognize = app.add_subcommand("recognize", "recognize one isolated utterance");
  recognize->add_option("--model", model, "model file")->required();
  recognize->add_option("file", file, "8 kHz WAV")->required();
  add_vad_flags(recognize, o);

  auto* transcribe = app.add_subcommand("transcribe", "transcribe a recording word by word");
  transcribe->add_option("--model", model, "model file")->required();
  transcribe->add_option("--lexicon", lexicon, "syllable lexicon; words are spelled from syllables");
  transcribe->add_flag("--csv", csv, "print start_sample,end_sample,label,confidence rows");
  transcribe->add_option("file", file, "8 kHz WAV")->required();
  add_vad_flags(transcribe, o);

  auto* eval = app.add_subcommand("eval", "evaluate a model on a labeled test set");
  eval->add_option("--model", model, "model file")->required();
  eval->add_option("--data", data, "test set root")->required();
  add_vad_flags(eval, o);

  auto* inspect = app.add_subcommand("vad-inspect", "dump per-frame VAD decisions as CSV");
  inspect->add_option("file", file, "WAV file")->required();
  add_vad_flags(inspect, o);

  auto* features = app.add_subcommand("features", "print the feature vector of a WAV as one CSV row");
  features->add_option("--model", model, "take frontend and MFCC settings from this model");
  features->add_option("file", file, "8 kHz WAV")->required();
  add_frontend_flags(features, o);
  add_vad_flags(features, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(o, data, out);
    if (recognize->parsed()) return cmd_recognize(o, model, file);
    if (transcribe->parsed()) return cmd_transcribe(o, model, lexicon, csv, file);
    if (eval->parsed()) return cmd_eval(o, model, data);
    if (inspect->parsed()) return cmd_vad_inspect(o, file);
    if (features->parsed()) return cmd_features(o, model, file);
  } catch (const UsageError& e) {
    std::cerr << "stt: " << e.what() << "\n";
    return kExitUsage;
  } catch (const stt::Error& e) {
    std::cerr << "stt: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "stt: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
