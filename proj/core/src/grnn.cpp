#include "stt/grnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>

#include "stt/error.hpp"

namespace stt {
namespace {

constexpr char kMagic[4] = {'G', 'R', 'N', 'N'};
constexpr std::uint32_t kFormatVersion = 1;

// Order of the f64 config block. Durations are stored in milliseconds.
constexpr std::size_t kConfigFields = 11;
// preemphasis_a, frame_len, hop, fft_size, n_filters, n_coeffs, f_min, f_max,
// log_floor, target_frames, include_c0

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xFF));
  }
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > in_.size() - pos_) throw Error(ErrorCode::kMalformedModel, "truncated model file");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint32_t u32() {
    const auto b = take(4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  }
  double f64() {
    const auto b = take(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(bits);
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(std::size_t v, const char* what) {
  if (v > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + " exceeds the model format limit");
  }
  return static_cast<std::uint32_t>(v);
}

// Integral config fields must come back as exact small integers.
int as_int(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1e9) || v != std::floor(v)) {
    throw Error(ErrorCode::kMalformedModel, std::string("config field ") + field + " is not an integer");
  }
  return static_cast<int>(v);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum;
}

}  // namespace

void GrnnModel::check() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kMalformedModel, what); };
  if (centers.rows() == 0) fail("model has no patterns");
  if (targets.rows() != centers.rows()) fail("target rows do not match pattern count");
  if (targets.cols() != labels.size()) fail("target columns do not match label count");
  if (labels.empty()) fail("model has no labels");
  if (!(spread > 0.0) || !std::isfinite(spread)) fail("spread must be positive and finite");
  for (double v : centers.data()) {
    if (!std::isfinite(v)) fail("non-finite center value");
  }
  for (double v : targets.data()) {
    if (!std::isfinite(v)) fail("non-finite target value");
  }
}

GrnnModel train(std::span<const LabeledFeatures> examples, double spread,
                const FrontendConfig& frontend, const MfccConfig& mfcc) {
  if (examples.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "no training examples");
  if (!(spread > 0.0) || !std::isfinite(spread)) {
    throw Error(ErrorCode::kConfigInvalid, "spread must be positive");
  }
  const std::size_t dim = examples.front().features.size();
  if (dim == 0) throw Error(ErrorCode::kDimensionMismatch, "empty feature vector");

  std::set<std::string> distinct;
  for (const auto& ex : examples) {
    if (ex.features.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "feature vector of length " + std::to_string(ex.features.size()) +
                      " in a training set of dimension " + std::to_string(dim));
    }
    if (ex.label.empty()) throw Error(ErrorCode::kConfigInvalid, "empty label");
    distinct.insert(ex.label);
  }

  GrnnModel model;
  model.spread = spread;
  model.labels.assign(distinct.begin(), distinct.end());
  model.frontend = frontend;
  model.mfcc = mfcc;
  model.centers = Matrix(examples.size(), dim);
  model.targets = Matrix(examples.size(), model.labels.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    std::copy(examples[i].features.values.begin(), examples[i].features.values.end(),
              model.centers.row(i).begin());
    const auto it = std::lower_bound(model.labels.begin(), model.labels.end(), examples[i].label);
    model.targets(i, static_cast<std::size_t>(it - model.labels.begin())) = 1.0;
  }
  return model;
}

GrnnModel make_regression_model(Matrix centers, Matrix targets, double spread,
                                std::vector<std::string> labels) {
  GrnnModel model;
  model.centers = std::move(centers);
  model.targets = std::move(targets);
  model.spread = spread;
  model.labels = std::move(labels);
  if (model.centers.rows() == 0) throw Error(ErrorCode::kEmptyTrainingSet, "no patterns");
  if (model.targets.rows() != model.centers.rows() || model.targets.cols() != model.labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "targets must be n x L");
  }
  if (!(spread > 0.0)) throw Error(ErrorCode::kConfigInvalid, "spread must be positive");
  return model;
}

std::vector<double> predict_scores(const GrnnModel& model, std::span<const double> x) {
  if (x.size() != model.feature_dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input of dimension " + std::to_string(x.size()) + " for a model of dimension " +
                    std::to_string(model.feature_dim()));
  }
  const std::size_t n = model.pattern_count();
  const std::size_t L = model.label_count();

  std::vector<double> dist2(n);
  std::size_t nearest = 0;
  for (std::size_t i = 0; i < n; ++i) {
    dist2[i] = squared_distance(model.centers.row(i), x);
    if (dist2[i] < dist2[nearest]) nearest = i;
  }

  // Pattern layer, then the N (numerator) and D (denominator) summation units.
  const double inv_two_var = 1.0 / (2.0 * model.spread * model.spread);
  std::vector<double> numerator(L, 0.0);
  double denominator = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = std::exp(-(dist2[i] - dist2[nearest]) * inv_two_var);
    denominator += h;
    const auto w = model.targets.row(i);
    for (std::size_t j = 0; j < L; ++j) numerator[j] += w[j] * h;
  }

  if (!(denominator > 0.0) || !std::isfinite(denominator)) {
    const auto w = model.targets.row(nearest);
    return {w.begin(), w.end()};
  }
  for (double& v : numerator) v /= denominator;
  return numerator;
}

Recognition classify(const GrnnModel& model, std::span<const double> x) {
  Recognition r;
  r.scores = predict_scores(model, x);
  const auto best = std::max_element(r.scores.begin(), r.scores.end());
  r.label = model.labels[static_cast<std::size_t>(best - r.scores.begin())];
  r.confidence = *best;
  return r;
}

std::vector<std::uint8_t> serialize_model(const GrnnModel& model) {
  model.check();
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kFormatVersion);
  w.u32(checked_u32(model.feature_dim(), "feature_dim"));
  w.u32(checked_u32(model.pattern_count(), "pattern count"));
  w.u32(checked_u32(model.label_count(), "label count"));
  w.f64(model.spread);
  for (const auto& label : model.labels) {
    w.u32(checked_u32(label.size(), "label length"));
    w.bytes(label.data(), label.size());
  }
  const auto& fe = model.frontend;
  const auto& mf = model.mfcc;
  const double config[kConfigFields] = {
      fe.preemphasis_a,
      fe.frame_len.count(),
      fe.hop.count(),
      static_cast<double>(fe.fft_size),
      static_cast<double>(mf.n_filters),
      static_cast<double>(mf.n_coeffs),
      mf.f_min,
      mf.f_max,
      mf.log_floor,
      static_cast<double>(mf.target_frames),
      mf.include_c0 ? 1.0 : 0.0,
  };
  for (double v : config) w.f64(v);
  for (double v : model.centers.data()) w.f64(v);
  for (double v : model.targets.data()) w.f64(v);
  return w.take();
}

GrnnModel deserialize_model(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const auto magic = r.take(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kMalformedModel, "bad magic bytes");
  }
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kMalformedModel, "unsupported format version " + std::to_string(version));
  }
  const std::size_t dim = r.u32();
  const std::size_t n = r.u32();
  const std::size_t L = r.u32();

  GrnnModel model;
  model.spread = r.f64();
  for (std::size_t j = 0; j < L; ++j) {
    const std::size_t len = r.u32();
    const auto s = r.take(len);
    model.labels.emplace_back(reinterpret_cast<const char*>(s.data()), s.size());
  }

  double config[kConfigFields];
  for (double& v : config) v = r.f64();
  auto& fe = model.frontend;
  auto& mf = model.mfcc;
  fe.preemphasis_a = config[0];
  fe.frame_len = Millis(config[1]);
  fe.hop = Millis(config[2]);
  fe.fft_size = static_cast<std::size_t>(as_int(config[3], "fft_size"));
  mf.n_filters = as_int(config[4], "n_filters");
  mf.n_coeffs = as_int(config[5], "n_coeffs");
  mf.f_min = config[6];
  mf.f_max = config[7];
  mf.log_floor = config[8];
  mf.target_frames = as_int(config[9], "target_frames");
  mf.include_c0 = as_int(config[10], "include_c0") != 0;

  // Reject impossible sizes before allocating.
  if (dim != 0 && n > r.remaining() / 8 / dim) {
    throw Error(ErrorCode::kMalformedModel, "truncated model file");
  }
  model.centers = Matrix(n, dim);
  for (double& v : model.centers.data()) v = r.f64();
  if (L != 0 && n > r.remaining() / 8 / L) throw Error(ErrorCode::kMalformedModel, "truncated model file");
  model.targets = Matrix(n, L);
  for (double& v : model.targets.data()) v = r.f64();
  if (r.remaining() != 0) throw Error(ErrorCode::kMalformedModel, "trailing bytes after targets");

  model.check();
  try {
    fe.validate(kPipelineSampleRate);
    mf.validate(kPipelineSampleRate);
  } catch (const Error& e) {
    throw Error(ErrorCode::kMalformedModel, "stored config: " + e.message());
  }
  return model;
}

void save_model(const GrnnModel& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

GrnnModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

}  // namespace stt
