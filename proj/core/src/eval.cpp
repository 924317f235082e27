#include "stt/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "stt/error.hpp"
#include "stt/pipeline.hpp"

namespace stt {

EvalReport::EvalReport(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      confusion_(labels_.size(), std::vector<std::size_t>(labels_.size() + 1, 0)) {}

std::size_t EvalReport::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw Error(ErrorCode::kUnknownLabel, "label '" + label + "' is not known to the model");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

void EvalReport::record(const std::string& truth, const std::optional<std::string>& predicted) {
  const std::size_t row = index_of(truth);
  const std::size_t col = predicted ? index_of(*predicted) : labels_.size();
  ++confusion_[row][col];
  auto& counts = per_label_[truth];
  ++counts.total;
  ++total_;
  if (!predicted) ++no_speech_;
  if (col == row) {
    ++counts.correct;
    ++correct_;
  }
}

double EvalReport::accuracy() const noexcept {
  return total_ == 0 ? 0.0 : static_cast<double>(correct_) / static_cast<double>(total_);
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "accuracy " << accuracy() << " (" << correct_ << "/" << total_ << ")\n";
  out << "no speech detected " << no_speech_ << "\n";
  std::size_t width = 8;
  for (const auto& l : labels_) width = std::max(width, l.size() + 1);
  for (const auto& [label, counts] : per_label_) {
    out << std::left << std::setw(static_cast<int>(width)) << label << counts.correct << "/"
        << counts.total << "\n";
  }
  out << "confusion (rows = truth, columns = predicted)\n";
  out << std::setw(static_cast<int>(width)) << "";
  for (const auto& l : labels_) out << std::right << std::setw(static_cast<int>(width)) << l;
  out << std::right << std::setw(static_cast<int>(width)) << "(none)" << "\n";
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(width)) << labels_[r] << std::right;
    for (std::size_t c : confusion_[r]) out << std::setw(static_cast<int>(width)) << c;
    out << "\n";
  }
  return out.str();
}

std::string EvalReport::confusion_csv() const {
  std::ostringstream out;
  out << "truth";
  for (const auto& l : labels_) out << ',' << l;
  out << ",(none)\n";
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    out << labels_[r];
    for (std::size_t c : confusion_[r]) out << ',' << c;
    out << '\n';
  }
  return out.str();
}

EvalReport evaluate(const GrnnModel& model, std::span<const DatasetEntry> entries,
                    const VadConfig& vad) {
  if (entries.empty()) throw Error(ErrorCode::kEmptyDataset, "no test files");
  EvalReport report(model.labels);
  // Unknown labels are a dataset error, so check before doing any work.
  for (const auto& e : entries) {
    if (std::find(model.labels.begin(), model.labels.end(), e.label) == model.labels.end()) {
      throw Error(ErrorCode::kUnknownLabel,
                  e.path.string() + ": label '" + e.label + "' is not known to the model");
    }
  }
  for (const auto& e : entries) {
    const AudioBuffer buffer = load_wav(e.path);
    try {
      report.record(e.label, recognize_isolated(model, buffer, vad).label);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::kNoSpeechDetected) {
        throw Error(err.code(), e.path.string() + ": " + err.message());
      }
      report.record(e.label, std::nullopt);
    }
  }
  return report;
}

EvalReport evaluate(const GrnnModel& model, const std::filesystem::path& test_root,
                    const VadConfig& vad) {
  const auto entries = scan_dataset(test_root);
  return evaluate(model, entries, vad);
}

double feature_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "vectors of length " + std::to_string(a.size()) +
                                                   " and " + std::to_string(b.size()));
  }
  if (a.empty()) return 0.0;
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) return 0.0;
  return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

}  // namespace stt
