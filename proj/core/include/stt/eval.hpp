#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stt/audio_io.hpp"
#include "stt/grnn.hpp"
#include "stt/vad.hpp"

namespace stt {

struct LabelCounts {
  std::size_t total = 0;
  std::size_t correct = 0;
};

/// Accuracy and confusion counts. Confusion rows are true labels and
/// columns are predicted labels, plus one trailing column for files where no
/// speech was detected.
class EvalReport {
 public:
  explicit EvalReport(std::vector<std::string> labels);

  /// Records one outcome; std::nullopt means no speech was detected.
  /// Throws UnknownLabel for labels outside the model.
  void record(const std::string& truth, const std::optional<std::string>& predicted);

  std::size_t total() const noexcept { return total_; }
  std::size_t correct() const noexcept { return correct_; }
  std::size_t no_speech() const noexcept { return no_speech_; }
  double accuracy() const noexcept;

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::map<std::string, LabelCounts>& per_label() const noexcept { return per_label_; }
  /// L x (L + 1).
  const std::vector<std::vector<std::size_t>>& confusion() const noexcept { return confusion_; }

  std::string to_text() const;
  std::string confusion_csv() const;

 private:
  std::size_t index_of(const std::string& label) const;

  std::vector<std::string> labels_;
  std::map<std::string, LabelCounts> per_label_;
  std::vector<std::vector<std::size_t>> confusion_;
  std::size_t total_ = 0;
  std::size_t correct_ = 0;
  std::size_t no_speech_ = 0;
};

EvalReport evaluate(const GrnnModel& model, std::span<const DatasetEntry> entries,
                    const VadConfig& vad = {});

/// Throws EmptyDataset or UnknownLabel.
EvalReport evaluate(const GrnnModel& model, const std::filesystem::path& test_root,
                    const VadConfig& vad = {});

/// Pearson correlation; 0 when either input has zero variance.
double feature_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace stt
