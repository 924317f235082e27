#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stt {

enum class ErrorCode {
  kMalformedWav,
  kUnsupportedEncoding,
  kEmptyAudio,
  kSampleRateMismatch,
  kEmptyDataset,
  kBufferTooShort,
  kSegmentTooShort,
  kConfigInvalid,
  kDimensionMismatch,
  kEmptyTrainingSet,
  kMalformedModel,
  kMalformedLexicon,
  kIoFailure,
  kNoSpeechDetected,
  kUnknownLabel,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code identifies the failure
/// class; the message carries context such as the offending file path.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the error-class prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace stt
