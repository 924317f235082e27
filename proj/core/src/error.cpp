#include "stt/error.hpp"

namespace stt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedWav: return "malformed wav";
    case ErrorCode::kUnsupportedEncoding: return "unsupported encoding";
    case ErrorCode::kEmptyAudio: return "empty audio";
    case ErrorCode::kSampleRateMismatch: return "sample rate mismatch";
    case ErrorCode::kEmptyDataset: return "empty dataset";
    case ErrorCode::kBufferTooShort: return "buffer too short";
    case ErrorCode::kSegmentTooShort: return "segment too short";
    case ErrorCode::kConfigInvalid: return "invalid config";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kEmptyTrainingSet: return "empty training set";
    case ErrorCode::kMalformedModel: return "malformed model";
    case ErrorCode::kMalformedLexicon: return "malformed lexicon";
    case ErrorCode::kIoFailure: return "i/o failure";
    case ErrorCode::kNoSpeechDetected: return "no speech detected";
    case ErrorCode::kUnknownLabel: return "unknown label";
  }
  return "error";
}

}  // namespace stt
