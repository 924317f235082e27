#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace stt {

/// Mono utterance with samples scaled to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

/// One labeled recording; the label is its parent directory name.
struct DatasetEntry {
  std::string label;
  std::filesystem::path path;
};

/// Decodes a RIFF/WAVE file holding integer PCM (8/16/24/32-bit) or IEEE
/// float (32/64-bit) samples. Multichannel audio is averaged to mono.
AudioBuffer load_wav(const std::filesystem::path& path);

/// Same as load_wav, over an in-memory file image.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);

/// Writes a mono integer PCM file. `bits` is 8, 16, 24 or 32; samples are
/// clamped to the representable range.
void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer,
               int bits = 16);

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer, int bits = 16);

/// Throws SampleRateMismatch unless the buffer is at the pipeline rate.
void require_pipeline_rate(const AudioBuffer& buffer);

/// Enumerates root/<label>/<file>.wav, sorted by label then file name.
std::vector<DatasetEntry> scan_dataset(const std::filesystem::path& root);

}  // namespace stt
