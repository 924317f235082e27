#include "stt/audio_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

#include "stt/error.hpp"
#include "stt/units.hpp"

namespace stt {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

struct WavFormat {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, const WavFormat& fmt) {
  if (fmt.tag == kFormatFloat) {
    if (fmt.bits == 32) {
      return static_cast<double>(std::bit_cast<float>(read_u32(p)));
    }
    std::uint64_t raw = static_cast<std::uint64_t>(read_u32(p)) |
                        (static_cast<std::uint64_t>(read_u32(p + 4)) << 32);
    return std::bit_cast<double>(raw);
  }
  switch (fmt.bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default:
      return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
  }
}

}  // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error(ErrorCode::kMalformedWav, "missing RIFF/WAVE header");
  }

  std::optional<WavFormat> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t chunk_size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    // Writers that stream often leave the RIFF/data sizes at a placeholder,
    // so the body is clamped to what is actually present.
    const std::size_t available = bytes.size() - body;
    const std::size_t size = std::min<std::size_t>(chunk_size, available);

    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error(ErrorCode::kMalformedWav, "fmt chunk too short");
      const std::uint8_t* f = bytes.data() + body;
      WavFormat w;
      w.tag = read_u16(f);
      w.channels = read_u16(f + 2);
      w.sample_rate = read_u32(f + 4);
      w.block_align = read_u16(f + 12);
      w.bits = read_u16(f + 14);
      if (w.tag == kFormatExtensible) {
        if (size < 26) throw Error(ErrorCode::kMalformedWav, "extensible fmt chunk too short");
        w.tag = read_u16(f + 24);  // first two bytes of the subformat GUID
      }
      fmt = w;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.subspan(body, size);
      have_data = true;
      break;
    }
    pos = body + size + (size & 1);
  }

  if (!fmt) throw Error(ErrorCode::kMalformedWav, "no fmt chunk");
  if (!have_data) throw Error(ErrorCode::kMalformedWav, "no data chunk");

  const WavFormat& f = *fmt;
  if (f.tag != kFormatPcm && f.tag != kFormatFloat) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "format tag " + std::to_string(f.tag) + " is not PCM or IEEE float");
  }
  const bool bits_ok = f.tag == kFormatPcm
                           ? (f.bits == 8 || f.bits == 16 || f.bits == 24 || f.bits == 32)
                           : (f.bits == 32 || f.bits == 64);
  if (!bits_ok) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                std::to_string(f.bits) + "-bit samples are not supported");
  }
  if (f.channels == 0 || f.sample_rate == 0) {
    throw Error(ErrorCode::kMalformedWav, "zero channels or sample rate");
  }
  const std::size_t sample_bytes = f.bits / 8;
  const std::size_t frame_bytes = sample_bytes * f.channels;
  if (f.block_align != 0 && f.block_align != frame_bytes) {
    throw Error(ErrorCode::kMalformedWav, "block align does not match channels and bit depth");
  }
  if (f.sample_rate > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
    throw Error(ErrorCode::kMalformedWav, "sample rate out of range");
  }

  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) throw Error(ErrorCode::kEmptyAudio, "data chunk holds no samples");

  AudioBuffer out;
  out.sample_rate = static_cast<int>(f.sample_rate);
  out.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* p = data.data() + i * frame_bytes;
    double sum = 0.0;
    for (std::size_t c = 0; c < f.channels; ++c) {
      const double v = decode_sample(p + c * sample_bytes, f);
      if (!std::isfinite(v)) throw Error(ErrorCode::kMalformedWav, "non-finite float sample");
      sum += v;
    }
    out.samples[i] = std::clamp(sum / f.channels, -1.0, 1.0);
  }
  return out;
}

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buffer, int bits) {
  if (bits != 8 && bits != 16 && bits != 24 && bits != 32) {
    throw Error(ErrorCode::kUnsupportedEncoding, "cannot write " + std::to_string(bits) + "-bit PCM");
  }
  if (buffer.sample_rate <= 0) throw Error(ErrorCode::kConfigInvalid, "sample_rate must be positive");
  const std::size_t sample_bytes = static_cast<std::size_t>(bits) / 8;
  const std::size_t data_size = buffer.samples.size() * sample_bytes;

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32(out, static_cast<std::uint32_t>(36 + data_size));
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(buffer.sample_rate * sample_bytes));
  put_u16(out, static_cast<std::uint16_t>(sample_bytes));
  put_u16(out, static_cast<std::uint16_t>(bits));
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32(out, static_cast<std::uint32_t>(data_size));

  const double scale = std::ldexp(1.0, bits - 1);
  const auto max_code = static_cast<std::int64_t>(scale) - 1;
  const auto min_code = -static_cast<std::int64_t>(scale);
  for (double s : buffer.samples) {
    const std::int64_t code = std::clamp<std::int64_t>(std::llround(s * scale), min_code, max_code);
    if (bits == 8) {
      out.push_back(static_cast<std::uint8_t>(code + 128));
      continue;
    }
    const auto u = static_cast<std::uint32_t>(code);
    for (std::size_t b = 0; b < sample_bytes; ++b) {
      out.push_back(static_cast<std::uint8_t>((u >> (8 * b)) & 0xFF));
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buffer, int bits) {
  const auto bytes = encode_wav(buffer, bits);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "short write to " + path.string());
}

void require_pipeline_rate(const AudioBuffer& buffer) {
  if (buffer.sample_rate != kPipelineSampleRate) {
    throw Error(ErrorCode::kSampleRateMismatch,
                "expected " + std::to_string(kPipelineSampleRate) + " Hz, got " +
                    std::to_string(buffer.sample_rate) + " Hz");
  }
}

std::vector<DatasetEntry> scan_dataset(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error(ErrorCode::kIoFailure, root.string() + " is not a directory");
  }
  std::vector<DatasetEntry> entries;
  for (const auto& label_dir : fs::directory_iterator(root)) {
    if (!label_dir.is_directory()) continue;
    const std::string label = label_dir.path().filename().string();
    for (const auto& file : fs::directory_iterator(label_dir.path())) {
      if (!file.is_regular_file() || file.path().extension() != ".wav") continue;
      entries.push_back({label, file.path()});
    }
  }
  if (entries.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "no .wav files under " + root.string());
  }
  std::sort(entries.begin(), entries.end(), [](const DatasetEntry& a, const DatasetEntry& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.path.filename().string() < b.path.filename().string();
  });
  return entries;
}

}  // namespace stt
