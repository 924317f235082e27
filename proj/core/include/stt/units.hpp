#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>

namespace stt {

using Millis = std::chrono::duration<double, std::milli>;

/// Sample rate every recognition stage assumes.
inline constexpr int kPipelineSampleRate = 8000;

/// Number of samples spanned by `d` at `sample_rate`, rounded to nearest.
inline std::size_t to_samples(Millis d, int sample_rate) {
  return static_cast<std::size_t>(std::llround(d.count() * sample_rate / 1000.0));
}

}  // namespace stt
