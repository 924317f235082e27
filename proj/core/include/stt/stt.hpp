#pragma once

#include "stt/audio_io.hpp"
#include "stt/error.hpp"
#include "stt/eval.hpp"
#include "stt/frontend.hpp"
#include "stt/grnn.hpp"
#include "stt/lexicon.hpp"
#include "stt/mfcc.hpp"
#include "stt/pipeline.hpp"
#include "stt/vad.hpp"
