#ifndef OCRAUDIT_OCRAUDIT_HPP
#define OCRAUDIT_OCRAUDIT_HPP

// Umbrella header. Individual headers are fine to include on their own.

#include "ocraudit/classify.hpp"
#include "ocraudit/histogram.hpp"
#include "ocraudit/image.hpp"
#include "ocraudit/image_io.hpp"
#include "ocraudit/kb.hpp"
#include "ocraudit/regions.hpp"
#include "ocraudit/separation.hpp"
#include "ocraudit/serialize.hpp"
#include "ocraudit/synth.hpp"
#include "ocraudit/threshold.hpp"

#endif  // OCRAUDIT_OCRAUDIT_HPP
