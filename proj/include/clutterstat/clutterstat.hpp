#pragma once

// Amplitude statistics for SAR land clutter: candidate distributions and
// their ML fits, histogram/KL model selection, CFAR detection, and the
// MSTAR/PGM ingestion that feeds them.

#include "clutterstat/cfar.hpp"
#include "clutterstat/distributions.hpp"
#include "clutterstat/error.hpp"
#include "clutterstat/fitting.hpp"
#include "clutterstat/histogram.hpp"
#include "clutterstat/image.hpp"
#include "clutterstat/model_selection.hpp"
#include "clutterstat/mstar.hpp"
#include "clutterstat/pgm.hpp"
#include "clutterstat/random.hpp"
#include "clutterstat/report.hpp"
#include "clutterstat/samples.hpp"
#include "clutterstat/series.hpp"
#include "clutterstat/synth.hpp"
