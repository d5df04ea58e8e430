/// Umbrella header for the whole library.
#pragma once

#include "ocnn/classifier.hpp"
#include "ocnn/config.hpp"
#include "ocnn/dataset.hpp"
#include "ocnn/ensemble.hpp"
#include "ocnn/errors.hpp"
#include "ocnn/eval.hpp"
#include "ocnn/knn.hpp"
#include "ocnn/matrix.hpp"
#include "ocnn/metrics.hpp"
#include "ocnn/noise_filter.hpp"
#include "ocnn/normalize.hpp"
#include "ocnn/parallel.hpp"
#include "ocnn/random.hpp"
#include "ocnn/report.hpp"
#include "ocnn/tuning.hpp"
