#pragma once

// Core library (no yaml-cpp dependency). Include scatterlab/experiment.hpp
// for the config-driven runner.

#include "scatterlab/bounds.hpp"
#include "scatterlab/errors.hpp"
#include "scatterlab/extractor.hpp"
#include "scatterlab/frames.hpp"
#include "scatterlab/group.hpp"
#include "scatterlab/numeric.hpp"
#include "scatterlab/signal.hpp"
#include "scatterlab/text_io.hpp"
