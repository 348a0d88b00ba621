// Convenience umbrella: the whole sampling library in one include.

#pragma once

#include "ctvgs/division.hpp"
#include "ctvgs/errors.hpp"
#include "ctvgs/experiment.hpp"
#include "ctvgs/graph.hpp"
#include "ctvgs/grid.hpp"
#include "ctvgs/io.hpp"
#include "ctvgs/oracle.hpp"
#include "ctvgs/profile.hpp"
#include "ctvgs/sampling.hpp"
#include "ctvgs/schedule.hpp"
#include "ctvgs/spectral.hpp"
#include "ctvgs/synth.hpp"
