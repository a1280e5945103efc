#pragma once

// Umbrella header for the temponet library: time-dependent hashtag
// co-occurrence networks, two-level map-equation community detection, and
// temporal community analyses.

#include "temponet/calendar.hpp"
#include "temponet/error.hpp"
#include "temponet/formats.hpp"
#include "temponet/graph.hpp"
#include "temponet/labels.hpp"
#include "temponet/map_equation.hpp"
#include "temponet/optimizer.hpp"
#include "temponet/parallel.hpp"
#include "temponet/posts.hpp"
#include "temponet/rng.hpp"
#include "temponet/run_config.hpp"
#include "temponet/svg.hpp"
#include "temponet/synth.hpp"
#include "temponet/temporal_graph.hpp"
#include "temponet/text.hpp"
#include "temponet/timelines.hpp"
#include "temponet/version.hpp"
