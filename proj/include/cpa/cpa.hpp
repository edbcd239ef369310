#pragma once

#include "cpa/corridor_io.hpp"
#include "cpa/corridor_model.hpp"
#include "cpa/diagrams.hpp"
#include "cpa/error.hpp"
#include "cpa/geometry.hpp"
#include "cpa/ingest.hpp"
#include "cpa/matching.hpp"
#include "cpa/metrics.hpp"
#include "cpa/parallel.hpp"
#include "cpa/pipeline.hpp"
#include "cpa/render.hpp"
#include "cpa/spectrum.hpp"
#include "cpa/synth.hpp"
#include "cpa/units.hpp"
