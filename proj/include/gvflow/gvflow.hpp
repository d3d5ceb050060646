/**
 * @file gvflow.hpp
 * @brief Umbrella header
 */

#pragma once

#include "gvflow/domain.hpp"
#include "gvflow/error.hpp"
#include "gvflow/field.hpp"
#include "gvflow/flow.hpp"
#include "gvflow/guiding_point.hpp"
#include "gvflow/gvf.hpp"
#include "gvflow/ingest.hpp"
#include "gvflow/raster_export.hpp"
#include "gvflow/smoothing.hpp"
