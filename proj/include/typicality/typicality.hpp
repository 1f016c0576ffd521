#pragma once

// Umbrella header: the whole library in one include.

#include "typicality/data_matrix.hpp"
#include "typicality/errors.hpp"
#include "typicality/gaussian.hpp"
#include "typicality/geometry.hpp"
#include "typicality/linalg.hpp"
#include "typicality/mcd.hpp"
#include "typicality/outliers.hpp"
#include "typicality/pipeline.hpp"
#include "typicality/random.hpp"
#include "typicality/report.hpp"
#include "typicality/simulation.hpp"
#include "typicality/stats.hpp"
#include "typicality/version.hpp"
