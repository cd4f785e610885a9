#pragma once

// Umbrella header.
#include "bootci/copula.hpp"
#include "bootci/distributions.hpp"
#include "bootci/errors.hpp"
#include "bootci/harness.hpp"
#include "bootci/intervals.hpp"
#include "bootci/io.hpp"
#include "bootci/metrics.hpp"
#include "bootci/random.hpp"
#include "bootci/report.hpp"
#include "bootci/resampling.hpp"
#include "bootci/scenario.hpp"
