#pragma once

// Umbrella header.

#include "qmedian/metric_space.hpp"
#include "qmedian/query_ledger.hpp"
#include "qmedian/validate.hpp"
#include "qmedian/generate.hpp"
#include "qmedian/instance_io.hpp"
#include "qmedian/params.hpp"
#include "qmedian/approx_median.hpp"
#include "qmedian/oracles.hpp"
#include "qmedian/report_io.hpp"
