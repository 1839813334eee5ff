#pragma once

#include <string>

#include "tvcpd/types.hpp"

namespace tvcpd {

/// Reads a series from CSV. First row holds the feature names, each later row
/// one time step of comma-separated decimals. Missing values are not
/// permitted; parse failures report the path and 1-based line number.
TimeSeries read_csv(const std::string& path);

/// Writes the same format read_csv ingests. Values are printed with %.17g so
/// a write/read round trip is exact.
void write_csv(const TimeSeries& series, const std::string& path);

}  // namespace tvcpd
