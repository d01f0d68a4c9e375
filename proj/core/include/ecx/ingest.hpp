#pragma once

#include <map>
#include <optional>
#include <string>

#include "ecx/types.hpp"

namespace ecx {

// Parses an intensity CSV and aggregates sub-region records to regions via
// the crosswalk (many-to-one). Without a crosswalk, identifiers pass through
// unchanged. Rows with value 0 are accepted and dropped; negative values and
// sub-regions absent from the crosswalk are errors (offenders listed).
ActivityPanel load_intensity(const std::string& path,
                             const std::optional<std::map<std::string, std::string>>& crosswalk);

// output(r,t) = nominal(r,t) * price_index[base_year] / price_index[t].
// Throws DataError for a missing index year and for nonpositive index values.
IndicatorSeries deflate(const IndicatorSeries& nominal, const std::map<int, double>& price_index,
                        int base_year);

}  // namespace ecx
