#pragma once

#include <string>

#include "fixorder/benchmarks.hpp"
#include "fixorder/statespace.hpp"

namespace fixorder {

/// Parse the JSON plant format:
///   {"A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]],
///    "nmeas": int?, "ncont": int?}
/// Matrices are row-major arrays of IEEE doubles. The partition keys appear
/// together or not at all. Malformed input raises PlantFormatError; dimension
/// inconsistencies surface as DimensionError.
StateSpaceModel plant_from_json(const std::string& text);

StateSpaceModel plant_from_file(const std::string& path);

/// Serialize a model to the same schema (partition keys only when attached).
std::string plant_to_json(const StateSpaceModel& sys, int indent = 2);

std::string report_to_json(const BenchmarkReport& report, int indent = 2);

}  // namespace fixorder
