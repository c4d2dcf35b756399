#pragma once

#include <string>

#include "json.hpp"
#include "tensorsplit/metric.hpp"

namespace tsplit {

/// Parse a scalar spec: {"modes":[{"amp":a,"k":[..],"phase":[..]}]}.
ScalarSpec scalar_spec_from_json(const nlohmann::json& j, int dim);

/// Parse a metric spec; accepts the full form
///   {"family":"conformal_flat","u":{...}} etc.
/// and the string shorthands "flat", "conformal", "diagonal_periodic",
/// "product" for the builtin catalog at the given dimension.
MetricSpec metric_spec_from_json(const nlohmann::json& j, int dim);

}  // namespace tsplit
