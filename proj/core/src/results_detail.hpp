#pragma once

#include <string>
#include <vector>

#include "tarkit/sweep.hpp"

namespace tarkit::detail {

RecallTargets parse_result_header(const std::vector<std::string>& fields,
                                  const std::string& context);

ExperimentResult parse_result_row(const std::vector<std::string>& fields,
                                  std::size_t target_count, const std::string& context);

}  // namespace tarkit::detail
