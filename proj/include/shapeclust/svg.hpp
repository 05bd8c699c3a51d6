#pragma once

#include <map>
#include <string>

namespace shapeclust {

/// Static bar chart of a cluster-count histogram: one bar per K, counts on
/// the y axis. Output is deterministic.
void write_histogram_svg(const std::map<int, int>& histogram, const std::string& path,
                         const std::string& title);

}  // namespace shapeclust
