#pragma once

#include <string>

#include "shapeclust/curve.hpp"

namespace shapeclust {

/// Loads a curve set from either supported layout:
///  - a .json file holding a whole set
///      {"p": int, "curves": [{"id": str, "closed": bool, "points": [[..]]}],
///       "labels": [int]?}
///  - a directory with one CSV file per curve (one row per sample, p
///    comma-separated coordinates) and a manifest.csv listing
///    "file[,label[,closed]]" in order.
/// Curves with missing ids get zero-padded indices. Closed curves are seam
/// canonicalized on load.
CurveSet load_curves(const std::string& path);

void save_curves_json(const CurveSet& set, const std::string& path);
void save_curves_csv_dir(const CurveSet& set, const std::string& dir);

/// {"p": int, "points": [[..]], "labels": [int]?}
PointSet load_points(const std::string& path);
void save_points(const PointSet& set, const std::string& path);

/// One integer label per line.
std::vector<int> load_labels(const std::string& path);
void save_labels(const std::vector<int>& labels, const std::string& path);

}  // namespace shapeclust
