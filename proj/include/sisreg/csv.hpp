#pragma once

#include <string>

#include "sisreg/types.hpp"

namespace sisreg {

/// Load a dataset from CSV (UTF-8, header row). The column named exactly
/// "y" is the response; every other column is a predictor in header order.
/// Missing or non-finite cells are an IoError.
Dataset load_dataset_csv(const std::string& path);

/// Write a dataset in the same format, full double precision.
void save_dataset_csv(const Dataset& d, const std::string& path);

/// Truth sidecar: header "index,beta_true", one row per coefficient.
void save_truth_csv(const GroundTruth& gt, const std::string& path);
GroundTruth load_truth_csv(const std::string& path, double sigma);

/// Shortest round-trip decimal representation of x.
std::string format_double(double x);

}  // namespace sisreg
