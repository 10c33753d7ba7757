#pragma once

#include <string>
#include <vector>

#include "tsrobust/linalg.hpp"

namespace tsr {

// Fixed-width round-trip formatting; summary files must be byte-identical
// across reruns with the same seed, so all CSV output funnels through here.
std::string format_double(double v);

std::string matrix_to_csv(const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);

// Series files carry a `t,x1,...,xp` header, one row per time index.
std::string series_to_csv(const Matrix& x);
void write_series_csv(const std::string& path, const Matrix& x);

// Reads a numeric CSV, skipping `#` comment lines and a leading header row.
// When the header starts with `t`, the time column is dropped.
Matrix read_numeric_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace tsr
