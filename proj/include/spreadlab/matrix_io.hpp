#pragma once

#include <string>

#include "spreadlab/numerics.hpp"
#include "spreadlab/rational.hpp"

namespace spreadlab {

/// Shared matrix file format:
///   SPRD1\n
///   <rows> <cols>\n
///   float64\n | rational\n
/// followed by row-major values: little-endian float64 binary for dense,
/// one "num/den" decimal line per entry for rational.
enum class MatrixKind { float64, rational };

MatrixKind probe_matrix_kind(const std::string& path);

void write_matrix(const std::string& path, const Eigen::Ref<const Matrix>& m);
Matrix read_matrix(const std::string& path);

void write_rational_matrix(const std::string& path, const RationalMatrix& m);
RationalMatrix read_rational_matrix(const std::string& path);

}  // namespace spreadlab
