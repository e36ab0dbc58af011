#pragma once

#include <Eigen/Core>
#include <gmpxx.h>
#include <vector>

#include "spreadlab/errors.hpp"
#include "spreadlab/numerics.hpp"

namespace spreadlab {

/// Dense matrix of exact rationals (GMP), row-major. Entries are kept
/// canonical (lowest terms), which mpq_class maintains on assignment from
/// canonical operands.
class RationalMatrix {
  public:
    RationalMatrix() = default;
    RationalMatrix(Eigen::Index rows, Eigen::Index cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), mpq_class(0)) {
        if (rows < 1 || cols < 1) throw ValidationError("RationalMatrix: dimensions must be >= 1");
    }

    static RationalMatrix identity(Eigen::Index n) {
        RationalMatrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }

    mpq_class& operator()(Eigen::Index i, Eigen::Index j) {
        return data_[static_cast<std::size_t>(i * cols_ + j)];
    }
    const mpq_class& operator()(Eigen::Index i, Eigen::Index j) const {
        return data_[static_cast<std::size_t>(i * cols_ + j)];
    }

    RationalMatrix operator*(const RationalMatrix& rhs) const;

    bool is_zero() const;

    /// Columns selected by `idx`, in order.
    RationalMatrix select_columns(const std::vector<Eigen::Index>& idx) const;

    Matrix to_double() const;

  private:
    Eigen::Index rows_ = 0, cols_ = 0;
    std::vector<mpq_class> data_;
};

/// Exact rank by fraction-free (Bareiss) elimination over the integers after
/// clearing row denominators.
Eigen::Index rational_rank(const RationalMatrix& a);

/// Exact kernel basis: returns Y with n - rank(a) columns, a * Y = 0 exactly,
/// columns linearly independent. Each column is scaled to a primitive integer
/// vector with positive leading nonzero entry, so results are canonical.
/// A kernel of dimension zero yields a (n x 1) matrix marker? No: it returns
/// a matrix with zero columns, represented as an empty optional-free struct;
/// see kernel_dimension for the count.
struct KernelBasis {
    Eigen::Index ambient = 0;               // n
    std::vector<std::vector<mpq_class>> columns;  // each of length n
    RationalMatrix as_matrix() const;        // requires at least one column
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(columns.size()); }
};

KernelBasis rational_kernel_basis(const RationalMatrix& a);

}  // namespace spreadlab
