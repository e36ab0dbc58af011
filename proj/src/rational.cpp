#include "spreadlab/rational.hpp"

#include <algorithm>
#include <numeric>

namespace spreadlab {

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
    if (cols_ != rhs.rows()) throw DimensionError("RationalMatrix: product shape mismatch");
    RationalMatrix out(rows_, rhs.cols());
    for (Eigen::Index i = 0; i < rows_; ++i)
        for (Eigen::Index k = 0; k < cols_; ++k) {
            const mpq_class& aik = (*this)(i, k);
            if (aik == 0) continue;
            for (Eigen::Index j = 0; j < rhs.cols(); ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

bool RationalMatrix::is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const mpq_class& q) { return q == 0; });
}

RationalMatrix RationalMatrix::select_columns(const std::vector<Eigen::Index>& idx) const {
    if (idx.empty()) throw ValidationError("select_columns: empty selection");
    RationalMatrix out(rows_, static_cast<Eigen::Index>(idx.size()));
    for (Eigen::Index i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out(i, static_cast<Eigen::Index>(j)) = (*this)(i, idx[j]);
    return out;
}

Matrix RationalMatrix::to_double() const {
    Matrix out(rows_, cols_);
    for (Eigen::Index i = 0; i < rows_; ++i)
        for (Eigen::Index j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).get_d();
    return out;
}

RationalMatrix KernelBasis::as_matrix() const {
    if (columns.empty()) throw ValidationError("KernelBasis: empty basis has no matrix form");
    RationalMatrix out(ambient, static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (Eigen::Index i = 0; i < ambient; ++i) out(i, static_cast<Eigen::Index>(j)) = columns[j][static_cast<std::size_t>(i)];
    return out;
}

namespace {

// Row-echelon form of an integer matrix by fraction-free Bareiss elimination.
// Returns the echelon matrix together with the pivot column of each pivot row.
struct Echelon {
    std::vector<std::vector<mpz_class>> rows;
    std::vector<Eigen::Index> pivot_cols;
};

Echelon bareiss_echelon(const RationalMatrix& a) {
    const Eigen::Index p = a.rows(), n = a.cols();
    // Clear denominators per row (row scaling preserves rank and kernel).
    std::vector<std::vector<mpz_class>> m(static_cast<std::size_t>(p),
                                          std::vector<mpz_class>(static_cast<std::size_t>(n)));
    for (Eigen::Index i = 0; i < p; ++i) {
        mpz_class lcm = 1;
        for (Eigen::Index j = 0; j < n; ++j) {
            mpz_class den = a(i, j).get_den();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            mpq_class scaled = a(i, j) * lcm;
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = scaled.get_num();
        }
    }

    Echelon ech;
    mpz_class prev = 1;
    Eigen::Index row = 0;
    for (Eigen::Index col = 0; col < n && row < p; ++col) {
        // Pivot: smallest row index with a nonzero entry in this column.
        Eigen::Index piv = -1;
        for (Eigen::Index i = row; i < p; ++i) {
            if (m[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)] != 0) {
                piv = i;
                break;
            }
        }
        if (piv < 0) continue;
        if (piv != row) std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(row)]);
        const mpz_class pivot = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        for (Eigen::Index i = row + 1; i < p; ++i) {
            auto& ri = m[static_cast<std::size_t>(i)];
            const auto& rr = m[static_cast<std::size_t>(row)];
            const mpz_class lead = ri[static_cast<std::size_t>(col)];
            for (Eigen::Index j = col; j < n; ++j) {
                mpz_class t = ri[static_cast<std::size_t>(j)] * pivot - lead * rr[static_cast<std::size_t>(j)];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                ri[static_cast<std::size_t>(j)] = t;
            }
        }
        prev = pivot;
        ech.pivot_cols.push_back(col);
        ++row;
    }
    ech.rows = std::move(m);
    return ech;
}

}  // namespace

Eigen::Index rational_rank(const RationalMatrix& a) {
    return static_cast<Eigen::Index>(bareiss_echelon(a).pivot_cols.size());
}

KernelBasis rational_kernel_basis(const RationalMatrix& a) {
    const Eigen::Index n = a.cols();
    const Echelon ech = bareiss_echelon(a);
    const Eigen::Index rank = static_cast<Eigen::Index>(ech.pivot_cols.size());

    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (Eigen::Index c : ech.pivot_cols) is_pivot[static_cast<std::size_t>(c)] = true;

    KernelBasis basis;
    basis.ambient = n;
    for (Eigen::Index f = 0; f < n; ++f) {
        if (is_pivot[static_cast<std::size_t>(f)]) continue;
        std::vector<mpq_class> x(static_cast<std::size_t>(n), mpq_class(0));
        x[static_cast<std::size_t>(f)] = 1;
        // Back-substitute pivot coordinates, bottom-up, exactly.
        for (Eigen::Index r = rank - 1; r >= 0; --r) {
            const auto& row = ech.rows[static_cast<std::size_t>(r)];
            const Eigen::Index pc = ech.pivot_cols[static_cast<std::size_t>(r)];
            mpq_class s = 0;
            for (Eigen::Index j = pc + 1; j < n; ++j) {
                if (row[static_cast<std::size_t>(j)] != 0 && x[static_cast<std::size_t>(j)] != 0)
                    s += mpq_class(row[static_cast<std::size_t>(j)]) * x[static_cast<std::size_t>(j)];
            }
            x[static_cast<std::size_t>(pc)] = -s / mpq_class(row[static_cast<std::size_t>(pc)]);
        }
        // Scale to a primitive integer vector with positive leading entry.
        mpz_class lcm = 1;
        for (const auto& q : x) {
            mpz_class den = q.get_den();
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
        mpz_class gcd = 0;
        std::vector<mpz_class> ints(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            mpq_class scaled = x[i] * lcm;
            ints[i] = scaled.get_num();
            mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), ints[i].get_mpz_t());
        }
        if (gcd == 0) gcd = 1;
        int lead_sign = 0;
        for (const auto& z : ints) {
            if (z != 0) {
                lead_sign = sgn(z);
                break;
            }
        }
        if (lead_sign < 0) gcd = -gcd;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = mpq_class(ints[i] / gcd);
        basis.columns.push_back(std::move(x));
    }
    return basis;
}

}  // namespace spreadlab
