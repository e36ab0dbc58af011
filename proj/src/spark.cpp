#include "spreadlab/spark.hpp"

#include <numeric>

namespace spreadlab {

SparkResult compute_spark(const RationalMatrix& a, Eigen::Index max_cols) {
    const Eigen::Index n = a.cols();
    if (n > max_cols)
        throw TooLargeError("compute_spark: " + std::to_string(n) + " columns exceed the cap of " +
                            std::to_string(max_cols));
    const Eigen::Index rank = rational_rank(a);
    const Eigen::Index max_size = std::min(n, rank + 1);

    for (Eigen::Index size = 1; size <= max_size; ++size) {
        std::vector<Eigen::Index> s(static_cast<std::size_t>(size));
        std::iota(s.begin(), s.end(), Eigen::Index(0));
        while (true) {
            const RationalMatrix sub = a.select_columns(s);
            if (rational_rank(sub) < size) {
                const KernelBasis kern = rational_kernel_basis(sub);
                // A size-minimal dependent set has a kernel vector with full
                // support on it.
                SparkResult res;
                res.spark = size;
                std::vector<mpq_class> w(static_cast<std::size_t>(n), mpq_class(0));
                for (Eigen::Index i = 0; i < size; ++i)
                    w[static_cast<std::size_t>(s[static_cast<std::size_t>(i)])] =
                        kern.columns.front()[static_cast<std::size_t>(i)];
                res.witness = std::move(w);
                return res;
            }
            Eigen::Index i = size - 1;
            while (i >= 0 && s[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++s[static_cast<std::size_t>(i)];
            for (Eigen::Index j = i + 1; j < size; ++j)
                s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return SparkResult{};  // columns independent
}

mpq_class reduction_delta(const RationalMatrix& a) {
    if (a.is_zero()) throw ValidationError("reduction_delta: zero matrix");
    mpq_class p_max = 0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            mpq_class v = abs(a(i, j));
            if (v > p_max) p_max = v;
        }
    const unsigned long p = static_cast<unsigned long>(a.rows());
    // base = p * n * P^2, exact; delta = 1 - 1 / (2 (base^p + 1)).
    mpq_class base = p_max * p_max;
    base *= a.rows();
    base *= a.cols();
    mpq_class power;
    mpz_pow_ui(power.get_num_mpz_t(), base.get_num_mpz_t(), p);
    mpz_pow_ui(power.get_den_mpz_t(), base.get_den_mpz_t(), p);
    power.canonicalize();
    mpq_class delta = 1 - 1 / (2 * (power + 1));
    delta.canonicalize();
    return delta;
}

ReductionCheck reduction_consistency_check(const RationalMatrix& a, Eigen::Index m) {
    if (m < 1 || m > a.cols()) throw ValidationError("reduction_consistency_check: m out of range");
    ReductionCheck check;
    const SparkResult spark = compute_spark(a);
    check.spark = spark.spark;
    const mpq_class delta_q = reduction_delta(a);
    check.delta = delta_q.get_d();
    check.delta_rational = delta_q.get_str();

    const KernelBasis kern = rational_kernel_basis(a);
    check.kernel_dimension = kern.dimension();
    if (kern.dimension() == 0) {
        check.vacuous = true;
        check.consistent = true;
        check.detail = "trivial kernel; nothing to check";
        return check;
    }
    if (kern.dimension() > 6)
        throw TooLargeError("reduction_consistency_check: kernel dimension exceeds 6");

    const bool spark_at_most_m = spark.spark.has_value() && *spark.spark <= m;
    if (spark_at_most_m) {
        // The spark witness itself must refute: its support has size <= m and
        // carries all of its mass.
        Vector w(a.cols());
        for (Eigen::Index i = 0; i < a.cols(); ++i)
            w[i] = spark.witness->at(static_cast<std::size_t>(i)).get_d();
        auto [ratio, set] = vector_spread_ratio(w, m, 2.0);
        check.consistent = ratio > check.delta;
        check.detail = "spark <= m; witness support ratio " + std::to_string(ratio) +
                       (check.consistent ? " > " : " <= ") + "delta " + std::to_string(check.delta);
    } else {
        // spark > m: the kernel must be exactly (m, delta)-spread.
        const Matrix basis = orthonormal_basis(kern.as_matrix().to_double());
        const SpreadVerdict verdict = subspace_spread_exact(basis, SpreadSpec{m, check.delta, 2.0});
        check.consistent = verdict.is_spread;
        check.detail = "spark > m; exact kernel verdict ratio " + std::to_string(verdict.achieved_ratio) +
                       (check.consistent ? " <= " : " > ") + "delta " + std::to_string(check.delta);
    }
    return check;
}

}  // namespace spreadlab
