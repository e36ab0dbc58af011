#include "spreadlab/matrix_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "matrix format stores float64 little-endian; big-endian hosts are unsupported");

namespace spreadlab {

namespace {

constexpr const char* kMagic = "SPRD1";

struct Header {
    Eigen::Index rows = 0, cols = 0;
    MatrixKind kind = MatrixKind::float64;
};

Header read_header(std::istream& in, const std::string& path) {
    std::string magic, flag;
    long long rows = 0, cols = 0;
    if (!std::getline(in, magic) || magic != kMagic)
        throw ValidationError(path + ": bad magic (expected SPRD1)");
    std::string dims;
    if (!std::getline(in, dims)) throw ValidationError(path + ": missing dimensions");
    std::istringstream ds(dims);
    if (!(ds >> rows >> cols) || rows < 1 || cols < 1)
        throw ValidationError(path + ": bad dimensions line");
    if (!std::getline(in, flag)) throw ValidationError(path + ": missing format flag");
    Header h;
    h.rows = rows;
    h.cols = cols;
    if (flag == "float64")
        h.kind = MatrixKind::float64;
    else if (flag == "rational")
        h.kind = MatrixKind::rational;
    else
        throw ValidationError(path + ": unknown format flag '" + flag + "'");
    return h;
}

void write_header(std::ostream& out, Eigen::Index rows, Eigen::Index cols, MatrixKind kind) {
    out << kMagic << "\n" << rows << " " << cols << "\n"
        << (kind == MatrixKind::float64 ? "float64" : "rational") << "\n";
}

}  // namespace

MatrixKind probe_matrix_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open");
    return read_header(in, path).kind;
}

void write_matrix(const std::string& path, const Eigen::Ref<const Matrix>& m) {
    if (!m.allFinite()) throw ValidationError("write_matrix: non-finite entries");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(path + ": cannot open for writing");
    write_header(out, m.rows(), m.cols(), MatrixKind::float64);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
    if (!out) throw ValidationError(path + ": write failed");
}

Matrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open");
    const Header h = read_header(in, path);
    if (h.kind != MatrixKind::float64) throw ValidationError(path + ": not a float64 matrix");
    Matrix m(h.rows, h.cols);
    for (Eigen::Index i = 0; i < h.rows; ++i)
        for (Eigen::Index j = 0; j < h.cols; ++j) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), sizeof(double));
            if (!in) throw ValidationError(path + ": truncated payload");
            m(i, j) = v;
        }
    if (!m.allFinite()) throw ValidationError(path + ": non-finite entries");
    return m;
}

void write_rational_matrix(const std::string& path, const RationalMatrix& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(path + ": cannot open for writing");
    write_header(out, m.rows(), m.cols(), MatrixKind::rational);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            out << m(i, j).get_num().get_str() << "/" << m(i, j).get_den().get_str() << "\n";
    if (!out) throw ValidationError(path + ": write failed");
}

RationalMatrix read_rational_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError(path + ": cannot open");
    const Header h = read_header(in, path);
    if (h.kind != MatrixKind::rational) throw ValidationError(path + ": not a rational matrix");
    RationalMatrix m(h.rows, h.cols);
    std::string line;
    for (Eigen::Index i = 0; i < h.rows; ++i)
        for (Eigen::Index j = 0; j < h.cols; ++j) {
            if (!std::getline(in, line)) throw ValidationError(path + ": truncated payload");
            const auto slash = line.find('/');
            try {
                mpq_class q;
                if (slash == std::string::npos)
                    q = mpq_class(mpz_class(line));
                else
                    q = mpq_class(mpz_class(line.substr(0, slash)), mpz_class(line.substr(slash + 1)));
                if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
                q.canonicalize();
                m(i, j) = q;
            } catch (const std::invalid_argument&) {
                throw ValidationError(path + ": bad rational entry '" + line + "'");
            }
        }
    return m;
}

}  // namespace spreadlab
