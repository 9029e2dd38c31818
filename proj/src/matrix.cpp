#include <nashforge/matrix.hpp>

#include <nashforge/error.hpp>

#include <sstream>
#include <utility>

namespace nashforge {

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw ValidationError("ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_)
            throw ValidationError("ragged matrix rows");
        for (std::size_t j = 0; j < m.cols_; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

Vector Matrix::row(std::size_t i) const {
    return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                  data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Vector Matrix::col(std::size_t j) const {
    Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        v[i] = (*this)(i, j);
    return v;
}

std::vector<Vector> Matrix::to_rows() const {
    std::vector<Vector> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        out.push_back(row(i));
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("matrix shape mismatch");
}

} // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a(i, j) + b(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = a(i, j) - b(i, j);
    return c;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw ValidationError("matrix product shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

Matrix operator*(const Rational& s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = s * a(i, j);
    return c;
}

Vector operator*(const Matrix& a, std::span<const Rational> x) {
    if (a.cols() != x.size())
        throw ValidationError("matrix-vector shape mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero())
                y[i] += a(i, j) * x[j];
    return y;
}

Matrix outer(std::span<const Rational> u, std::span<const Rational> v) {
    Matrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            m(i, j) = u[i] * v[j];
    return m;
}

Matrix block(const Matrix& tl, const Matrix& tr, const Matrix& bl, const Matrix& br) {
    if (tl.rows() != tr.rows() || bl.rows() != br.rows() || tl.cols() != bl.cols() || tr.cols() != br.cols())
        throw ValidationError("block shape mismatch");
    Matrix m(tl.rows() + bl.rows(), tl.cols() + tr.cols());
    auto put = [&m](const Matrix& b, std::size_t r0, std::size_t c0) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                m(r0 + i, c0 + j) = b(i, j);
    };
    put(tl, 0, 0);
    put(tr, 0, tl.cols());
    put(bl, tl.rows(), 0);
    put(br, tl.rows(), tl.cols());
    return m;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size())
        throw ValidationError("dot product size mismatch");
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero())
            s += a[i] * b[i];
    return s;
}

Rational sum(std::span<const Rational> a) {
    Rational s;
    for (const auto& x : a)
        s += x;
    return s;
}

Vector add(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size())
        throw ValidationError("vector size mismatch");
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] + b[i];
    return c;
}

Vector sub(std::span<const Rational> a, std::span<const Rational> b) {
    if (a.size() != b.size())
        throw ValidationError("vector size mismatch");
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = a[i] - b[i];
    return c;
}

Vector scale(const Rational& s, std::span<const Rational> a) {
    Vector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = s * a[i];
    return c;
}

Rational norm_inf(std::span<const Rational> a) {
    Rational best;
    for (const auto& x : a)
        best = max(best, x.abs());
    return best;
}

std::size_t rank(const Matrix& m) {
    if (m.empty())
        throw ValidationError("rank of an empty matrix");
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();

    // Clear denominators row by row so elimination runs over the integers.
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < cols; ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).raw().get_den_mpz_t());
        for (std::size_t j = 0; j < cols; ++j)
            a[i][j] = m(i, j).raw().get_num() * (l / m(i, j).raw().get_den());
    }

    mpz_class prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && a[pivot][c] == 0)
            ++pivot;
        if (pivot == rows)
            continue;
        std::swap(a[pivot], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

bool is_upper_triangular(const Matrix& m) {
    if (!m.square())
        throw ValidationError("triangularity test needs a square matrix");
    for (std::size_t i = 1; i < m.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!m(i, j).is_zero())
                return false;
    return true;
}

bool is_unit_lower_triangular(const Matrix& m) {
    if (!m.square())
        return false;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (m(i, i) != Rational(1))
            return false;
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (!m(i, j).is_zero())
                return false;
    }
    return true;
}

Vector solve_unit_lower_triangular(const Matrix& a, std::span<const Rational> rhs) {
    if (!a.square() || a.rows() != rhs.size())
        throw ValidationError("shape mismatch in triangular solve");
    if (!is_unit_lower_triangular(a))
        throw ValidationError("matrix is not unit lower-triangular");
    Vector x(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!a(i, j).is_zero())
                x[i] -= a(i, j) * x[j];
    return x;
}

std::optional<Vector> solve_square(Matrix a, Vector rhs) {
    const std::size_t n = a.rows();
    if (!a.square() || rhs.size() != n)
        throw ValidationError("shape mismatch in linear solve");
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && a(pivot, c).is_zero())
            ++pivot;
        if (pivot == n)
            return std::nullopt;
        if (pivot != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(pivot, j), a(c, j));
            std::swap(rhs[pivot], rhs[c]);
        }
        const Rational inv = Rational(1) / a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c).is_zero())
                continue;
            const Rational f = a(i, c) * inv;
            for (std::size_t j = c; j < n; ++j)
                a(i, j) -= f * a(c, j);
            rhs[i] -= f * rhs[c];
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational s = rhs[i];
        for (std::size_t j = i + 1; j < n; ++j)
            if (!a(i, j).is_zero())
                s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::string to_string(const Matrix& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

} // namespace nashforge
