#ifndef NASHFORGE_MATRIX_HPP
#define NASHFORGE_MATRIX_HPP

#include <nashforge/rational.hpp>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace nashforge {

using Vector = std::vector<Rational>;

/// Dense row-major matrix of rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<Vector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vector row(std::size_t i) const;
    Vector col(std::size_t j) const;
    std::vector<Vector> to_rows() const;

    Matrix transpose() const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(const Rational& s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const Rational> x);

/// Outer product u v^T.
Matrix outer(std::span<const Rational> u, std::span<const Rational> v);

/// [[tl, tr], [bl, br]]; block shapes must agree.
Matrix block(const Matrix& tl, const Matrix& tr, const Matrix& bl, const Matrix& br);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
Rational sum(std::span<const Rational> a);
Vector add(std::span<const Rational> a, std::span<const Rational> b);
Vector sub(std::span<const Rational> a, std::span<const Rational> b);
Vector scale(const Rational& s, std::span<const Rational> a);
/// max_i |a_i|; zero for an empty vector.
Rational norm_inf(std::span<const Rational> a);

/// Exact rank by fraction-free (Bareiss) elimination.
std::size_t rank(const Matrix& m);

bool is_upper_triangular(const Matrix& m);
bool is_unit_lower_triangular(const Matrix& m);

/// Forward substitution for A x = rhs with A lower-triangular, unit diagonal.
Vector solve_unit_lower_triangular(const Matrix& a, std::span<const Rational> rhs);

/// Unique solution of a square system, or nullopt when singular.
std::optional<Vector> solve_square(Matrix a, Vector rhs);

std::string to_string(const Matrix& m);

} // namespace nashforge

#endif
