#ifndef NASHFORGE_LP_REDUCTION_HPP
#define NASHFORGE_LP_REDUCTION_HPP

#include <nashforge/fixp_circuit.hpp>
#include <nashforge/matrix.hpp>

#include <string>
#include <vector>

namespace nashforge {

/// L_i = sum_j x_coeffs[j] x_j + sum_l lambda_coeffs[l] lambda_l + constant,
/// with x_coeffs covering x_1 .. x_{i-1} only.
struct LinExpr {
    Vector x_coeffs;
    Vector lambda_coeffs;
    Rational constant;
};

/// min c^T x  s.t.  A x >= U lambda + b,  x >= 0.
struct ParamLP {
    std::size_t m = 0;
    std::size_t k = 0;
    /// Number of max gates before the 2k clamp gates (m - 2k).
    std::size_t n = 0;
    Matrix A;
    Vector b;
    /// m x k; column l is u^l.
    Matrix U;
    Vector c;
    Vector beta;
    /// 0-based rows of the outer clamp gates (n + 2l in 1-based terms).
    std::vector<std::size_t> output_rows;
    /// Circuit gate behind each row, in max-gate order.
    std::vector<GateRef> gate_of_row;
};

/// Extracts A, b, U from a clamped, max-zero normalized circuit and checks
/// the clamp-row structure: row n+2l reads x_{n+2l-1} + x_{n+2l} >= 1 with
/// no lambda term, and column n+2l of A is a unit vector. c and beta are left
/// empty. Throws ValidationError for unnormalized circuits or a broken
/// structure.
ParamLP build_constraints(const FixpCircuit& c);
/// L_i for every row, read back from A, b and U.
std::vector<LinExpr> row_expressions(const ParamLP& p);

struct Cost {
    Vector c;
    Vector beta;
};

/// c_m = beta_m = 1; c_i = sum_{j>i} |a_ji| beta_j + 1; beta_i = c_i + sum_{j>i} |a_ji| beta_j.
Cost construct_cost(const Matrix& A);

/// build_constraints followed by construct_cost.
ParamLP build_lp(const FixpCircuit& c);

/// Forward recursion x_i = max{0, L_i(x_1..x_{i-1}, lambda)}.
Vector solve_lp(const ParamLP& p, const Vector& lambda);

/// y_r = c_r - sum_{j>r} a_jr y_j when x_r > 0, else 0.
Vector construct_dual(const ParamLP& p, const Vector& lambda, const Vector& x);

/// Every failed primal/dual feasibility or complementary slackness
/// condition, one line each.
std::vector<std::string> kkt_violations(const ParamLP& p, const Vector& lambda, const Vector& x, const Vector& y);
bool check_kkt(const ParamLP& p, const Vector& lambda, const Vector& x, const Vector& y);

/// (x_{n+2l})_l for x = solve_lp(p, lambda).
Vector eval_flp(const ParamLP& p, const Vector& lambda);

/// Total bit size of A, b, U, c and beta.
std::size_t lp_bit_size(const ParamLP& p);
/// 8 size[C]^3 + 64: the explicit polynomial the LP bit size must stay under.
std::size_t lp_size_budget(const FixpCircuit& c);

} // namespace nashforge

#endif
