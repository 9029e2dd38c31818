#include <doctest.h>

#include "generators.hpp"

#include <nashforge/commands.hpp>
#include <nashforge/error.hpp>
#include <nashforge/lp_reduction.hpp>

using namespace nashforge;
using nashforge::testing::known_instances;
using nashforge::testing::random_circuit;
using nashforge::testing::random_lambda;
using nashforge::testing::Rng;

namespace {

FixpCircuit one_minus() {
    CircuitBuilder b(1);
    auto x = b.input(0);
    auto f = b.add(b.constant(1), b.mulc(-1, x));
    return FixpCircuit(1, b.gates(), {f});
}

/// Weak duality with zero gap plus primal and dual feasibility: an optimality
/// certificate for min c^T x s.t. A x >= U lambda + b, x >= 0.
bool optimal_pair(const ParamLP& p, const Vector& lambda, const Vector& x, const Vector& y) {
    const Vector rhs = add(p.U * lambda, p.b);
    const Vector ax = p.A * x;
    const Vector aty = p.A.transpose() * y;
    for (std::size_t i = 0; i < p.m; ++i) {
        if (x[i].sign() < 0 || y[i].sign() < 0 || ax[i] < rhs[i] || aty[i] > p.c[i])
            return false;
    }
    return dot(p.c, x) == dot(rhs, y);
}

} // namespace

TEST_CASE("constraints of the worked instance") {
    const ParamLP p = build_lp(prepare_for_reduction(one_minus()));
    CHECK(p.m == 2);
    CHECK(p.n == 0);
    CHECK(p.A == Matrix{{1, 0}, {1, 1}});
    CHECK(p.b == Vector{0, 1});
    CHECK(p.U == Matrix{{1}, {0}});
    CHECK(p.output_rows == std::vector<std::size_t>{1});
    CHECK(p.c == Vector{2, 1});
    CHECK(p.beta == Vector{3, 1});
}

TEST_CASE("build_constraints needs a clamped, normalized circuit") {
    CHECK_THROWS_AS(build_constraints(one_minus()), ValidationError);
    CHECK_THROWS_AS(build_constraints(clamp_outputs(one_minus())), ValidationError);
    CircuitBuilder b(1);
    auto x = b.input(0);
    auto m = b.max(x, b.constant(Rational(1, 2)));
    CHECK_THROWS_AS(build_constraints(clamp_outputs(FixpCircuit(1, b.gates(), {m}))), ValidationError);
    CHECK_NOTHROW(build_constraints(normalize_max_zero(clamp_outputs(FixpCircuit(1, b.gates(), {m})))));
}

TEST_CASE("construct_cost examples") {
    const Cost one = construct_cost(Matrix{{1}});
    CHECK(one.c == Vector{1});
    CHECK(one.beta == Vector{1});
    const Cost two = construct_cost(Matrix{{1, 0}, {1, 1}});
    CHECK(two.c == Vector{2, 1});
    CHECK(two.beta == Vector{3, 1});
    const Cost three = construct_cost(Matrix{{1, 0, 0}, {2, 1, 0}, {-1, 3, 1}});
    CHECK(three.c == Vector{16, 4, 1});
    CHECK(three.beta == Vector{31, 7, 1});
    CHECK_THROWS_AS(construct_cost(Matrix{{1, 1}, {0, 1}}), ValidationError);
    CHECK_THROWS_AS(construct_cost(Matrix{{2, 0}, {0, 1}}), ValidationError);
}

TEST_CASE("solve_lp, dual and F^lp on the worked instance") {
    const ParamLP p = build_lp(prepare_for_reduction(one_minus()));
    CHECK(solve_lp(p, Vector{Rational(3, 4)}) == Vector{Rational(3, 4), Rational(1, 4)});
    const Vector x = solve_lp(p, Vector{Rational(1, 2)});
    CHECK(x == Vector{Rational(1, 2), Rational(1, 2)});
    const Vector y = construct_dual(p, Vector{Rational(1, 2)}, x);
    CHECK(y == Vector{1, 1});
    CHECK(check_kkt(p, Vector{Rational(1, 2)}, x, y));
    CHECK(eval_flp(p, Vector{Rational(1, 2)}) == Vector{Rational(1, 2)});
    const Vector far = eval_flp(p, Vector{Rational(2)});
    CHECK(far.front().sign() >= 0);
    CHECK(far.front() <= Rational(1));
}

TEST_CASE("dual is zero where x is zero, and KKT catches perturbations") {
    const ParamLP p = build_lp(prepare_for_reduction(one_minus()));
    const Vector lambda{Rational(-1)};
    const Vector x = solve_lp(p, lambda);
    const Vector y = construct_dual(p, lambda, x);
    CHECK(x.front().is_zero());
    CHECK(y.front().is_zero());

    const Vector lh{Rational(1, 2)};
    Vector xp = solve_lp(p, lh);
    const Vector yp = construct_dual(p, lh, xp);
    xp[0] += 1;
    CHECK_FALSE(check_kkt(p, lh, xp, yp));
    CHECK_FALSE(check_kkt(p, lh, solve_lp(p, lh), Vector(2)));
    CHECK_FALSE(kkt_violations(p, lh, xp, yp).empty());
}

TEST_CASE("LP properties on random circuits") {
    Rng rng(51);
    for (int t = 0; t < 150; ++t) {
        const std::size_t k = 1 + t % 2;
        const FixpCircuit src = random_circuit(rng, k, 4);
        const FixpCircuit c = prepare_for_reduction(src);
        const ParamLP p = build_lp(c);
        CHECK(p.m == c.max_gates().size());
        CHECK(p.n + 2 * k == p.m);
        CHECK(is_unit_lower_triangular(p.A));
        CHECK(lp_bit_size(p) <= lp_size_budget(c));
        CHECK(p.c.back() == Rational(1));
        CHECK(p.beta.back() == Rational(1));
        for (std::size_t l = 0; l < k; ++l) {
            const std::size_t r = p.output_rows[l];
            CHECK(r == p.n + 2 * l + 1);
            CHECK(p.c[r] == Rational(1));
            CHECK(p.b[r] == Rational(1));
            for (std::size_t j = 0; j < p.m; ++j) {
                CHECK(p.A(r, j) == (j == r || j + 1 == r ? Rational(1) : Rational(0)));
                CHECK(p.A(j, r) == (j == r ? Rational(1) : Rational(0)));
            }
            for (std::size_t l2 = 0; l2 < k; ++l2)
                CHECK(p.U(r, l2).is_zero());
        }
        for (std::size_t i = 0; i < p.m; ++i)
            CHECK(p.c[i] >= Rational(1));

        for (int s = 0; s < 6; ++s) {
            const Vector lambda = random_lambda(rng, k);
            const Vector x = solve_lp(p, lambda);
            const Trace tr = c.trace(lambda);
            for (std::size_t i = 0; i < p.m; ++i)
                CHECK(x[i] == tr.values[p.gate_of_row[i]]);
            const Vector y = construct_dual(p, lambda, x);
            CHECK(check_kkt(p, lambda, x, y));
            CHECK(optimal_pair(p, lambda, x, y));
            for (std::size_t i = 0; i < p.m; ++i) {
                CHECK(y[i].sign() >= 0);
                CHECK(y[i] <= p.beta[i]);
            }
            const Vector f = eval_flp(p, lambda);
            CHECK(f == c.evaluate(lambda));
            if (std::all_of(lambda.begin(), lambda.end(), [](const Rational& v) { return v.sign() >= 0 && v <= 1; }))
                CHECK(f == clamp_outputs(src).evaluate(lambda));
        }
    }
}

TEST_CASE("row expressions reproduce the rows") {
    Rng rng(52);
    for (int t = 0; t < 50; ++t) {
        const ParamLP p = build_lp(prepare_for_reduction(random_circuit(rng, 2, 4)));
        const auto rows = row_expressions(p);
        REQUIRE(rows.size() == p.m);
        const Vector lambda = random_lambda(rng, 2);
        const Vector x = solve_lp(p, lambda);
        for (std::size_t i = 0; i < p.m; ++i) {
            CHECK(rows[i].x_coeffs.size() == i);
            Rational v = rows[i].constant;
            for (std::size_t j = 0; j < i; ++j)
                v += rows[i].x_coeffs[j] * x[j];
            for (std::size_t l = 0; l < p.k; ++l)
                v += rows[i].lambda_coeffs[l] * lambda[l];
            CHECK(x[i] == max(Rational(0), v));
        }
    }
}

TEST_CASE("F^lp fixed points are the circuit's fixed points") {
    for (const auto& inst : known_instances()) {
        const ParamLP p = build_lp(prepare_for_reduction(inst.circuit));
        for (const auto& fp : inst.fixed_points)
            CHECK(eval_flp(p, fp) == fp);
        // a non-fixed probe
        Vector probe(inst.circuit.k(), Rational(1, 7));
        CHECK((eval_flp(p, probe) == probe) == (clamp_outputs(inst.circuit).evaluate(probe) == probe));
    }
}
