#include <nashforge/lp_reduction.hpp>

#include <nashforge/error.hpp>

#include <map>

namespace nashforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Affine form over max-gate rows, lambda and a constant, kept sparse.
struct Affine {
    std::map<std::size_t, Rational> x;
    std::map<std::size_t, Rational> lambda;
    Rational constant;
};

void accumulate(std::map<std::size_t, Rational>& into, const std::map<std::size_t, Rational>& from,
                const Rational& factor) {
    for (const auto& [i, v] : from) {
        Rational& slot = into[i];
        slot += factor * v;
        if (slot.is_zero())
            into.erase(i);
    }
}

Affine combine(const Affine& a, const Affine& b, const Rational& fb) {
    Affine out = a;
    accumulate(out.x, b.x, fb);
    accumulate(out.lambda, b.lambda, fb);
    out.constant += fb * b.constant;
    return out;
}

Affine scaled(const Affine& a, const Rational& f) {
    Affine out;
    return combine(out, a, f);
}

void require_dims(const ParamLP& p, const Vector& lambda) {
    if (lambda.size() != p.k)
        throw ValidationError("lambda has dimension " + std::to_string(lambda.size()) + ", expected " +
                              std::to_string(p.k));
}

} // namespace

ParamLP build_constraints(const FixpCircuit& c) {
    const auto order = order_max_gates(c);
    const auto& gates = c.gates();
    const std::size_t m = order.size();
    const std::size_t k = c.k();

    std::vector<std::size_t> row_of(gates.size(), m);
    for (std::size_t r = 0; r < m; ++r)
        row_of[order[r]] = r;

    ParamLP p;
    p.m = m;
    p.k = k;
    p.n = m - 2 * k;
    p.A = Matrix(m, m);
    p.b = Vector(m);
    p.U = Matrix(m, k);
    p.gate_of_row = order;

    std::vector<Affine> value(gates.size());
    for (std::size_t i = 0; i < gates.size(); ++i) {
        std::visit(overloaded{
                       [&](const gate::Input& g) { value[i].lambda[g.index] = 1; },
                       [&](const gate::Const& g) { value[i].constant = g.value; },
                       [&](const gate::Add& g) { value[i] = combine(value[g.lhs], value[g.rhs], 1); },
                       [&](const gate::MulC& g) { value[i] = scaled(value[g.arg], g.coeff); },
                       [&](const gate::Max& g) {
                           const std::size_t r = row_of[i];
                           const bool lhs_zero = std::holds_alternative<gate::Const>(gates[g.lhs]) &&
                                                 std::get<gate::Const>(gates[g.lhs]).value.is_zero();
                           const Affine& L = value[lhs_zero ? g.rhs : g.lhs];
                           // x_r - sum a'_j x_j >= sum w_l lambda_l + const
                           p.A(r, r) = 1;
                           for (const auto& [j, v] : L.x) {
                               if (j >= r)
                                   throw ValidationError("max gate row " + std::to_string(r) +
                                                         " depends on a later row");
                               p.A(r, j) = -v;
                           }
                           for (const auto& [l, v] : L.lambda)
                               p.U(r, l) = v;
                           p.b[r] = L.constant;
                           value[i].x[r] = 1;
                       },
                   },
                   gates[i]);
    }

    for (std::size_t l = 0; l < k; ++l) {
        const std::size_t row = p.n + 2 * l + 1;
        const std::size_t inner = row - 1;
        p.output_rows.push_back(row);
        bool ok = p.b[row] == Rational(1);
        for (std::size_t j = 0; j < m && ok; ++j) {
            const Rational want = (j == inner || j == row) ? Rational(1) : Rational(0);
            ok = p.A(row, j) == want;
        }
        for (std::size_t t = 0; t < k && ok; ++t)
            ok = p.U(row, t).is_zero();
        if (!ok)
            throw ValidationError("clamp row " + std::to_string(row) + " is not x_{n+2l-1} + x_{n+2l} >= 1");
        for (std::size_t i = 0; i < m; ++i)
            if (i != row && !p.A(i, row).is_zero())
                throw ValidationError("column " + std::to_string(row) + " of A is not a unit vector");
    }
    return p;
}

std::vector<LinExpr> row_expressions(const ParamLP& p) {
    std::vector<LinExpr> out;
    for (std::size_t i = 0; i < p.m; ++i) {
        LinExpr e;
        for (std::size_t j = 0; j < i; ++j)
            e.x_coeffs.push_back(-p.A(i, j));
        for (std::size_t l = 0; l < p.k; ++l)
            e.lambda_coeffs.push_back(p.U(i, l));
        e.constant = p.b[i];
        out.push_back(std::move(e));
    }
    return out;
}

Cost construct_cost(const Matrix& A) {
    if (!is_unit_lower_triangular(A))
        throw ValidationError("cost construction needs a unit lower-triangular matrix");
    const std::size_t m = A.rows();
    Cost out{Vector(m), Vector(m)};
    for (std::size_t i = m; i-- > 0;) {
        Rational weight;
        for (std::size_t j = i + 1; j < m; ++j)
            weight += A(j, i).abs() * out.beta[j];
        out.c[i] = weight + 1;
        out.beta[i] = out.c[i] + weight;
    }
    return out;
}

ParamLP build_lp(const FixpCircuit& c) {
    ParamLP p = build_constraints(c);
    auto cost = construct_cost(p.A);
    p.c = std::move(cost.c);
    p.beta = std::move(cost.beta);
    return p;
}

Vector solve_lp(const ParamLP& p, const Vector& lambda) {
    require_dims(p, lambda);
    Vector x(p.m);
    for (std::size_t i = 0; i < p.m; ++i) {
        Rational L = p.b[i];
        for (std::size_t l = 0; l < p.k; ++l)
            if (!p.U(i, l).is_zero())
                L += p.U(i, l) * lambda[l];
        for (std::size_t j = 0; j < i; ++j)
            if (!p.A(i, j).is_zero())
                L -= p.A(i, j) * x[j];
        x[i] = max(Rational(0), L);
    }
    return x;
}

Vector construct_dual(const ParamLP& p, const Vector& lambda, const Vector& x) {
    require_dims(p, lambda);
    if (x.size() != p.m || p.c.size() != p.m)
        throw ValidationError("dual construction needs x and c of dimension m");
    Vector y(p.m);
    for (std::size_t r = p.m; r-- > 0;) {
        if (x[r].sign() <= 0)
            continue;
        Rational v = p.c[r];
        for (std::size_t j = r + 1; j < p.m; ++j)
            if (!p.A(j, r).is_zero())
                v -= p.A(j, r) * y[j];
        y[r] = v;
    }
    return y;
}

std::vector<std::string> kkt_violations(const ParamLP& p, const Vector& lambda, const Vector& x, const Vector& y) {
    require_dims(p, lambda);
    if (x.size() != p.m || y.size() != p.m || p.c.size() != p.m)
        throw ValidationError("KKT check needs x, y and c of dimension m");
    std::vector<std::string> out;
    const Vector Ax = p.A * x;
    const Vector Ul = p.U * lambda;
    const Vector Aty = p.A.transpose() * y;
    for (std::size_t i = 0; i < p.m; ++i) {
        const std::string at = "[" + std::to_string(i) + "]";
        const Rational slack = Ax[i] - Ul[i] - p.b[i];
        const Rational reduced = p.c[i] - Aty[i];
        if (x[i].sign() < 0)
            out.push_back("x" + at + " = " + x[i].str() + " < 0");
        if (slack.sign() < 0)
            out.push_back("primal row" + at + " short by " + (-slack).str());
        if (y[i].sign() < 0)
            out.push_back("y" + at + " = " + y[i].str() + " < 0");
        if (reduced.sign() < 0)
            out.push_back("dual row" + at + " exceeds c by " + (-reduced).str());
        if (!(y[i] * slack).is_zero())
            out.push_back("y" + at + " * primal slack = " + (y[i] * slack).str());
        if (!(x[i] * reduced).is_zero())
            out.push_back("x" + at + " * dual slack = " + (x[i] * reduced).str());
    }
    return out;
}

bool check_kkt(const ParamLP& p, const Vector& lambda, const Vector& x, const Vector& y) {
    return kkt_violations(p, lambda, x, y).empty();
}

Vector eval_flp(const ParamLP& p, const Vector& lambda) {
    const Vector x = solve_lp(p, lambda);
    Vector out;
    for (auto r : p.output_rows)
        out.push_back(x[r]);
    return out;
}

std::size_t lp_bit_size(const ParamLP& p) {
    std::size_t total = 0;
    auto add_matrix = [&total](const Matrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                total += m(i, j).bit_size();
    };
    auto add_vector = [&total](const Vector& v) {
        for (const auto& x : v)
            total += x.bit_size();
    };
    add_matrix(p.A);
    add_matrix(p.U);
    add_vector(p.b);
    add_vector(p.c);
    add_vector(p.beta);
    return total;
}

std::size_t lp_size_budget(const FixpCircuit& c) {
    const std::size_t s = size(c);
    return 8 * s * s * s + 64;
}

} // namespace nashforge
