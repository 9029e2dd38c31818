#include <nashforge/nash_solver.hpp>

#include <nashforge/error.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>

namespace nashforge {

namespace {

using Mask = std::uint32_t;

std::string at(const char* name, std::size_t i) { return std::string(name) + "[" + std::to_string(i) + "]"; }

void strategy_violations(const Vector& v, const char* name, std::vector<std::string>& out) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i].sign() < 0)
            out.push_back(at(name, i) + " = " + v[i].str() + " is negative");
    const Rational total = sum(v);
    if (total != Rational(1))
        out.push_back(std::string(name) + " sums to " + total.str() + ", not 1");
}

Rational min_entry(const Matrix& m) {
    Rational lo = m(0, 0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            lo = min(lo, m(i, j));
    return lo;
}

/// Shifted copy with every entry >= 1; equilibria are unchanged.
Matrix positive(const Matrix& m) {
    const Rational lo = min_entry(m);
    if (lo >= Rational(1))
        return m;
    Matrix out = m;
    const Rational shift = Rational(1) - lo;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) += shift;
    return out;
}

struct Vertex {
    Vector point;
    /// Bit i: point_i = 0; bit dim + j: (C point)_j = 1.
    Mask labels;
};

/// Vertices of {z >= 0, C z <= 1} by basis enumeration over supports.
std::vector<Vertex> vertices(const Matrix& C, bool& degenerate) {
    const std::size_t dim = C.cols();
    const std::size_t cons = C.rows();
    std::set<Vector> seen;
    std::vector<Vertex> out;

    auto labels_of = [&](const Vector& z) {
        Mask mask = 0;
        for (std::size_t i = 0; i < dim; ++i)
            if (z[i].is_zero())
                mask |= Mask{1} << i;
        const Vector Cz = C * z;
        for (std::size_t j = 0; j < cons; ++j)
            if (Cz[j] == Rational(1))
                mask |= Mask{1} << (dim + j);
        return mask;
    };
    auto record = [&](Vector z) {
        if (!seen.insert(z).second)
            return;
        const Mask mask = labels_of(z);
        if (static_cast<std::size_t>(std::popcount(mask)) > dim)
            degenerate = true;
        out.push_back({std::move(z), mask});
    };

    record(Vector(dim));
    const std::size_t maxs = std::min(dim, cons);
    for (Mask I = 1; I < (Mask{1} << dim); ++I) {
        const std::size_t s = static_cast<std::size_t>(std::popcount(I));
        if (s > maxs)
            continue;
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < dim; ++i)
            if (I >> i & 1)
                support.push_back(i);
        for (Mask J = 1; J < (Mask{1} << cons); ++J) {
            if (static_cast<std::size_t>(std::popcount(J)) != s)
                continue;
            std::vector<std::size_t> tight;
            for (std::size_t j = 0; j < cons; ++j)
                if (J >> j & 1)
                    tight.push_back(j);
            Matrix sys(s, s);
            for (std::size_t a = 0; a < s; ++a)
                for (std::size_t b = 0; b < s; ++b)
                    sys(a, b) = C(tight[a], support[b]);
            auto sol = solve_square(sys, Vector(s, Rational(1)));
            if (!sol)
                continue;
            if (std::any_of(sol->begin(), sol->end(), [](const Rational& v) { return v.sign() < 0; }))
                continue;
            Vector z(dim);
            for (std::size_t b = 0; b < s; ++b)
                z[support[b]] = (*sol)[b];
            const Vector Cz = C * z;
            if (std::any_of(Cz.begin(), Cz.end(), [](const Rational& v) { return v > Rational(1); }))
                continue;
            record(std::move(z));
        }
    }
    return out;
}

Vector normalized(const Vector& v) {
    const Rational total = sum(v);
    return scale(Rational(1) / total, v);
}

void require_cap(std::size_t rows, std::size_t cols, std::size_t cap) {
    if (rows == 0 || cols == 0)
        throw ValidationError("game has no strategies");
    if (rows > cap || cols > cap)
        throw DimensionTooLarge("game of size " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " exceeds the cap of " + std::to_string(cap));
}

struct Tableau {
    Matrix T;
    std::vector<std::size_t> basis;
    /// Labels of the initial slack basis, in order, for the lexicographic rule.
    std::vector<std::size_t> lex_columns;
};

/// Pivots label `enter` into the basis; returns the label that leaves.
std::size_t pivot(Tableau& t, std::size_t enter) {
    const std::size_t rows = t.T.rows();
    const std::size_t rhs = t.T.cols() - 1;
    std::optional<std::size_t> best;
    auto key_less = [&](std::size_t a, std::size_t b) {
        const Rational& da = t.T(a, enter);
        const Rational& db = t.T(b, enter);
        if (auto c = t.T(a, rhs) / da <=> t.T(b, rhs) / db; c != 0)
            return c < 0;
        for (auto col : t.lex_columns)
            if (auto c = t.T(a, col) / da <=> t.T(b, col) / db; c != 0)
                return c < 0;
        return false;
    };
    for (std::size_t i = 0; i < rows; ++i) {
        if (t.T(i, enter).sign() <= 0)
            continue;
        if (!best || key_less(i, *best))
            best = i;
    }
    if (!best)
        throw RayTermination("no blocking row for label " + std::to_string(enter));
    const std::size_t p = *best;
    const Rational inv = Rational(1) / t.T(p, enter);
    for (std::size_t j = 0; j < t.T.cols(); ++j)
        t.T(p, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
        if (i == p || t.T(i, enter).is_zero())
            continue;
        const Rational f = t.T(i, enter);
        for (std::size_t j = 0; j < t.T.cols(); ++j)
            if (!t.T(p, j).is_zero())
                t.T(i, j) -= f * t.T(p, j);
    }
    const std::size_t leaving = t.basis[p];
    t.basis[p] = enter;
    return leaving;
}

} // namespace

std::vector<std::string> ne_violations(const Matrix& A, const Matrix& B, const MixedProfile& profile) {
    std::vector<std::string> out;
    if (A.rows() != B.rows() || A.cols() != B.cols())
        return {"payoff matrices differ in shape"};
    if (profile.x.size() != A.rows() || profile.y.size() != A.cols())
        return {"strategy dimensions do not match the game"};
    strategy_violations(profile.x, "x", out);
    strategy_violations(profile.y, "y", out);
    const Vector Ay = A * profile.y;
    const Vector xB = B.transpose() * profile.x;
    const Rational pi1 = dot(profile.x, Ay);
    const Rational pi2 = dot(profile.y, xB);
    for (std::size_t i = 0; i < Ay.size(); ++i) {
        if (Ay[i] > pi1)
            out.push_back("row " + std::to_string(i) + " pays " + Ay[i].str() + " > pi1 = " + pi1.str());
        if (!(profile.x[i] * (Ay[i] - pi1)).is_zero())
            out.push_back(at("x", i) + " > 0 on a row paying " + Ay[i].str() + " != pi1 = " + pi1.str());
    }
    for (std::size_t j = 0; j < xB.size(); ++j) {
        if (xB[j] > pi2)
            out.push_back("column " + std::to_string(j) + " pays " + xB[j].str() + " > pi2 = " + pi2.str());
        if (!(profile.y[j] * (xB[j] - pi2)).is_zero())
            out.push_back(at("y", j) + " > 0 on a column paying " + xB[j].str() + " != pi2 = " + pi2.str());
    }
    return out;
}

bool check_ne(const Matrix& A, const Matrix& B, const MixedProfile& profile) {
    return ne_violations(A, B, profile).empty();
}

bool check_ne(const BimatrixGame& g, const MixedProfile& profile) { return check_ne(g.A, g.B, profile); }

std::vector<std::string> symmetric_ne_violations(const Matrix& S, const Vector& x) {
    std::vector<std::string> out;
    if (!S.square() || x.size() != S.rows())
        return {"strategy dimension does not match the game"};
    strategy_violations(x, "x", out);
    const Vector Sx = S * x;
    const Rational pi = dot(x, Sx);
    for (std::size_t i = 0; i < Sx.size(); ++i) {
        if (Sx[i] > pi)
            out.push_back("strategy " + std::to_string(i) + " pays " + Sx[i].str() + " > pi = " + pi.str());
        if (!(x[i] * (Sx[i] - pi)).is_zero())
            out.push_back(at("x", i) + " > 0 on a strategy paying " + Sx[i].str() + " != pi = " + pi.str());
    }
    return out;
}

bool check_symmetric_ne(const Matrix& S, const Vector& x) { return symmetric_ne_violations(S, x).empty(); }

NeCertificate certify(const Matrix& A, const Matrix& B, const MixedProfile& profile) {
    NeCertificate c;
    c.profile = profile;
    const Vector Ay = A * profile.y;
    const Vector xB = B.transpose() * profile.x;
    c.pi1 = dot(profile.x, Ay);
    c.pi2 = dot(profile.y, xB);
    for (std::size_t i = 0; i < Ay.size(); ++i)
        if (Ay[i] == c.pi1)
            c.tight_rows.push_back(i);
    for (std::size_t j = 0; j < xB.size(); ++j)
        if (xB[j] == c.pi2)
            c.tight_cols.push_back(j);
    return c;
}

NeEnumeration enumerate_ne(const Matrix& A, const Matrix& B, std::size_t cap) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw ValidationError("payoff matrices differ in shape");
    require_cap(A.rows(), A.cols(), cap);
    const std::size_t rows = A.rows();
    const std::size_t cols = A.cols();

    NeEnumeration out;
    // P = {x >= 0, B^T x <= 1} with labels rows (x_i = 0) then columns;
    // Q = {y >= 0, A y <= 1} with labels columns (y_j = 0) then rows.
    const auto P = vertices(positive(B).transpose(), out.degenerate);
    const auto Q = vertices(positive(A), out.degenerate);
    const Mask all_rows = (Mask{1} << rows) - 1;
    const Mask all = (Mask{1} << (rows + cols)) - 1;

    std::map<std::pair<Vector, Vector>, NeCertificate> found;
    for (const auto& u : P) {
        if ((u.labels & all_rows) == all_rows)
            continue;
        for (const auto& v : Q) {
            // Q's own layout: bits 0..cols-1 for y_j = 0, then rows.
            const Mask vq = ((v.labels & ((Mask{1} << cols) - 1)) << rows) | (v.labels >> cols);
            if ((u.labels | vq) != all)
                continue;
            MixedProfile p{normalized(u.point), normalized(v.point)};
            if (!check_ne(A, B, p))
                throw LemmaViolation("completely labeled vertex pair fails the equilibrium check");
            auto key = std::make_pair(p.x, p.y);
            found.emplace(std::move(key), certify(A, B, p));
        }
    }
    for (auto& [key, cert] : found)
        out.equilibria.push_back(std::move(cert));
    return out;
}

NeEnumeration enumerate_ne(const BimatrixGame& g, std::size_t cap) { return enumerate_ne(g.A, g.B, cap); }

SymmetricEnumeration enumerate_symmetric_ne(const Matrix& S, std::size_t cap) {
    if (!S.square())
        throw ValidationError("symmetric game needs a square matrix");
    require_cap(S.rows(), S.cols(), cap);
    const std::size_t n = S.rows();
    SymmetricEnumeration out;
    const auto P = vertices(positive(S), out.degenerate);
    std::set<Vector> found;
    for (const auto& v : P) {
        if ((v.labels & ((Mask{1} << n) - 1)) == (Mask{1} << n) - 1)
            continue;
        const Mask covered = (v.labels | (v.labels >> n)) & ((Mask{1} << n) - 1);
        if (covered != (Mask{1} << n) - 1)
            continue;
        Vector x = normalized(v.point);
        if (!check_symmetric_ne(S, x))
            throw LemmaViolation("completely labeled vertex fails the symmetric equilibrium check");
        found.insert(std::move(x));
    }
    out.equilibria.assign(found.begin(), found.end());
    return out;
}

NeCertificate lemke_howson(const Matrix& A, const Matrix& B, std::size_t dropped_label, std::size_t cap) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw ValidationError("payoff matrices differ in shape");
    require_cap(A.rows(), A.cols(), cap);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    if (dropped_label >= m + n)
        throw ValidationError("label " + std::to_string(dropped_label) + " out of range");
    const Matrix Ap = positive(A);
    const Matrix Bp = positive(B);

    // Columns are labels 0..m+n-1 followed by the right-hand side.
    // ta: r + A y = 1 (r_i has label i, y_j label m+j).
    // tb: B^T x + s = 1 (x_i has label i, s_j label m+j).
    Tableau ta{Matrix(m, m + n + 1), {}, {}};
    for (std::size_t i = 0; i < m; ++i) {
        ta.T(i, i) = 1;
        for (std::size_t j = 0; j < n; ++j)
            ta.T(i, m + j) = Ap(i, j);
        ta.T(i, m + n) = 1;
        ta.basis.push_back(i);
        ta.lex_columns.push_back(i);
    }
    Tableau tb{Matrix(n, m + n + 1), {}, {}};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i)
            tb.T(j, i) = Bp(i, j);
        tb.T(j, m + j) = 1;
        tb.T(j, m + n) = 1;
        tb.basis.push_back(m + j);
        tb.lex_columns.push_back(m + j);
    }

    std::size_t enter = dropped_label;
    bool in_b = dropped_label < m;
    const std::size_t limit = 100000;
    for (std::size_t step = 0;; ++step) {
        if (step == limit)
            throw std::runtime_error("Lemke-Howson exceeded its pivot limit");
        const std::size_t leaving = pivot(in_b ? tb : ta, enter);
        if (leaving == dropped_label)
            break;
        enter = leaving;
        in_b = !in_b;
    }

    Vector x(m), y(n);
    for (std::size_t r = 0; r < n; ++r)
        if (tb.basis[r] < m)
            x[tb.basis[r]] = tb.T(r, m + n);
    for (std::size_t r = 0; r < m; ++r)
        if (ta.basis[r] >= m)
            y[ta.basis[r] - m] = ta.T(r, m + n);
    MixedProfile p{normalized(x), normalized(y)};
    if (!check_ne(A, B, p))
        throw LemmaViolation("Lemke-Howson endpoint fails the equilibrium check");
    return certify(A, B, p);
}

NeCertificate lemke_howson(const BimatrixGame& g, std::size_t dropped_label, std::size_t cap) {
    return lemke_howson(g.A, g.B, dropped_label, cap);
}

bool check_fixed_point(const FixpCircuit& c, const Vector& lambda) {
    if (lambda.size() != c.k())
        throw ValidationError("fixed-point check needs a point of dimension k");
    for (const auto& v : lambda)
        if (v.sign() < 0 || v > Rational(1))
            throw ValidationError("fixed-point check needs lambda in [0,1]^k");
    return c.evaluate(lambda) == lambda;
}

} // namespace nashforge
