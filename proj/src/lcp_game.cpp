#include <nashforge/lcp_game.hpp>

#include <nashforge/error.hpp>

namespace nashforge {

namespace {

Matrix column_matrix(const Vector& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
        m(i, 0) = v[i];
    return m;
}

Matrix row_matrix(const Vector& v) {
    Matrix m(1, v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        m(0, j) = v[j];
    return m;
}

Matrix scalar(const Rational& v) { return Matrix{{v}}; }

void require_simplex_tail(const Vector& v, const char* name) {
    if (v.empty())
        throw ValidationError(std::string(name) + " is empty");
}

Vector normalize_with_one(const Vector& x) {
    const Rational total = sum(x) + 1;
    if (total.is_zero())
        throw ValidationError("cannot normalize: 1 + sum x = 0");
    Vector out;
    out.reserve(x.size() + 1);
    for (const auto& v : x)
        out.push_back(v / total);
    out.push_back(Rational(1) / total);
    return out;
}

Vector divide_head(const Vector& v, const char* what) {
    require_simplex_tail(v, what);
    const Rational& last = v.back();
    if (last.is_zero())
        throw LemmaViolation(std::string(what) + " = 0 in an equilibrium of a constructed game");
    Vector out(v.begin(), v.end() - 1);
    for (auto& x : out)
        x /= last;
    return out;
}

} // namespace

NormalizedSystem normalize(const ParamLP& p) {
    if (p.c.size() != p.m || p.A.rows() != p.m)
        throw ValidationError("LP is missing its cost vector");
    for (auto r : p.output_rows)
        if (p.c[r] != Rational(1))
            throw LemmaViolation("c at output row " + std::to_string(r) + " is " + p.c[r].str() + ", not 1");

    NormalizedSystem ns;
    ns.lp = p;
    ns.b = p.b;
    ns.H = Matrix(p.m, p.m);
    for (std::size_t i = 0; i < p.m; ++i)
        for (std::size_t j = 0; j < p.m; ++j)
            ns.H(i, j) = p.A(i, j) / p.c[j];
    ns.V = Matrix(p.m, p.k);
    for (std::size_t l = 0; l < p.k; ++l)
        ns.V(p.output_rows[l], l) = Rational(1) / p.c[p.output_rows[l]];
    ns.Hp = ns.H;
    for (std::size_t l = 0; l < p.k; ++l)
        ns.Hp = ns.Hp - outer(p.U.col(l), ns.V.col(l));

    // (H^T y)_{n+2l} = y_{n+2l}, and (H' x)_{n+2l} = x_{n+2l-1}/c_{n+2l-1} + x_{n+2l}.
    for (auto r : p.output_rows) {
        for (std::size_t i = 0; i < p.m; ++i)
            if (ns.H(i, r) != (i == r ? Rational(1) : Rational(0)))
                throw LemmaViolation("column " + std::to_string(r) + " of H is not a unit vector");
        for (std::size_t j = 0; j < p.m; ++j) {
            const Rational want = j == r ? Rational(1) : j + 1 == r ? Rational(1) / p.c[j] : Rational(0);
            if (ns.Hp(r, j) != want)
                throw LemmaViolation("row " + std::to_string(r) + " of H' lost its clamp structure");
        }
    }
    return ns;
}

Vector scale_solution(const ParamLP& p, const Vector& x) {
    if (x.size() != p.c.size())
        throw ValidationError("scaling needs a vector of dimension m");
    Vector out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
        out[j] = x[j] * p.c[j];
    return out;
}

Vector unscale_solution(const ParamLP& p, const Vector& xp) {
    if (xp.size() != p.c.size())
        throw ValidationError("scaling needs a vector of dimension m");
    Vector out(xp.size());
    for (std::size_t j = 0; j < xp.size(); ++j)
        out[j] = xp[j] / p.c[j];
    return out;
}

LcpInstance build_lcp_C(const NormalizedSystem& ns) {
    const std::size_t m = ns.H.rows();
    LcpInstance lcp;
    lcp.kind = LcpKind::lcp_c;
    lcp.M = block(Matrix(m, m), ns.H.transpose(), Rational(-1) * ns.Hp, Matrix(m, m));
    lcp.q = Vector(m, Rational(1));
    for (const auto& v : ns.b)
        lcp.q.push_back(-v);
    return lcp;
}

Matrix direct_matrix(const ParamLP& p) {
    Matrix Ap = p.A;
    for (std::size_t l = 0; l < p.k; ++l)
        for (std::size_t i = 0; i < p.m; ++i)
            Ap(i, p.output_rows[l]) -= p.U(i, l);
    return Ap;
}

LcpInstance build_direct_lcp(const ParamLP& p) {
    LcpInstance lcp;
    lcp.kind = LcpKind::direct;
    lcp.M = Rational(-1) * direct_matrix(p);
    for (const auto& v : p.b)
        lcp.q.push_back(-v);
    return lcp;
}

std::string LcpViolation::str() const {
    const std::string at = "[" + std::to_string(index) + "]";
    switch (kind) {
    case Kind::negative:
        return "z" + at + " = " + amount.str() + " is negative";
    case Kind::infeasible:
        return "(Mz)" + at + " exceeds q" + at + " by " + amount.str();
    case Kind::complementarity:
        return "z" + at + " * (q - Mz)" + at + " = " + amount.str();
    }
    return {};
}

std::vector<LcpViolation> check_lcp(const LcpInstance& lcp, const Vector& z) {
    if (!lcp.M.square() || lcp.M.rows() != lcp.q.size() || z.size() != lcp.q.size())
        throw ValidationError("LCP dimensions do not agree");
    std::vector<LcpViolation> out;
    const Vector Mz = lcp.M * z;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const Rational slack = lcp.q[i] - Mz[i];
        if (z[i].sign() < 0)
            out.push_back({LcpViolation::Kind::negative, i, z[i]});
        if (slack.sign() < 0)
            out.push_back({LcpViolation::Kind::infeasible, i, -slack});
        if (!(z[i] * slack).is_zero())
            out.push_back({LcpViolation::Kind::complementarity, i, z[i] * slack});
    }
    return out;
}

bool is_lcp_solution(const LcpInstance& lcp, const Vector& z) { return check_lcp(lcp, z).empty(); }

LcpViolation semimonotone_witness(const NormalizedSystem& ns, const Vector& z, const Vector& q) {
    LcpInstance lcp = build_lcp_C(ns);
    if (z.size() != lcp.q.size() || q.size() != lcp.q.size())
        throw ValidationError("semi-monotonicity check needs z and q of dimension 2m");
    bool nonzero = false;
    for (const auto& v : z) {
        if (v.sign() < 0)
            throw ValidationError("z must be nonnegative");
        nonzero = nonzero || !v.is_zero();
    }
    if (!nonzero)
        throw ValidationError("z must be nonzero");
    for (const auto& v : q)
        if (v.sign() <= 0)
            throw ValidationError("q must be strictly positive");
    lcp.q = q;
    const auto v = check_lcp(lcp, z);
    if (v.empty())
        throw LemmaViolation("nonzero z solves the LCP with positive q");
    return v.front();
}

BimatrixGame build_game(const NormalizedSystem& ns) {
    const std::size_t m = ns.H.rows();
    BimatrixGame g;
    g.A = block(ns.H.transpose(), Matrix(m, 1), Matrix(1, m), scalar(1));
    Vector b1 = ns.b;
    for (auto& v : b1)
        v += 1;
    g.B = block(Rational(-1) * ns.Hp.transpose(), Matrix(m, 1), row_matrix(b1), scalar(1));
    g.meta = GameMeta{m, ns.lp.k, ns.lp.c, ns.lp.output_rows, GameKind::rank_k_plus_1};
    if (!is_upper_triangular(g.A))
        throw LemmaViolation("first payoff matrix is not upper-triangular");
    if (rank(g.A + g.B) > ns.lp.k + 1)
        throw LemmaViolation("rank(A+B) exceeds k+1");
    return g;
}

SymmetricGame build_symmetric_game(const ParamLP& p) {
    Vector b1 = p.b;
    for (auto& v : b1)
        v += 1;
    SymmetricGame g;
    g.S = block(Rational(-1) * direct_matrix(p), column_matrix(b1), Matrix(1, p.m), scalar(1));
    g.meta = GameMeta{p.m, p.k, p.c, p.output_rows, GameKind::symmetric};
    return g;
}

std::pair<Vector, Vector> ne_to_lcp(const MixedProfile& profile) {
    return {divide_head(profile.x, "s"), divide_head(profile.y, "t")};
}

MixedProfile lcp_to_ne(const Vector& x, const Vector& y) { return {normalize_with_one(x), normalize_with_one(y)}; }

Vector symne_to_lcp(const Vector& z) { return divide_head(z, "t"); }

Vector lcp_to_symne(const Vector& x) { return normalize_with_one(x); }

Vector game_to_fixed_point(const Vector& first, const GameMeta& meta) {
    if (first.size() != meta.m + 1)
        throw ValidationError("strategy has dimension " + std::to_string(first.size()) + ", expected m+1 = " +
                              std::to_string(meta.m + 1));
    const Vector x = divide_head(first, "s");
    Vector lambda;
    for (auto r : meta.output_rows)
        lambda.push_back(meta.c.empty() ? x[r] : x[r] / meta.c[r]);
    return lambda;
}

SymmetricGame symmetrize(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw ValidationError("symmetrization needs payoff matrices of the same shape");
    SymmetricGame g;
    g.S = block(Matrix(A.rows(), A.rows()), A, B.transpose(), Matrix(A.cols(), A.cols()));
    g.meta.kind = GameKind::symmetric;
    return g;
}

Vector embed_ne(const Matrix& A, const Matrix& B, const MixedProfile& profile) {
    const Rational pi1 = dot(profile.x, A * profile.y);
    const Rational pi2 = dot(profile.x, B * profile.y);
    if (pi1.sign() < 0 || pi2.sign() < 0 || (pi1 + pi2).is_zero())
        throw ValidationError("embedding needs nonnegative payoffs with a positive sum");
    const Rational total = pi1 + pi2;
    Vector z;
    for (const auto& v : profile.x)
        z.push_back(pi1 * v / total);
    for (const auto& v : profile.y)
        z.push_back(pi2 * v / total);
    return z;
}

std::optional<MixedProfile> unembed_symmetric_ne(const Vector& z, std::size_t rows) {
    if (rows > z.size())
        throw ValidationError("row count exceeds strategy dimension");
    Vector x(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(rows));
    Vector y(z.begin() + static_cast<std::ptrdiff_t>(rows), z.end());
    const Rational sx = sum(x);
    const Rational sy = sum(y);
    if (sx.is_zero() || sy.is_zero())
        return std::nullopt;
    return MixedProfile{scale(Rational(1) / sx, x), scale(Rational(1) / sy, y)};
}

BimatrixGame imitation_game(const SymmetricGame& s) {
    if (!s.S.square())
        throw ValidationError("imitation game needs a square matrix");
    BimatrixGame g;
    g.A = s.S;
    g.B = Matrix::identity(s.S.rows());
    g.meta = s.meta;
    g.meta.kind = GameKind::imitation;
    return g;
}

} // namespace nashforge
