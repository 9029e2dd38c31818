#ifndef NASHFORGE_LCP_GAME_HPP
#define NASHFORGE_LCP_GAME_HPP

#include <nashforge/lp_reduction.hpp>
#include <nashforge/matrix.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nashforge {

struct NormalizedSystem {
    Matrix H;
    Matrix Hp;
    /// m x k; column l is v^l.
    Matrix V;
    Vector b;
    ParamLP lp;
};

/// H_ij = A_ij / c_j, v^l = e_{n+2l} / c_{n+2l}, H' = H - sum u^l v^lT.
/// Throws LemmaViolation if some c_{n+2l} != 1 or the clamp rows/columns of
/// H and H' lose their unit structure.
NormalizedSystem normalize(const ParamLP& p);

/// x'_j = x_j c_j, and back.
Vector scale_solution(const ParamLP& p, const Vector& x);
Vector unscale_solution(const ParamLP& p, const Vector& xp);

enum class LcpKind { lcp_c, direct, generic };

/// Find z >= 0 with M z <= q and z_i (q - M z)_i = 0 for all i.
struct LcpInstance {
    Matrix M;
    Vector q;
    LcpKind kind = LcpKind::generic;
};

/// z = (x, y): M = [[0, H^T], [-H', 0]], q = (1, -b).
LcpInstance build_lcp_C(const NormalizedSystem& ns);
/// z = x: M = -A', q = -b with A' = A - sum u^l e_{n+2l}^T.
LcpInstance build_direct_lcp(const ParamLP& p);
Matrix direct_matrix(const ParamLP& p);

struct LcpViolation {
    enum class Kind { negative, infeasible, complementarity };
    Kind kind;
    std::size_t index;
    Rational amount;
    std::string str() const;
};

std::vector<LcpViolation> check_lcp(const LcpInstance& lcp, const Vector& z);
bool is_lcp_solution(const LcpInstance& lcp, const Vector& z);

/// First violated condition of {M z <= q, z >= 0, z^T (M z - q) = 0} for the
/// LCP_C matrix with the given q > 0. Throws ValidationError when z is not
/// nonnegative and nonzero or q is not positive, and LemmaViolation if z
/// satisfies every condition.
LcpViolation semimonotone_witness(const NormalizedSystem& ns, const Vector& z, const Vector& q);

enum class GameKind { rank_k_plus_1, symmetric, imitation, generic };

struct GameMeta {
    std::size_t m = 0;
    std::size_t k = 0;
    Vector c;
    std::vector<std::size_t> output_rows;
    GameKind kind = GameKind::generic;
};

struct BimatrixGame {
    Matrix A;
    Matrix B;
    GameMeta meta;
};

struct SymmetricGame {
    Matrix S;
    GameMeta meta;
};

/// A = [[H^T, 0], [0, 1]], B = [[-H'^T, 0], [b^T + 1^T, 1]].
BimatrixGame build_game(const NormalizedSystem& ns);
/// S = [[-A', b + 1], [0, 1]].
SymmetricGame build_symmetric_game(const ParamLP& p);

/// Mixed strategies of both players; the last entries are s and t.
struct MixedProfile {
    Vector x;
    Vector y;
};

/// (x~/s, y~/t). Throws LemmaViolation when s or t is zero.
std::pair<Vector, Vector> ne_to_lcp(const MixedProfile& profile);
/// ((x,1)/(1+sum x), (y,1)/(1+sum y)).
MixedProfile lcp_to_ne(const Vector& x, const Vector& y);
/// x/t for z = (x, t). Throws LemmaViolation when t is zero.
Vector symne_to_lcp(const Vector& z);
Vector lcp_to_symne(const Vector& x);

/// lambda_l = (x~/s)_{n+2l} from a first-player strategy (or a symmetric
/// strategy z = (x, t)).
Vector game_to_fixed_point(const Vector& first, const GameMeta& meta);

/// [[0, A], [B^T, 0]].
SymmetricGame symmetrize(const Matrix& A, const Matrix& B);
/// Symmetric strategy of symmetrize(A, B) for an equilibrium of (A, B):
/// (pi1 x, pi2 y) / (pi1 + pi2). Needs pi1 + pi2 > 0 and both
/// payoffs nonnegative; throws ValidationError otherwise.
Vector embed_ne(const Matrix& A, const Matrix& B, const MixedProfile& profile);
/// Splits z into (x, y) and normalizes each block; nullopt when a block is
/// zero.
std::optional<MixedProfile> unembed_symmetric_ne(const Vector& z, std::size_t rows);

/// (S, I).
BimatrixGame imitation_game(const SymmetricGame& s);

} // namespace nashforge

#endif
