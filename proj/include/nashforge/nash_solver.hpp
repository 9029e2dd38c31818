#ifndef NASHFORGE_NASH_SOLVER_HPP
#define NASHFORGE_NASH_SOLVER_HPP

#include <nashforge/error.hpp>
#include <nashforge/fixp_circuit.hpp>
#include <nashforge/lcp_game.hpp>
#include <nashforge/matrix.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace nashforge {

struct NeCertificate {
    MixedProfile profile;
    Rational pi1;
    Rational pi2;
    /// Rows i with (Ay)_i = pi1 and columns j with (x^T B)_j = pi2.
    std::vector<std::size_t> tight_rows;
    std::vector<std::size_t> tight_cols;
};

/// Every failed condition of the best-response characterization, including
/// malformed strategies (negative entries, sums other than 1).
std::vector<std::string> ne_violations(const Matrix& A, const Matrix& B, const MixedProfile& profile);
bool check_ne(const Matrix& A, const Matrix& B, const MixedProfile& profile);
bool check_ne(const BimatrixGame& g, const MixedProfile& profile);

std::vector<std::string> symmetric_ne_violations(const Matrix& S, const Vector& x);
bool check_symmetric_ne(const Matrix& S, const Vector& x);

NeCertificate certify(const Matrix& A, const Matrix& B, const MixedProfile& profile);

constexpr std::size_t default_dimension_cap = 12;

class DimensionTooLarge : public CapacityError {
public:
    using CapacityError::CapacityError;
};

struct NeEnumeration {
    /// Extreme equilibria, sorted by (x, y) and duplicate-free.
    std::vector<NeCertificate> equilibria;
    /// Some vertex of a best-response polytope has more tight constraints
    /// than its dimension.
    bool degenerate = false;
};

/// All extreme equilibria: the completely labeled vertex pairs of the two
/// best-response polytopes. Complete for nondegenerate games; for
/// degenerate games every equilibrium is a convex combination within a
/// face spanned by the returned ones. Throws DimensionTooLarge past the cap.
NeEnumeration enumerate_ne(const Matrix& A, const Matrix& B, std::size_t cap = default_dimension_cap);
NeEnumeration enumerate_ne(const BimatrixGame& g, std::size_t cap = default_dimension_cap);

struct SymmetricEnumeration {
    std::vector<Vector> equilibria;
    bool degenerate = false;
};

/// Extreme symmetric equilibria of (S, S^T).
SymmetricEnumeration enumerate_symmetric_ne(const Matrix& S, std::size_t cap = default_dimension_cap);

class RayTermination : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Lemke-Howson from the artificial equilibrium, dropping label
/// dropped_label (0-based; rows first, then columns), with a lexicographic
/// ratio test.
NeCertificate lemke_howson(const Matrix& A, const Matrix& B, std::size_t dropped_label,
                           std::size_t cap = default_dimension_cap);
NeCertificate lemke_howson(const BimatrixGame& g, std::size_t dropped_label, std::size_t cap = default_dimension_cap);

/// evaluate(c, lambda) == lambda exactly. lambda must lie in [0,1]^k.
bool check_fixed_point(const FixpCircuit& c, const Vector& lambda);

} // namespace nashforge

#endif
