#ifndef NASHFORGE_BROUWER_HPP
#define NASHFORGE_BROUWER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nashforge {

using GridPoint = std::vector<std::int64_t>;

/// The grid {0, ..., 2^n - 1}^k.
struct Grid {
    std::size_t k;
    std::size_t n;

    Grid(std::size_t k, std::size_t n);

    std::int64_t side() const { return std::int64_t{1} << n; }
    std::int64_t top() const { return side() - 1; }
    std::size_t input_bits() const { return k * n; }
    std::uint64_t point_count() const { return std::uint64_t{1} << (k * n); }
    bool contains(const GridPoint& p) const;
    bool on_boundary(const GridPoint& p) const;
    /// Enumerates points in lexicographic order (coordinate 0 slowest).
    GridPoint point(std::uint64_t index) const;
};

namespace bgate {
struct Input {
    std::size_t bit;
};
struct Const {
    bool value;
};
struct And {
    std::size_t lhs, rhs;
};
struct Or {
    std::size_t lhs, rhs;
};
struct Not {
    std::size_t arg;
};
} // namespace bgate

using BoolGate = std::variant<bgate::Input, bgate::Const, bgate::And, bgate::Or, bgate::Not>;

/// Boolean mapping circuit: k*n input bits (coordinate 0 first, each
/// most-significant bit first) and 2k outputs ordered
/// (D+_1, D-_1, ..., D+_k, D-_k).
class BoolCircuit {
public:
    BoolCircuit(std::size_t k, std::size_t n, std::vector<BoolGate> gates, std::vector<std::size_t> outputs);

    std::size_t k() const { return k_; }
    std::size_t n() const { return n_; }
    std::size_t input_bits() const { return k_ * n_; }
    const std::vector<BoolGate>& gates() const { return gates_; }
    const std::vector<std::size_t>& outputs() const { return outputs_; }

    /// #inputs + #outputs + #gates.
    std::size_t size() const { return input_bits() + outputs_.size() + gates_.size(); }

private:
    std::size_t k_;
    std::size_t n_;
    std::vector<BoolGate> gates_;
    std::vector<std::size_t> outputs_;
};

class BoolCircuitBuilder {
public:
    BoolCircuitBuilder(std::size_t k, std::size_t n) : k_(k), n_(n) {}
    std::size_t input(std::size_t bit);
    std::size_t constant(bool v);
    std::size_t land(std::size_t a, std::size_t b);
    std::size_t lor(std::size_t a, std::size_t b);
    std::size_t lnot(std::size_t a);
    /// OR/AND over a list; the empty OR is false and the empty AND is true.
    std::size_t any(const std::vector<std::size_t>& xs);
    std::size_t all(const std::vector<std::size_t>& xs);
    BoolCircuit build(std::vector<std::size_t> outputs) &&;

private:
    std::size_t push(BoolGate g);
    std::size_t k_;
    std::size_t n_;
    std::vector<BoolGate> gates_;
};

/// Input bits of a grid point, most-significant first per coordinate.
std::vector<bool> encode_point(const GridPoint& p, std::size_t n);

/// Evaluates the 2k output bits at p. Throws ValidationError off-grid.
std::vector<bool> eval_bool(const BoolCircuit& cb, const GridPoint& p);

using Color = std::size_t;

/// Thrown when output bits match none of the legal cases.
class IllegalPattern : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Case 0: every D- set and every D+ clear. Case i: only D+_i set.
Color decode_case(const std::vector<bool>& bits);
/// The output bits of case c for dimension k.
std::vector<bool> encode_case(Color c, std::size_t k);

/// Boundary color: max{i | p_i = 0} (1-based) if some coordinate is 0,
/// otherwise 0.
Color boundary_color(const GridPoint& p);

Color color(const BoolCircuit& cb, const GridPoint& p);
/// e^0 = (-1,...,-1), e^i = unit vector i (1-based color).
std::vector<int> increment(Color c, std::size_t k);
/// H(p) = p + e^{g(p)}; throws ValidationError if the result leaves the grid.
GridPoint discrete_map(const BoolCircuit& cb, const GridPoint& p);

struct Violation {
    GridPoint point;
    std::string reason;
};

struct ValidityReport {
    bool valid = true;
    std::vector<Violation> violations;
};

constexpr std::size_t default_exhaustive_bits = 24;

/// Exhaustive validity check of a Brouwer-mapping circuit. Throws
/// CapacityError when k*n exceeds max_bits.
ValidityReport validate_circuit(const BoolCircuit& cb, const Grid& g,
                                std::size_t max_bits = default_exhaustive_bits);

using Coloring = std::function<Color(const GridPoint&)>;

struct Fixtures {
    /// Lowest corners p of unit cubes K_p carrying all k+1 colors.
    std::vector<GridPoint> panchromatic_cubes;
    /// Every accommodated (k+1)-point set with k+1 distinct colors, each
    /// sorted lexicographically; the list is sorted and duplicate-free.
    std::vector<std::vector<GridPoint>> panchromatic_simplices;
};

Fixtures brute_force_fixtures(const Coloring& g, const Grid& grid, std::size_t max_bits = default_exhaustive_bits);
/// Validates cb first (throws ValidationError when invalid).
Fixtures brute_force_fixtures(const BoolCircuit& cb, const Grid& grid,
                              std::size_t max_bits = default_exhaustive_bits);

bool is_panchromatic_simplex(const std::vector<GridPoint>& points, const Coloring& g, const Grid& grid);

struct ExampleInstance {
    Grid grid;
    BoolCircuit circuit;
    GridPoint known_cube;
};

/// Deterministic valid coloring circuit for (k, n): boundary colors per the
/// validity rule; an interior point gets max{i | p_i < 2^(n-1)}, or 0.
ExampleInstance make_example_coloring(const Grid& g);

} // namespace nashforge

#endif
