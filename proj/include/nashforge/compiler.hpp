#ifndef NASHFORGE_COMPILER_HPP
#define NASHFORGE_COMPILER_HPP

#include <nashforge/brouwer.hpp>
#include <nashforge/fixp_circuit.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nashforge {

struct SamplingParams {
    std::int64_t L = 0;
    std::size_t sample_count = 0;

    /// L: smallest power of two exceeding max(16, k^4 + 1);
    /// sample_count: max(16, k^4).
    static SamplingParams default_params(std::size_t k);
    static std::size_t required_samples(std::size_t k);
};

/// Throws ValidationError unless L is a power of two with L > 16,
/// L > k^4, L > sample_count, sample_count = max(16, k^4) and
/// L <= 64 * size[cb]^2.
void validate_params(const SamplingParams& params, std::size_t k, const BoolCircuit& cb);

/// A compiled Linear-FIXP function F over [0, 2^n - 1]^k, or the shrunk
/// F' over [0, 1]^k.
struct CompiledFunction {
    FixpCircuit circuit;
    BoolCircuit source;
    Grid grid;
    SamplingParams params;
    bool shrunk = false;
    /// 2^n - 1 once shrunk, else 1.
    Rational scale = 1;
    /// sample_r[j][i]: gate computing r^j_i (after S4).
    std::vector<std::vector<GateRef>> sample_r;
};

/// Appends ExtractBits(a) and returns (b_{n-1}, ..., b_0).
std::vector<GateRef> extract_bits(CircuitBuilder& b, GateRef a, std::size_t n, std::int64_t L);
/// Exact value of the ExtractBits fragment at a, most-significant first.
std::vector<Rational> extract_bits_eval(const Rational& a, std::size_t n, std::int64_t L);

/// Appends the real-valued simulation of cb (and -> min, or -> max,
/// not -> 1 - x) fed by the given k*n bit gates; returns its 2k outputs.
std::vector<GateRef> simulate_bool(CircuitBuilder& b, const BoolCircuit& cb, const std::vector<GateRef>& bits);
/// Evaluates the simulation at real-valued bits.
std::vector<Rational> simulate_bool_eval(const BoolCircuit& cb, const std::vector<Rational>& bits);

/// Builds F from a valid circuit: sampling, bit extraction, simulation,
/// clamped increments, averaging and boundary clamping. Throws
/// ValidationError for an invalid source circuit or bad parameters.
CompiledFunction compile(const BoolCircuit& cb, const Grid& g, const SamplingParams& params);
CompiledFunction compile(const BoolCircuit& cb, const Grid& g);

/// F'(x) = F(scale * x) / scale. Throws ValidationError if already shrunk.
CompiledFunction shrink_range(const CompiledFunction& cf);

enum class Position { well, poor };
using PositionClass = std::vector<Position>;

/// a >= 0 is poor iff its fractional part lies strictly between 1 - 1/L^2
/// and 1.
bool is_poorly_positioned(const Rational& a, std::int64_t L);
PositionClass classify_position(const Vector& p, std::int64_t L);
bool is_well_positioned(const Vector& p, std::int64_t L);

/// p^j = p + (j/L) * (1, ..., 1) for j = 0 .. sample_count - 1.
std::vector<Vector> sample_points(const Vector& p, const SamplingParams& params);

/// Componentwise largest grid integer not exceeding p_i.
GridPoint grid_floor(const Vector& p, const Grid& g);

/// zeta(p): the incremental vector of the color at grid_floor(p).
Vector zeta(const Vector& p, const Coloring& color, const Grid& g);

/// r^j per sample: zeta(p^j) when p^j is well positioned, poor(j) otherwise.
std::vector<Vector> sample_increments(const Vector& p, const Coloring& color, const Grid& g,
                                      const SamplingParams& params,
                                      const std::function<Vector(std::size_t)>& poor);
/// The r^j the compiled circuit computes at a point of its domain.
std::vector<Vector> circuit_increments(const CompiledFunction& cf, const Vector& p);

Vector increment_sum(const std::vector<Vector>& r);
/// ||sum r^j||_inf = 0.
bool sampling_sum_zero(const std::vector<Vector>& r);
/// ||sum r^j||_inf < 1.
bool sampling_sum_below_one(const std::vector<Vector>& r);

class NotPanchromatic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Extraction {
    /// Q_w, sorted and duplicate-free.
    std::vector<GridPoint> simplex;
    std::vector<std::size_t> well;
    std::vector<std::size_t> poor;
};

/// Q_w = {grid_floor(p^j) | p^j well positioned}, checked panchromatic
/// against color. Throws LemmaViolation if more than k samples are poor and
/// NotPanchromatic when Q_w is not a panchromatic simplex.
Extraction extract_panchromatic_simplex(const Vector& p, const Coloring& color, const Grid& g,
                                        const SamplingParams& params);
/// Same against the compiled function's source circuit. p is in cf's own
/// coordinates and must be a (1/L)-approximate fixed point of the unshrunk
/// F (ValidationError otherwise).
Extraction extract_panchromatic_simplex(const Vector& p, const CompiledFunction& cf);

/// ||p - F(p)||_inf <= eps, exactly. Throws ValidationError if p is outside
/// the domain.
bool check_approx_fixed_point(const CompiledFunction& cf, const Vector& p, const Rational& eps);
/// The tolerance matching 1/L in unshrunk coordinates.
Rational approx_tolerance(const CompiledFunction& cf);

/// Best-effort search for a (1/L)-approximate fixed point near the
/// panchromatic cubes of the source. Tries at most max_evaluations points.
std::optional<Vector> find_approx_fixed_point(const CompiledFunction& cf, std::size_t max_evaluations = 200);

/// Explicit size budget for the compiled circuit in terms of size[cb].
std::size_t compiled_size_budget(const BoolCircuit& cb, const Grid& g, const SamplingParams& params);

} // namespace nashforge

#endif
