#ifndef NASHFORGE_FIXP_CIRCUIT_HPP
#define NASHFORGE_FIXP_CIRCUIT_HPP

#include <nashforge/matrix.hpp>
#include <nashforge/rational.hpp>

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace nashforge {

/// Index of a gate in a circuit's gate list.
using GateRef = std::size_t;

namespace gate {
struct Input {
    std::size_t index;
};
struct Const {
    Rational value;
};
struct Add {
    GateRef lhs, rhs;
};
struct MulC {
    Rational coeff;
    GateRef arg;
};
struct Max {
    GateRef lhs, rhs;
};
} // namespace gate

using Gate = std::variant<gate::Input, gate::Const, gate::Add, gate::MulC, gate::Max>;

/// Inner and outer Max gates of one output clamp max{0, -1*max{-1, -1*tau}}.
struct ClampPair {
    GateRef inner;
    GateRef outer;
    friend bool operator==(const ClampPair&, const ClampPair&) = default;
};

/// Appends gates with the DAG check applied at every step. Also used to
/// assemble multi-output fragments (ExtractBits, Boolean simulation).
class CircuitBuilder {
public:
    explicit CircuitBuilder(std::size_t num_inputs = 0) : num_inputs_(num_inputs) {}

    std::size_t num_inputs() const { return num_inputs_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }

    GateRef push(Gate g);
    GateRef input(std::size_t i) { return push(gate::Input{i}); }
    GateRef constant(Rational v) { return push(gate::Const{std::move(v)}); }
    GateRef add(GateRef a, GateRef b) { return push(gate::Add{a, b}); }
    GateRef mulc(Rational c, GateRef a) { return push(gate::MulC{std::move(c), a}); }
    GateRef max(GateRef a, GateRef b) { return push(gate::Max{a, b}); }

    /// a - b as a + (-1)*b.
    GateRef sub(GateRef a, GateRef b);
    /// min{a,b} as -max{-a,-b}.
    GateRef min(GateRef a, GateRef b);
    /// Shared constant gate per value.
    GateRef cached_constant(const Rational& v);

private:
    std::size_t num_inputs_;
    std::vector<Gate> gates_;
    std::vector<std::pair<Rational, GateRef>> constants_;
};

/// Evaluates a raw gate list; returns every gate's value.
std::vector<Rational> evaluate_gates(std::span<const Gate> gates, std::span<const Rational> inputs);

struct CircuitMeta {
    bool max_zero_normalized = false;
    bool outputs_clamped = false;
    /// One entry per output when outputs_clamped.
    std::vector<ClampPair> clamps;
};

/// Evaluation result: the value of every gate, plus the outputs.
struct Trace {
    std::vector<Rational> values;
    Vector outputs;
};

/// A Linear-FIXP circuit over {input, const, +, *c, max} with k inputs and
/// k outputs.
class FixpCircuit {
public:
    FixpCircuit(std::size_t k, std::vector<Gate> gates, std::vector<GateRef> outputs, CircuitMeta meta = {});

    std::size_t k() const { return k_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<GateRef>& outputs() const { return outputs_; }
    const CircuitMeta& meta() const { return meta_; }

    Trace trace(std::span<const Rational> lambda) const;
    Vector evaluate(std::span<const Rational> lambda) const { return trace(lambda).outputs; }

    /// Indices of all Max gates in gate order.
    std::vector<GateRef> max_gates() const;

    friend bool operator==(const FixpCircuit&, const FixpCircuit&);

private:
    std::size_t k_;
    std::vector<Gate> gates_;
    std::vector<GateRef> outputs_;
    CircuitMeta meta_;
};

/// Appends per output the clamp max{0, -1*max{-1, -1*tau}} and redirects
/// outputs to the outer gates. Throws ValidationError if already clamped.
FixpCircuit clamp_outputs(const FixpCircuit& c);

/// Rewrites every max{a,b} without a zero operand as max{0, b-a} + a.
/// Semantics are preserved exactly; clamp pairs are carried over.
FixpCircuit normalize_max_zero(const FixpCircuit& c);

/// Max gates in a topological order (ties by gate index) with the 2k clamp
/// gates last, inner before outer for each output.
std::vector<GateRef> order_max_gates(const FixpCircuit& c);

/// k + #gates + total bit size of all constants (Const values and MulC
/// coefficients).
std::size_t size(const FixpCircuit& c);

bool is_max_zero_gate(const std::vector<Gate>& gates, const gate::Max& m);

} // namespace nashforge

#endif
