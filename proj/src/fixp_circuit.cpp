#include <nashforge/fixp_circuit.hpp>

#include <nashforge/error.hpp>

#include <algorithm>
#include <optional>
#include <string>

namespace nashforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_refs(const Gate& g, std::size_t position, std::size_t num_inputs) {
    auto ref = [position](GateRef r) {
        if (r >= position)
            throw ValidationError("gate " + std::to_string(position) + " references gate " + std::to_string(r) +
                                  " which is not strictly earlier");
    };
    std::visit(overloaded{
                   [&](const gate::Input& in) {
                       if (in.index >= num_inputs)
                           throw ValidationError("gate " + std::to_string(position) + " reads input " +
                                                 std::to_string(in.index) + " of " + std::to_string(num_inputs));
                   },
                   [](const gate::Const&) {},
                   [&](const gate::Add& a) {
                       ref(a.lhs);
                       ref(a.rhs);
                   },
                   [&](const gate::MulC& m) { ref(m.arg); },
                   [&](const gate::Max& m) {
                       ref(m.lhs);
                       ref(m.rhs);
                   },
               },
               g);
}

bool is_zero_const(const std::vector<Gate>& gates, GateRef r) {
    const auto* c = std::get_if<gate::Const>(&gates[r]);
    return c && c->value.is_zero();
}

} // namespace

GateRef CircuitBuilder::push(Gate g) {
    check_refs(g, gates_.size(), num_inputs_);
    gates_.push_back(std::move(g));
    return gates_.size() - 1;
}

GateRef CircuitBuilder::sub(GateRef a, GateRef b) { return add(a, mulc(Rational(-1), b)); }

GateRef CircuitBuilder::min(GateRef a, GateRef b) {
    GateRef na = mulc(Rational(-1), a);
    GateRef nb = mulc(Rational(-1), b);
    return mulc(Rational(-1), max(na, nb));
}

GateRef CircuitBuilder::cached_constant(const Rational& v) {
    for (const auto& [value, ref] : constants_)
        if (value == v)
            return ref;
    GateRef r = constant(v);
    constants_.emplace_back(v, r);
    return r;
}

std::vector<Rational> evaluate_gates(std::span<const Gate> gates, std::span<const Rational> inputs) {
    std::vector<Rational> v;
    v.reserve(gates.size());
    for (const auto& g : gates) {
        v.push_back(std::visit(overloaded{
                                   [&](const gate::Input& in) { return inputs[in.index]; },
                                   [](const gate::Const& c) { return c.value; },
                                   [&](const gate::Add& a) { return v[a.lhs] + v[a.rhs]; },
                                   [&](const gate::MulC& m) { return m.coeff * v[m.arg]; },
                                   [&](const gate::Max& m) { return max(v[m.lhs], v[m.rhs]); },
                               },
                               g));
    }
    return v;
}

FixpCircuit::FixpCircuit(std::size_t k, std::vector<Gate> gates, std::vector<GateRef> outputs, CircuitMeta meta)
    : k_(k), gates_(std::move(gates)), outputs_(std::move(outputs)), meta_(std::move(meta)) {
    if (k_ == 0)
        throw ValidationError("circuit arity must be at least 1");
    for (std::size_t i = 0; i < gates_.size(); ++i)
        check_refs(gates_[i], i, k_);
    if (outputs_.size() != k_)
        throw ValidationError("circuit with " + std::to_string(k_) + " inputs declares " +
                              std::to_string(outputs_.size()) + " outputs");
    for (GateRef o : outputs_)
        if (o >= gates_.size())
            throw ValidationError("output reference " + std::to_string(o) + " out of range");
    if (meta_.outputs_clamped) {
        if (meta_.clamps.size() != k_)
            throw ValidationError("clamped circuit needs one clamp pair per output");
        for (std::size_t l = 0; l < k_; ++l) {
            const auto& cp = meta_.clamps[l];
            if (cp.inner >= gates_.size() || cp.outer >= gates_.size() || cp.inner >= cp.outer ||
                !std::holds_alternative<gate::Max>(gates_[cp.inner]) ||
                !std::holds_alternative<gate::Max>(gates_[cp.outer]))
                throw ValidationError("clamp pair " + std::to_string(l) + " is not an inner/outer max pair");
            if (outputs_[l] != cp.outer)
                throw ValidationError("output " + std::to_string(l) + " is not the outer clamp gate");
        }
    } else if (!meta_.clamps.empty()) {
        throw ValidationError("clamp pairs given for an unclamped circuit");
    }
    if (meta_.max_zero_normalized) {
        for (std::size_t i = 0; i < gates_.size(); ++i)
            if (const auto* m = std::get_if<gate::Max>(&gates_[i]); m && !is_max_zero_gate(gates_, *m))
                throw ValidationError("max gate " + std::to_string(i) + " has no zero operand");
    }
}

Trace FixpCircuit::trace(std::span<const Rational> lambda) const {
    if (lambda.size() != k_)
        throw ValidationError("circuit expects " + std::to_string(k_) + " inputs, got " +
                              std::to_string(lambda.size()));
    Trace t;
    t.values = evaluate_gates(gates_, lambda);
    t.outputs.reserve(k_);
    for (GateRef o : outputs_)
        t.outputs.push_back(t.values[o]);
    return t;
}

std::vector<GateRef> FixpCircuit::max_gates() const {
    std::vector<GateRef> out;
    for (std::size_t i = 0; i < gates_.size(); ++i)
        if (std::holds_alternative<gate::Max>(gates_[i]))
            out.push_back(i);
    return out;
}

bool operator==(const FixpCircuit& a, const FixpCircuit& b) {
    if (a.k_ != b.k_ || a.outputs_ != b.outputs_ || a.gates_.size() != b.gates_.size())
        return false;
    if (a.meta_.outputs_clamped != b.meta_.outputs_clamped ||
        a.meta_.max_zero_normalized != b.meta_.max_zero_normalized || a.meta_.clamps != b.meta_.clamps)
        return false;
    for (std::size_t i = 0; i < a.gates_.size(); ++i) {
        const Gate& x = a.gates_[i];
        const Gate& y = b.gates_[i];
        if (x.index() != y.index())
            return false;
        bool same = std::visit(overloaded{
                                   [&](const gate::Input& g) { return g.index == std::get<gate::Input>(y).index; },
                                   [&](const gate::Const& g) { return g.value == std::get<gate::Const>(y).value; },
                                   [&](const gate::Add& g) {
                                       const auto& h = std::get<gate::Add>(y);
                                       return g.lhs == h.lhs && g.rhs == h.rhs;
                                   },
                                   [&](const gate::MulC& g) {
                                       const auto& h = std::get<gate::MulC>(y);
                                       return g.coeff == h.coeff && g.arg == h.arg;
                                   },
                                   [&](const gate::Max& g) {
                                       const auto& h = std::get<gate::Max>(y);
                                       return g.lhs == h.lhs && g.rhs == h.rhs;
                                   },
                               },
                               x);
        if (!same)
            return false;
    }
    return true;
}

bool is_max_zero_gate(const std::vector<Gate>& gates, const gate::Max& m) {
    return is_zero_const(gates, m.lhs) || is_zero_const(gates, m.rhs);
}

FixpCircuit clamp_outputs(const FixpCircuit& c) {
    if (c.meta().outputs_clamped)
        throw ValidationError("circuit outputs are already clamped");
    std::vector<Gate> gates = c.gates();
    auto push = [&gates](Gate g) {
        gates.push_back(std::move(g));
        return gates.size() - 1;
    };
    CircuitMeta meta;
    meta.outputs_clamped = true;
    std::vector<GateRef> outputs;
    for (GateRef tau : c.outputs()) {
        GateRef neg_tau = push(gate::MulC{Rational(-1), tau});
        GateRef minus_one = push(gate::Const{Rational(-1)});
        GateRef inner = push(gate::Max{minus_one, neg_tau});
        GateRef neg_inner = push(gate::MulC{Rational(-1), inner});
        GateRef zero = push(gate::Const{Rational(0)});
        GateRef outer = push(gate::Max{zero, neg_inner});
        meta.clamps.push_back({inner, outer});
        outputs.push_back(outer);
    }
    // Only the clamp is new; existing max gates may still lack a zero operand.
    meta.max_zero_normalized = false;
    return FixpCircuit(c.k(), std::move(gates), std::move(outputs), std::move(meta));
}

FixpCircuit normalize_max_zero(const FixpCircuit& c) {
    const auto& old = c.gates();
    std::vector<Gate> gates;
    gates.reserve(old.size() * 2);
    std::vector<GateRef> value_of(old.size());
    std::vector<GateRef> max_of(old.size());
    std::optional<GateRef> zero;
    auto push = [&gates](Gate g) {
        gates.push_back(std::move(g));
        return gates.size() - 1;
    };

    for (std::size_t i = 0; i < old.size(); ++i) {
        std::visit(overloaded{
                       [&](const gate::Input& g) { value_of[i] = push(g); },
                       [&](const gate::Const& g) { value_of[i] = push(g); },
                       [&](const gate::Add& g) { value_of[i] = push(gate::Add{value_of[g.lhs], value_of[g.rhs]}); },
                       [&](const gate::MulC& g) { value_of[i] = push(gate::MulC{g.coeff, value_of[g.arg]}); },
                       [&](const gate::Max& g) {
                           if (is_max_zero_gate(old, g)) {
                               value_of[i] = push(gate::Max{value_of[g.lhs], value_of[g.rhs]});
                               max_of[i] = value_of[i];
                               return;
                           }
                           // max{a,b} = max{0, b - a} + a
                           GateRef a = value_of[g.lhs];
                           GateRef b = value_of[g.rhs];
                           if (!zero)
                               zero = push(gate::Const{Rational(0)});
                           GateRef neg_a = push(gate::MulC{Rational(-1), a});
                           GateRef diff = push(gate::Add{b, neg_a});
                           GateRef m = push(gate::Max{*zero, diff});
                           max_of[i] = m;
                           value_of[i] = push(gate::Add{m, a});
                       },
                   },
                   old[i]);
    }

    CircuitMeta meta = c.meta();
    meta.max_zero_normalized = true;
    std::vector<GateRef> outputs;
    for (GateRef o : c.outputs())
        outputs.push_back(value_of[o]);
    for (auto& cp : meta.clamps) {
        cp.inner = max_of[cp.inner];
        cp.outer = max_of[cp.outer];
    }
    return FixpCircuit(c.k(), std::move(gates), std::move(outputs), std::move(meta));
}

std::vector<GateRef> order_max_gates(const FixpCircuit& c) {
    if (!c.meta().outputs_clamped || !c.meta().max_zero_normalized)
        throw ValidationError("max-gate ordering needs a clamped, max-zero normalized circuit");
    const auto& gates = c.gates();

    std::vector<bool> is_clamp(gates.size(), false);
    for (const auto& cp : c.meta().clamps)
        is_clamp[cp.inner] = is_clamp[cp.outer] = true;

    std::vector<GateRef> order;
    for (GateRef g : c.max_gates())
        if (!is_clamp[g])
            order.push_back(g);
    for (const auto& cp : c.meta().clamps) {
        order.push_back(cp.inner);
        order.push_back(cp.outer);
    }

    std::vector<std::size_t> position(gates.size(), gates.size());
    for (std::size_t p = 0; p < order.size(); ++p)
        position[order[p]] = p;

    // Nearest Max ancestors of each gate, looking through linear gates.
    std::vector<std::vector<GateRef>> max_deps(gates.size());
    auto deps_of = [&](GateRef r) -> std::vector<GateRef> {
        if (std::holds_alternative<gate::Max>(gates[r]))
            return {r};
        return max_deps[r];
    };
    auto merge = [](std::vector<GateRef> a, const std::vector<GateRef>& b) {
        a.insert(a.end(), b.begin(), b.end());
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        return a;
    };
    for (std::size_t i = 0; i < gates.size(); ++i) {
        std::visit(overloaded{
                       [](const gate::Input&) {},
                       [](const gate::Const&) {},
                       [&](const gate::Add& g) { max_deps[i] = merge(deps_of(g.lhs), deps_of(g.rhs)); },
                       [&](const gate::MulC& g) { max_deps[i] = deps_of(g.arg); },
                       [&](const gate::Max& g) { max_deps[i] = merge(deps_of(g.lhs), deps_of(g.rhs)); },
                   },
                   gates[i]);
    }
    for (GateRef g : order)
        for (GateRef d : max_deps[g])
            if (position[d] >= position[g]) {
                if (is_clamp[d] && !is_clamp[g])
                    throw ValidationError("max gate " + std::to_string(g) + " depends on clamp gate " +
                                          std::to_string(d) + "; clamp gates must come last");
                throw ValidationError("max gate " + std::to_string(g) + " depends on later max gate " +
                                      std::to_string(d));
            }
    return order;
}

std::size_t size(const FixpCircuit& c) {
    std::size_t total = c.k() + c.gates().size();
    for (const auto& g : c.gates()) {
        if (const auto* k = std::get_if<gate::Const>(&g))
            total += k->value.bit_size();
        else if (const auto* m = std::get_if<gate::MulC>(&g))
            total += m->coeff.bit_size();
    }
    return total;
}

} // namespace nashforge
