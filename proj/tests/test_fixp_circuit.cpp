#include <doctest.h>

#include "generators.hpp"

#include <nashforge/error.hpp>
#include <nashforge/fixp_circuit.hpp>

#include <algorithm>

using namespace nashforge;
using nashforge::testing::random_circuit;
using nashforge::testing::random_lambda;
using nashforge::testing::Rng;

namespace {

FixpCircuit identity1() {
    CircuitBuilder b(1);
    auto x = b.input(0);
    return FixpCircuit(1, b.gates(), {x});
}

/// Output tau as a circuit of one constant; the input is unused.
FixpCircuit constant_output(const Rational& tau) {
    CircuitBuilder b(1);
    b.input(0);
    auto c = b.constant(tau);
    return FixpCircuit(1, b.gates(), {c});
}

std::size_t count_non_const(const FixpCircuit& c) {
    return static_cast<std::size_t>(std::count_if(c.gates().begin(), c.gates().end(), [](const Gate& g) {
        return !std::holds_alternative<gate::Const>(g);
    }));
}

} // namespace

TEST_CASE("evaluate on small circuits") {
    CHECK(identity1().evaluate(Vector{Rational(1, 2)}) == Vector{Rational(1, 2)});

    CircuitBuilder b(1);
    auto z = b.constant(0);
    auto m1 = b.constant(-1);
    auto mx = b.max(z, m1);
    CHECK(FixpCircuit(1, b.gates(), {mx}).evaluate(Vector{Rational(7)}) == Vector{Rational(0)});

    const FixpCircuit clamped = clamp_outputs(constant_output(Rational(3, 2)));
    CHECK(clamped.evaluate(Vector{Rational(0)}) == Vector{Rational(1)});
}

TEST_CASE("evaluate exposes the full trace") {
    CircuitBuilder b(2);
    auto x = b.input(0);
    auto y = b.input(1);
    auto s = b.add(x, y);
    auto m = b.max(s, b.constant(1));
    const FixpCircuit c(2, b.gates(), {s, m});
    const Trace t = c.trace(Vector{Rational(1, 3), Rational(1, 2)});
    CHECK(t.values.size() == c.gates().size());
    CHECK(t.values[s] == Rational(5, 6));
    CHECK(t.values[m] == Rational(1));
    CHECK(t.outputs == Vector{Rational(5, 6), Rational(1)});
    CHECK_THROWS_AS(c.evaluate(Vector{Rational(1)}), ValidationError);
}

TEST_CASE("construction rejects forward references and bad outputs") {
    CHECK_THROWS_AS(FixpCircuit(1, {gate::Input{0}, gate::Add{0, 2}, gate::Const{Rational(1)}}, {1}), ValidationError);
    CHECK_THROWS_AS(FixpCircuit(1, {gate::Input{0}, gate::Max{1, 0}}, {1}), ValidationError);
    CHECK_THROWS_AS(FixpCircuit(1, {gate::Input{0}}, {3}), ValidationError);
    CHECK_THROWS_AS(FixpCircuit(1, {gate::Input{0}}, {0, 0}), ValidationError);
    CHECK_THROWS_AS(FixpCircuit(1, {gate::Input{1}}, {0}), ValidationError);
    CircuitBuilder b(1);
    CHECK_THROWS_AS(b.add(0, 0), ValidationError);
}

TEST_CASE("clamp_outputs lands in [0,1]") {
    CHECK(clamp_outputs(constant_output(-2)).evaluate(Vector{Rational(0)}) == Vector{Rational(0)});
    CHECK(clamp_outputs(constant_output(Rational(3, 2))).evaluate(Vector{Rational(0)}) == Vector{Rational(1)});
    CHECK(clamp_outputs(constant_output(Rational(1, 3))).evaluate(Vector{Rational(0)}) == Vector{Rational(1, 3)});
    CHECK_THROWS_AS(clamp_outputs(clamp_outputs(identity1())), ValidationError);
}

TEST_CASE("clamping adds four operations and the constants -1 and 0 per output") {
    const FixpCircuit c = identity1();
    const FixpCircuit d = clamp_outputs(c);
    CHECK(count_non_const(d) - count_non_const(c) == 4);
    CHECK(d.gates().size() - c.gates().size() == 6);
    CHECK(d.meta().clamps.size() == 1);
    CHECK(d.outputs().front() == d.meta().clamps.front().outer);
    const auto& inner = std::get<gate::Max>(d.gates()[d.meta().clamps.front().inner]);
    CHECK(std::get<gate::Const>(d.gates()[inner.lhs]).value == Rational(-1));
    CHECK(size(d) - size(c) == 6 + Rational(-1).bit_size() + Rational(0).bit_size() + 2 * Rational(-1).bit_size());
}

TEST_CASE("clamped outputs stay in [0,1] for any input") {
    Rng rng(21);
    for (int t = 0; t < 200; ++t) {
        const std::size_t k = 1 + t % 2;
        const FixpCircuit c = clamp_outputs(random_circuit(rng, k, 4));
        for (int s = 0; s < 5; ++s) {
            for (const auto& v : c.evaluate(random_lambda(rng, k))) {
                CHECK(v.sign() >= 0);
                CHECK(v <= Rational(1));
            }
        }
    }
}

TEST_CASE("normalize_max_zero preserves values") {
    {
        CircuitBuilder b(1);
        auto m = b.max(b.constant(2), b.constant(5));
        const FixpCircuit n = normalize_max_zero(FixpCircuit(1, b.gates(), {m}));
        CHECK(n.evaluate(Vector{Rational(0)}) == Vector{Rational(5)});
        CHECK(n.meta().max_zero_normalized);
    }
    {
        CircuitBuilder b(1);
        auto x = b.input(0);
        auto m = b.max(b.constant(0), x);
        const FixpCircuit c(1, b.gates(), {m});
        CHECK(normalize_max_zero(c).gates().size() == c.gates().size());
    }
    {
        CircuitBuilder b(1);
        auto x = b.input(0);
        auto m = b.max(x, b.add(b.constant(1), b.mulc(-1, x)));
        const FixpCircuit c(1, b.gates(), {m});
        const Vector l{Rational(1, 4)};
        CHECK(c.evaluate(l) == Vector{Rational(3, 4)});
        CHECK(normalize_max_zero(c).evaluate(l) == Vector{Rational(3, 4)});
    }
}

TEST_CASE("normalization property: equal values, zero operands, bounded growth") {
    Rng rng(22);
    for (int t = 0; t < 300; ++t) {
        const std::size_t k = 1 + t % 2;
        const FixpCircuit c = random_circuit(rng, k, 6);
        const FixpCircuit n = normalize_max_zero(c);
        std::size_t rewritten = 0;
        for (const auto& g : c.gates())
            if (const auto* m = std::get_if<gate::Max>(&g))
                rewritten += is_max_zero_gate(c.gates(), *m) ? 0 : 1;
        CHECK(n.gates().size() <= c.gates().size() + 3 * rewritten + 1);
        CHECK(n.max_gates().size() == c.max_gates().size());
        for (auto r : n.max_gates())
            CHECK(is_max_zero_gate(n.gates(), std::get<gate::Max>(n.gates()[r])));
        for (int s = 0; s < 5; ++s) {
            const Vector l = random_lambda(rng, k);
            CHECK(n.evaluate(l) == c.evaluate(l));
        }
    }
}

TEST_CASE("order_max_gates puts clamp gates last") {
    const FixpCircuit only = normalize_max_zero(clamp_outputs(identity1()));
    const auto o1 = order_max_gates(only);
    REQUIRE(o1.size() == 2);
    CHECK(o1[0] == only.meta().clamps[0].inner);
    CHECK(o1[1] == only.meta().clamps[0].outer);

    // max(0, max(0, x) - 1/2)
    CircuitBuilder b(1);
    auto x = b.input(0);
    auto z = b.constant(0);
    auto m1 = b.max(z, x);
    auto m2 = b.max(z, b.add(m1, b.constant(Rational(-1, 2))));
    const FixpCircuit chain = normalize_max_zero(clamp_outputs(FixpCircuit(1, b.gates(), {m2})));
    const auto o2 = order_max_gates(chain);
    REQUIRE(o2.size() == 4);
    CHECK(o2[0] == m1);
    CHECK(o2[1] == m2);
    CHECK(o2[2] == chain.meta().clamps[0].inner);
    CHECK(o2[3] == chain.meta().clamps[0].outer);

    CircuitBuilder c(1);
    auto y = c.input(0);
    auto zero = c.constant(0);
    auto a1 = c.max(zero, y);
    auto a2 = c.max(zero, c.mulc(-1, y));
    const FixpCircuit indep = normalize_max_zero(clamp_outputs(FixpCircuit(1, c.gates(), {c.add(a1, a2)})));
    const auto o3 = order_max_gates(indep);
    CHECK(o3[0] == a1);
    CHECK(o3[1] == a2);

    CHECK_THROWS_AS(order_max_gates(identity1()), ValidationError);
}

TEST_CASE("order_max_gates is a topological order of all max gates") {
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        const std::size_t k = 1 + t % 2;
        const FixpCircuit c = normalize_max_zero(clamp_outputs(random_circuit(rng, k, 6)));
        const auto order = order_max_gates(c);
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == c.max_gates());
        // A max gate refers only to gates with smaller index, and ordering by
        // position must respect each max-to-max dependency.
        std::vector<std::size_t> pos(c.gates().size(), 0);
        for (std::size_t i = 0; i < order.size(); ++i)
            pos[order[i]] = i;
        std::vector<std::vector<GateRef>> deps(c.gates().size());
        for (GateRef g = 0; g < c.gates().size(); ++g) {
            std::visit(
                [&](const auto& x) {
                    using T = std::decay_t<decltype(x)>;
                    if constexpr (std::is_same_v<T, gate::Add> || std::is_same_v<T, gate::Max>) {
                        for (GateRef r : {x.lhs, x.rhs}) {
                            if (std::holds_alternative<gate::Max>(c.gates()[r]))
                                deps[g].push_back(r);
                            else
                                deps[g].insert(deps[g].end(), deps[r].begin(), deps[r].end());
                        }
                    } else if constexpr (std::is_same_v<T, gate::MulC>) {
                        if (std::holds_alternative<gate::Max>(c.gates()[x.arg]))
                            deps[g].push_back(x.arg);
                        else
                            deps[g] = deps[x.arg];
                    }
                },
                c.gates()[g]);
            if (std::holds_alternative<gate::Max>(c.gates()[g]))
                for (GateRef d : deps[g])
                    CHECK(pos[d] < pos[g]);
        }
        const std::size_t m = order.size();
        for (std::size_t l = 0; l < k; ++l) {
            CHECK(order[m - 2 * k + 2 * l] == c.meta().clamps[l].inner);
            CHECK(order[m - 2 * k + 2 * l + 1] == c.meta().clamps[l].outer);
        }
    }
}

TEST_CASE("size counts inputs, gates and constant bits") {
    CHECK(size(identity1()) == 2);
    CircuitBuilder b(1);
    b.input(0);
    auto h = b.constant(Rational(1, 2));
    CHECK(size(FixpCircuit(1, b.gates(), {h})) == 1 + 2 + (1 + 2));
}

TEST_CASE("builder helpers") {
    CircuitBuilder b(2);
    auto x = b.input(0);
    auto y = b.input(1);
    auto d = b.sub(x, y);
    auto m = b.min(x, y);
    auto c1 = b.cached_constant(Rational(3));
    auto c2 = b.cached_constant(Rational(3));
    CHECK(c1 == c2);
    const FixpCircuit c(2, b.gates(), {d, m});
    CHECK(c.evaluate(Vector{Rational(1, 3), Rational(1, 2)}) == Vector{Rational(-1, 6), Rational(1, 3)});
}
