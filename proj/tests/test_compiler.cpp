#include <doctest.h>

#include "generators.hpp"

#include <nashforge/compiler.hpp>
#include <nashforge/error.hpp>

using namespace nashforge;
using nashforge::testing::Rng;
using nashforge::testing::synthetic_sampling;
using nashforge::testing::uniform;

namespace {

std::vector<Rational> binary_digits(long t, std::size_t n) {
    std::vector<Rational> out;
    for (std::size_t i = n; i-- > 0;)
        out.push_back(Rational((t >> i) & 1));
    return out;
}

std::vector<Rational> fragment_eval(const Rational& a, std::size_t n, std::int64_t L) {
    CircuitBuilder b(1);
    auto x = b.input(0);
    const auto bits = extract_bits(b, x, n, L);
    const FixpCircuit c(1, b.gates(), {bits.front()});
    const Trace t = c.trace(Vector{a});
    std::vector<Rational> out;
    for (auto r : bits)
        out.push_back(t.values[r]);
    return out;
}

Vector as_vector(const GridPoint& p, const Rational& scale = 1) {
    Vector v;
    for (auto x : p)
        v.push_back(Rational(static_cast<long>(x)) * scale);
    return v;
}

} // namespace

TEST_CASE("sampling parameters") {
    CHECK(SamplingParams::default_params(1).L == 32);
    CHECK(SamplingParams::default_params(2).L == 32);
    CHECK(SamplingParams::default_params(2).sample_count == 16);
    CHECK(SamplingParams::default_params(3).L == 128);
    CHECK(SamplingParams::default_params(3).sample_count == 81);
    CHECK(SamplingParams::required_samples(4) == 256);
    const BoolCircuit cb = make_example_coloring(Grid(2, 2)).circuit;
    CHECK_NOTHROW(validate_params({32, 16}, 2, cb));
    CHECK_THROWS_AS(validate_params({16, 16}, 2, cb), ValidationError);
    CHECK_THROWS_AS(validate_params({48, 16}, 2, cb), ValidationError);
    CHECK_THROWS_AS(validate_params({32, 15}, 2, cb), ValidationError);
    CHECK_THROWS_AS(validate_params({std::int64_t{1} << 40, 16}, 2, cb), ValidationError);
}

TEST_CASE("extract bits examples") {
    CHECK(extract_bits_eval(0, 2, 32) == binary_digits(0, 2));
    CHECK(extract_bits_eval(Rational(21, 4), 3, 32) == binary_digits(5, 3));
    const Rational a = Rational(3) - Rational(1, 2 * 32 * 32);
    CHECK(extract_bits_eval(a, 2, 32) == std::vector<Rational>{Rational(1), Rational(1, 2)});
    CHECK(fragment_eval(a, 2, 32) == extract_bits_eval(a, 2, 32));
}

TEST_CASE("extract bits is exact on well positioned points") {
    const std::int64_t L = 32;
    const Rational step(1, 4 * L * L);
    for (long t = 0; t < 8; ++t) {
        for (long j = 0; j < 4 * L * L; j += 37) {
            const Rational a = Rational(t) + step * Rational(j);
            if (is_poorly_positioned(a, L))
                continue;
            CHECK(extract_bits_eval(a, 3, L) == binary_digits(t, 3));
        }
    }
}

TEST_CASE("extract bits stays in [0,1] everywhere") {
    Rng rng(41);
    for (int t = 0; t < 500; ++t) {
        const Rational a(uniform(rng, -4000, 20000), uniform(rng, 1, 1024));
        for (const auto& b : fragment_eval(a, 3, 32)) {
            CHECK(b.sign() >= 0);
            CHECK(b <= Rational(1));
        }
    }
}

TEST_CASE("boolean simulation") {
    BoolCircuitBuilder b(1, 2);
    auto x = b.input(0);
    auto y = b.input(1);
    auto both = b.land(x, y);
    auto neg = b.lnot(x);
    const BoolCircuit c = std::move(b).build({both, neg});
    CHECK(simulate_bool_eval(c, {1, 1}) == std::vector<Rational>{1, 0});
    CHECK(simulate_bool_eval(c, {Rational(1, 3), Rational(1, 2)}) == std::vector<Rational>{Rational(1, 3), Rational(2, 3)});

    for (auto [k, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {3, 2}}) {
        const Grid g(k, n);
        const BoolCircuit cb = make_example_coloring(g).circuit;
        for (std::uint64_t i = 0; i < g.point_count(); ++i) {
            const GridPoint p = g.point(i);
            std::vector<Rational> bits;
            for (bool v : encode_point(p, n))
                bits.push_back(v ? 1 : 0);
            std::vector<Rational> want;
            for (bool v : eval_bool(cb, p))
                want.push_back(v ? 1 : 0);
            CHECK(simulate_bool_eval(cb, bits) == want);
        }
    }
}

TEST_CASE("boolean simulation keeps fractional bits in [0,1]") {
    Rng rng(42);
    const BoolCircuit cb = make_example_coloring(Grid(2, 2)).circuit;
    for (int t = 0; t < 100; ++t) {
        std::vector<Rational> bits;
        for (int i = 0; i < 4; ++i)
            bits.push_back(Rational(uniform(rng, 0, 8), 8));
        for (const auto& v : simulate_bool_eval(cb, bits)) {
            CHECK(v.sign() >= 0);
            CHECK(v <= Rational(1));
        }
    }
}

TEST_CASE("compiled F agrees with H on the grid") {
    for (auto [k, n] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}}) {
        const Grid g(k, n);
        const BoolCircuit cb = make_example_coloring(g).circuit;
        const CompiledFunction cf = compile(cb, g);
        CHECK(size(cf.circuit) <= compiled_size_budget(cb, g, cf.params));
        for (std::uint64_t i = 0; i < g.point_count(); ++i) {
            const GridPoint p = g.point(i);
            CHECK(cf.circuit.evaluate(as_vector(p)) == as_vector(discrete_map(cb, p)));
        }
    }
    const Grid g(2, 2);
    const CompiledFunction cf = compile(make_example_coloring(g).circuit, g);
    CHECK(cf.circuit.evaluate(Vector{0, 0}) == Vector{0, 1});
}

TEST_CASE("compiled F maps the domain into itself") {
    Rng rng(43);
    const Grid g(2, 2);
    const CompiledFunction cf = compile(make_example_coloring(g).circuit, g);
    for (int t = 0; t < 40; ++t) {
        const Vector p{Rational(uniform(rng, 0, 3 * 97), 97), Rational(uniform(rng, 0, 3 * 89), 89)};
        for (const auto& v : cf.circuit.evaluate(p)) {
            CHECK(v.sign() >= 0);
            CHECK(v <= Rational(3));
        }
    }
}

TEST_CASE("compile refuses invalid sources") {
    const Grid g(2, 2);
    BoolCircuitBuilder b(2, 2);
    auto t = b.constant(true);
    auto f = b.constant(false);
    const BoolCircuit bad = std::move(b).build({t, f, f, f});
    CHECK_THROWS_AS(compile(bad, g), ValidationError);
}

TEST_CASE("shrink_range rescales the domain") {
    Rng rng(44);
    const Grid g(2, 2);
    const CompiledFunction cf = compile(make_example_coloring(g).circuit, g);
    const CompiledFunction sh = shrink_range(cf);
    CHECK(sh.shrunk);
    CHECK(sh.scale == Rational(3));
    CHECK_THROWS_AS(shrink_range(sh), ValidationError);
    for (int t = 0; t < 30; ++t) {
        const Vector l{Rational(uniform(rng, 0, 64), 64), Rational(uniform(rng, 0, 64), 64)};
        CHECK(sh.circuit.evaluate(l) == scale(Rational(1, 3), cf.circuit.evaluate(scale(3, l))));
    }
    for (std::uint64_t i = 0; i < g.point_count(); ++i) {
        const GridPoint p = g.point(i);
        CHECK(sh.circuit.evaluate(as_vector(p, Rational(1, 3))) == as_vector(discrete_map(cf.source, p), Rational(1, 3)));
    }
}

TEST_CASE("position classification") {
    const std::int64_t L = 32;
    CHECK(is_well_positioned(Vector{Rational(1, 2), Rational(1, 2)}, L));
    CHECK(is_poorly_positioned(Rational(2) - Rational(1, 3 * L * L), L));
    CHECK_FALSE(is_poorly_positioned(Rational(2), L));
    CHECK_FALSE(is_poorly_positioned(Rational(2) - Rational(1, L * L), L));
    CHECK(classify_position(Vector{Rational(1), Rational(2) - Rational(1, 2 * L * L)}, L) ==
          PositionClass{Position::well, Position::poor});
    CHECK_THROWS_AS(classify_position(Vector{Rational(-1)}, L), ValidationError);
}

TEST_CASE("sample points and grid floor") {
    const SamplingParams params{32, 16};
    const auto s = sample_points(Vector{Rational(1, 4), Rational(0)}, params);
    REQUIRE(s.size() == 16);
    CHECK(s[15] == Vector{Rational(1, 4) + Rational(15, 32), Rational(15, 32)});
    const Grid g(2, 2);
    CHECK(grid_floor(Vector{Rational(7, 2), Rational(3)}, g) == GridPoint{3, 3});
    CHECK(grid_floor(Vector{Rational(5, 2), Rational(1, 3)}, g) == GridPoint{2, 0});
}

TEST_CASE("synthetic samplings yield the engineered panchromatic simplex") {
    Rng rng(45);
    for (int t = 0; t < 40; ++t) {
        const std::size_t k = 2 + t % 2;
        const bool perturb = t % 4 >= 2;
        const auto syn = synthetic_sampling(rng, k, perturb);
        const Coloring col = syn.coloring();
        const auto r = sample_increments(syn.point, col, syn.grid, syn.params,
                                         [&](std::size_t j) { return syn.poor.at(j); });
        if (perturb)
            CHECK(sampling_sum_below_one(r));
        else
            CHECK(sampling_sum_zero(r));
        const Extraction ex = extract_panchromatic_simplex(syn.point, col, syn.grid, syn.params);
        CHECK(ex.simplex == syn.path);
        CHECK(ex.poor.size() == syn.poor.size());
        CHECK(ex.poor.size() <= k);
        const Fixtures fx = brute_force_fixtures(col, syn.grid);
        CHECK(std::binary_search(fx.panchromatic_simplices.begin(), fx.panchromatic_simplices.end(), ex.simplex));
    }
}

TEST_CASE("samples inside one cell are not panchromatic") {
    const Grid g(2, 2);
    const BoolCircuit cb = make_example_coloring(g).circuit;
    const Coloring col = [&](const GridPoint& p) { return color(cb, p); };
    CHECK_THROWS_AS(extract_panchromatic_simplex(Vector{Rational(5, 4), Rational(5, 4)}, col, g, {32, 16}),
                    NotPanchromatic);
    const auto r = sample_increments(Vector{Rational(5, 4), Rational(5, 4)}, col, g, {32, 16},
                                     [](std::size_t) { return Vector(2); });
    CHECK_FALSE(sampling_sum_below_one(r));
}

TEST_CASE("approximate fixed point checks") {
    const Grid g(2, 2);
    const ExampleInstance ex = make_example_coloring(g);
    const CompiledFunction cf = compile(ex.circuit, g);
    const Vector corner = as_vector(ex.known_cube);
    CHECK_FALSE(check_approx_fixed_point(cf, corner, approx_tolerance(cf)));
    CHECK_THROWS_AS(extract_panchromatic_simplex(corner, cf), ValidationError);
    CHECK_THROWS_AS(check_approx_fixed_point(cf, Vector{Rational(-1), Rational(0)}, 0), ValidationError);
}

TEST_CASE("found approximate fixed points sit in panchromatic cubes") {
    for (auto [k, n, shrink] : {std::tuple<std::size_t, std::size_t, bool>{2, 2, false}, {2, 3, false}, {2, 2, true}}) {
        const Grid g(k, n);
        CompiledFunction cf = compile(make_example_coloring(g).circuit, g);
        if (shrink)
            cf = shrink_range(cf);
        const auto p = find_approx_fixed_point(cf);
        REQUIRE(p.has_value());
        CHECK(check_approx_fixed_point(cf, *p, approx_tolerance(cf)));
        CHECK(sampling_sum_below_one(circuit_increments(cf, *p)));
        const Extraction ex = extract_panchromatic_simplex(*p, cf);
        const Fixtures fx = brute_force_fixtures(cf.source, g);
        CHECK(std::binary_search(fx.panchromatic_simplices.begin(), fx.panchromatic_simplices.end(), ex.simplex));
    }
}
