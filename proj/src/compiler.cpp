#include <nashforge/compiler.hpp>

#include <nashforge/error.hpp>

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

namespace nashforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t ipow(std::size_t base, unsigned e) {
    std::size_t r = 1;
    while (e-- > 0)
        r *= base;
    return r;
}

unsigned log2_exact(std::int64_t L) { return static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(L))); }

Vector to_vector(const std::vector<int>& e) {
    Vector v;
    v.reserve(e.size());
    for (int x : e)
        v.emplace_back(x);
    return v;
}

Vector from_grid(const GridPoint& q) {
    Vector v;
    v.reserve(q.size());
    for (auto x : q)
        v.emplace_back(static_cast<long>(x));
    return v;
}

void require_domain(const CompiledFunction& cf, const Vector& p) {
    if (p.size() != cf.grid.k)
        throw ValidationError("point has dimension " + std::to_string(p.size()) + ", expected " +
                              std::to_string(cf.grid.k));
    const Rational hi = cf.shrunk ? Rational(1) : Rational(static_cast<long>(cf.grid.top()));
    for (const auto& x : p)
        if (x.sign() < 0 || x > hi)
            throw ValidationError("point " + x.str() + " lies outside the domain [0, " + hi.str() + "]");
}

Vector unshrink(const CompiledFunction& cf, const Vector& p) { return cf.shrunk ? scale(cf.scale, p) : p; }

} // namespace

std::size_t SamplingParams::required_samples(std::size_t k) { return std::max<std::size_t>(16, ipow(k, 4)); }

SamplingParams SamplingParams::default_params(std::size_t k) {
    const std::size_t floor_value = std::max<std::size_t>(16, ipow(k, 4) + 1);
    std::int64_t L = 1;
    while (static_cast<std::size_t>(L) <= floor_value)
        L *= 2;
    return SamplingParams{L, required_samples(k)};
}

void validate_params(const SamplingParams& params, std::size_t k, const BoolCircuit& cb) {
    const auto L = params.L;
    if (L <= 0 || !std::has_single_bit(static_cast<std::uint64_t>(L)))
        throw ValidationError("L = " + std::to_string(L) + " is not a power of two");
    if (L <= 16 || static_cast<std::size_t>(L) <= ipow(k, 4))
        throw ValidationError("L = " + std::to_string(L) + " must exceed both 16 and k^4");
    if (params.sample_count != SamplingParams::required_samples(k))
        throw ValidationError("sample_count must be max(16, k^4) = " +
                              std::to_string(SamplingParams::required_samples(k)));
    if (static_cast<std::size_t>(L) <= params.sample_count)
        throw ValidationError("L must exceed sample_count");
    const std::size_t s = cb.size();
    if (static_cast<std::size_t>(L) > 64 * s * s)
        throw ValidationError("L = " + std::to_string(L) + " exceeds 64 * size[C^b]^2 = " + std::to_string(64 * s * s));
}

std::vector<GateRef> extract_bits(CircuitBuilder& b, GateRef a, std::size_t n, std::int64_t L) {
    if (n < 1)
        throw ValidationError("ExtractBits needs n >= 1");
    const Rational L2 = Rational(static_cast<long>(L)) * Rational(static_cast<long>(L));
    const GateRef zero = b.cached_constant(0);
    const GateRef one = b.cached_constant(1);
    std::vector<GateRef> bits;
    GateRef x = a;
    for (std::size_t i = n; i-- > 0;) {
        const Rational p = pow2(static_cast<unsigned>(i));
        // (x - 2^i) * L^2 + 1 = L^2 * x + (1 - 2^i L^2)
        GateRef lin = b.add(b.mulc(L2, x), b.cached_constant(Rational(1) - p * L2));
        GateRef bit = b.min(b.max(lin, zero), one);
        bits.push_back(bit);
        if (i > 0)
            x = b.add(x, b.mulc(-p, bit));
    }
    return bits;
}

std::vector<Rational> extract_bits_eval(const Rational& a, std::size_t n, std::int64_t L) {
    CircuitBuilder b(1);
    const GateRef in = b.input(0);
    const auto bits = extract_bits(b, in, n, L);
    const Rational inputs[] = {a};
    const auto v = evaluate_gates(b.gates(), inputs);
    std::vector<Rational> out;
    for (auto r : bits)
        out.push_back(v[r]);
    return out;
}

std::vector<GateRef> simulate_bool(CircuitBuilder& b, const BoolCircuit& cb, const std::vector<GateRef>& bits) {
    if (bits.size() != cb.input_bits())
        throw ValidationError("simulation needs " + std::to_string(cb.input_bits()) + " bit gates");
    std::vector<GateRef> map;
    map.reserve(cb.gates().size());
    for (const auto& g : cb.gates()) {
        map.push_back(std::visit(overloaded{
                                     [&](const bgate::Input& x) { return bits[x.bit]; },
                                     [&](const bgate::Const& x) { return b.cached_constant(x.value ? 1 : 0); },
                                     [&](const bgate::And& x) { return b.min(map[x.lhs], map[x.rhs]); },
                                     [&](const bgate::Or& x) { return b.max(map[x.lhs], map[x.rhs]); },
                                     [&](const bgate::Not& x) {
                                         return b.add(b.cached_constant(1), b.mulc(Rational(-1), map[x.arg]));
                                     },
                                 },
                                 g));
    }
    std::vector<GateRef> out;
    for (auto o : cb.outputs())
        out.push_back(map[o]);
    return out;
}

std::vector<Rational> simulate_bool_eval(const BoolCircuit& cb, const std::vector<Rational>& bits) {
    CircuitBuilder b(bits.size());
    std::vector<GateRef> in;
    for (std::size_t i = 0; i < bits.size(); ++i)
        in.push_back(b.input(i));
    const auto outs = simulate_bool(b, cb, in);
    const auto v = evaluate_gates(b.gates(), bits);
    std::vector<Rational> out;
    for (auto r : outs)
        out.push_back(v[r]);
    return out;
}

CompiledFunction compile(const BoolCircuit& cb, const Grid& g, const SamplingParams& params) {
    if (cb.k() != g.k || cb.n() != g.n)
        throw ValidationError("source circuit dimensions do not match the grid");
    validate_params(params, g.k, cb);
    const auto report = validate_circuit(cb, g);
    if (!report.valid)
        throw ValidationError("source circuit is not a valid Brouwer-mapping circuit (" +
                              std::to_string(report.violations.size()) + " violating points)");

    const std::size_t k = g.k;
    const std::size_t s = params.sample_count;
    CircuitBuilder b(k);
    std::vector<GateRef> in;
    for (std::size_t i = 0; i < k; ++i)
        in.push_back(b.input(i));
    const GateRef minus_one = b.cached_constant(-1);
    const GateRef one = b.cached_constant(1);

    std::vector<std::vector<GateRef>> sample_r(s);
    std::vector<GateRef> sum(k);
    for (std::size_t j = 0; j < s; ++j) {
        const Rational offset(static_cast<long>(j), static_cast<long>(params.L));
        std::vector<GateRef> bits;
        for (std::size_t i = 0; i < k; ++i) {
            GateRef pj = j == 0 ? in[i] : b.add(in[i], b.cached_constant(offset));
            auto bi = extract_bits(b, pj, g.n, params.L);
            bits.insert(bits.end(), bi.begin(), bi.end());
        }
        const auto delta = simulate_bool(b, cb, bits);
        for (std::size_t i = 0; i < k; ++i) {
            GateRef diff = b.sub(delta[2 * i], delta[2 * i + 1]);
            GateRef r = b.min(b.max(diff, minus_one), one);
            sample_r[j].push_back(r);
            sum[i] = j == 0 ? r : b.add(sum[i], r);
        }
    }
    const GateRef zero = b.cached_constant(0);
    const GateRef top = b.cached_constant(static_cast<long>(g.top()));
    const Rational inv(1, static_cast<long>(s));
    std::vector<GateRef> outputs;
    for (std::size_t i = 0; i < k; ++i) {
        GateRef moved = b.add(in[i], b.mulc(inv, sum[i]));
        outputs.push_back(b.max(b.min(moved, top), zero));
    }
    FixpCircuit circuit(k, b.gates(), std::move(outputs));
    return CompiledFunction{std::move(circuit), cb, g, params, false, Rational(1), std::move(sample_r)};
}

CompiledFunction compile(const BoolCircuit& cb, const Grid& g) {
    return compile(cb, g, SamplingParams::default_params(g.k));
}

CompiledFunction shrink_range(const CompiledFunction& cf) {
    if (cf.shrunk)
        throw ValidationError("function is already shrunk");
    const std::size_t k = cf.circuit.k();
    const Rational top(static_cast<long>(cf.grid.top()));
    CircuitBuilder b(k);
    std::vector<GateRef> scaled;
    for (std::size_t i = 0; i < k; ++i)
        scaled.push_back(b.mulc(top, b.input(i)));
    std::vector<GateRef> map;
    map.reserve(cf.circuit.gates().size());
    for (const auto& g : cf.circuit.gates()) {
        map.push_back(std::visit(overloaded{
                                     [&](const gate::Input& x) { return scaled[x.index]; },
                                     [&](const gate::Const& x) { return b.constant(x.value); },
                                     [&](const gate::Add& x) { return b.add(map[x.lhs], map[x.rhs]); },
                                     [&](const gate::MulC& x) { return b.mulc(x.coeff, map[x.arg]); },
                                     [&](const gate::Max& x) { return b.max(map[x.lhs], map[x.rhs]); },
                                 },
                                 g));
    }
    std::vector<GateRef> outputs;
    for (auto o : cf.circuit.outputs())
        outputs.push_back(b.mulc(Rational(1) / top, map[o]));
    auto sample_r = cf.sample_r;
    for (auto& row : sample_r)
        for (auto& r : row)
            r = map[r];
    FixpCircuit circuit(k, b.gates(), std::move(outputs));
    return CompiledFunction{std::move(circuit), cf.source, cf.grid, cf.params, true, top, std::move(sample_r)};
}

bool is_poorly_positioned(const Rational& a, std::int64_t L) {
    const Rational frac = a - from_integer(a.floor());
    const Rational L2 = Rational(static_cast<long>(L)) * Rational(static_cast<long>(L));
    return frac > Rational(1) - Rational(1) / L2;
}

PositionClass classify_position(const Vector& p, std::int64_t L) {
    PositionClass out;
    out.reserve(p.size());
    for (const auto& x : p) {
        if (x.sign() < 0)
            throw ValidationError("position classification needs nonnegative coordinates");
        out.push_back(is_poorly_positioned(x, L) ? Position::poor : Position::well);
    }
    return out;
}

bool is_well_positioned(const Vector& p, std::int64_t L) {
    const auto c = classify_position(p, L);
    return std::all_of(c.begin(), c.end(), [](Position x) { return x == Position::well; });
}

std::vector<Vector> sample_points(const Vector& p, const SamplingParams& params) {
    std::vector<Vector> out;
    out.reserve(params.sample_count);
    for (std::size_t j = 0; j < params.sample_count; ++j) {
        const Rational offset(static_cast<long>(j), static_cast<long>(params.L));
        Vector q = p;
        for (auto& x : q)
            x += offset;
        out.push_back(std::move(q));
    }
    return out;
}

GridPoint grid_floor(const Vector& p, const Grid& g) {
    GridPoint q;
    q.reserve(p.size());
    for (const auto& x : p) {
        if (x.sign() < 0)
            throw ValidationError("grid_floor needs nonnegative coordinates");
        const mpz_class f = x.floor();
        q.push_back(f >= g.top() ? g.top() : f.get_si());
    }
    return q;
}

Vector zeta(const Vector& p, const Coloring& color, const Grid& g) {
    return to_vector(increment(color(grid_floor(p, g)), g.k));
}

std::vector<Vector> sample_increments(const Vector& p, const Coloring& color, const Grid& g,
                                      const SamplingParams& params,
                                      const std::function<Vector(std::size_t)>& poor) {
    const auto samples = sample_points(p, params);
    std::vector<Vector> r;
    r.reserve(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (is_well_positioned(samples[j], params.L)) {
            r.push_back(zeta(samples[j], color, g));
        } else {
            Vector v = poor(j);
            if (v.size() != g.k || norm_inf(v) > Rational(1))
                throw ValidationError("poor-sample increment must be a k-vector of norm at most 1");
            r.push_back(std::move(v));
        }
    }
    return r;
}

std::vector<Vector> circuit_increments(const CompiledFunction& cf, const Vector& p) {
    require_domain(cf, p);
    const auto t = cf.circuit.trace(p);
    std::vector<Vector> out;
    for (const auto& row : cf.sample_r) {
        Vector v;
        for (auto r : row)
            v.push_back(t.values[r]);
        out.push_back(std::move(v));
    }
    return out;
}

Vector increment_sum(const std::vector<Vector>& r) {
    if (r.empty())
        return {};
    Vector s(r.front().size());
    for (const auto& v : r)
        s = add(s, v);
    return s;
}

bool sampling_sum_zero(const std::vector<Vector>& r) { return norm_inf(increment_sum(r)).is_zero(); }

bool sampling_sum_below_one(const std::vector<Vector>& r) { return norm_inf(increment_sum(r)) < Rational(1); }

Extraction extract_panchromatic_simplex(const Vector& p, const Coloring& color, const Grid& g,
                                        const SamplingParams& params) {
    if (p.size() != g.k)
        throw ValidationError("point dimension does not match the grid");
    Extraction out;
    std::set<GridPoint> q;
    const auto samples = sample_points(p, params);
    for (std::size_t j = 0; j < samples.size(); ++j) {
        if (is_well_positioned(samples[j], params.L)) {
            out.well.push_back(j);
            q.insert(grid_floor(samples[j], g));
        } else {
            out.poor.push_back(j);
        }
    }
    if (out.poor.size() > g.k)
        throw LemmaViolation(std::to_string(out.poor.size()) + " poorly positioned samples exceed k = " +
                             std::to_string(g.k));
    out.simplex.assign(q.begin(), q.end());
    if (!is_panchromatic_simplex(out.simplex, color, g))
        throw NotPanchromatic("sampled cells {" + std::to_string(out.simplex.size()) +
                              " points} do not form a panchromatic simplex");
    return out;
}

Rational approx_tolerance(const CompiledFunction& cf) {
    return Rational(1) / (Rational(static_cast<long>(cf.params.L)) * cf.scale);
}

Extraction extract_panchromatic_simplex(const Vector& p, const CompiledFunction& cf) {
    if (!check_approx_fixed_point(cf, p, approx_tolerance(cf)))
        throw ValidationError("point is not a 1/L-approximate fixed point");
    const BoolCircuit& cb = cf.source;
    return extract_panchromatic_simplex(unshrink(cf, p), [&cb](const GridPoint& q) { return color(cb, q); },
                                        cf.grid, cf.params);
}

bool check_approx_fixed_point(const CompiledFunction& cf, const Vector& p, const Rational& eps) {
    require_domain(cf, p);
    return norm_inf(sub(p, cf.circuit.evaluate(p))) <= eps;
}

std::optional<Vector> find_approx_fixed_point(const CompiledFunction& cf, std::size_t max_evaluations) {
    const Grid& g = cf.grid;
    const std::size_t k = g.k;
    const std::size_t s = cf.params.sample_count;
    const Rational L(static_cast<long>(cf.params.L));
    const Rational L2 = L * L;
    const Rational slack = Rational(static_cast<long>(s)) / L;
    const BoolCircuit& cb = cf.source;
    const auto fixtures = brute_force_fixtures(cb, g);

    // A candidate crosses coordinate order[t] between samples d[t]-1 and
    // d[t]; sample d[t]-1 sits just below the crossing and is poor.
    struct Candidate {
        Rational score;
        GridPoint cube;
        std::vector<std::size_t> order;
        std::vector<std::size_t> d;
    };
    std::vector<Candidate> candidates;
    std::vector<std::size_t> order(k);
    for (const auto& cube : fixtures.panchromatic_cubes) {
        std::iota(order.begin(), order.end(), 0);
        do {
            std::vector<Vector> cell_inc;
            GridPoint cell = cube;
            cell_inc.push_back(to_vector(increment(color(cb, cell), k)));
            for (std::size_t t = 0; t < k; ++t) {
                cell[order[t]] += 1;
                cell_inc.push_back(to_vector(increment(color(cb, cell), k)));
            }
            std::vector<std::size_t> d(k);
            std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t t, std::size_t lo) {
                if (t == k) {
                    Vector v(k);
                    std::size_t start = 0;
                    for (std::size_t u = 0; u <= k; ++u) {
                        const std::size_t end = u < k ? d[u] : s;
                        const std::size_t well = end - start - (u < k ? 1 : 0);
                        v = add(v, scale(Rational(static_cast<long>(well)), cell_inc[u]));
                        start = end;
                    }
                    const Rational score = norm_inf(v);
                    if (score <= Rational(static_cast<long>(k)) + slack)
                        candidates.push_back({score, cube, order, d});
                    return;
                }
                for (std::size_t x = lo; x + 2 * (k - 1 - t) <= s - 1; ++x) {
                    d[t] = x;
                    rec(t + 1, x + 2);
                }
            };
            rec(0, 2);
        } while (std::next_permutation(order.begin(), order.end()));
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score < b.score; });

    const Rational thetas[] = {Rational(1, 2), Rational(1, 4), Rational(3, 4), Rational(1, 8), Rational(7, 8)};
    std::size_t evaluations = 0;
    for (const auto& c : candidates) {
        for (const auto& theta : thetas) {
            if (evaluations++ >= max_evaluations)
                return std::nullopt;
            Vector x = from_grid(c.cube);
            for (std::size_t t = 0; t < k; ++t) {
                const std::size_t i = c.order[t];
                x[i] += Rational(1) - Rational(static_cast<long>(c.d[t] - 1)) / L - theta / L2;
            }
            if (cf.shrunk)
                x = scale(Rational(1) / cf.scale, x);
            if (check_approx_fixed_point(cf, x, approx_tolerance(cf)))
                return x;
        }
    }
    return std::nullopt;
}

std::size_t compiled_size_budget(const BoolCircuit& cb, const Grid& g, const SamplingParams& params) {
    const std::size_t l = log2_exact(params.L);
    const std::size_t per_bit = 24 + 4 * (2 * l + g.n + 2);
    const std::size_t per_sample = 12 * cb.size() + g.k * g.n * per_bit + g.k * (40 + 2 * l);
    return params.sample_count * per_sample + g.k * (64 + g.n);
}

} // namespace nashforge
