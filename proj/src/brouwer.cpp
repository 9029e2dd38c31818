#include <nashforge/brouwer.hpp>

#include <nashforge/error.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace nashforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string describe(const GridPoint& p) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i)
        os << (i ? "," : "") << p[i];
    os << ')';
    return os.str();
}

void check_gate(const BoolGate& g, std::size_t position, std::size_t input_bits) {
    auto ref = [position](std::size_t r) {
        if (r >= position)
            throw ValidationError("boolean gate " + std::to_string(position) + " references non-earlier gate " +
                                  std::to_string(r));
    };
    std::visit(overloaded{
                   [&](const bgate::Input& in) {
                       if (in.bit >= input_bits)
                           throw ValidationError("boolean gate " + std::to_string(position) + " reads bit " +
                                                 std::to_string(in.bit) + " of " + std::to_string(input_bits));
                   },
                   [](const bgate::Const&) {},
                   [&](const bgate::And& a) {
                       ref(a.lhs);
                       ref(a.rhs);
                   },
                   [&](const bgate::Or& a) {
                       ref(a.lhs);
                       ref(a.rhs);
                   },
                   [&](const bgate::Not& a) { ref(a.arg); },
               },
               g);
}

void require_bits(const Grid& g, std::size_t max_bits) {
    if (g.input_bits() > max_bits)
        throw CapacityError("grid with " + std::to_string(g.input_bits()) + " input bits exceeds the exhaustive cap of " +
                            std::to_string(max_bits));
}

} // namespace

Grid::Grid(std::size_t k_, std::size_t n_) : k(k_), n(n_) {
    if (k < 1 || n < 1)
        throw ValidationError("grid needs k >= 1 and n >= 1");
    if (k * n > 62)
        throw ValidationError("grid too large to index");
}

bool Grid::contains(const GridPoint& p) const {
    if (p.size() != k)
        return false;
    return std::all_of(p.begin(), p.end(), [this](std::int64_t v) { return v >= 0 && v <= top(); });
}

bool Grid::on_boundary(const GridPoint& p) const {
    return std::any_of(p.begin(), p.end(), [this](std::int64_t v) { return v == 0 || v == top(); });
}

GridPoint Grid::point(std::uint64_t index) const {
    GridPoint p(k);
    for (std::size_t i = k; i-- > 0;) {
        p[i] = static_cast<std::int64_t>(index & static_cast<std::uint64_t>(top()));
        index >>= n;
    }
    return p;
}

BoolCircuit::BoolCircuit(std::size_t k, std::size_t n, std::vector<BoolGate> gates, std::vector<std::size_t> outputs)
    : k_(k), n_(n), gates_(std::move(gates)), outputs_(std::move(outputs)) {
    if (k_ < 1 || n_ < 1)
        throw ValidationError("boolean circuit needs k >= 1 and n >= 1");
    for (std::size_t i = 0; i < gates_.size(); ++i)
        check_gate(gates_[i], i, input_bits());
    if (outputs_.size() != 2 * k_)
        throw ValidationError("boolean circuit needs exactly 2k = " + std::to_string(2 * k_) + " outputs");
    for (auto o : outputs_)
        if (o >= gates_.size())
            throw ValidationError("boolean output reference out of range");
}

std::size_t BoolCircuitBuilder::push(BoolGate g) {
    check_gate(g, gates_.size(), k_ * n_);
    gates_.push_back(g);
    return gates_.size() - 1;
}

std::size_t BoolCircuitBuilder::input(std::size_t bit) { return push(bgate::Input{bit}); }
std::size_t BoolCircuitBuilder::constant(bool v) { return push(bgate::Const{v}); }
std::size_t BoolCircuitBuilder::land(std::size_t a, std::size_t b) { return push(bgate::And{a, b}); }
std::size_t BoolCircuitBuilder::lor(std::size_t a, std::size_t b) { return push(bgate::Or{a, b}); }
std::size_t BoolCircuitBuilder::lnot(std::size_t a) { return push(bgate::Not{a}); }

std::size_t BoolCircuitBuilder::any(const std::vector<std::size_t>& xs) {
    if (xs.empty())
        return constant(false);
    std::size_t acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i)
        acc = lor(acc, xs[i]);
    return acc;
}

std::size_t BoolCircuitBuilder::all(const std::vector<std::size_t>& xs) {
    if (xs.empty())
        return constant(true);
    std::size_t acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i)
        acc = land(acc, xs[i]);
    return acc;
}

BoolCircuit BoolCircuitBuilder::build(std::vector<std::size_t> outputs) && {
    return BoolCircuit(k_, n_, std::move(gates_), std::move(outputs));
}

std::vector<bool> encode_point(const GridPoint& p, std::size_t n) {
    std::vector<bool> bits;
    bits.reserve(p.size() * n);
    for (auto v : p)
        for (std::size_t b = n; b-- > 0;)
            bits.push_back(((v >> b) & 1) != 0);
    return bits;
}

std::vector<bool> eval_bool(const BoolCircuit& cb, const GridPoint& p) {
    Grid g(cb.k(), cb.n());
    if (!g.contains(p))
        throw ValidationError("point " + describe(p) + " is outside the grid");
    const auto in = encode_point(p, cb.n());
    std::vector<bool> v;
    v.reserve(cb.gates().size());
    for (const auto& gate : cb.gates()) {
        v.push_back(std::visit(overloaded{
                                   [&](const bgate::Input& x) -> bool { return in[x.bit]; },
                                   [](const bgate::Const& x) -> bool { return x.value; },
                                   [&](const bgate::And& x) -> bool { return v[x.lhs] && v[x.rhs]; },
                                   [&](const bgate::Or& x) -> bool { return v[x.lhs] || v[x.rhs]; },
                                   [&](const bgate::Not& x) -> bool { return !v[x.arg]; },
                               },
                               gate));
    }
    std::vector<bool> out;
    out.reserve(cb.outputs().size());
    for (auto o : cb.outputs())
        out.push_back(v[o]);
    return out;
}

Color decode_case(const std::vector<bool>& bits) {
    if (bits.empty() || bits.size() % 2 != 0)
        throw ValidationError("output bit vector must have even, nonzero length");
    const std::size_t k = bits.size() / 2;
    bool case0 = true;
    for (std::size_t i = 0; i < k; ++i)
        case0 = case0 && !bits[2 * i] && bits[2 * i + 1];
    if (case0)
        return 0;
    std::size_t set = 0;
    std::size_t which = 0;
    for (std::size_t j = 0; j < bits.size(); ++j)
        if (bits[j]) {
            ++set;
            which = j;
        }
    if (set == 1 && which % 2 == 0)
        return which / 2 + 1;
    std::string pattern;
    for (bool b : bits)
        pattern += b ? '1' : '0';
    throw IllegalPattern("output bits " + pattern + " match no case");
}

std::vector<bool> encode_case(Color c, std::size_t k) {
    if (c > k)
        throw ValidationError("color out of range");
    std::vector<bool> bits(2 * k, false);
    if (c == 0) {
        for (std::size_t i = 0; i < k; ++i)
            bits[2 * i + 1] = true;
    } else {
        bits[2 * (c - 1)] = true;
    }
    return bits;
}

Color boundary_color(const GridPoint& p) {
    Color c = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] == 0)
            c = i + 1;
    return c;
}

Color color(const BoolCircuit& cb, const GridPoint& p) { return decode_case(eval_bool(cb, p)); }

std::vector<int> increment(Color c, std::size_t k) {
    if (c > k)
        throw ValidationError("color out of range");
    if (c == 0)
        return std::vector<int>(k, -1);
    std::vector<int> e(k, 0);
    e[c - 1] = 1;
    return e;
}

GridPoint discrete_map(const BoolCircuit& cb, const GridPoint& p) {
    const auto e = increment(color(cb, p), cb.k());
    GridPoint q = p;
    for (std::size_t i = 0; i < q.size(); ++i)
        q[i] += e[i];
    if (!Grid(cb.k(), cb.n()).contains(q))
        throw ValidationError("discrete map sends " + describe(p) + " outside the grid; circuit is invalid");
    return q;
}

ValidityReport validate_circuit(const BoolCircuit& cb, const Grid& g, std::size_t max_bits) {
    if (cb.k() != g.k || cb.n() != g.n)
        throw ValidationError("circuit dimensions do not match the grid");
    require_bits(g, max_bits);
    ValidityReport report;
    for (std::uint64_t idx = 0; idx < g.point_count(); ++idx) {
        GridPoint p = g.point(idx);
        Color c;
        try {
            c = color(cb, p);
        } catch (const IllegalPattern& e) {
            report.violations.push_back({p, e.what()});
            continue;
        }
        if (g.on_boundary(p)) {
            Color want = boundary_color(p);
            if (c != want)
                report.violations.push_back({p, "boundary rule requires color " + std::to_string(want) + ", got " +
                                                    std::to_string(c)});
        }
    }
    report.valid = report.violations.empty();
    return report;
}

bool is_panchromatic_simplex(const std::vector<GridPoint>& points, const Coloring& g, const Grid& grid) {
    if (points.size() != grid.k + 1)
        return false;
    std::set<GridPoint> distinct(points.begin(), points.end());
    if (distinct.size() != points.size())
        return false;
    for (const auto& p : points)
        if (!grid.contains(p))
            return false;
    for (std::size_t i = 0; i < grid.k; ++i) {
        auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                            [i](const GridPoint& a, const GridPoint& b) { return a[i] < b[i]; });
        if ((*hi)[i] - (*lo)[i] > 1)
            return false;
    }
    std::vector<bool> seen(grid.k + 1, false);
    for (const auto& p : points) {
        Color c = g(p);
        if (c > grid.k || seen[c])
            return false;
        seen[c] = true;
    }
    return true;
}

Fixtures brute_force_fixtures(const Coloring& g, const Grid& grid, std::size_t max_bits) {
    require_bits(grid, max_bits);
    const std::size_t corners = std::size_t{1} << grid.k;
    std::vector<Color> colors(grid.point_count());
    for (std::uint64_t idx = 0; idx < grid.point_count(); ++idx)
        colors[idx] = g(grid.point(idx));
    auto index_of = [&grid](const GridPoint& p) {
        std::uint64_t idx = 0;
        for (auto v : p)
            idx = (idx << grid.n) | static_cast<std::uint64_t>(v);
        return idx;
    };

    Fixtures out;
    std::set<std::vector<GridPoint>> simplices;
    for (std::uint64_t idx = 0; idx < grid.point_count(); ++idx) {
        GridPoint p = grid.point(idx);
        if (std::any_of(p.begin(), p.end(), [&grid](std::int64_t v) { return v >= grid.top(); }))
            continue;
        std::vector<GridPoint> verts;
        std::vector<Color> vc;
        for (std::size_t mask = 0; mask < corners; ++mask) {
            GridPoint q = p;
            for (std::size_t i = 0; i < grid.k; ++i)
                if (mask >> (grid.k - 1 - i) & 1)
                    q[i] += 1;
            vc.push_back(colors[index_of(q)]);
            verts.push_back(std::move(q));
        }
        std::vector<bool> seen(grid.k + 1, false);
        for (Color c : vc)
            if (c <= grid.k)
                seen[c] = true;
        if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
            continue;
        out.panchromatic_cubes.push_back(p);

        // Choose one vertex per color: a (k+1)-subset with all colors.
        std::vector<std::vector<std::size_t>> by_color(grid.k + 1);
        for (std::size_t v = 0; v < verts.size(); ++v)
            by_color[vc[v]].push_back(v);
        std::vector<std::size_t> pick(grid.k + 1, 0);
        while (true) {
            std::vector<GridPoint> s;
            for (std::size_t c = 0; c <= grid.k; ++c)
                s.push_back(verts[by_color[c][pick[c]]]);
            std::sort(s.begin(), s.end());
            simplices.insert(std::move(s));
            std::size_t c = 0;
            while (c <= grid.k && ++pick[c] == by_color[c].size()) {
                pick[c] = 0;
                ++c;
            }
            if (c > grid.k)
                break;
        }
    }
    out.panchromatic_simplices.assign(simplices.begin(), simplices.end());
    return out;
}

Fixtures brute_force_fixtures(const BoolCircuit& cb, const Grid& grid, std::size_t max_bits) {
    auto report = validate_circuit(cb, grid, max_bits);
    if (!report.valid)
        throw ValidationError("circuit is not a valid Brouwer-mapping circuit (" +
                              std::to_string(report.violations.size()) + " violating points)");
    return brute_force_fixtures([&cb](const GridPoint& p) { return color(cb, p); }, grid, max_bits);
}

ExampleInstance make_example_coloring(const Grid& g) {
    BoolCircuitBuilder b(g.k, g.n);
    std::vector<std::size_t> is_zero(g.k), is_top(g.k), is_low(g.k);
    for (std::size_t i = 0; i < g.k; ++i) {
        std::vector<std::size_t> bits;
        std::vector<std::size_t> neg;
        for (std::size_t j = 0; j < g.n; ++j) {
            bits.push_back(b.input(i * g.n + j));
            neg.push_back(b.lnot(bits.back()));
        }
        is_zero[i] = b.all(neg);
        is_top[i] = b.all(bits);
        is_low[i] = neg.front(); // most-significant bit clear
    }
    const std::size_t any_zero = b.any(is_zero);
    const std::size_t any_top = b.any(is_top);
    const std::size_t interior = b.lnot(b.lor(any_zero, any_top));

    // sel[i]: pred[i] holds and pred[j] fails for every j > i.
    auto last_true = [&b, &g](const std::vector<std::size_t>& pred) {
        std::vector<std::size_t> sel(g.k);
        for (std::size_t i = 0; i < g.k; ++i) {
            std::vector<std::size_t> later;
            for (std::size_t j = i + 1; j < g.k; ++j)
                later.push_back(pred[j]);
            sel[i] = b.land(pred[i], b.lnot(b.any(later)));
        }
        return sel;
    };
    const auto zero_sel = last_true(is_zero);
    const auto low_sel = last_true(is_low);

    std::vector<std::size_t> chosen(g.k);
    for (std::size_t i = 0; i < g.k; ++i)
        chosen[i] = b.lor(zero_sel[i], b.land(interior, low_sel[i]));
    const std::size_t color0 = b.lnot(b.any(chosen));

    std::vector<std::size_t> outputs;
    for (std::size_t i = 0; i < g.k; ++i) {
        outputs.push_back(chosen[i]);
        outputs.push_back(color0);
    }
    BoolCircuit circuit = std::move(b).build(std::move(outputs));

    auto fixtures = brute_force_fixtures(circuit, g);
    if (fixtures.panchromatic_cubes.empty())
        throw LemmaViolation("example coloring has no panchromatic cube");
    return ExampleInstance{g, std::move(circuit), fixtures.panchromatic_cubes.front()};
}

} // namespace nashforge
