#include <nashforge/json_io.hpp>

#include <nashforge/error.hpp>

#include <fstream>
#include <sstream>

namespace nashforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw ParseError(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

std::size_t index_field(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ParseError(std::string("field \"") + key + "\" must be a nonnegative integer");
    return v.get<std::size_t>();
}

std::vector<std::size_t> index_list(const Json& j) {
    if (!j.is_array())
        throw ParseError("expected an array of indices");
    std::vector<std::size_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ParseError("expected a nonnegative integer index");
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

void check_schema(const Json& j) {
    if (j.is_object() && j.contains("schema") && j.at("schema") != schema_tag)
        throw ParseError("unsupported schema " + j.at("schema").dump());
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
}

std::string lcp_kind_name(LcpKind k) {
    switch (k) {
    case LcpKind::lcp_c:
        return "lcp_c";
    case LcpKind::direct:
        return "direct";
    case LcpKind::generic:
        return "generic";
    }
    return "generic";
}

GameKind kind_from_name(const std::string& s) {
    if (s == "rank_k_plus_1")
        return GameKind::rank_k_plus_1;
    if (s == "symmetric")
        return GameKind::symmetric;
    if (s == "imitation")
        return GameKind::imitation;
    if (s == "generic")
        return GameKind::generic;
    throw ParseError("unknown game kind \"" + s + "\"");
}

Json meta_json(const GameMeta& meta) {
    return Json{{"m", meta.m},
                {"k", meta.k},
                {"c", to_json(meta.c)},
                {"output_rows", meta.output_rows},
                {"kind", kind_name(meta.kind)}};
}

Json lambda_json(const Vector& first, const GameMeta& meta) {
    if (meta.output_rows.empty() || first.size() != meta.m + 1 || first.back().is_zero())
        return nullptr;
    return to_json(game_to_fixed_point(first, meta));
}

} // namespace

Json to_json(const Rational& r) { return r.str(); }

Rational rational_from_json(const Json& j) {
    if (j.is_string())
        return Rational::parse(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(static_cast<long>(j.get<long long>()));
    throw ParseError("expected a rational \"p/q\", got " + j.dump());
}

Json to_json(const Vector& v) {
    Json a = Json::array();
    for (const auto& x : v)
        a.push_back(to_json(x));
    return a;
}

Vector vector_from_json(const Json& j) {
    if (!j.is_array())
        throw ParseError("expected an array of rationals");
    Vector v;
    for (const auto& x : j)
        v.push_back(rational_from_json(x));
    return v;
}

Json to_json(const Matrix& m) {
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        a.push_back(to_json(m.row(i)));
    return a;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array())
        throw ParseError("expected a matrix as an array of rows");
    std::vector<Vector> rows;
    for (const auto& r : j)
        rows.push_back(vector_from_json(r));
    try {
        return Matrix::from_rows(rows);
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
}

Json to_json(const FixpCircuit& c) {
    Json gates = Json::array();
    for (const auto& g : c.gates()) {
        gates.push_back(std::visit(overloaded{
                                       [](const gate::Input& x) { return Json{{"op", "input"}, {"i", x.index}}; },
                                       [](const gate::Const& x) { return Json{{"op", "const"}, {"v", x.value.str()}}; },
                                       [](const gate::Add& x) { return Json{{"op", "add"}, {"a", x.lhs}, {"b", x.rhs}}; },
                                       [](const gate::MulC& x) {
                                           return Json{{"op", "mulc"}, {"c", x.coeff.str()}, {"a", x.arg}};
                                       },
                                       [](const gate::Max& x) { return Json{{"op", "max"}, {"a", x.lhs}, {"b", x.rhs}}; },
                                   },
                                   g));
    }
    Json clamps = Json::array();
    for (const auto& cp : c.meta().clamps)
        clamps.push_back(Json::array({cp.inner, cp.outer}));
    return Json{{"schema", schema_tag},
                {"k", c.k()},
                {"gates", std::move(gates)},
                {"outputs", c.outputs()},
                {"meta",
                 {{"max_zero_normalized", c.meta().max_zero_normalized},
                  {"outputs_clamped", c.meta().outputs_clamped},
                  {"clamps", std::move(clamps)}}}};
}

FixpCircuit circuit_from_json(const Json& j) {
    return guarded([&] {
        check_schema(j);
        const std::size_t k = index_field(j, "k");
        std::vector<Gate> gates;
        for (const auto& g : field(j, "gates")) {
            const std::string op = field(g, "op").get<std::string>();
            if (op == "input")
                gates.push_back(gate::Input{index_field(g, "i")});
            else if (op == "const")
                gates.push_back(gate::Const{rational_from_json(field(g, "v"))});
            else if (op == "add")
                gates.push_back(gate::Add{index_field(g, "a"), index_field(g, "b")});
            else if (op == "mulc")
                gates.push_back(gate::MulC{rational_from_json(field(g, "c")), index_field(g, "a")});
            else if (op == "max")
                gates.push_back(gate::Max{index_field(g, "a"), index_field(g, "b")});
            else
                throw ParseError("unknown gate op \"" + op + "\"");
        }
        CircuitMeta meta;
        if (j.contains("meta")) {
            const Json& m = j.at("meta");
            meta.max_zero_normalized = m.value("max_zero_normalized", false);
            meta.outputs_clamped = m.value("outputs_clamped", false);
            if (m.contains("clamps"))
                for (const auto& cp : m.at("clamps")) {
                    const auto pair = index_list(cp);
                    if (pair.size() != 2)
                        throw ParseError("clamp entries are [inner, outer] pairs");
                    meta.clamps.push_back({pair[0], pair[1]});
                }
        }
        return FixpCircuit(k, std::move(gates), index_list(field(j, "outputs")), std::move(meta));
    });
}

Json to_json(const BoolCircuit& c) {
    Json gates = Json::array();
    for (const auto& g : c.gates()) {
        gates.push_back(std::visit(overloaded{
                                       [](const bgate::Input& x) { return Json{{"op", "input"}, {"i", x.bit}}; },
                                       [](const bgate::Const& x) { return Json{{"op", "const"}, {"v", x.value}}; },
                                       [](const bgate::And& x) { return Json{{"op", "and"}, {"a", x.lhs}, {"b", x.rhs}}; },
                                       [](const bgate::Or& x) { return Json{{"op", "or"}, {"a", x.lhs}, {"b", x.rhs}}; },
                                       [](const bgate::Not& x) { return Json{{"op", "not"}, {"a", x.arg}}; },
                                   },
                                   g));
    }
    return Json{{"schema", schema_tag}, {"k", c.k()}, {"n", c.n()}, {"gates", std::move(gates)}, {"outputs", c.outputs()}};
}

BoolCircuit bool_circuit_from_json(const Json& j) {
    return guarded([&] {
        check_schema(j);
        std::vector<BoolGate> gates;
        for (const auto& g : field(j, "gates")) {
            const std::string op = field(g, "op").get<std::string>();
            if (op == "input") {
                gates.push_back(bgate::Input{index_field(g, "i")});
            } else if (op == "const") {
                const Json& v = field(g, "v");
                if (v.is_boolean())
                    gates.push_back(bgate::Const{v.get<bool>()});
                else if (v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1))
                    gates.push_back(bgate::Const{v.get<int>() == 1});
                else
                    throw ParseError("boolean constant must be true/false or 0/1");
            } else if (op == "and") {
                gates.push_back(bgate::And{index_field(g, "a"), index_field(g, "b")});
            } else if (op == "or") {
                gates.push_back(bgate::Or{index_field(g, "a"), index_field(g, "b")});
            } else if (op == "not") {
                gates.push_back(bgate::Not{index_field(g, "a")});
            } else {
                throw ParseError("unknown boolean gate op \"" + op + "\"");
            }
        }
        return BoolCircuit(index_field(j, "k"), index_field(j, "n"), std::move(gates),
                           index_list(field(j, "outputs")));
    });
}

Json compile_meta_json(const CompiledFunction& cf) {
    return Json{{"schema", schema_tag},
                {"source_grid", {{"k", cf.grid.k}, {"n", cf.grid.n}}},
                {"L", cf.params.L},
                {"sample_count", cf.params.sample_count},
                {"shrunk", cf.shrunk},
                {"source_circuit", to_json(cf.source)}};
}

CompileMeta compile_meta_from_json(const Json& j) {
    return guarded([&] {
        check_schema(j);
        const Json& g = field(j, "source_grid");
        Grid grid(index_field(g, "k"), index_field(g, "n"));
        SamplingParams params{field(j, "L").get<std::int64_t>(), index_field(j, "sample_count")};
        return CompileMeta{grid, params, field(j, "shrunk").get<bool>(),
                           bool_circuit_from_json(field(j, "source_circuit"))};
    });
}

Json to_json(const ParamLP& p) {
    return Json{{"schema", schema_tag},   {"m", p.m},           {"k", p.k},
                {"n", p.n},               {"A", to_json(p.A)},  {"b", to_json(p.b)},
                {"U", to_json(p.U)},      {"c", to_json(p.c)},  {"beta", to_json(p.beta)},
                {"output_rows", p.output_rows}};
}

ParamLP lp_from_json(const Json& j) {
    return guarded([&] {
        check_schema(j);
        ParamLP p;
        p.m = index_field(j, "m");
        p.k = index_field(j, "k");
        p.n = index_field(j, "n");
        p.A = matrix_from_json(field(j, "A"));
        p.b = vector_from_json(field(j, "b"));
        p.U = matrix_from_json(field(j, "U"));
        p.c = vector_from_json(field(j, "c"));
        p.beta = vector_from_json(field(j, "beta"));
        p.output_rows = index_list(field(j, "output_rows"));
        if (p.A.rows() != p.m || p.A.cols() != p.m || p.b.size() != p.m || p.U.rows() != p.m ||
            (p.k > 0 && p.U.cols() != p.k) || p.c.size() != p.m || p.beta.size() != p.m ||
            p.output_rows.size() != p.k || p.n + 2 * p.k != p.m)
            throw ParseError("LP fields have inconsistent dimensions");
        for (auto r : p.output_rows)
            if (r >= p.m)
                throw ParseError("output row out of range");
        return p;
    });
}

Json to_json(const LcpInstance& lcp) {
    return Json{{"schema", schema_tag}, {"kind", lcp_kind_name(lcp.kind)}, {"M", to_json(lcp.M)}, {"q", to_json(lcp.q)}};
}

LcpInstance lcp_from_json(const Json& j) {
    return guarded([&] {
        check_schema(j);
        LcpInstance lcp;
        const std::string kind = j.value("kind", "generic");
        lcp.kind = kind == "lcp_c" ? LcpKind::lcp_c : kind == "direct" ? LcpKind::direct : LcpKind::generic;
        lcp.M = matrix_from_json(field(j, "M"));
        lcp.q = vector_from_json(field(j, "q"));
        if (!lcp.M.square() || lcp.M.rows() != lcp.q.size())
            throw ParseError("LCP fields have inconsistent dimensions");
        return lcp;
    });
}

std::string kind_name(GameKind kind) {
    switch (kind) {
    case GameKind::rank_k_plus_1:
        return "rank_k_plus_1";
    case GameKind::symmetric:
        return "symmetric";
    case GameKind::imitation:
        return "imitation";
    case GameKind::generic:
        return "generic";
    }
    return "generic";
}

Json to_json(const BimatrixGame& g) {
    return Json{{"schema", schema_tag}, {"rows", g.A.rows()},   {"cols", g.A.cols()},
                {"A", to_json(g.A)},    {"B", to_json(g.B)},     {"meta", meta_json(g.meta)}};
}

Json to_json(const SymmetricGame& g) {
    return to_json(BimatrixGame{g.S, g.S.transpose(), g.meta});
}

BimatrixGame game_from_json(const Json& j) {
    return guarded([&] {
        check_schema(j);
        BimatrixGame g;
        g.A = matrix_from_json(field(j, "A"));
        g.B = matrix_from_json(field(j, "B"));
        if (g.A.rows() != index_field(j, "rows") || g.A.cols() != index_field(j, "cols") || g.B.rows() != g.A.rows() ||
            g.B.cols() != g.A.cols())
            throw ParseError("game matrices do not match the declared shape");
        if (j.contains("meta")) {
            const Json& m = j.at("meta");
            g.meta.m = index_field(m, "m");
            g.meta.k = index_field(m, "k");
            g.meta.c = vector_from_json(field(m, "c"));
            g.meta.output_rows = index_list(field(m, "output_rows"));
            g.meta.kind = kind_from_name(field(m, "kind").get<std::string>());
            for (auto r : g.meta.output_rows)
                if (r >= g.meta.m || (!g.meta.c.empty() && r >= g.meta.c.size()))
                    throw ParseError("output row out of range");
        }
        return g;
    });
}

Json ne_entry(const NeCertificate& cert, const GameMeta& meta) {
    const Vector& x = cert.profile.x;
    const Vector& y = cert.profile.y;
    return Json{{"x", to_json(Vector(x.begin(), x.end() - 1))},
                {"s", to_json(x.back())},
                {"y", to_json(Vector(y.begin(), y.end() - 1))},
                {"t", to_json(y.back())},
                {"pi1", to_json(cert.pi1)},
                {"pi2", to_json(cert.pi2)},
                {"lambda", lambda_json(x, meta)}};
}

Json symmetric_ne_entry(const Matrix& S, const Vector& z, const GameMeta& meta) {
    const Rational pi = dot(z, S * z);
    const Vector head(z.begin(), z.end() - 1);
    return Json{{"x", to_json(head)},  {"s", to_json(z.back())}, {"y", to_json(head)},
                {"t", to_json(z.back())}, {"pi1", to_json(pi)},  {"pi2", to_json(pi)},
                {"lambda", lambda_json(z, meta)}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace nashforge
