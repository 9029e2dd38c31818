#include <nashforge/commands.hpp>

#include <nashforge/error.hpp>

#include <algorithm>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

namespace nashforge {

namespace {

constexpr std::size_t max_listed = 20;

Json point_json(const GridPoint& p) { return Json(p); }

Rational random_rational(std::mt19937_64& rng, long lo, long hi, long max_den) {
    std::uniform_int_distribution<long> den(1, max_den);
    const long q = den(rng);
    std::uniform_int_distribution<long> num(lo * q, hi * q);
    return Rational(num(rng), q);
}

/// Mostly inside [0,1]^k, sometimes outside.
Vector random_lambda(std::mt19937_64& rng, std::size_t k) {
    std::bernoulli_distribution outside(0.25);
    Vector v;
    for (std::size_t i = 0; i < k; ++i)
        v.push_back(outside(rng) ? random_rational(rng, -2, 3, 8) : random_rational(rng, 0, 1, 16));
    return v;
}

Json lambda_set_json(const std::set<Vector>& s) {
    Json a = Json::array();
    for (const auto& v : s)
        a.push_back(to_json(v));
    return a;
}

bool same_game(const BimatrixGame& a, const BimatrixGame& b) { return a.A == b.A && a.B == b.B; }

std::string game_flavor(const Json& j) {
    if (j.contains("gates"))
        return "circuit";
    if (j.contains("A") && j.contains("B"))
        return "game";
    throw ParseError("input is neither a circuit nor a game");
}

MixedProfile profile_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("x") || !j.contains("y"))
        throw ParseError("profile needs fields \"x\" and \"y\"");
    MixedProfile p{vector_from_json(j.at("x")), vector_from_json(j.at("y"))};
    if (j.contains("s"))
        p.x.push_back(rational_from_json(j.at("s")));
    if (j.contains("t"))
        p.y.push_back(rational_from_json(j.at("t")));
    return p;
}

bool is_symmetric_input(const BimatrixGame& g) {
    return g.meta.kind == GameKind::symmetric && g.A.square() && g.B == g.A.transpose();
}

/// Structural facts of a rank-(k+1) game. They are lemmas for a game the
/// pipeline built and input checks for a game read from disk.
void structure_checks(Report& r, const BimatrixGame& g, bool lemma) {
    const bool tri = g.A.square() && is_upper_triangular(g.A);
    r.add("upper_triangular", tri, lemma);
    const std::size_t rk = rank(g.A + g.B);
    r.add("rank_bound", rk <= g.meta.k + 1, lemma, Json{{"rank", rk}, {"bound", g.meta.k + 1}});
    const SymmetricGame s = symmetrize(g.A, g.B);
    const std::size_t srk = rank(s.S + s.S.transpose());
    r.add("symmetrized_rank_bound", srk <= 2 * (g.meta.k + 1), lemma,
          Json{{"rank", srk}, {"bound", 2 * (g.meta.k + 1)}});
}

/// Equilibria of a rank-(k+1) game: best-response conditions, s, t > 0, the
/// LCP_C correspondence and, given the source circuit, fixed points.
std::set<Vector> bimatrix_roundtrip(Report& r, const BimatrixGame& g, const Pipeline* p, std::size_t cap) {
    const NeEnumeration en = enumerate_ne(g, cap);
    Json eqs = Json::array();
    bool conditions = true;
    bool positive = true;
    bool lcp_ok = true;
    bool fixed_ok = true;
    Json witness = nullptr;
    std::set<Vector> lambdas;
    const LcpInstance lcp = p ? build_lcp_C(p->ns) : LcpInstance{};
    for (const auto& cert : en.equilibria) {
        eqs.push_back(ne_entry(cert, g.meta));
        if (!check_ne(g, cert.profile)) {
            conditions = false;
            continue;
        }
        if (cert.profile.x.back().is_zero() || cert.profile.y.back().is_zero()) {
            positive = false;
            if (witness.is_null())
                witness = Json{{"x", to_json(cert.profile.x)}, {"y", to_json(cert.profile.y)}};
            continue;
        }
        if (g.meta.output_rows.empty() || cert.profile.x.size() != g.meta.m + 1)
            continue;
        const Vector lambda = game_to_fixed_point(cert.profile.x, g.meta);
        lambdas.insert(lambda);
        if (p) {
            auto [x, y] = ne_to_lcp(cert.profile);
            Vector z = x;
            z.insert(z.end(), y.begin(), y.end());
            lcp_ok = lcp_ok && is_lcp_solution(lcp, z);
            bool in_box = std::all_of(lambda.begin(), lambda.end(),
                                      [](const Rational& v) { return v.sign() >= 0 && v <= Rational(1); });
            fixed_ok = fixed_ok && in_box && check_fixed_point(p->prepared, lambda);
        }
    }
    r.set("equilibria", std::move(eqs));
    r.set("degenerate", en.degenerate);
    r.add("ne_conditions", conditions, true);
    r.add("s_t_positive", positive, p != nullptr, witness);
    if (p) {
        r.add("lcp_correspondence", lcp_ok, true);
        r.add("fixed_points", fixed_ok, true, Json{{"lambda", lambda_set_json(lambdas)}});
    }
    return lambdas;
}

std::set<Vector> symmetric_roundtrip(Report& r, const Matrix& S, const GameMeta& meta, const Pipeline* p,
                                     std::size_t cap) {
    const SymmetricEnumeration en = enumerate_symmetric_ne(S, cap);
    Json eqs = Json::array();
    bool conditions = true;
    bool positive = true;
    bool lcp_ok = true;
    bool fixed_ok = true;
    std::set<Vector> lambdas;
    const LcpInstance lcp = p ? build_direct_lcp(p->lp) : LcpInstance{};
    for (const auto& z : en.equilibria) {
        eqs.push_back(symmetric_ne_entry(S, z, meta));
        if (!check_symmetric_ne(S, z)) {
            conditions = false;
            continue;
        }
        if (z.back().is_zero()) {
            positive = false;
            continue;
        }
        if (meta.output_rows.empty() || z.size() != meta.m + 1)
            continue;
        const Vector lambda = game_to_fixed_point(z, meta);
        lambdas.insert(lambda);
        if (p) {
            lcp_ok = lcp_ok && is_lcp_solution(lcp, symne_to_lcp(z));
            fixed_ok = fixed_ok && check_fixed_point(p->prepared, lambda);
        }
    }
    r.set("symmetric_equilibria", std::move(eqs));
    r.set("symmetric_degenerate", en.degenerate);
    r.add("symmetric_ne_conditions", conditions, true);
    r.add("symmetric_t_positive", positive, p != nullptr);
    if (p) {
        r.add("direct_lcp_correspondence", lcp_ok, true);
        r.add("symmetric_fixed_points", fixed_ok, true, Json{{"lambda", lambda_set_json(lambdas)}});
    }

    std::set<Vector> sym(en.equilibria.begin(), en.equilibria.end());
    std::set<Vector> imitation;
    const NeEnumeration im = enumerate_ne(S, Matrix::identity(S.rows()), cap);
    for (const auto& cert : im.equilibria)
        imitation.insert(cert.profile.y);
    r.add("imitation_agreement", sym == imitation, true,
          Json{{"symmetric", sym.size()}, {"imitation", imitation.size()}});
    return lambdas;
}

void profile_check(Report& r, const BimatrixGame& g, const std::string& path) {
    const MixedProfile prof = profile_from_json(read_json_file(path));
    std::vector<std::string> v;
    if (is_symmetric_input(g) && prof.x == prof.y)
        v = symmetric_ne_violations(g.A, prof.x);
    else
        v = ne_violations(g.A, g.B, prof);
    r.add("profile_ne", v.empty(), false, Json(v));
}

/// Clamp rows of A (unit entries at the output row and the inner clamp row,
/// no lambda, b = 1), unit costs at outputs, and the unit columns of H and
/// rows of H' at the outputs.
void lp_structure_checks(Report& r, const Pipeline& p) {
    const ParamLP& lp = p.lp;
    r.add("A_unit_lower_triangular", is_unit_lower_triangular(lp.A), true);
    bool p12 = true;
    bool p3 = true;
    bool p4 = true;
    for (auto row : lp.output_rows) {
        p12 = p12 && row >= 1 && lp.b[row] == Rational(1);
        for (std::size_t j = 0; j < lp.m; ++j)
            p12 = p12 && lp.A(row, j) == (j == row || j + 1 == row ? Rational(1) : Rational(0));
        for (std::size_t l = 0; l < lp.k; ++l)
            p12 = p12 && lp.U(row, l).is_zero();
        p3 = p3 && lp.c[row] == Rational(1);
        if (!p12)
            continue;
        for (std::size_t i = 0; i < lp.m; ++i) {
            p4 = p4 && p.ns.H(i, row) == (i == row ? Rational(1) : Rational(0));
            const Rational want = i == row ? Rational(1) : i + 1 == row ? Rational(1) / lp.c[row - 1] : Rational(0);
            p4 = p4 && p.ns.Hp(row, i) == want;
        }
    }
    r.add("P1_P2_clamp_rows", p12, true);
    r.add("P3_unit_cost_outputs", p3, true);
    r.add("P4_normalized_structure", p4, true);
}

void lemma_checks(Report& r, const Pipeline& p, std::uint64_t seed, std::size_t trials, std::size_t sm_trials) {
    const ParamLP& lp = p.lp;
    lp_structure_checks(r, p);
    bool positive = lp.c.back() == Rational(1) && lp.beta.back() == Rational(1);
    for (std::size_t i = 0; i < lp.m; ++i)
        positive = positive && lp.c[i] >= Rational(1) && lp.beta[i] >= lp.c[i];
    r.add("cost_positive", positive, true);
    r.add("lp_size_budget", lp_bit_size(lp) <= lp_size_budget(p.prepared), true,
          Json{{"bits", lp_bit_size(lp)}, {"budget", lp_size_budget(p.prepared)}});

    std::mt19937_64 rng(seed);
    Json kkt_witness = nullptr;
    for (std::size_t t = 0; t < trials && kkt_witness.is_null(); ++t) {
        const Vector lambda = random_lambda(rng, lp.k);
        const Vector x = solve_lp(lp, lambda);
        const Vector y = construct_dual(lp, lambda, x);
        auto v = kkt_violations(lp, lambda, x, y);
        for (std::size_t i = 0; i < lp.m; ++i)
            if (y[i] > lp.beta[i])
                v.push_back("y[" + std::to_string(i) + "] exceeds beta");
        const Trace tr = p.prepared.trace(lambda);
        for (std::size_t i = 0; i < lp.m; ++i)
            if (x[i] != tr.values[lp.gate_of_row[i]])
                v.push_back("x[" + std::to_string(i) + "] differs from the circuit trace");
        if (!v.empty())
            kkt_witness = Json{{"lambda", to_json(lambda)}, {"violations", v}};
    }
    r.add("kkt", kkt_witness.is_null(), true, kkt_witness);

    const std::size_t dim = 2 * lp.m;
    std::size_t alarms = 0;
    std::uniform_int_distribution<long> small(0, 4);
    std::uniform_int_distribution<long> den(1, 4);
    std::uniform_int_distribution<long> pos(1, 8);
    for (std::size_t t = 0; t < sm_trials; ++t) {
        Vector z(dim);
        bool nonzero = false;
        for (auto& v : z) {
            v = Rational(small(rng), den(rng));
            nonzero = nonzero || !v.is_zero();
        }
        if (!nonzero)
            z[std::uniform_int_distribution<std::size_t>(0, dim - 1)(rng)] = 1;
        Vector q(dim);
        for (auto& v : q)
            v = Rational(pos(rng), den(rng));
        try {
            semimonotone_witness(p.ns, z, q);
        } catch (const LemmaViolation&) {
            ++alarms;
        }
    }
    r.add("semimonotone", alarms == 0, true, Json{{"trials", sm_trials}, {"alarms", alarms}});
}

CompiledFunction recompile(const CompileMeta& meta) {
    CompiledFunction cf = compile(meta.source, meta.grid, meta.params);
    return meta.shrunk ? shrink_range(cf) : cf;
}

void verify_approx(Report& r, const VerifyOptions& o, const Json& input) {
    if (o.meta.empty())
        throw ValidationError("--mode approx needs --meta");
    const FixpCircuit circuit = circuit_from_json(input);
    const CompiledFunction cf = recompile(compile_meta_from_json(read_json_file(o.meta)));
    r.add("provenance", cf.circuit == circuit, false);
    if (!(cf.circuit == circuit))
        return;

    std::optional<Vector> point;
    if (!o.point.empty())
        point = parse_vector(o.point);
    else
        point = find_approx_fixed_point(cf);
    if (!point) {
        r.add("approx_point", false, false, "no approximate fixed point found; pass --point");
        return;
    }
    const bool approx = check_approx_fixed_point(cf, *point, approx_tolerance(cf));
    r.set("point", to_json(*point));
    r.add("approx_fixed_point", approx, o.point.empty(), Json{{"tolerance", to_json(approx_tolerance(cf))}});
    if (!approx)
        return;

    try {
        const Extraction ex = extract_panchromatic_simplex(*point, cf);
        Json simplex = Json::array();
        for (const auto& q : ex.simplex)
            simplex.push_back(point_json(q));
        r.set("simplex", simplex);
        r.set("poor_samples", ex.poor);
        r.add("simplex_extracted", true, true);
        const Fixtures fx = brute_force_fixtures(cf.source, cf.grid);
        const bool listed = std::binary_search(fx.panchromatic_simplices.begin(), fx.panchromatic_simplices.end(),
                                               ex.simplex);
        r.add("simplex_in_oracle", listed, true);
    } catch (const NotPanchromatic& e) {
        r.add("simplex_extracted", false, true, e.what());
    }
}

} // namespace

FixpCircuit prepare_for_reduction(const FixpCircuit& c) {
    FixpCircuit out = c.meta().outputs_clamped ? c : clamp_outputs(c);
    return out.meta().max_zero_normalized ? out : normalize_max_zero(out);
}

Pipeline build_pipeline(const FixpCircuit& c) {
    FixpCircuit prepared = prepare_for_reduction(c);
    ParamLP lp = build_lp(prepared);
    NormalizedSystem ns = normalize(lp);
    BimatrixGame game = build_game(ns);
    SymmetricGame sym = build_symmetric_game(lp);
    BimatrixGame im = imitation_game(sym);
    return Pipeline{c, std::move(prepared), std::move(lp), std::move(ns), std::move(game), std::move(sym),
                    std::move(im)};
}

void Report::add(std::string name, bool pass, bool lemma, Json detail) {
    checks_.push_back(Check{std::move(name), pass, lemma, std::move(detail)});
}

bool Report::all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

int Report::exit_code() const {
    bool input_fail = false;
    bool lemma_fail = false;
    for (const auto& c : checks_) {
        input_fail = input_fail || (!c.pass && !c.lemma);
        lemma_fail = lemma_fail || (!c.pass && c.lemma);
    }
    if (input_fail)
        return exit_code::invalid_input;
    return lemma_fail ? exit_code::lemma_alarm : exit_code::ok;
}

Json Report::to_json() const {
    Json checks = Json::array();
    for (const auto& c : checks_) {
        Json e{{"name", c.name}, {"status", c.pass ? "PASS" : "FAIL"}, {"kind", c.lemma ? "lemma" : "input"}};
        if (!c.detail.is_null())
            e["detail"] = c.detail;
        checks.push_back(std::move(e));
    }
    Json out{{"schema", schema_tag}, {"command", command_}, {"status", all_pass() ? "PASS" : "FAIL"},
             {"checks", std::move(checks)}};
    for (auto it = extra_.begin(); it != extra_.end(); ++it)
        out[it.key()] = it.value();
    return out;
}

Vector parse_vector(const std::string& text) {
    Vector v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        v.push_back(Rational::parse(item));
    return v;
}

int cmd_compile(const CompileOptions& o, std::ostream& out) {
    const BoolCircuit cb = bool_circuit_from_json(read_json_file(o.input));
    const Grid grid(cb.k(), cb.n());
    Report r("compile");
    const ValidityReport vr = validate_circuit(cb, grid);
    Json listing = Json::array();
    for (std::size_t i = 0; i < vr.violations.size() && i < max_listed; ++i)
        listing.push_back(Json{{"point", point_json(vr.violations[i].point)}, {"reason", vr.violations[i].reason}});
    r.add("valid_brouwer_circuit", vr.valid, false, Json{{"violations", vr.violations.size()}, {"listing", listing}});
    if (!vr.valid) {
        out << r.to_json().dump(2) << '\n';
        return r.exit_code();
    }

    SamplingParams params = SamplingParams::default_params(cb.k());
    if (o.L)
        params.L = *o.L;
    CompiledFunction cf = compile(cb, grid, params);
    if (o.shrink)
        cf = shrink_range(cf);
    write_json_file(o.output, to_json(cf.circuit));
    write_json_file(o.meta_output.empty() ? o.output + ".meta.json" : o.meta_output, compile_meta_json(cf));

    const std::size_t sz = size(cf.circuit);
    const std::size_t budget = compiled_size_budget(cb, grid, params);
    r.set("L", params.L);
    r.set("sample_count", params.sample_count);
    r.set("shrunk", cf.shrunk);
    r.set("gates", cf.circuit.gates().size());
    r.set("max_gates", cf.circuit.max_gates().size());
    r.add("size_budget", sz <= budget, true, Json{{"size", sz}, {"budget", budget}});
    if (o.check_grid) {
        Json witness = nullptr;
        const Rational inv = Rational(1) / cf.scale;
        for (std::uint64_t i = 0; i < grid.point_count() && witness.is_null(); ++i) {
            const GridPoint q = grid.point(i);
            const GridPoint h = discrete_map(cb, q);
            Vector x, want;
            for (std::size_t d = 0; d < grid.k; ++d) {
                x.push_back(Rational(static_cast<long>(q[d])) * inv);
                want.push_back(Rational(static_cast<long>(h[d])) * inv);
            }
            if (cf.circuit.evaluate(x) != want)
                witness = Json{{"point", point_json(q)}};
        }
        r.add("grid_restriction", witness.is_null(), true, witness);
    }
    out << r.to_json().dump(2) << '\n';
    return r.exit_code();
}

int cmd_reduce(const ReduceOptions& o, std::ostream& out) {
    const FixpCircuit c = circuit_from_json(read_json_file(o.input));
    const Pipeline p = build_pipeline(c);
    Report r("reduce");
    r.set("target", o.target);
    r.set("m", p.lp.m);
    r.set("k", p.lp.k);
    lp_structure_checks(r, p);
    structure_checks(r, p.game, true);

    Json artifact;
    if (o.target == "lp")
        artifact = to_json(p.lp);
    else if (o.target == "lcp")
        artifact = to_json(build_lcp_C(p.ns));
    else if (o.target == "direct-lcp")
        artifact = to_json(build_direct_lcp(p.lp));
    else if (o.target == "game")
        artifact = to_json(p.game);
    else if (o.target == "symmetric")
        artifact = to_json(p.symmetric);
    else if (o.target == "imitation")
        artifact = to_json(p.imitation);
    else
        throw ValidationError("unknown target \"" + o.target + "\"");
    write_json_file(o.output, artifact);
    out << r.to_json().dump(2) << '\n';
    return r.exit_code();
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
    const Json input = read_json_file(o.input);
    Report r("verify");
    r.set("mode", o.mode);
    r.set("seed", o.seed);

    if (o.mode == "approx") {
        verify_approx(r, o, input);
        out << r.to_json().dump(2) << '\n';
        return r.exit_code();
    }
    if (o.mode != "roundtrip" && o.mode != "lemmas")
        throw ValidationError("unknown mode \"" + o.mode + "\"");

    std::optional<Pipeline> pipeline;
    std::optional<BimatrixGame> game;
    if (game_flavor(input) == "circuit") {
        pipeline = build_pipeline(circuit_from_json(input));
    } else {
        game = game_from_json(input);
        if (!o.circuit.empty()) {
            pipeline = build_pipeline(circuit_from_json(read_json_file(o.circuit)));
            const BimatrixGame& ref = game->meta.kind == GameKind::symmetric   ? BimatrixGame{pipeline->symmetric.S,
                                                                                            pipeline->symmetric.S.transpose(),
                                                                                            pipeline->symmetric.meta}
                                      : game->meta.kind == GameKind::imitation ? pipeline->imitation
                                                                               : pipeline->game;
            r.add("provenance", same_game(*game, ref), false);
        }
        if (!o.profile.empty())
            profile_check(r, *game, o.profile);
    }
    const Pipeline* p = pipeline ? &*pipeline : nullptr;

    if (o.mode == "lemmas") {
        if (!p)
            throw ValidationError("--mode lemmas needs a circuit (as input or via --circuit)");
        if (game && game->meta.kind == GameKind::rank_k_plus_1)
            structure_checks(r, *game, false);
        structure_checks(r, p->game, true);
        lemma_checks(r, *p, o.seed, o.trials, o.semimonotone_trials);
    } else if (game) {
        const bool source_matches = !p || r.exit_code() == exit_code::ok;
        const Pipeline* trusted = source_matches ? p : nullptr;
        if (is_symmetric_input(*game) || game->meta.kind == GameKind::imitation) {
            const std::set<Vector> ls = symmetric_roundtrip(r, game->A, game->meta, trusted, o.cap);
            r.set("lambda_set", lambda_set_json(ls));
        } else {
            if (game->meta.kind == GameKind::rank_k_plus_1)
                structure_checks(r, *game, false);
            const std::set<Vector> ls = bimatrix_roundtrip(r, *game, trusted, o.cap);
            r.set("lambda_set", lambda_set_json(ls));
        }
    } else {
        const std::set<Vector> a = bimatrix_roundtrip(r, p->game, p, o.cap);
        const std::set<Vector> b = symmetric_roundtrip(r, p->symmetric.S, p->symmetric.meta, p, o.cap);
        r.add("lambda_sets_agree", a == b, true);
        r.set("lambda_set", lambda_set_json(a));
    }
    out << r.to_json().dump(2) << '\n';
    return r.exit_code();
}

int cmd_solve(const SolveOptions& o, std::ostream& out) {
    const BimatrixGame g = game_from_json(read_json_file(o.input));
    Json result{{"schema", schema_tag}, {"method", o.method}};
    Json eqs = Json::array();
    if (o.method == "enumerate") {
        if (o.symmetric) {
            if (!g.A.square() || g.B != g.A.transpose())
                throw ValidationError("--symmetric needs a game of the form (S, S^T)");
            const SymmetricEnumeration en = enumerate_symmetric_ne(g.A, o.cap);
            for (const auto& z : en.equilibria)
                eqs.push_back(symmetric_ne_entry(g.A, z, g.meta));
            result["degenerate"] = en.degenerate;
        } else {
            const NeEnumeration en = enumerate_ne(g, o.cap);
            for (const auto& cert : en.equilibria)
                eqs.push_back(ne_entry(cert, g.meta));
            result["degenerate"] = en.degenerate;
        }
    } else if (o.method == "lh") {
        eqs.push_back(ne_entry(lemke_howson(g, o.label, o.cap), g.meta));
        result["label"] = o.label;
    } else {
        throw ValidationError("unknown method \"" + o.method + "\"");
    }
    result["equilibria"] = std::move(eqs);
    if (o.output.empty())
        out << result.dump(2) << '\n';
    else
        write_json_file(o.output, result);
    return exit_code::ok;
}

int cmd_oracle(const OracleOptions& o, std::ostream& out) {
    std::optional<BoolCircuit> cb;
    if (o.example_k || o.example_n) {
        if (!o.example_k || !o.example_n)
            throw ValidationError("--example-k and --example-n go together");
        ExampleInstance ex = make_example_coloring(Grid(*o.example_k, *o.example_n));
        if (!o.output.empty())
            write_json_file(o.output, to_json(ex.circuit));
        cb = std::move(ex.circuit);
    } else {
        cb = bool_circuit_from_json(read_json_file(o.input));
    }
    const Grid grid(cb->k(), cb->n());
    Report r("oracle");
    r.set("grid", Json{{"k", grid.k}, {"n", grid.n}});
    const ValidityReport vr = validate_circuit(*cb, grid);
    Json listing = Json::array();
    for (std::size_t i = 0; i < vr.violations.size() && i < max_listed; ++i)
        listing.push_back(Json{{"point", point_json(vr.violations[i].point)}, {"reason", vr.violations[i].reason}});
    r.add("valid_brouwer_circuit", vr.valid, false, Json{{"violations", vr.violations.size()}, {"listing", listing}});
    if (vr.valid) {
        const Fixtures fx = brute_force_fixtures(*cb, grid);
        Json cubes = Json::array();
        for (const auto& q : fx.panchromatic_cubes)
            cubes.push_back(point_json(q));
        Json simplices = Json::array();
        for (std::size_t i = 0; i < fx.panchromatic_simplices.size() && i < o.max_simplices; ++i)
            simplices.push_back(fx.panchromatic_simplices[i]);
        r.set("panchromatic_cubes", std::move(cubes));
        r.set("simplex_count", fx.panchromatic_simplices.size());
        r.set("panchromatic_simplices", std::move(simplices));
        r.add("fixture_exists", !fx.panchromatic_cubes.empty(), true);
    }
    out << r.to_json().dump(2) << '\n';
    return r.exit_code();
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
    const FixpCircuit c = circuit_from_json(read_json_file(o.input));
    const Vector lambda = parse_vector(o.lambda);
    if (lambda.size() != c.k())
        throw ValidationError("lambda has " + std::to_string(lambda.size()) + " entries, circuit has k = " +
                              std::to_string(c.k()));
    const Vector f = c.evaluate(lambda);
    Json result{{"schema", schema_tag}, {"lambda", to_json(lambda)}, {"outputs", to_json(f)}, {"fixed_point", f == lambda}};
    out << result.dump(2) << '\n';
    return exit_code::ok;
}

int run_command(const std::function<int()>& f, std::ostream& err) {
    try {
        return f();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::invalid_input;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::invalid_input;
    } catch (const IllegalPattern& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::invalid_input;
    } catch (const LemmaViolation& e) {
        err << "lemma violation: " << e.what() << '\n';
        return exit_code::lemma_alarm;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_code::internal;
    }
}

} // namespace nashforge
