#ifndef NASHFORGE_JSON_IO_HPP
#define NASHFORGE_JSON_IO_HPP

#include <nashforge/brouwer.hpp>
#include <nashforge/compiler.hpp>
#include <nashforge/fixp_circuit.hpp>
#include <nashforge/lcp_game.hpp>
#include <nashforge/lp_reduction.hpp>
#include <nashforge/nash_solver.hpp>

#include <json.hpp>

#include <string>

namespace nashforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema_tag = "nashforge/v1";

/// Rationals travel as "p/q" strings; plain JSON integers are accepted on
/// input. Every parse failure raises ParseError.
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);
Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const FixpCircuit& c);
FixpCircuit circuit_from_json(const Json& j);

Json to_json(const BoolCircuit& c);
BoolCircuit bool_circuit_from_json(const Json& j);

/// Sidecar for a compiled circuit; also carries the source circuit inline.
Json compile_meta_json(const CompiledFunction& cf);
struct CompileMeta {
    Grid grid;
    SamplingParams params;
    bool shrunk;
    BoolCircuit source;
};
CompileMeta compile_meta_from_json(const Json& j);

Json to_json(const ParamLP& p);
ParamLP lp_from_json(const Json& j);

Json to_json(const LcpInstance& lcp);
LcpInstance lcp_from_json(const Json& j);

Json to_json(const BimatrixGame& g);
/// A symmetric game is written as the bimatrix game (S, S^T).
Json to_json(const SymmetricGame& g);
BimatrixGame game_from_json(const Json& j);
std::string kind_name(GameKind kind);

/// One entry per equilibrium: x~, s, y~, t, pi1, pi2 and, when the game
/// carries output rows and s > 0, the recovered lambda.
Json ne_entry(const NeCertificate& cert, const GameMeta& meta);
Json symmetric_ne_entry(const Matrix& S, const Vector& z, const GameMeta& meta);

Json read_json_file(const std::string& path);
/// Pretty-printed with a trailing newline; byte-identical for equal input.
void write_json_file(const std::string& path, const Json& j);

} // namespace nashforge

#endif
