#ifndef NASHFORGE_COMMANDS_HPP
#define NASHFORGE_COMMANDS_HPP

#include <nashforge/json_io.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nashforge {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int internal = 1;
inline constexpr int invalid_input = 2;
inline constexpr int lemma_alarm = 3;
} // namespace exit_code

/// Every artifact of the reduction chain for one circuit.
struct Pipeline {
    FixpCircuit source;
    /// Clamped and max-zero normalized.
    FixpCircuit prepared;
    ParamLP lp;
    NormalizedSystem ns;
    BimatrixGame game;
    SymmetricGame symmetric;
    BimatrixGame imitation;
};

/// Clamps and normalizes where the circuit's meta says it is still needed.
FixpCircuit prepare_for_reduction(const FixpCircuit& c);
Pipeline build_pipeline(const FixpCircuit& c);

/// One named check of a verification report. Lemma checks run on objects
/// the pipeline built itself; the others judge the input artifacts.
struct Check {
    std::string name;
    bool pass = true;
    bool lemma = false;
    Json detail;
};

class Report {
public:
    explicit Report(std::string command) : command_(std::move(command)) {}
    void add(std::string name, bool pass, bool lemma, Json detail = nullptr);
    void set(std::string key, Json value) { extra_[std::move(key)] = std::move(value); }
    const std::vector<Check>& checks() const { return checks_; }
    bool all_pass() const;
    /// 0 when every check passes, 2 when an input check failed, else 3.
    int exit_code() const;
    Json to_json() const;

private:
    std::string command_;
    std::vector<Check> checks_;
    Json extra_ = Json::object();
};

struct CompileOptions {
    std::string input;
    std::string output;
    std::string meta_output;
    std::optional<std::int64_t> L;
    bool shrink = false;
    bool check_grid = false;
};

struct ReduceOptions {
    std::string input;
    std::string target = "game";
    std::string output;
};

struct VerifyOptions {
    std::string input;
    std::string mode = "roundtrip";
    std::string circuit;
    std::string meta;
    std::string profile;
    std::string point;
    std::uint64_t seed = 1;
    std::size_t trials = 20;
    std::size_t semimonotone_trials = 1000;
    std::size_t cap = default_dimension_cap;
};

struct SolveOptions {
    std::string input;
    std::string method = "enumerate";
    std::size_t label = 0;
    bool symmetric = false;
    std::size_t cap = default_dimension_cap;
    std::string output;
};

struct OracleOptions {
    std::string input;
    std::optional<std::size_t> example_k;
    std::optional<std::size_t> example_n;
    std::string output;
    std::size_t max_simplices = 64;
};

struct EvalOptions {
    std::string input;
    std::string lambda;
};

/// Each command writes its JSON report to out and returns the exit code.
/// Input errors surface as exceptions; run_command maps them to codes.
int cmd_compile(const CompileOptions& o, std::ostream& out);
int cmd_reduce(const ReduceOptions& o, std::ostream& out);
int cmd_verify(const VerifyOptions& o, std::ostream& out);
int cmd_solve(const SolveOptions& o, std::ostream& out);
int cmd_oracle(const OracleOptions& o, std::ostream& out);
int cmd_eval(const EvalOptions& o, std::ostream& out);

/// Runs f and converts exceptions: ValidationError, ParseError and
/// CapacityError give 2, LemmaViolation gives 3, anything else 1. The
/// message goes to err.
int run_command(const std::function<int()>& f, std::ostream& err);

/// Comma-separated rationals, e.g. "1/2,3".
Vector parse_vector(const std::string& text);

} // namespace nashforge

#endif
