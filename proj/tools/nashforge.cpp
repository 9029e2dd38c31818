#include <nashforge/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace nashforge;

int main(int argc, char** argv) {
    CLI::App app{"Exact reductions from Brouwer and Linear-FIXP instances to bimatrix games"};
    app.require_subcommand(1);

    CompileOptions co;
    auto* compile = app.add_subcommand("compile", "Compile a Brouwer-mapping circuit to a Linear-FIXP circuit");
    compile->add_option("input", co.input, "Boolean circuit JSON")->required();
    compile->add_option("-o,--output", co.output, "Compiled circuit JSON")->required();
    compile->add_option("--meta", co.meta_output, "Sidecar with grid, parameters and source (default: <output>.meta.json)");
    compile->add_option("--L", co.L, "Sampling resolution (power of two)");
    compile->add_flag("--shrink", co.shrink, "Rescale the domain to [0,1]^k");
    compile->add_flag("--check-grid", co.check_grid, "Check F = H on every grid point");

    ReduceOptions ro;
    auto* reduce = app.add_subcommand("reduce", "Reduce a Linear-FIXP circuit to an LP, LCP or game");
    reduce->add_option("input", ro.input, "Circuit JSON")->required();
    reduce->add_option("-t,--target", ro.target, "lp | lcp | direct-lcp | game | symmetric | imitation")
        ->check(CLI::IsMember({"lp", "lcp", "direct-lcp", "game", "symmetric", "imitation"}));
    reduce->add_option("-o,--output", ro.output, "Artifact JSON")->required();

    VerifyOptions vo;
    auto* verify = app.add_subcommand("verify", "Check the correspondences on a circuit or game");
    verify->add_option("input", vo.input, "Circuit or game JSON")->required();
    verify->add_option("-m,--mode", vo.mode, "roundtrip | lemmas | approx")
        ->check(CLI::IsMember({"roundtrip", "lemmas", "approx"}));
    verify->add_option("--circuit", vo.circuit, "Source circuit of a game input");
    verify->add_option("--meta", vo.meta, "Compile sidecar (approx mode)");
    verify->add_option("--profile", vo.profile, "Profile JSON to check against the game");
    verify->add_option("--point", vo.point, "Approximate fixed point, comma-separated rationals (approx mode)");
    verify->add_option("--seed", vo.seed, "Seed for randomized checks");
    verify->add_option("--trials", vo.trials, "Random lambda per KKT check");
    verify->add_option("--semimonotone-trials", vo.semimonotone_trials, "Random (z, q) pairs");
    verify->add_option("--cap", vo.cap, "Largest strategy count for enumeration");

    SolveOptions so;
    auto* solve = app.add_subcommand("solve", "Compute Nash equilibria of a game");
    solve->add_option("input", so.input, "Game JSON")->required();
    solve->add_option("--method", so.method, "enumerate | lh")->check(CLI::IsMember({"enumerate", "lh"}));
    solve->add_option("--label", so.label, "Dropped label for Lemke-Howson");
    solve->add_flag("--symmetric", so.symmetric, "Enumerate symmetric equilibria of (S, S^T)");
    solve->add_option("--cap", so.cap, "Largest strategy count");
    solve->add_option("-o,--output", so.output, "Output file (default: stdout)");

    OracleOptions oo;
    auto* oracle = app.add_subcommand("oracle", "Validate a Brouwer-mapping circuit and list its fixtures");
    oracle->add_option("input", oo.input, "Boolean circuit JSON");
    oracle->add_option("--example-k", oo.example_k, "Use the built-in example coloring of dimension k");
    oracle->add_option("--example-n", oo.example_n, "Bits per coordinate of the example");
    oracle->add_option("-o,--output", oo.output, "Write the example circuit here");
    oracle->add_option("--max-simplices", oo.max_simplices, "Simplices listed in the report");

    EvalOptions eo;
    auto* eval = app.add_subcommand("eval", "Evaluate a circuit at lambda");
    eval->add_option("input", eo.input, "Circuit JSON")->required();
    eval->add_option("--lambda", eo.lambda, "Comma-separated rationals")->required();

    CLI11_PARSE(app, argc, argv);

    return run_command(
        [&] {
            if (*compile)
                return cmd_compile(co, std::cout);
            if (*reduce)
                return cmd_reduce(ro, std::cout);
            if (*verify)
                return cmd_verify(vo, std::cout);
            if (*solve)
                return cmd_solve(so, std::cout);
            if (*oracle)
                return cmd_oracle(oo, std::cout);
            return cmd_eval(eo, std::cout);
        },
        std::cerr);
}
