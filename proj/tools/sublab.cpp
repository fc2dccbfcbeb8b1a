#include <CLI11.hpp>
#include <iostream>

#include "sublab/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical decomposition and verification of Riemannian submersions "
                 "from flat Kaehler space"};
    app.require_subcommand(1);

    sublab::AnalyzeOptions analyze_options;
    CLI::App* analyze =
        app.add_subcommand("analyze", "classify a map and run residual checks");
    analyze->add_option("--map", analyze_options.map_file, "map DSL file");
    analyze->add_option("--example", analyze_options.example, "builtin fixture name");
    analyze->add_option("--param", analyze_options.params,
                        "parameter binding name=value (repeatable)");
    analyze->add_option("--J", analyze_options.J_spec,
                        "'standard' or a file with m lines of m reals");
    analyze->add_option("--points", analyze_options.points, "random | grid");
    analyze->add_option("--n", analyze_options.n, "number of sample points");
    analyze->add_option("--seed", analyze_options.seed, "sampling seed");
    analyze->add_option("--tol-rank", analyze_options.tol_rank, "relative rank cutoff");
    analyze->add_option("--tol-cluster", analyze_options.tol_cluster,
                        "sigma^2 clustering tolerance");
    analyze->add_option("--tol-angle", analyze_options.tol_angle,
                        "angle constancy tolerance");
    analyze->add_option("--check", analyze_options.checks,
                        "check name or 'all' (repeatable)");
    analyze->add_option("--report", analyze_options.report_path, "report output path");
    analyze->add_option("--format", analyze_options.format, "json | text");
    analyze->add_flag("--serial", analyze_options.serial,
                      "use the serial reference path instead of OpenMP");

    sublab::VerifyOptions verify_options;
    CLI::App* verify =
        app.add_subcommand("verify", "check every fixture against its expected values");
    verify->add_option("--example", verify_options.example, "restrict to one fixture");
    verify->add_option("--sweep", verify_options.sweeps,
                       "parameter sweep name=a:b:step (repeatable)");
    verify->add_option("--seed", verify_options.seed, "sampling seed");
    verify->add_option("--n", verify_options.n, "points per fixture");

    CLI::App* corpus = app.add_subcommand(
        "corpus", "list builtin fixtures with expected values and provenance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return sublab::kExitUsage;
    }

    if (analyze->parsed())
        return sublab::run_analyze(analyze_options, std::cout, std::cerr);
    if (verify->parsed()) return sublab::run_verify(verify_options, std::cout, std::cerr);
    if (corpus->parsed()) return sublab::run_corpus(std::cout);
    return sublab::kExitUsage;
}
