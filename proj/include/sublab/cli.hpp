#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sublab {

// Exit codes shared by all subcommands: 0 pass, 1 usage or IO error,
// 2 at least one check exceeded its tolerance.
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailure = 2;

struct AnalyzeOptions {
    std::string map_file;  // exactly one of map_file / example
    std::string example;
    std::vector<std::string> params;  // name=value
    std::string J_spec = "standard";  // "standard" or a path to an m x m matrix
    std::string points = "random";    // "random" | "grid"
    int n = 100;
    std::uint64_t seed = 42;
    double tol_rank = 1e-8;
    double tol_cluster = 1e-6;
    double tol_angle = 1e-8;
    std::vector<std::string> checks;  // check names, or the single entry "all"
    std::string report_path;          // empty: write to `out`
    std::string format = "json";      // "json" | "text"
    bool serial = false;              // force the serial reference path
};

int run_analyze(const AnalyzeOptions& options, std::ostream& out, std::ostream& err);

struct VerifyOptions {
    std::string example;              // empty: the whole corpus
    std::vector<std::string> sweeps;  // name=a:b:step
    std::uint64_t seed = 42;
    int n = 100;                      // points per fixture (25 per sweep cell)
};

int run_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

int run_corpus(std::ostream& out);

}  // namespace sublab
