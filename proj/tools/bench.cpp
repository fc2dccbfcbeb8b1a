// Compares the serial reference path against the OpenMP path on a fixture
// workload and checks that both produce identical reports.

#include <chrono>
#include <iostream>
#include <string>

#include "sublab/fixtures.hpp"
#include "sublab/report.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::string fixture_name = argc > 1 ? argv[1] : "ex4_6";
    int n = argc > 2 ? std::stoi(argv[2]) : 256;

    sublab::Fixture fixture = sublab::find_fixture(fixture_name);
    sublab::Sampler sampler;
    sampler.count = n;
    sublab::Tolerances tols;
    const std::vector<std::string> checks = {"identities", "compatibility",
                                             "foliation-vertical",
                                             "foliation-horizontal", "curvature"};

    auto run = [&](sublab::Parallelism mode) {
        auto start = std::chrono::steady_clock::now();
        sublab::ClassificationReport report =
            sublab::classify(fixture.task(), sampler, tols, checks, mode);
        double elapsed = seconds_since(start);
        std::string json = sublab::report_json(report, fixture.name,
                                               fixture.default_params, fixture.standard_J().J);
        return std::make_pair(elapsed, std::move(json));
    };

    std::cout << "fixture " << fixture_name << ", " << n << " points, " << checks.size()
              << " checks\n";
    auto [serial_time, serial_json] = run(sublab::Parallelism::Serial);
    std::cout << "serial reference: " << serial_time << " s\n";
    auto [parallel_time, parallel_json] = run(sublab::Parallelism::OpenMP);
    std::cout << "openmp kernels:   " << parallel_time << " s\n";
    std::cout << "speedup:          " << serial_time / parallel_time << "x\n";

    if (serial_json != parallel_json) {
        std::cout << "MISMATCH: serial and parallel reports differ\n";
        return 1;
    }
    std::cout << "reports identical: yes\n";
    return 0;
}
