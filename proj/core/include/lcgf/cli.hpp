#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lcgf::cli {

/// Resolved run configuration; every emitted artifact embeds it (minus the
/// worker count, which never influences output bytes).
struct RunConfig {
    std::string command;
    int d = 2;
    std::vector<int> N_values{16, 32, 64, 128};
    std::vector<int> M_values{8, 16, 32, 64};
    double K = 1.0;
    std::vector<double> K_values{1.0};  // scan-divergence evaluates several cutoffs at once
    double L = 0.0;         // 0: use the schedule
    double L_factor = 10.0;
    double A = 0.0;
    double gamma = 0.0;     // 0: derive from alpha
    double alpha = 1.0;
    double sigma = 1.0;
    int k = 4;
    std::string law = "log_correlated";
    bool complex_valued = false;
    std::vector<double> thresholds{10.0, 20.0, 30.0};
    std::int64_t samples = 10000;
    std::uint64_t seed = 0;
    int time_steps = 1024;
    int workers = 0;  // 0: hardware concurrency
    std::string output;
    std::string format = "csv";

    std::map<std::string, std::string> echo() const;
    static RunConfig from_echo(const std::map<std::string, std::string>& echo);
};

/// One row of the verify-lemmas table.
struct LemmaCheck {
    std::string name;
    double observed = 0.0;
    std::string criterion;
    bool pass = false;
};

struct LemmaCheckConfig {
    int d = 2;
    std::uint64_t seed = 7;
    std::int64_t samples = 20000;
    int workers = 1;
};

/// Property suites over the lattice/field/Wick/variational layers.
std::vector<LemmaCheck> run_lemma_checks(const LemmaCheckConfig& cfg);

/// Entry point shared by the binary and the tests.
/// Exit codes: 0 all-pass, 1 internal check failure, 2 config error.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace lcgf::cli
