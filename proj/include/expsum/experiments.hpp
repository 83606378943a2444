#pragma once

#include "expsum/omega_models.hpp"
#include "expsum/recovery.hpp"
#include "expsum/tail_bounds.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace expsum {

/// One experiment run, parsed from a JSON config file. Trials derive their
/// seeds from (master_seed, experiment tag, trial index), so results do not
/// depend on execution order.
struct ExperimentConfig {
    std::string experiment;  // tail1|tail2|certificate|recovery|model_compare|paper_table
    int N = 0;
    int n = 0;
    long long M = 0;
    double delta = 0;
    double C = 0;
    int T = 0;
    int t_ref = 1;           // model_compare reference sparsity
    int trials = 0;
    int trials_omega = 0;
    int trials_x = 0;
    std::uint64_t master_seed = 0;
    std::string output_prefix;
    double solver_tol = 1e-9;
    int solver_max_iter = 20000;
    double recovery_tol = 1e-6;
    std::vector<double> c_values;  // paper_table
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);
std::string to_json(const ExperimentConfig& config);

struct TrialOutcome {
    std::uint64_t seed = 0;
    double statistic = 0;  // max_m |S(m)| / n
    bool event = false;    // flatness violated at level delta
};

struct TailRunResult {
    double empirical_failure = 0;
    double stderr_value = 0;
    double bound = 0;
    int nu = 0;
    bool bound_valid = false;
    bool dominance_ok = true;
    std::string notes;
    std::vector<TrialOutcome> trial_rows;
};

/// Fraction of draws with max_{m != 0} |S(m)| >= delta n, against the
/// discrete tail bound at the scan-optimal nu.
TailRunResult run_tail2(int N, int n, double delta, int trials, std::uint64_t seed);

/// Continuous variant: phases on [0,1), m = 1..M.
TailRunResult run_tail1(long long M, int n, double delta, int trials, std::uint64_t seed);

struct CertificateRunResult {
    int n_used = 0;
    double cert_rate = 0;
    double stderr_value = 0;
    double bound = 0;  // refined closed form
    int nu = 0;
    bool dominance_ok = true;  // cert_rate >= 1 - bound - 4 stderr
    std::vector<TrialOutcome> trial_rows;  // statistic = offpeak/n, event = cert holds
};

CertificateRunResult run_certificate(int N, int T, double C, int trials, std::uint64_t seed);

struct RecoveryDrawRow {
    std::uint64_t seed = 0;
    int omega_size = 0;
    bool cert_holds = false;
    double margin = 0;
    int successes = 0;
    int failures = 0;
    int nonconverged = 0;
    double max_error = 0;
};

struct RecoveryRunResult {
    int n_used = 0;
    int cert_pass_draws = 0;
    long long converged_pass = 0;    // solves under cert-passing draws
    long long recovered_pass = 0;
    long long nonconverged_total = 0;
    long long attempted_total = 0;
    double recovered_rate_failing = 0;  // informational
    bool all_pass_recovered = true;
    double nonconverged_fraction = 0;
    bool ok = true;  // 100% recovery among converged+certified, <=1% nonconverged
    std::vector<RecoveryDrawRow> draw_rows;
};

RecoveryRunResult run_recovery(int N, int T, double C, int trials_omega, int trials_x,
                               std::uint64_t seed, double recovery_tol = 1e-6,
                               const SolverOptions& opt = {});

struct ModelCompareResult {
    Calibration calibration;
    std::vector<OmegaModel> models;                 // the four calibrated models
    std::vector<SizeDistribution> exact;            // aligned with models
    std::vector<std::vector<long long>> histogram;  // [model][k]
    std::vector<double> cert_rate;                  // at t_ref
    int trials = 0;
    int t_ref = 1;
};

ModelCompareResult run_model_compare(int N, int n, int trials, std::uint64_t seed, int t_ref);

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 3 dominance/contract failure
    std::vector<std::string> files;
    std::string summary;
};

/// Executes the config and writes <prefix>_*.csv plus <prefix>_manifest.json.
RunOutcome run_experiment(const ExperimentConfig& config);

}  // namespace expsum
