// expsum command line: closed-form bounds, omega samplers, certificate
// checks, basis-pursuit recovery, and the Monte Carlo experiment harness.
//
// Exit codes: 0 success, 2 usage/parameter error, 3 experiment assertion
// failure (an empirical rate crossed its analytic bound beyond tolerance).

#include "expsum/experiments.hpp"
#include "expsum/omega_models.hpp"
#include "expsum/recovery.hpp"
#include "expsum/tail_bounds.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace expsum;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_parameter("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoi(item));
    }
    if (out.empty()) throw invalid_parameter("expected a comma-separated integer list");
    return out;
}

int cmd_bounds(const std::string& name, const BoundQuery& query, const std::string& format) {
    const BoundReport report = evaluate_bound(name, query);
    if (format == "csv") {
        std::cout << to_csv(report);
    } else {
        std::cout << to_json(report) << "\n";
    }
    return 0;
}

int cmd_paper_table(int N, int T, const std::vector<double>& c_values) {
    std::cout << paper_table_csv(paper_example_table(N, T, c_values));
    return 0;
}

int cmd_sample(const std::string& model_name, int N, int f, double tau, int n,
               std::uint64_t seed, bool dist_only) {
    OmegaModel model;
    if (model_name == "uniform") {
        model = OmegaModel::uniform_subset(N, f);
    } else if (model_name == "bernoulli") {
        model = OmegaModel::bernoulli(N, tau);
    } else if (model_name == "occupation") {
        model = OmegaModel::occupation(N, n);
    } else if (model_name == "poisson") {
        model = OmegaModel::poisson(N, tau);
    } else {
        throw invalid_parameter("unknown model: " + model_name);
    }
    if (dist_only) {
        std::cout << size_distribution_csv(size_distribution(model));
        return 0;
    }
    Rng rng(seed, "cli_sample", 0);
    std::cout << to_json(sample_omega(model, rng)) << "\n";
    return 0;
}

int cmd_certify(int N, const std::string& draw_csv, int n, std::uint64_t seed, int T,
                bool full_profile) {
    FrequencyDraw draw;
    if (!draw_csv.empty()) {
        draw = FrequencyDraw{N, parse_int_list(draw_csv)};
    } else {
        if (n < 1) throw invalid_parameter("provide --draw or --sample-n");
        Rng rng(seed, "cli_certify", 0);
        draw = sample_frequency_draw(N, n, rng);
    }
    const KernelProfile profile = kernel_profile(draw);
    const CertificateResult cert = certificate_check(profile, T);
    if (full_profile) {
        std::cout << to_json(profile) << "\n";
        return 0;
    }
    nlohmann::json j{
        {"N", N},
        {"n", draw.n()},
        {"T", T},
        {"peak", profile.peak},
        {"offpeak_sup", profile.offpeak_sup},
        {"offpeak_argmax", profile.offpeak_argmax},
        {"threshold", cert.threshold},
        {"holds", cert.holds},
        {"margin", cert.margin},
    };
    std::cout << j.dump() << "\n";
    return 0;
}

int cmd_recover(const std::string& input_path, const std::string& signal_path,
                const std::string& omega_csv, double tol, int max_iter,
                const std::string& out_path) {
    MeasurementSet meas;
    if (!input_path.empty()) {
        meas = measurement_from_json(read_file(input_path));
    } else {
        if (signal_path.empty() || omega_csv.empty())
            throw invalid_parameter("provide --input, or --signal together with --omega");
        const Signal x = signal_from_json(read_file(signal_path));
        meas = measure(x, parse_int_list(omega_csv));
    }
    SolverOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    const RecoveryResult result = basis_pursuit(meas, opt);
    const std::string json = to_json(result);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw invalid_parameter("cannot write " + out_path);
        out << json << "\n";
    }
    std::cout << json << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_path, std::optional<std::uint64_t> seed,
                   std::optional<int> trials, const std::string& out_prefix) {
    ExperimentConfig config = config_from_file(config_path);
    if (seed) config.master_seed = *seed;
    if (trials) config.trials = *trials;
    if (!out_prefix.empty()) config.output_prefix = out_prefix;
    const RunOutcome outcome = run_experiment(config);
    std::cout << outcome.summary << "\n";
    for (const auto& f : outcome.files) std::cout << "wrote " << f << "\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random exponential sums: tail bounds, certificates, sparse recovery"};
    app.require_subcommand(1);

    // bounds
    auto* bounds = app.add_subcommand("bounds", "evaluate a closed-form bound");
    std::string bound_name, bound_format = "json";
    BoundQuery query;
    bounds->add_option("--name", bound_name,
                       "theorem_a|theorem1|theorem2|theorem3|refined|tijdeman|explicitness")
        ->required();
    bounds->add_option("--N", query.N, "modulus (prime >= 5 for discrete bounds)");
    bounds->add_option("--n", query.n, "number of random frequencies");
    bounds->add_option("--M", query.M, "frequency range, continuous case");
    bounds->add_option("--delta", query.delta, "flatness level in (0,1)");
    bounds->add_option("--nu", query.nu, "sector count >= 3 (0 = bound's own rule)");
    bounds->add_option("--C", query.C, "oversampling constant");
    bounds->add_option("--T", query.T, "sparsity");
    bounds->add_option("--format", bound_format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));

    // paper-table
    auto* table = app.add_subcommand("paper-table", "the N=997, T=2 showcase table");
    int table_n = 997, table_t = 2;
    std::vector<double> table_c = {2.0, 3.0};
    table->add_option("--N", table_n, "modulus");
    table->add_option("--T", table_t, "sparsity");
    table->add_option("--C", table_c, "C values");

    // sample
    auto* sample = app.add_subcommand("sample", "draw a random frequency set");
    std::string model_name;
    int sample_n_mod = 0, sample_f = 0, sample_n = 0;
    double sample_tau = 0.0;
    std::uint64_t sample_seed = 0;
    bool dist_only = false;
    sample->add_option("--model", model_name, "uniform|bernoulli|occupation|poisson")
        ->required();
    sample->add_option("--N", sample_n_mod, "modulus")->required();
    sample->add_option("--f", sample_f, "subset size (uniform)");
    sample->add_option("--tau", sample_tau, "selection rate (bernoulli/poisson)");
    sample->add_option("--n", sample_n, "draw count (occupation)");
    sample->add_option("--seed", sample_seed, "master seed");
    sample->add_flag("--dist", dist_only, "print the exact |omega| distribution as CSV");

    // certify
    auto* certify = app.add_subcommand("certify", "kernel flatness certificate");
    int cert_n_mod = 0, cert_sample_n = 0, cert_t = 1;
    std::string cert_draw;
    std::uint64_t cert_seed = 0;
    bool cert_profile = false;
    certify->add_option("--N", cert_n_mod, "modulus")->required();
    certify->add_option("--draw", cert_draw, "explicit draw, e.g. \"1,2,2,4\"");
    certify->add_option("--sample-n", cert_sample_n, "draw size to sample instead");
    certify->add_option("--seed", cert_seed, "master seed for --sample-n");
    certify->add_option("--T", cert_t, "sparsity");
    certify->add_flag("--profile", cert_profile, "print the full kernel profile JSON");

    // recover
    auto* recover = app.add_subcommand("recover", "basis-pursuit reconstruction");
    std::string rec_input, rec_signal, rec_omega, rec_out;
    double rec_tol = 1e-9;
    int rec_max_iter = 20000;
    recover->add_option("--input", rec_input, "measurement JSON file");
    recover->add_option("--signal", rec_signal, "signal JSON file (measured on --omega)");
    recover->add_option("--omega", rec_omega, "frequency list, e.g. \"0,1,2\"");
    recover->add_option("--tol", rec_tol, "solver tolerance");
    recover->add_option("--max-iter", rec_max_iter, "iteration cap");
    recover->add_option("--out", rec_out, "also write the result JSON here");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment config");
    std::string exp_config, exp_out;
    std::optional<std::uint64_t> exp_seed;
    std::optional<int> exp_trials;
    experiment->add_option("--config", exp_config, "JSON config file")->required();
    experiment->add_option("--seed", exp_seed, "override master_seed");
    experiment->add_option("--trials", exp_trials, "override trials");
    experiment->add_option("--out", exp_out, "override output prefix");

    try {
        app.parse(argc, argv);
        if (bounds->parsed()) return cmd_bounds(bound_name, query, bound_format);
        if (table->parsed()) return cmd_paper_table(table_n, table_t, table_c);
        if (sample->parsed())
            return cmd_sample(model_name, sample_n_mod, sample_f, sample_tau, sample_n,
                              sample_seed, dist_only);
        if (certify->parsed())
            return cmd_certify(cert_n_mod, cert_draw, cert_sample_n, cert_seed, cert_t,
                               cert_profile);
        if (recover->parsed())
            return cmd_recover(rec_input, rec_signal, rec_omega, rec_tol, rec_max_iter, rec_out);
        if (experiment->parsed()) return cmd_experiment(exp_config, exp_seed, exp_trials, exp_out);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 2;
    } catch (const expsum::invalid_parameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
