#include "expsum/recovery.hpp"

#include "expsum/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace expsum {

void validate(const MeasurementSet& meas) {
    if (meas.modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (meas.omega.empty()) throw invalid_parameter("omega must be nonempty");
    if (meas.omega.size() != meas.observed.size())
        throw invalid_parameter("omega and observed must align");
    for (std::size_t i = 0; i < meas.omega.size(); ++i) {
        if (meas.omega[i] < 0 || meas.omega[i] >= meas.modulus)
            throw invalid_parameter("omega entry outside [0, N)");
        if (i > 0 && meas.omega[i] <= meas.omega[i - 1])
            throw invalid_parameter("omega must be sorted and distinct");
    }
}

MeasurementSet measure(const Signal& x, std::vector<int> omega) {
    validate(x);
    std::sort(omega.begin(), omega.end());
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());
    if (omega.empty()) throw invalid_parameter("omega must be nonempty");

    const Spectrum s = dft(x);
    MeasurementSet meas;
    meas.modulus = x.modulus;
    meas.omega = std::move(omega);
    meas.observed.reserve(meas.omega.size());
    for (int w : meas.omega) {
        if (w < 0 || w >= x.modulus) throw invalid_parameter("omega entry outside [0, N)");
        meas.observed.push_back(s.values[static_cast<std::size_t>(w)]);
    }
    return meas;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIter: return "max_iter";
        case SolveStatus::Infeasible: return "infeasible";
    }
    return "?";
}

const char* to_string(AlphaVerdict verdict) {
    switch (verdict) {
        case AlphaVerdict::Holds: return "holds";
        case AlphaVerdict::Fails: return "fails";
        case AlphaVerdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

RecoveryResult basis_pursuit(const MeasurementSet& meas, const FourierPlan& plan,
                             const SolverOptions& opt) {
    validate(meas);
    if (plan.modulus() != meas.modulus) throw invalid_parameter("plan modulus mismatch");
    if (!(opt.tol > 0.0)) throw invalid_parameter("tol must be > 0");
    if (opt.max_iter < 1) throw invalid_parameter("max_iter must be >= 1");

    const auto N = static_cast<std::size_t>(meas.modulus);
    const auto& ops = kern::active_ops();
    const double root_n = std::sqrt(static_cast<double>(N));
    const double inv_n = 1.0 / static_cast<double>(N);

    std::vector<cplx> spec(N);
    // project onto {z : dft(z)|_omega = observed}; exact since the
    // transform is unitary
    auto project = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        plan.char_sum(in.data(), spec.data(), -1);
        for (std::size_t i = 0; i < meas.omega.size(); ++i) {
            spec[static_cast<std::size_t>(meas.omega[i])] = meas.observed[i] * root_n;
        }
        plan.char_sum(spec.data(), out.data(), +1);
        for (auto& v : out) v *= inv_n;
    };

    auto finish = [&](const std::vector<cplx>& point, int iters, SolveStatus status) {
        RecoveryResult result;
        result.reconstruction = Signal{meas.modulus, point};
        result.objective = ops.sum_abs(point.data(), N);
        plan.char_sum(point.data(), spec.data(), -1);
        double worst = 0.0;
        for (std::size_t i = 0; i < meas.omega.size(); ++i) {
            const cplx got = spec[static_cast<std::size_t>(meas.omega[i])] / root_n;
            worst = std::max(worst, std::abs(got - meas.observed[i]));
        }
        result.residual = worst;
        result.iterations = iters;
        result.status = status;
        return result;
    };

    std::vector<cplx> y(N, cplx(0.0, 0.0));
    project(y, y);  // minimal-l2 extension
    const double scale = std::sqrt(ops.max_abs2(y.data(), N));

    // fully determined or zero data: the extension itself is the answer
    if (meas.omega.size() == N || scale == 0.0) {
        return finish(y, 0, SolveStatus::Converged);
    }

    const double gamma = opt.gamma0 * scale;
    const double stop = opt.tol * scale;

    std::vector<cplx> z(N), refl(N), z_prev(N);
    bool have_prev = false;
    int it = 0;
    for (it = 1; it <= opt.max_iter; ++it) {
        z = y;
        ops.soft_threshold(z.data(), gamma, N);
        for (std::size_t i = 0; i < N; ++i) refl[i] = 2.0 * z[i] - y[i];
        project(refl, refl);
        for (std::size_t i = 0; i < N; ++i) y[i] += refl[i] - z[i];

        const double gap = std::sqrt(ops.max_dist2(refl.data(), z.data(), N));
        if (have_prev) {
            const double change = std::sqrt(ops.max_dist2(z.data(), z_prev.data(), N));
            if (std::max(change, gap) <= stop) {
                project(z, z);
                return finish(z, it, SolveStatus::Converged);
            }
        }
        std::swap(z_prev, z);
        have_prev = true;
    }
    project(z_prev, z_prev);
    return finish(z_prev, opt.max_iter, SolveStatus::MaxIter);
}

RecoveryResult basis_pursuit(const MeasurementSet& meas, const SolverOptions& opt) {
    validate(meas);
    return basis_pursuit(meas, FourierPlan(meas.modulus), opt);
}

AlphaVerdict verify_alpha(const Signal& x, const std::vector<int>& omega, double tol,
                          const SolverOptions& opt) {
    validate(x);
    const MeasurementSet meas = measure(x, omega);
    const RecoveryResult result = basis_pursuit(meas, opt);
    if (result.status != SolveStatus::Converged) return AlphaVerdict::Indeterminate;

    const auto& ops = kern::active_ops();
    const double dist = std::sqrt(ops.max_dist2(result.reconstruction.values.data(),
                                                x.values.data(), x.values.size()));
    const double l1_gap = std::abs(result.objective - norms(x).l1);
    return (dist <= tol && l1_gap <= tol) ? AlphaVerdict::Holds : AlphaVerdict::Fails;
}

Signal random_sparse_signal(int modulus, int t_sparsity, Rng& rng) {
    if (modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (t_sparsity < 1 || t_sparsity > modulus)
        throw invalid_parameter("sparsity must lie in [1, N]");
    std::vector<int> pool(static_cast<std::size_t>(modulus));
    for (int i = 0; i < modulus; ++i) pool[static_cast<std::size_t>(i)] = i;
    Signal x = Signal::zeros(modulus);
    for (int i = 0; i < t_sparsity; ++i) {
        const auto j = static_cast<std::size_t>(i) +
                       rng.uniform_below(static_cast<std::uint64_t>(modulus - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        x.values[static_cast<std::size_t>(pool[static_cast<std::size_t>(i)])] =
            rng.complex_gaussian();
    }
    return x;
}

GuaranteeReport guaranteed_recovery_check(const FrequencyDraw& draw, int t_sparsity, int trials,
                                          std::uint64_t seed, double tol,
                                          const SolverOptions& opt) {
    validate(draw);
    if (trials < 0) throw invalid_parameter("trials must be >= 0");

    const FourierPlan plan(draw.modulus);
    GuaranteeReport report;
    report.certificate = certificate_check(kernel_profile(draw, plan), t_sparsity);
    report.trials = trials;

    std::vector<int> omega = draw.points;
    std::sort(omega.begin(), omega.end());
    omega.erase(std::unique(omega.begin(), omega.end()), omega.end());

    const auto& ops = kern::active_ops();
    for (int k = 0; k < trials; ++k) {
        Rng rng(seed, "recovery_x", static_cast<std::uint64_t>(k));
        const Signal x = random_sparse_signal(draw.modulus, t_sparsity, rng);
        const MeasurementSet meas = measure(x, omega);
        const RecoveryResult result = basis_pursuit(meas, plan, opt);
        if (result.status != SolveStatus::Converged) {
            ++report.indeterminate;
            continue;
        }
        const double err = std::sqrt(ops.max_dist2(result.reconstruction.values.data(),
                                                   x.values.data(), x.values.size()));
        report.max_recovery_error = std::max(report.max_recovery_error, err);
        if (err <= tol) {
            ++report.successes;
        } else {
            ++report.failures;
        }
    }
    return report;
}

namespace {

nlohmann::json complex_array(const std::vector<cplx>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : values) arr.push_back({v.real(), v.imag()});
    return arr;
}

}  // namespace

std::string to_json(const MeasurementSet& meas) {
    nlohmann::json j{{"modulus", meas.modulus},
                     {"omega", meas.omega},
                     {"observed", complex_array(meas.observed)}};
    return j.dump();
}

MeasurementSet measurement_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    MeasurementSet meas;
    meas.modulus = j.at("modulus").get<int>();
    meas.omega = j.at("omega").get<std::vector<int>>();
    for (const auto& e : j.at("observed")) {
        if (!e.is_array() || e.size() != 2)
            throw invalid_parameter("observed must be [re, im] pairs");
        meas.observed.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    validate(meas);
    return meas;
}

std::string to_json(const RecoveryResult& result) {
    nlohmann::json j{
        {"reconstruction",
         {{"modulus", result.reconstruction.modulus},
          {"values", complex_array(result.reconstruction.values)}}},
        {"objective", result.objective},
        {"residual", result.residual},
        {"iterations", result.iterations},
        {"status", to_string(result.status)},
    };
    return j.dump();
}

std::string to_json(const GuaranteeReport& report) {
    nlohmann::json j{
        {"certificate",
         {{"holds", report.certificate.holds},
          {"margin", report.certificate.margin},
          {"threshold", report.certificate.threshold}}},
        {"trials", report.trials},
        {"successes", report.successes},
        {"failures", report.failures},
        {"indeterminate", report.indeterminate},
        {"max_recovery_error", report.max_recovery_error},
    };
    return j.dump();
}

}  // namespace expsum
