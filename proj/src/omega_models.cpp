#include "expsum/omega_models.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace expsum {

const char* to_string(OmegaKind kind) {
    switch (kind) {
        case OmegaKind::UniformSubset: return "uniform_subset";
        case OmegaKind::BernoulliSelection: return "bernoulli";
        case OmegaKind::OccupationRange: return "occupation";
        case OmegaKind::PoissonProcess: return "poisson";
    }
    return "?";
}

OmegaModel OmegaModel::uniform_subset(int modulus, int f) {
    OmegaModel m{OmegaKind::UniformSubset, modulus, f, 0.0, 0};
    validate(m);
    return m;
}

OmegaModel OmegaModel::bernoulli(int modulus, double tau) {
    OmegaModel m{OmegaKind::BernoulliSelection, modulus, 0, tau, 0};
    validate(m);
    return m;
}

OmegaModel OmegaModel::occupation(int modulus, int n) {
    OmegaModel m{OmegaKind::OccupationRange, modulus, 0, 0.0, n};
    validate(m);
    return m;
}

OmegaModel OmegaModel::poisson(int modulus, double tau) {
    OmegaModel m{OmegaKind::PoissonProcess, modulus, 0, tau, 0};
    validate(m);
    return m;
}

void validate(const OmegaModel& model) {
    if (model.modulus < 2) throw invalid_parameter("modulus must be >= 2");
    switch (model.kind) {
        case OmegaKind::UniformSubset:
            if (model.f < 0 || model.f > model.modulus)
                throw invalid_parameter("f must lie in [0, N]");
            break;
        case OmegaKind::BernoulliSelection:
            if (!(model.tau > 0.0 && model.tau < 1.0))
                throw invalid_parameter("tau must lie in (0, 1)");
            break;
        case OmegaKind::OccupationRange:
            if (model.n < 1) throw invalid_parameter("n must be >= 1");
            break;
        case OmegaKind::PoissonProcess:
            if (!(model.tau > 0.0)) throw invalid_parameter("tau must be > 0");
            break;
    }
}

namespace {

std::vector<int> uniform_subset_sample(int modulus, int size, Rng& rng) {
    std::vector<int> pool(static_cast<std::size_t>(modulus));
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < size; ++i) {
        const auto j =
            static_cast<std::size_t>(i) + rng.uniform_below(static_cast<std::uint64_t>(modulus - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + size);
    std::sort(out.begin(), out.end());
    return out;
}

// Arrival counting with Exp(1) increments; exact for any lambda that fits
// in a double without overflow of the running sum.
int poisson_at_most(double lambda, int max_k, Rng& rng) {
    while (true) {
        int k = 0;
        double s = -std::log(1.0 - rng.next_double());
        while (s <= lambda) {
            ++k;
            s -= std::log(1.0 - rng.next_double());
        }
        if (k <= max_k) return k;
    }
}

}  // namespace

OmegaSample sample_omega(const OmegaModel& model, Rng& rng) {
    validate(model);
    OmegaSample out;
    switch (model.kind) {
        case OmegaKind::UniformSubset:
            out.omega = uniform_subset_sample(model.modulus, model.f, rng);
            break;
        case OmegaKind::BernoulliSelection:
            for (int w = 0; w < model.modulus; ++w) {
                if (rng.next_double() < model.tau) out.omega.push_back(w);
            }
            break;
        case OmegaKind::OccupationRange: {
            FrequencyDraw draw = sample_frequency_draw(model.modulus, model.n, rng);
            out.omega = draw.points;
            std::sort(out.omega.begin(), out.omega.end());
            out.omega.erase(std::unique(out.omega.begin(), out.omega.end()), out.omega.end());
            out.draw = std::move(draw);
            break;
        }
        case OmegaKind::PoissonProcess: {
            const int k =
                poisson_at_most(model.tau * model.modulus, model.modulus, rng);
            out.omega = uniform_subset_sample(model.modulus, k, rng);
            break;
        }
    }
    return out;
}

BigInt stirling2(int n, int k) {
    if (n < 0 || k < 0) throw invalid_parameter("stirling2 needs n, k >= 0");
    if (n == 0 && k == 0) return 1;
    if (n == 0 || k == 0 || k > n) return 0;
    std::vector<BigInt> row(static_cast<std::size_t>(k) + 1, 0);
    row[0] = 1;  // S(0,0)
    for (int i = 1; i <= n; ++i) {
        for (int j = std::min(i, k); j >= 1; --j) {
            row[static_cast<std::size_t>(j)] =
                j * row[static_cast<std::size_t>(j)] + row[static_cast<std::size_t>(j - 1)];
        }
        row[0] = 0;
    }
    return row[static_cast<std::size_t>(k)];
}

BigInt surjections(int n, int k) {
    return big_factorial(k) * stirling2(n, k);
}

SizeDistribution size_distribution(const OmegaModel& model) {
    validate(model);
    const int N = model.modulus;
    SizeDistribution dist;
    dist.model = model;
    dist.probs.assign(static_cast<std::size_t>(N) + 1, 0.0);

    switch (model.kind) {
        case OmegaKind::UniformSubset: {
            dist.exact.assign(static_cast<std::size_t>(N) + 1, BigRat(0));
            dist.exact[static_cast<std::size_t>(model.f)] = 1;
            break;
        }
        case OmegaKind::BernoulliSelection: {
            // the double tau is promoted to its exact dyadic rational, so
            // the binomial masses sum to exactly 1
            const BigRat tau(model.tau);
            const BigRat one_minus = BigRat(1) - tau;
            dist.exact.assign(static_cast<std::size_t>(N) + 1, BigRat(0));
            for (int k = 0; k <= N; ++k) {
                BigRat mass = BigRat(big_binomial(N, k));
                for (int i = 0; i < k; ++i) mass *= tau;
                for (int i = 0; i < N - k; ++i) mass *= one_minus;
                dist.exact[static_cast<std::size_t>(k)] = mass;
            }
            break;
        }
        case OmegaKind::OccupationRange: {
            BigInt total = 1;
            for (int i = 0; i < model.n; ++i) total *= N;
            dist.exact.assign(static_cast<std::size_t>(N) + 1, BigRat(0));
            for (int k = 1; k <= std::min(model.n, N); ++k) {
                dist.exact[static_cast<std::size_t>(k)] =
                    BigRat(big_binomial(N, k) * surjections(model.n, k), total);
            }
            break;
        }
        case OmegaKind::PoissonProcess: {
            const double lambda = model.tau * N;
            std::vector<double> logp(static_cast<std::size_t>(N) + 1);
            double maxlog = -1e300;
            for (int k = 0; k <= N; ++k) {
                logp[static_cast<std::size_t>(k)] =
                    -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
                maxlog = std::max(maxlog, logp[static_cast<std::size_t>(k)]);
            }
            double z = 0.0;
            for (int k = 0; k <= N; ++k) {
                dist.probs[static_cast<std::size_t>(k)] =
                    std::exp(logp[static_cast<std::size_t>(k)] - maxlog);
                z += dist.probs[static_cast<std::size_t>(k)];
            }
            for (auto& p : dist.probs) p /= z;
            dist.notes = "Poisson(tau*N) truncated at k=N and renormalized";
            return dist;
        }
    }
    for (int k = 0; k <= N; ++k) {
        dist.probs[static_cast<std::size_t>(k)] =
            dist.exact[static_cast<std::size_t>(k)].convert_to<double>();
    }
    return dist;
}

std::string size_distribution_csv(const SizeDistribution& dist) {
    std::ostringstream out;
    out << "k,probability\n";
    for (std::size_t k = 0; k < dist.probs.size(); ++k) {
        out << k << ',' << fmt_g17(dist.probs[k]) << '\n';
    }
    return out.str();
}

std::string to_json(const OmegaSample& sample) {
    nlohmann::json j;
    j["omega"] = sample.omega;
    if (sample.draw) {
        j["draw"] = sample.draw->points;
    } else {
        j["draw"] = nullptr;
    }
    return j.dump();
}

Calibration model_calibration(int n, int modulus) {
    if (n < 1) throw invalid_parameter("n must be >= 1");
    if (modulus < 2) throw invalid_parameter("modulus must be >= 2");
    BigInt n_pow = 1, nm1_pow = 1;
    for (int i = 0; i < n; ++i) {
        n_pow *= modulus;
        nm1_pow *= (modulus - 1);
    }
    Calibration cal;
    // E|Omega| = (N^n - (N-1)^n) / N^{n-1}
    cal.expected_range_exact = BigRat((n_pow - nm1_pow) * modulus, n_pow);
    cal.expected_range = cal.expected_range_exact.convert_to<double>();
    const BigInt num = boost::multiprecision::numerator(cal.expected_range_exact);
    const BigInt den = boost::multiprecision::denominator(cal.expected_range_exact);
    cal.f = static_cast<int>(BigInt((2 * num + den) / (2 * den)));  // round half up
    cal.tau = cal.expected_range / modulus;
    return cal;
}

}  // namespace expsum
