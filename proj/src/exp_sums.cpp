#include "expsum/exp_sums.hpp"

#include "expsum/kernels.hpp"

#include <json.hpp>

#include <cmath>

namespace expsum {

void validate(const FrequencyDraw& draw) {
    if (draw.modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (draw.points.empty()) throw invalid_parameter("draw must contain at least one point");
    for (int x : draw.points) {
        if (x < 0 || x >= draw.modulus)
            throw invalid_parameter("draw point outside [0, N)");
    }
}

FrequencyDraw sample_frequency_draw(int modulus, int n, Rng& rng) {
    if (modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (n < 1) throw invalid_parameter("n must be >= 1");
    FrequencyDraw draw{modulus, {}};
    draw.points.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        draw.points.push_back(static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(modulus))));
    }
    return draw;
}

ContinuousDraw sample_continuous_draw(int n, Rng& rng) {
    if (n < 1) throw invalid_parameter("n must be >= 1");
    ContinuousDraw draw;
    draw.points.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) draw.points.push_back(rng.next_double());
    return draw;
}

cplx exp_sum_discrete(const FrequencyDraw& draw, int m) {
    validate(draw);
    const int n_mod = draw.modulus;
    const long long mm = ((static_cast<long long>(m) % n_mod) + n_mod) % n_mod;
    cplx acc(0.0, 0.0);
    for (int x : draw.points) {
        const long long idx = (mm * x) % n_mod;
        acc += unit_phase(static_cast<double>(idx) / static_cast<double>(n_mod));
    }
    return acc;
}

std::vector<int> multiplicities(const FrequencyDraw& draw) {
    validate(draw);
    std::vector<int> counts(static_cast<std::size_t>(draw.modulus), 0);
    for (int x : draw.points) ++counts[static_cast<std::size_t>(x)];
    return counts;
}

KernelProfile kernel_profile(const FrequencyDraw& draw, const FourierPlan& plan) {
    validate(draw);
    if (plan.modulus() != draw.modulus) throw invalid_parameter("plan modulus mismatch");
    const auto counts = multiplicities(draw);
    const auto un = static_cast<std::size_t>(draw.modulus);

    std::vector<cplx> coeff(un);
    for (std::size_t i = 0; i < un; ++i) coeff[i] = cplx(static_cast<double>(counts[i]), 0.0);

    KernelProfile profile;
    profile.modulus = draw.modulus;
    profile.values.resize(un);
    plan.char_sum(coeff.data(), profile.values.data(), +1);

    // L(0) = sum of multiplicities = n, exact by definition
    profile.values[0] = cplx(static_cast<double>(draw.n()), 0.0);
    profile.peak = static_cast<double>(draw.n());

    double best = -1.0;
    int arg = 1;
    for (std::size_t m = 1; m < un; ++m) {
        const double a2 = std::norm(profile.values[m]);
        if (a2 > best) {
            best = a2;
            arg = static_cast<int>(m);
        }
    }
    profile.offpeak_sup = best > 0.0 ? std::sqrt(best) : 0.0;
    profile.offpeak_argmax = arg;
    return profile;
}

KernelProfile kernel_profile(const FrequencyDraw& draw) {
    validate(draw);
    return kernel_profile(draw, FourierPlan(draw.modulus));
}

CertificateResult certificate_check(const KernelProfile& profile, int t_sparsity) {
    if (t_sparsity < 1) throw invalid_parameter("T must be >= 1");
    CertificateResult r;
    r.threshold = profile.peak / (2.0 * static_cast<double>(t_sparsity));
    r.margin = r.threshold - profile.offpeak_sup;
    r.holds = profile.offpeak_sup < r.threshold;
    return r;
}

BigInt big_factorial(int n) {
    BigInt f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

BigInt big_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt b = 1;
    for (int i = 0; i < k; ++i) {
        b *= (n - i);
        b /= (i + 1);
    }
    return b;
}

BigInt moment_exact(int n, int p) {
    if (n < 1) throw invalid_parameter("n must be >= 1");
    if (p < 0) throw invalid_parameter("p must be >= 0");
    // p!^2 * [z^p] f(z)^n with f(z) = sum_k z^k / k!^2, done over a common
    // denominator: track integer coefficients of f(z)*p!^2-ish via rationals.
    std::vector<BigRat> f(static_cast<std::size_t>(p) + 1);
    for (int k = 0; k <= p; ++k) {
        const BigInt kf = big_factorial(k);
        f[static_cast<std::size_t>(k)] = BigRat(1, kf * kf);
    }
    std::vector<BigRat> acc(static_cast<std::size_t>(p) + 1);
    acc[0] = 1;
    for (int rep = 0; rep < n; ++rep) {
        std::vector<BigRat> next(static_cast<std::size_t>(p) + 1);
        for (int i = 0; i <= p; ++i) {
            if (acc[static_cast<std::size_t>(i)] == 0) continue;
            for (int k = 0; i + k <= p; ++k) {
                next[static_cast<std::size_t>(i + k)] +=
                    acc[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(k)];
            }
        }
        acc = std::move(next);
    }
    const BigInt pf = big_factorial(p);
    const BigRat total = acc[static_cast<std::size_t>(p)] * BigRat(pf * pf, 1);
    if (boost::multiprecision::denominator(total) != 1)
        throw std::logic_error("moment must be an integer");
    return boost::multiprecision::numerator(total);
}

BigRat j_moment(int modulus, int k) {
    if (modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (k < 0) throw invalid_parameter("k must be >= 0");
    BigInt acc = 0;
    for (int j = 0; j <= k; ++j) {
        if ((k - 2 * j) % modulus == 0) acc += big_binomial(k, j);
    }
    BigInt denom = BigInt(1) << k;
    return BigRat(acc, denom);
}

double mgf_discrete(int modulus, double u) {
    if (modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (u < 0.0) throw invalid_parameter("u must be >= 0");
    double acc = 0.0;
    for (int x = 0; x < modulus; ++x) {
        acc += std::exp(u * std::cos(kTwoPi * x / modulus));
    }
    return acc / static_cast<double>(modulus);
}

double rotated_mgf(int modulus, double u, double phi) {
    if (modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (u < 0.0) throw invalid_parameter("u must be >= 0");
    double acc = 0.0;
    for (int x = 0; x < modulus; ++x) {
        acc += std::exp(u * std::cos(kTwoPi * x / modulus - phi));
    }
    return acc / static_cast<double>(modulus);
}

std::string to_json(const KernelProfile& profile) {
    nlohmann::json values = nlohmann::json::array();
    for (const auto& v : profile.values) values.push_back({v.real(), v.imag()});
    nlohmann::json j{
        {"modulus", profile.modulus},
        {"values", std::move(values)},
        {"peak", profile.peak},
        {"offpeak_sup", profile.offpeak_sup},
        {"offpeak_argmax", profile.offpeak_argmax},
    };
    return j.dump();
}

}  // namespace expsum
