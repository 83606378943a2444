#pragma once

#include "expsum/common.hpp"
#include "expsum/fourier.hpp"
#include "expsum/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace expsum {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// Ordered tuple of n iid-uniform frequencies in Z_N; duplicates allowed.
struct FrequencyDraw {
    int modulus = 0;
    std::vector<int> points;

    int n() const { return static_cast<int>(points.size()); }
};

/// n phases in [0, 1).
struct ContinuousDraw {
    std::vector<double> points;
};

void validate(const FrequencyDraw& draw);

FrequencyDraw sample_frequency_draw(int modulus, int n, Rng& rng);
ContinuousDraw sample_continuous_draw(int n, Rng& rng);

/// L(m) for all m, its peak L(0) = n, and the off-peak sup over m != 0.
struct KernelProfile {
    int modulus = 0;
    std::vector<cplx> values;
    double peak = 0.0;
    double offpeak_sup = 0.0;
    int offpeak_argmax = 0;
};

/// S(m) = sum_j e(m X_j / N).
cplx exp_sum_discrete(const FrequencyDraw& draw, int m);

/// Whole profile at once; the frequency multiplicities of the draw are the
/// coefficients of L, so L(m) at every m is the draw's exponential sum.
KernelProfile kernel_profile(const FrequencyDraw& draw);
KernelProfile kernel_profile(const FrequencyDraw& draw, const FourierPlan& plan);

/// Multiplicity histogram restricted to the draw's range.
std::vector<int> multiplicities(const FrequencyDraw& draw);

struct CertificateResult {
    bool holds = false;
    double margin = 0.0;     // peak/(2T) - offpeak_sup; positive iff holds
    double threshold = 0.0;  // peak/(2T)
};

/// Dual-certificate check: off-peak sup strictly below peak/(2T).
/// Margin exactly 0 reports "fails".
CertificateResult certificate_check(const KernelProfile& profile, int t_sparsity);

/// E|sum_{j=1}^n e(x_j)|^{2p} for iid uniform phases on the circle; exact.
/// Equals p!^2 [z^p] (sum_k z^k / k!^2)^n, i.e. the sum of squared
/// multinomials over compositions of p into n parts.
BigInt moment_exact(int n, int p);

/// J_k = E cos^k(2 pi X / N) = 2^{-k} sum_{j : N | k-2j} C(k, j).
BigRat j_moment(int modulus, int k);

/// E exp(u cos(2 pi X / N)), the exact N-term average.
double mgf_discrete(int modulus, double u);

/// E exp(u cos(2 pi X / N - phi)).
double rotated_mgf(int modulus, double u, double phi);

std::string to_json(const KernelProfile& profile);

// exact combinatorics shared with omega_models
BigInt big_factorial(int n);
BigInt big_binomial(int n, int k);

}  // namespace expsum
