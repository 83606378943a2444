#pragma once

#include "expsum/exp_sums.hpp"
#include "expsum/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace expsum {

enum class OmegaKind { UniformSubset, BernoulliSelection, OccupationRange, PoissonProcess };

const char* to_string(OmegaKind kind);

/// One of the four exchangeable models for a random subset of the dual
/// group: fixed-size uniform, independent selection, the range of n iid
/// uniform draws, and a Poisson-sized uniform subset.
struct OmegaModel {
    OmegaKind kind = OmegaKind::UniformSubset;
    int modulus = 0;
    int f = 0;        // UniformSubset
    double tau = 0;   // BernoulliSelection / PoissonProcess
    int n = 0;        // OccupationRange

    static OmegaModel uniform_subset(int modulus, int f);
    static OmegaModel bernoulli(int modulus, double tau);
    static OmegaModel occupation(int modulus, int n);
    static OmegaModel poisson(int modulus, double tau);
};

void validate(const OmegaModel& model);

struct OmegaSample {
    std::vector<int> omega;                  // sorted, distinct
    std::optional<FrequencyDraw> draw;       // underlying tuple, occupation only
};

/// Identical (model, rng state) reproduce identical output bit-for-bit.
OmegaSample sample_omega(const OmegaModel& model, Rng& rng);

/// Distribution of |Omega| on k = 0..N. Exact rationals for the first three
/// models; the Poisson model is float-only, truncated at N and renormalized.
struct SizeDistribution {
    OmegaModel model;
    std::vector<double> probs;    // index k
    std::vector<BigRat> exact;    // empty for the Poisson model
    std::string notes;
};

SizeDistribution size_distribution(const OmegaModel& model);

/// CSV with header "k,probability".
std::string size_distribution_csv(const SizeDistribution& dist);

std::string to_json(const OmegaSample& sample);

/// Matched parameters across models: E|Omega| under OccupationRange(n) is
/// N(1 - (1 - 1/N)^n); f rounds it to the nearest integer, tau = E|Omega|/N.
struct Calibration {
    int f = 0;
    double tau = 0;
    double expected_range = 0;
    BigRat expected_range_exact;
};

Calibration model_calibration(int n, int modulus);

// exact combinatorics, exposed for the enumeration tests
BigInt stirling2(int n, int k);
BigInt surjections(int n, int k);

}  // namespace expsum
