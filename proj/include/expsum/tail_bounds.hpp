#pragma once

#include "expsum/common.hpp"

#include <string>
#include <vector>

namespace expsum {

/// Parameter bundle for the closed-form bounds. Fields a given bound does
/// not use are ignored by it; nu = 0 asks for the bound's own nu rule.
struct BoundQuery {
    int N = 0;         // modulus, prime >= 5 for the discrete bounds
    int n = 0;         // number of random frequencies
    long long M = 0;   // frequency range, continuous case
    double delta = 0;  // flatness level in (0, 1)
    int nu = 0;        // sector count, >= 3
    double C = 0;      // oversampling constant
    int T = 0;         // sparsity
};

struct BoundReport {
    std::string bound_name;
    double failure_bound = 0;  // or guaranteed range, for the range bounds
    BoundQuery params;
    int nu_chosen = 0;
    int implied_n = 0;
    bool vacuous = false;  // bound >= 1 (failure) or < 1 (range); never clamped
    std::string notes;
};

/// Guaranteed frequency range (1/2) 2^{n delta^2 / 4}.
double theorem_a_range(int n, double delta);

/// M nu exp(-n delta^2 cos^2(pi/nu)); continuous phases, m = 1..M.
double theorem1_failure(long long M, int n, double delta, int nu);

/// floor(delta pi sqrt(2n)), clamped up to 3 when the formula dips below.
int optimal_nu_theorem1(int n, double delta, bool* clamped = nullptr);

struct ComparisonResult {
    double new_range = 0;  // (1/nu) e^{n delta^2 a^2}
    double old_range = 0;  // theorem_a_range
    bool improves = false;
};

/// Compares the Laplace-transform range against the moment-method range.
/// `improves` is decided in log scale so huge exponents stay meaningful.
ComparisonResult theorem_a_comparison(int n, double delta, int nu);

/// exp((delta/6) sqrt(n log n) - 3 log n), the explicit-construction range.
/// Natural log throughout. May be < 1 (construction guarantees nothing).
double tijdeman_range(int n, double delta);

/// c = 4 cos^2(pi/nu) / log 2 - 1: with M = (1/2) 2^{n delta^2/4} the
/// failure bound becomes (nu/2) M^{-c}, so large M makes a random draw an
/// almost-certain witness.
double explicitness_exponent(int nu);

/// ((N-1)/2) nu exp(-n delta^2 cos^2(pi/nu)); N must be prime >= 5.
double theorem2_failure(int N, int n, double delta, int nu);

/// (nu/2) N^{1 - C cos^2(pi/nu)} with delta = 1/(2T), n = ceil(4 C T^2 log N).
/// implied_n receives that n when non-null.
double theorem3_failure(int N, int T, double C, int nu, int* implied_n = nullptr);

struct RefinedBound {
    int nu = 0;
    double failure = 0;
    int implied_n = 0;
    bool vacuous = false;
    std::string notes;
};

/// nu = floor(pi / arcsin(1/sqrt(2 C log N))) and the closed-form bound
/// (pi/2) sqrt(2 C e log N) N^{1-C}. Requires 2 C log N > 1; C <= 1 yields
/// a vacuous flagged bound rather than an error.
RefinedBound refined_nu_and_bound(int N, int T, double C);

struct PaperTableRow {
    double C = 0;
    int n = 0;
    double p = 0;
    std::string flags;
};

std::vector<PaperTableRow> paper_example_table(int N, int T, const std::vector<double>& c_values);

/// CSV with header "C,n,p,flags", doubles at full precision.
std::string paper_table_csv(const std::vector<PaperTableRow>& rows);

/// Exhaustive integer scan of nu in [3, 200] minimizing the stated bound.
int best_nu_theorem1(long long M, int n, double delta);
int best_nu_theorem2(int N, int n, double delta);

/// Named dispatch used by the CLI; name in {theorem_a, theorem1, theorem2,
/// theorem3, refined, tijdeman, explicitness}.
BoundReport evaluate_bound(const std::string& name, const BoundQuery& query);

std::string to_json(const BoundReport& report);
std::string to_csv(const BoundReport& report);

}  // namespace expsum
