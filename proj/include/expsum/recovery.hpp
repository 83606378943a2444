#pragma once

#include "expsum/exp_sums.hpp"
#include "expsum/fourier.hpp"
#include "expsum/rng.hpp"
#include "expsum/signal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace expsum {

/// Partial spectrum: the transform of the unknown signal restricted to
/// omega. `observed[i]` is the value at frequency `omega[i]`.
struct MeasurementSet {
    int modulus = 0;
    std::vector<int> omega;      // sorted, distinct, nonempty
    std::vector<cplx> observed;
};

void validate(const MeasurementSet& meas);

MeasurementSet measure(const Signal& x, std::vector<int> omega);

std::string to_json(const MeasurementSet& meas);
MeasurementSet measurement_from_json(const std::string& text);

struct SolverOptions {
    double tol = 1e-9;     // relative: successive change and splitting gap
    int max_iter = 20000;
    double gamma0 = 0.5;   // shrinkage scale, relative to the l2 extension peak
};

enum class SolveStatus { Converged, MaxIter, Infeasible };

const char* to_string(SolveStatus status);

struct RecoveryResult {
    Signal reconstruction;
    double objective = 0;   // l1 norm attained
    double residual = 0;    // max constraint violation over omega
    int iterations = 0;
    SolveStatus status = SolveStatus::Converged;
};

/// Minimize ||z||_1 over signals z with dft(z)|_omega = observed.
///
/// Douglas-Rachford splitting: complex soft-thresholding alternated with
/// exact projection onto the affine constraint set (overwrite the omega
/// coordinates of the transform, keep the rest; exact because the
/// transform is unitary). Deterministic given inputs. The returned point
/// is the projection of the final prox iterate, so it is feasible to
/// machine precision.
RecoveryResult basis_pursuit(const MeasurementSet& meas, const SolverOptions& opt = {});
RecoveryResult basis_pursuit(const MeasurementSet& meas, const FourierPlan& plan,
                             const SolverOptions& opt = {});

enum class AlphaVerdict { Holds, Fails, Indeterminate };

const char* to_string(AlphaVerdict verdict);

/// Does basis pursuit on measure(x, omega) return x itself (to `tol` in
/// l-infinity) with matching l1 norm? Non-converged solves are reported
/// Indeterminate, distinct from Fails.
AlphaVerdict verify_alpha(const Signal& x, const std::vector<int>& omega, double tol,
                          const SolverOptions& opt = {});

/// T-sparse signal with uniform support and CN(0,1) amplitudes.
Signal random_sparse_signal(int modulus, int t_sparsity, Rng& rng);

struct GuaranteeReport {
    CertificateResult certificate;
    int trials = 0;
    int successes = 0;
    int failures = 0;
    int indeterminate = 0;
    double max_recovery_error = 0;  // over converged trials
};

/// Checks the dual certificate for the draw, then pushes `trials` random
/// T-sparse signals through recovery on omega = range(draw). When the
/// certificate holds, every converged trial must succeed; the report just
/// counts, callers assert.
GuaranteeReport guaranteed_recovery_check(const FrequencyDraw& draw, int t_sparsity, int trials,
                                          std::uint64_t seed, double tol = 1e-6,
                                          const SolverOptions& opt = {});

std::string to_json(const RecoveryResult& result);
std::string to_json(const GuaranteeReport& report);

}  // namespace expsum
