#pragma once

#include "expsum/common.hpp"

#include <string>
#include <vector>

namespace expsum {

/// Complex-valued function on Z_N, indexed by time t.
struct Signal {
    int modulus = 0;
    std::vector<cplx> values;

    static Signal zeros(int n);
};

/// Complex-valued function on the dual group, indexed by frequency omega.
struct Spectrum {
    int modulus = 0;
    std::vector<cplx> values;

    static Spectrum zeros(int n);
};

void validate(const Signal& x);
void validate(const Spectrum& s);

struct SignalNorms {
    int l0 = 0;
    double l1 = 0.0;
    double l2 = 0.0;
};

/// Support counting uses `zero_tol`: entries with |x(t)| <= zero_tol do not
/// count toward l0. Synthetic inputs use the exact default; recovered
/// signals carry solver noise and should pass ~1e-10.
SignalNorms norms(const Signal& x, double zero_tol = 0.0);

/// Wiener-algebra norm of a spectrum: the l1 norm of its time-side preimage.
/// By definition this is computed through the inverse transform; it is the
/// only way the A-norm is evaluated anywhere in the library.
double a_norm(const Spectrum& s);

// JSON round-trip: {"modulus": N, "values": [[re, im], ...]}
std::string to_json(const Signal& x);
std::string to_json(const Spectrum& s);
Signal signal_from_json(const std::string& text);
Spectrum spectrum_from_json(const std::string& text);

}  // namespace expsum
