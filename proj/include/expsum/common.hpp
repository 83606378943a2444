#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace expsum {

using cplx = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

/// Thrown on any violated precondition (bad modulus, non-prime N, ...).
/// The CLI maps this to exit code 2.
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// e(u) = exp(2*pi*i*u).
inline cplx unit_phase(double u) {
    return std::polar(1.0, kTwoPi * u);
}

/// Deterministic trial-division primality test. Intended range: N <= 1e7.
bool is_prime(long long n);

/// Full-precision "%.17g" rendering; CSV outputs use this everywhere so
/// reruns are byte-comparable.
std::string fmt_g17(double v);

}  // namespace expsum
