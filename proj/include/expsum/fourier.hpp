#pragma once

#include "expsum/common.hpp"
#include "expsum/signal.hpp"

#include <cstddef>
#include <vector>

namespace expsum {

/// Precomputed transform machinery for one modulus N.
///
/// The reference path is the direct O(N^2) summation over a root table;
/// the fast path runs radix-2 FFTs (Bluestein embedding for non-power-of-2
/// N) and must reproduce the reference within 1e-10 per entry, which the
/// test suite enforces. Method::Auto picks the fast path for N > 32.
class FourierPlan {
public:
    enum class Method { Auto, Direct, Fast };

    explicit FourierPlan(int modulus, Method method = Method::Auto);

    int modulus() const { return n_; }

    /// Unitary transform, x_hat(w) = N^{-1/2} sum_t x(t) e(-t w / N).
    Spectrum forward(const Signal& x) const;

    /// Unitary inverse, x(t) = N^{-1/2} sum_w x_hat(w) e(t w / N).
    Signal inverse(const Spectrum& s) const;

    /// Unnormalized character sum out[k] = sum_t in[t] e(sign * t k / N).
    /// sign = -1 is the forward kernel, +1 the inverse kernel.
    void char_sum(const cplx* in, cplx* out, int sign) const;

    /// The O(N^2) reference, always available regardless of method.
    void char_sum_direct(const cplx* in, cplx* out, int sign) const;

    /// e(k/N) table, k = 0..N-1.
    const std::vector<cplx>& roots() const { return roots_; }

private:
    void char_sum_fast(const cplx* in, cplx* out, int sign) const;
    void fft_pow2(cplx* data, int sign) const;

    int n_;
    Method method_;
    std::vector<cplx> roots_;

    // radix-2 machinery over size m_ (= n_ when a power of two, otherwise
    // the Bluestein embedding size next_pow2(2n-1))
    std::size_t m_ = 0;
    std::vector<std::size_t> bitrev_;
    std::vector<cplx> tw_fwd_;  // concatenated per-stage twiddles, sign -1
    std::vector<cplx> tw_bwd_;
    bool use_bluestein_ = false;
    std::vector<cplx> chirp_fwd_;      // e(-t^2 / 2N), t = 0..N-1
    std::vector<cplx> chirp_filt_fwd_; // FFT_m of the embedded conj chirp
    std::vector<cplx> chirp_filt_bwd_;
};

/// One-shot conveniences; construct a plan internally.
Spectrum dft(const Signal& x);
Signal idft(const Spectrum& s);

}  // namespace expsum
