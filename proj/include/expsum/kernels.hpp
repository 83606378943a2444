#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace expsum::kern {

using cplx = std::complex<double>;

// The data-parallel inner loops of the library, behind one dispatch table.
// `scalar` is the reference implementation; `avx2` must agree with it on
// every input (equivalence-tested in tests/test_kernels.cpp) and is picked
// at runtime when the CPU supports it.
struct Ops {
    const char* name;

    // a[i] *= b[i]
    void (*cmul)(cplx* a, const cplx* b, std::size_t n);
    // a[i] *= conj(b[i])
    void (*cmul_conj)(cplx* a, const cplx* b, std::size_t n);
    // One Cooley-Tukey stage over blocks of `len`; tw holds len/2 twiddles.
    void (*radix2_pass)(cplx* data, std::size_t n, std::size_t len, const cplx* tw);
    // Magnitude shrinkage z -> z * max(0, 1 - tau/|z|), phase preserved.
    void (*soft_threshold)(cplx* z, double tau, std::size_t n);
    // ph[i] *= step[i]; returns sum of the updated ph.
    cplx (*rotate_accumulate)(cplx* ph, const cplx* step, std::size_t n);
    // max_i |z[i]|^2
    double (*max_abs2)(const cplx* z, std::size_t n);
    // max_i |a[i] - b[i]|^2
    double (*max_dist2)(const cplx* a, const cplx* b, std::size_t n);
    double (*sum_abs)(const cplx* z, std::size_t n);
    double (*sum_abs2)(const cplx* z, std::size_t n);
};

const Ops& scalar_ops();

/// AVX2 variant table, or nullptr when the CPU lacks AVX2/FMA.
const Ops* avx2_ops();

/// The table in use. Defaults to AVX2 when available; the EXPSUM_SIMD
/// environment variable ("scalar" | "avx2" | "auto") overrides.
const Ops& active_ops();

/// Force a backend by name ("scalar" | "avx2" | "auto"); test hook.
void select_backend(const std::string& name);

}  // namespace expsum::kern
