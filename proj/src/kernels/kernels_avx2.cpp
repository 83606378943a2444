// AVX2/FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma;
// callers must go through avx2_ops(), which returns nullptr unless the CPU
// actually supports both.

#include "expsum/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace expsum::kern {

namespace {

inline const double* dp(const cplx* z) { return reinterpret_cast<const double*>(z); }
inline double* dp(cplx* z) { return reinterpret_cast<double*>(z); }

// [x0,y0,x1,y1] * [u0,v0,u1,v1], two complex products per vector
inline __m256d cmul2(__m256d a, __m256d b) {
    __m256d bre = _mm256_movedup_pd(b);       // [u0,u0,u1,u1]
    __m256d bim = _mm256_permute_pd(b, 0xF);  // [v0,v0,v1,v1]
    __m256d asw = _mm256_permute_pd(a, 0x5);  // [y0,x0,y1,x1]
    return _mm256_fmaddsub_pd(a, bre, _mm256_mul_pd(asw, bim));
}

// a * conj(b)
inline __m256d cmul_conj2(__m256d a, __m256d b) {
    __m256d bre = _mm256_movedup_pd(b);
    __m256d bim = _mm256_permute_pd(b, 0xF);
    __m256d asw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmsubadd_pd(a, bre, _mm256_mul_pd(asw, bim));
}

// |z|^2 duplicated into both lanes of each pair: [m0,m0,m1,m1]
inline __m256d abs2_pairs(__m256d v) {
    __m256d sq = _mm256_mul_pd(v, v);
    return _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
}

inline double reduce_max(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_max_pd(lo, hi);
    m = _mm_max_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

inline double reduce_sum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
    return _mm_cvtsd_f64(s);
}

void cmul(cplx* a, const cplx* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(dp(a) + 2 * i);
        __m256d vb = _mm256_loadu_pd(dp(b) + 2 * i);
        _mm256_storeu_pd(dp(a) + 2 * i, cmul2(va, vb));
    }
    for (; i < n; ++i) a[i] *= b[i];
}

void cmul_conj(cplx* a, const cplx* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d va = _mm256_loadu_pd(dp(a) + 2 * i);
        __m256d vb = _mm256_loadu_pd(dp(b) + 2 * i);
        _mm256_storeu_pd(dp(a) + 2 * i, cmul_conj2(va, vb));
    }
    for (; i < n; ++i) a[i] *= std::conj(b[i]);
}

void radix2_pass(cplx* data, std::size_t n, std::size_t len, const cplx* tw) {
    const std::size_t half = len / 2;
    if (half < 2) {
        for (std::size_t base = 0; base < n; base += len) {
            const cplx t = data[base + half] * tw[0];
            const cplx u = data[base];
            data[base] = u + t;
            data[base + half] = u - t;
        }
        return;
    }
    for (std::size_t base = 0; base < n; base += len) {
        double* lo = dp(data + base);
        double* hi = dp(data + base + half);
        for (std::size_t j = 0; j + 2 <= half; j += 2) {
            __m256d u = _mm256_loadu_pd(lo + 2 * j);
            __m256d v = _mm256_loadu_pd(hi + 2 * j);
            __m256d w = _mm256_loadu_pd(dp(tw) + 2 * j);
            __m256d t = cmul2(v, w);
            _mm256_storeu_pd(lo + 2 * j, _mm256_add_pd(u, t));
            _mm256_storeu_pd(hi + 2 * j, _mm256_sub_pd(u, t));
        }
    }
}

void soft_threshold(cplx* z, double tau, std::size_t n) {
    const __m256d tau2 = _mm256_set1_pd(tau * tau);
    const __m256d tauv = _mm256_set1_pd(tau);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(dp(z) + 2 * i);
        __m256d m2 = abs2_pairs(v);
        __m256d keep = _mm256_cmp_pd(m2, tau2, _CMP_GT_OQ);
        __m256d scale = _mm256_sub_pd(one, _mm256_div_pd(tauv, _mm256_sqrt_pd(m2)));
        scale = _mm256_and_pd(scale, keep);
        _mm256_storeu_pd(dp(z) + 2 * i, _mm256_mul_pd(v, scale));
    }
    for (; i < n; ++i) {
        const double m2 = std::norm(z[i]);
        if (m2 <= tau * tau) {
            z[i] = 0.0;
        } else {
            z[i] *= (1.0 - tau / std::sqrt(m2));
        }
    }
}

cplx rotate_accumulate(cplx* ph, const cplx* step, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = cmul2(_mm256_loadu_pd(dp(ph) + 2 * i), _mm256_loadu_pd(dp(step) + 2 * i));
        _mm256_storeu_pd(dp(ph) + 2 * i, v);
        acc = _mm256_add_pd(acc, v);
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    __m128d s = _mm_add_pd(lo, hi);
    cplx sum(_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s)));
    for (; i < n; ++i) {
        ph[i] *= step[i];
        sum += ph[i];
    }
    return sum;
}

double max_abs2(const cplx* z, std::size_t n) {
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        best = _mm256_max_pd(best, abs2_pairs(_mm256_loadu_pd(dp(z) + 2 * i)));
    }
    double out = reduce_max(best);
    for (; i < n; ++i) out = std::max(out, std::norm(z[i]));
    return out;
}

double max_dist2(const cplx* a, const cplx* b, std::size_t n) {
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(dp(a) + 2 * i), _mm256_loadu_pd(dp(b) + 2 * i));
        best = _mm256_max_pd(best, abs2_pairs(d));
    }
    double out = reduce_max(best);
    for (; i < n; ++i) out = std::max(out, std::norm(a[i] - b[i]));
    return out;
}

double sum_abs(const cplx* z, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v0 = _mm256_loadu_pd(dp(z) + 2 * i);
        __m256d v1 = _mm256_loadu_pd(dp(z) + 2 * i + 4);
        // hadd packs the four |.|^2 values (order scrambled, sum unaffected)
        __m256d m2 = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
        acc = _mm256_add_pd(acc, _mm256_sqrt_pd(m2));
    }
    double s = reduce_sum(acc);
    for (; i < n; ++i) s += std::abs(z[i]);
    return s;
}

double sum_abs2(const cplx* z, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v = _mm256_loadu_pd(dp(z) + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = reduce_sum(acc);
    for (; i < n; ++i) s += std::norm(z[i]);
    return s;
}

}  // namespace

const Ops* avx2_ops() {
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    if (!supported) return nullptr;
    static const Ops ops = {
        "avx2",
        cmul,
        cmul_conj,
        radix2_pass,
        soft_threshold,
        rotate_accumulate,
        max_abs2,
        max_dist2,
        sum_abs,
        sum_abs2,
    };
    return &ops;
}

}  // namespace expsum::kern
