#include "expsum/kernels.hpp"

#include "expsum/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>

namespace expsum::kern {

namespace scalar {

void cmul(cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
}

void cmul_conj(cplx* a, const cplx* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= std::conj(b[i]);
}

void radix2_pass(cplx* data, std::size_t n, std::size_t len, const cplx* tw) {
    const std::size_t half = len / 2;
    for (std::size_t base = 0; base < n; base += len) {
        for (std::size_t j = 0; j < half; ++j) {
            const cplx t = data[base + j + half] * tw[j];
            const cplx u = data[base + j];
            data[base + j] = u + t;
            data[base + j + half] = u - t;
        }
    }
}

void soft_threshold(cplx* z, double tau, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double m2 = std::norm(z[i]);
        if (m2 <= tau * tau) {
            z[i] = 0.0;
        } else {
            const double m = std::sqrt(m2);
            z[i] *= (1.0 - tau / m);
        }
    }
}

cplx rotate_accumulate(cplx* ph, const cplx* step, std::size_t n) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ph[i] *= step[i];
        sum += ph[i];
    }
    return sum;
}

double max_abs2(const cplx* z, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::norm(z[i]));
    return best;
}

double max_dist2(const cplx* a, const cplx* b, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::norm(a[i] - b[i]));
    return best;
}

double sum_abs(const cplx* z, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(z[i]);
    return s;
}

double sum_abs2(const cplx* z, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::norm(z[i]);
    return s;
}

}  // namespace scalar

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",
        scalar::cmul,
        scalar::cmul_conj,
        scalar::radix2_pass,
        scalar::soft_threshold,
        scalar::rotate_accumulate,
        scalar::max_abs2,
        scalar::max_dist2,
        scalar::sum_abs,
        scalar::sum_abs2,
    };
    return ops;
}

namespace {

const Ops* g_active = nullptr;
std::mutex g_select_mutex;

const Ops* pick(const std::string& name) {
    if (name == "scalar") return &scalar_ops();
    if (name == "avx2") {
        const Ops* v = avx2_ops();
        if (!v) throw invalid_parameter("avx2 backend requested but not supported on this CPU");
        return v;
    }
    if (name == "auto" || name.empty()) {
        const Ops* v = avx2_ops();
        return v ? v : &scalar_ops();
    }
    throw invalid_parameter("unknown SIMD backend: " + name);
}

}  // namespace

#ifndef EXPSUM_WITH_AVX2
// Non-x86 builds: the AVX2 translation unit is excluded entirely.
const Ops* avx2_ops() { return nullptr; }
#endif

const Ops& active_ops() {
    if (!g_active) {
        std::lock_guard<std::mutex> lock(g_select_mutex);
        if (!g_active) {
            const char* env = std::getenv("EXPSUM_SIMD");
            g_active = pick(env ? env : "auto");
        }
    }
    return *g_active;
}

void select_backend(const std::string& name) {
    std::lock_guard<std::mutex> lock(g_select_mutex);
    g_active = pick(name);
}

}  // namespace expsum::kern
