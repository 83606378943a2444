#include "expsum/fourier.hpp"

#include "expsum/kernels.hpp"

#include <cmath>

namespace expsum {

namespace {

std::size_t next_pow2(std::size_t v) {
    std::size_t m = 1;
    while (m < v) m <<= 1;
    return m;
}

std::vector<cplx>& scratch(std::size_t n, int which) {
    thread_local std::vector<cplx> bufs[2];
    auto& b = bufs[which];
    if (b.size() < n) b.resize(n);
    return b;
}

// Concatenated per-stage twiddles for an iterative radix-2 pass:
// stage len = 2, 4, ..., m contributes len/2 entries e(sign*j/len).
std::vector<cplx> build_twiddles(std::size_t m, int sign) {
    std::vector<cplx> tw;
    tw.reserve(m > 0 ? m - 1 : 0);
    for (std::size_t len = 2; len <= m; len <<= 1) {
        for (std::size_t j = 0; j < len / 2; ++j) {
            tw.push_back(unit_phase(sign * static_cast<double>(j) / static_cast<double>(len)));
        }
    }
    return tw;
}

}  // namespace

FourierPlan::FourierPlan(int modulus, Method method) : n_(modulus), method_(method) {
    if (modulus < 2) throw invalid_parameter("modulus must be >= 2");
    roots_.resize(n_);
    for (int k = 0; k < n_; ++k) {
        roots_[k] = unit_phase(static_cast<double>(k) / static_cast<double>(n_));
    }

    const auto un = static_cast<std::size_t>(n_);
    use_bluestein_ = (un & (un - 1)) != 0;
    m_ = use_bluestein_ ? next_pow2(2 * un - 1) : un;

    bitrev_.resize(m_);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < m_) ++bits;
    for (std::size_t i = 0; i < m_; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
        bitrev_[i] = r;
    }
    tw_fwd_ = build_twiddles(m_, -1);
    tw_bwd_ = build_twiddles(m_, +1);

    if (use_bluestein_) {
        // chirp c[t] = e(sign * t^2 / 2N); t^2 taken mod 2N keeps the table exact
        chirp_fwd_.resize(un);
        const long long two_n = 2LL * n_;
        for (std::size_t t = 0; t < un; ++t) {
            const long long q = (static_cast<long long>(t) * static_cast<long long>(t)) % two_n;
            chirp_fwd_[t] = unit_phase(-static_cast<double>(q) / static_cast<double>(two_n));
        }
        auto build_filter = [&](int sign) {
            std::vector<cplx> g(m_, cplx(0.0, 0.0));
            for (std::size_t t = 0; t < un; ++t) {
                const cplx c = sign < 0 ? chirp_fwd_[t] : std::conj(chirp_fwd_[t]);
                g[t] = std::conj(c);
                if (t > 0) g[m_ - t] = std::conj(c);
            }
            fft_pow2(g.data(), -1);
            return g;
        };
        chirp_filt_fwd_ = build_filter(-1);
        chirp_filt_bwd_ = build_filter(+1);
    }
}

void FourierPlan::fft_pow2(cplx* data, int sign) const {
    for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    const auto& ops = kern::active_ops();
    const std::vector<cplx>& tw = sign < 0 ? tw_fwd_ : tw_bwd_;
    std::size_t off = 0;
    for (std::size_t len = 2; len <= m_; len <<= 1) {
        ops.radix2_pass(data, m_, len, tw.data() + off);
        off += len / 2;
    }
}

void FourierPlan::char_sum_direct(const cplx* in, cplx* out, int sign) const {
    const int N = n_;
    for (int k = 0; k < N; ++k) {
        const std::size_t step = static_cast<std::size_t>(sign > 0 ? k : (N - k) % N);
        cplx acc(0.0, 0.0);
        std::size_t idx = 0;
        for (int t = 0; t < N; ++t) {
            acc += in[t] * roots_[idx];
            idx += step;
            if (idx >= static_cast<std::size_t>(N)) idx -= static_cast<std::size_t>(N);
        }
        out[k] = acc;
    }
}

void FourierPlan::char_sum_fast(const cplx* in, cplx* out, int sign) const {
    const auto un = static_cast<std::size_t>(n_);
    const auto& ops = kern::active_ops();
    if (!use_bluestein_) {
        for (std::size_t i = 0; i < un; ++i) out[i] = in[i];
        fft_pow2(out, sign);
        return;
    }
    auto& u = scratch(m_, 0);
    for (std::size_t t = 0; t < un; ++t) u[t] = in[t];
    if (sign < 0) {
        ops.cmul(u.data(), chirp_fwd_.data(), un);
    } else {
        ops.cmul_conj(u.data(), chirp_fwd_.data(), un);
    }
    for (std::size_t t = un; t < m_; ++t) u[t] = cplx(0.0, 0.0);
    fft_pow2(u.data(), -1);
    ops.cmul(u.data(), (sign < 0 ? chirp_filt_fwd_ : chirp_filt_bwd_).data(), m_);
    fft_pow2(u.data(), +1);
    const double inv_m = 1.0 / static_cast<double>(m_);
    for (std::size_t k = 0; k < un; ++k) {
        const cplx c = sign < 0 ? chirp_fwd_[k] : std::conj(chirp_fwd_[k]);
        out[k] = u[k] * c * inv_m;
    }
}

void FourierPlan::char_sum(const cplx* in, cplx* out, int sign) const {
    const bool fast = method_ == Method::Fast || (method_ == Method::Auto && n_ > 32);
    if (fast) {
        char_sum_fast(in, out, sign);
    } else {
        char_sum_direct(in, out, sign);
    }
}

Spectrum FourierPlan::forward(const Signal& x) const {
    validate(x);
    if (x.modulus != n_) throw invalid_parameter("signal modulus does not match plan");
    Spectrum s = Spectrum::zeros(n_);
    char_sum(x.values.data(), s.values.data(), -1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& v : s.values) v *= scale;
    return s;
}

Signal FourierPlan::inverse(const Spectrum& s) const {
    validate(s);
    if (s.modulus != n_) throw invalid_parameter("spectrum modulus does not match plan");
    Signal x = Signal::zeros(n_);
    char_sum(s.values.data(), x.values.data(), +1);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (auto& v : x.values) v *= scale;
    return x;
}

Spectrum dft(const Signal& x) {
    validate(x);
    return FourierPlan(x.modulus).forward(x);
}

Signal idft(const Spectrum& s) {
    validate(s);
    return FourierPlan(s.modulus).inverse(s);
}

}  // namespace expsum
