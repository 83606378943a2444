#include "expsum/signal.hpp"

#include "expsum/fourier.hpp"
#include "expsum/kernels.hpp"

#include <json.hpp>

#include <cmath>

namespace expsum {

Signal Signal::zeros(int n) {
    if (n < 2) throw invalid_parameter("modulus must be >= 2");
    return Signal{n, std::vector<cplx>(static_cast<std::size_t>(n), cplx(0.0, 0.0))};
}

Spectrum Spectrum::zeros(int n) {
    if (n < 2) throw invalid_parameter("modulus must be >= 2");
    return Spectrum{n, std::vector<cplx>(static_cast<std::size_t>(n), cplx(0.0, 0.0))};
}

void validate(const Signal& x) {
    if (x.modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (x.values.size() != static_cast<std::size_t>(x.modulus))
        throw invalid_parameter("signal must have exactly N entries");
}

void validate(const Spectrum& s) {
    if (s.modulus < 2) throw invalid_parameter("modulus must be >= 2");
    if (s.values.size() != static_cast<std::size_t>(s.modulus))
        throw invalid_parameter("spectrum must have exactly N entries");
}

SignalNorms norms(const Signal& x, double zero_tol) {
    validate(x);
    const auto& ops = kern::active_ops();
    SignalNorms out;
    for (const auto& v : x.values) {
        if (std::abs(v) > zero_tol) ++out.l0;
    }
    out.l1 = ops.sum_abs(x.values.data(), x.values.size());
    out.l2 = std::sqrt(ops.sum_abs2(x.values.data(), x.values.size()));
    return out;
}

double a_norm(const Spectrum& s) {
    return norms(idft(s)).l1;
}

namespace {

nlohmann::json values_to_json(const std::vector<cplx>& values) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : values) arr.push_back({v.real(), v.imag()});
    return arr;
}

std::vector<cplx> values_from_json(const nlohmann::json& arr) {
    std::vector<cplx> out;
    out.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2)
            throw invalid_parameter("values must be [re, im] pairs");
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

}  // namespace

std::string to_json(const Signal& x) {
    validate(x);
    nlohmann::json j{{"modulus", x.modulus}, {"values", values_to_json(x.values)}};
    return j.dump();
}

std::string to_json(const Spectrum& s) {
    validate(s);
    nlohmann::json j{{"modulus", s.modulus}, {"values", values_to_json(s.values)}};
    return j.dump();
}

Signal signal_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Signal x{j.at("modulus").get<int>(), values_from_json(j.at("values"))};
    validate(x);
    return x;
}

Spectrum spectrum_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    Spectrum s{j.at("modulus").get<int>(), values_from_json(j.at("values"))};
    validate(s);
    return s;
}

}  // namespace expsum
