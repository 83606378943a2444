#include "expsum/tail_bounds.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace expsum {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw invalid_parameter(msg);
}

void check_common(int n, double delta, int nu) {
    require(n >= 2, "n must be >= 2");
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    require(nu >= 3, "nu must be >= 3 (the sector argument needs at least 3 sectors)");
}

double sector_a2(int nu) {
    const double a = std::cos(kPi / static_cast<double>(nu));
    return a * a;
}

void check_prime_modulus(int N) {
    require(N >= 5 && is_prime(N), "N must be prime >= 5");
}

int ceil_sample_count(int N, int T, double C) {
    return static_cast<int>(std::ceil(4.0 * C * T * T * std::log(static_cast<double>(N))));
}

}  // namespace

double theorem_a_range(int n, double delta) {
    require(n >= 2, "n must be >= 2");
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    return 0.5 * std::exp2(n * delta * delta / 4.0);
}

double theorem1_failure(long long M, int n, double delta, int nu) {
    check_common(n, delta, nu);
    require(M >= 1, "M must be >= 1");
    require(M <= 1000000000LL, "M capped at 1e9");
    return static_cast<double>(M) * nu * std::exp(-n * delta * delta * sector_a2(nu));
}

int optimal_nu_theorem1(int n, double delta, bool* clamped) {
    require(n >= 2, "n must be >= 2");
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    const int raw = static_cast<int>(std::floor(delta * kPi * std::sqrt(2.0 * n)));
    if (clamped) *clamped = raw < 3;
    return raw < 3 ? 3 : raw;
}

ComparisonResult theorem_a_comparison(int n, double delta, int nu) {
    check_common(n, delta, nu);
    const double nd2 = n * delta * delta;
    const double log_new = nd2 * sector_a2(nu) - std::log(static_cast<double>(nu));
    const double log_old = nd2 / 4.0 * std::log(2.0) - std::log(2.0);
    ComparisonResult r;
    r.new_range = std::exp(log_new);
    r.old_range = theorem_a_range(n, delta);
    r.improves = log_new > log_old;
    return r;
}

double tijdeman_range(int n, double delta) {
    require(n >= 3, "n must be >= 3");
    require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
    const double ln_n = std::log(static_cast<double>(n));
    return std::exp(delta / 6.0 * std::sqrt(n * ln_n) - 3.0 * ln_n);
}

double explicitness_exponent(int nu) {
    require(nu >= 3, "nu must be >= 3");
    return 4.0 * sector_a2(nu) / std::log(2.0) - 1.0;
}

double theorem2_failure(int N, int n, double delta, int nu) {
    check_prime_modulus(N);
    check_common(n, delta, nu);
    return (N - 1) / 2.0 * nu * std::exp(-n * delta * delta * sector_a2(nu));
}

double theorem3_failure(int N, int T, double C, int nu, int* implied_n) {
    check_prime_modulus(N);
    require(T >= 1, "T must be >= 1");
    require(C > 1.0, "C must be > 1");
    require(nu >= 3, "nu must be >= 3 (the sector argument needs at least 3 sectors)");
    if (implied_n) *implied_n = ceil_sample_count(N, T, C);
    return nu / 2.0 * std::pow(static_cast<double>(N), 1.0 - C * sector_a2(nu));
}

RefinedBound refined_nu_and_bound(int N, int T, double C) {
    check_prime_modulus(N);
    require(T >= 1, "T must be >= 1");
    require(C > 0.0, "C must be > 0");
    const double ln_n = std::log(static_cast<double>(N));
    require(2.0 * C * ln_n > 1.0, "need 2 C log N > 1");

    RefinedBound r;
    const double s = std::asin(1.0 / std::sqrt(2.0 * C * ln_n));
    int nu = static_cast<int>(std::floor(kPi / s));
    if (nu < 3) {
        nu = 3;
        r.notes += "nu_clamped;";
    }
    r.nu = nu;
    r.failure = kPi / 2.0 * std::sqrt(2.0 * C * std::exp(1.0) * ln_n) *
                std::pow(static_cast<double>(N), 1.0 - C);
    r.implied_n = ceil_sample_count(N, T, C);
    if (C <= 1.0) r.notes += "C<=1: bound direction requires C>1;";
    if (r.failure >= 1.0) {
        r.vacuous = true;
        r.notes += "vacuous;";
    }
    return r;
}

std::vector<PaperTableRow> paper_example_table(int N, int T, const std::vector<double>& c_values) {
    std::vector<PaperTableRow> rows;
    rows.reserve(c_values.size());
    for (double C : c_values) {
        const RefinedBound b = refined_nu_and_bound(N, T, C);
        PaperTableRow row;
        row.C = C;
        row.n = b.implied_n;
        row.p = b.failure;
        row.flags = b.vacuous ? "vacuous" : "";
        if (N == 997 && T == 2 && C == 2.0 && b.implied_n != 242) {
            if (!row.flags.empty()) row.flags += ";";
            row.flags += "published table prints n=242; formula gives " + std::to_string(b.implied_n);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string paper_table_csv(const std::vector<PaperTableRow>& rows) {
    std::ostringstream out;
    out << "C,n,p,flags\n";
    for (const auto& row : rows) {
        out << fmt_g17(row.C) << ',' << row.n << ',' << fmt_g17(row.p) << ",\"" << row.flags
            << "\"\n";
    }
    return out.str();
}

int best_nu_theorem1(long long M, int n, double delta) {
    int best = 3;
    double best_val = theorem1_failure(M, n, delta, 3);
    for (int nu = 4; nu <= 200; ++nu) {
        const double v = theorem1_failure(M, n, delta, nu);
        if (v < best_val) {
            best_val = v;
            best = nu;
        }
    }
    return best;
}

int best_nu_theorem2(int N, int n, double delta) {
    int best = 3;
    double best_val = theorem2_failure(N, n, delta, 3);
    for (int nu = 4; nu <= 200; ++nu) {
        const double v = theorem2_failure(N, n, delta, nu);
        if (v < best_val) {
            best_val = v;
            best = nu;
        }
    }
    return best;
}

BoundReport evaluate_bound(const std::string& name, const BoundQuery& query) {
    BoundReport report;
    report.bound_name = name;
    report.params = query;

    auto pick_nu = [&](int fallback) {
        if (query.nu != 0) return query.nu;
        return fallback;
    };

    if (name == "theorem_a") {
        report.failure_bound = theorem_a_range(query.n, query.delta);
        report.vacuous = report.failure_bound < 1.0;
        if (report.vacuous) report.notes += "range below 1;";
        return report;
    }
    if (name == "tijdeman") {
        report.failure_bound = tijdeman_range(query.n, query.delta);
        report.vacuous = report.failure_bound < 1.0;
        if (report.vacuous) report.notes += "range below 1: construction guarantees nothing here;";
        return report;
    }
    if (name == "explicitness") {
        report.nu_chosen = query.nu != 0 ? query.nu : 10;
        report.failure_bound = explicitness_exponent(report.nu_chosen);
        return report;
    }
    if (name == "theorem1") {
        bool clamped = false;
        report.nu_chosen = pick_nu(optimal_nu_theorem1(query.n, query.delta, &clamped));
        if (query.nu == 0 && clamped) report.notes += "nu_clamped;";
        report.failure_bound = theorem1_failure(query.M, query.n, query.delta, report.nu_chosen);
    } else if (name == "theorem2") {
        bool clamped = false;
        report.nu_chosen = pick_nu(optimal_nu_theorem1(query.n, query.delta, &clamped));
        if (query.nu == 0 && clamped) report.notes += "nu_clamped;";
        report.failure_bound = theorem2_failure(query.N, query.n, query.delta, report.nu_chosen);
    } else if (name == "theorem3") {
        const RefinedBound refined = refined_nu_and_bound(query.N, query.T, query.C);
        report.nu_chosen = pick_nu(refined.nu);
        report.failure_bound =
            theorem3_failure(query.N, query.T, query.C, report.nu_chosen, &report.implied_n);
    } else if (name == "refined") {
        const RefinedBound refined = refined_nu_and_bound(query.N, query.T, query.C);
        report.nu_chosen = refined.nu;
        report.failure_bound = refined.failure;
        report.implied_n = refined.implied_n;
        report.notes += refined.notes;
        report.vacuous = refined.vacuous;
        return report;
    } else {
        throw invalid_parameter("unknown bound name: " + name);
    }

    if (report.failure_bound >= 1.0) {
        report.vacuous = true;
        report.notes += "vacuous;";
    }
    return report;
}

std::string to_json(const BoundReport& report) {
    nlohmann::json j{
        {"bound_name", report.bound_name},
        {"failure_bound", report.failure_bound},
        {"nu_chosen", report.nu_chosen},
        {"implied_n", report.implied_n},
        {"vacuous", report.vacuous},
        {"notes", report.notes},
        {"params",
         {{"N", report.params.N},
          {"n", report.params.n},
          {"M", report.params.M},
          {"delta", report.params.delta},
          {"nu", report.params.nu},
          {"C", report.params.C},
          {"T", report.params.T}}},
    };
    return j.dump(2);
}

std::string to_csv(const BoundReport& report) {
    std::ostringstream out;
    out << "bound_name,value,nu_chosen,implied_n,vacuous,notes\n";
    out << report.bound_name << ',' << fmt_g17(report.failure_bound) << ',' << report.nu_chosen
        << ',' << report.implied_n << ',' << (report.vacuous ? 1 : 0) << ",\"" << report.notes
        << "\"\n";
    return out.str();
}

}  // namespace expsum
