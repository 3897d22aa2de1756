#pragma once

// Run manifests, JSON/CSV serialization and the aggregated identity report
// used by the command-line tool.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iterator>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "moments.hpp"
#include "ratpoly.hpp"
#include "sampler.hpp"

namespace gbe {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Manifest

struct RunManifest {
    std::string command;
    Json parameters = Json::object();
    std::optional<std::uint64_t> seed;
    std::string tool_version = kToolVersion;
    std::string timestamp;
    /// Files this manifest describes.
    std::vector<std::string> outputs;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline RunManifest make_manifest(std::string command, Json parameters, std::optional<std::uint64_t> seed = {}) {
    RunManifest m;
    m.command = std::move(command);
    m.parameters = std::move(parameters);
    m.seed = seed;
    m.timestamp = utc_timestamp();
    return m;
}

inline Json to_json(const RunManifest& m) {
    Json j;
    j["command"] = m.command;
    j["parameters"] = m.parameters;
    j["seed"] = m.seed ? Json(*m.seed) : Json(nullptr);
    j["tool_version"] = m.tool_version;
    j["timestamp"] = m.timestamp;
    if (!m.outputs.empty()) j["outputs"] = m.outputs;
    return j;
}

// ---------------------------------------------------------------------------
// Serialization

/// Coefficients low-first as "num/den" strings.
inline Json to_json(const RationalPoly& p) {
    Json j = Json::array();
    for (const auto& c : p.coefficients()) j.push_back(to_fraction_string(c));
    return j;
}

inline Json to_json(const Estimate& e) { return Json{{"mean", e.mean}, {"std_error", e.std_error}}; }

inline Json to_json(const McReport& r) {
    Json j;
    j["alpha"] = r.alpha;
    j["truncation"] = r.truncation;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["stream_id"] = r.stream_id;
    j["chunk_size"] = r.chunk_size;
    Json moments = Json::array();
    for (std::size_t p = 0; p < r.moment_estimates.size(); ++p) {
        Json e = to_json(r.moment_estimates[p]);
        e["p"] = p;
        moments.push_back(std::move(e));
    }
    j["moment_estimates"] = std::move(moments);
    Json hist = Json::array();
    for (const auto& b : r.histogram)
        hist.push_back({{"bin_center", b.center}, {"mass", b.mass}, {"std_error", b.std_error}});
    j["histogram"] = std::move(hist);
    if (!r.histogram.empty()) {
        j["y_max"] = r.y_max;
        j["out_of_range"] = to_json(r.out_of_range);
    }
    return j;
}

/// Shortest round-trip decimal form, independent of the global locale.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

/// Header row followed by one line per row, comma separated, '\n' terminated.
inline void write_csv(std::ostream& os, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// Identity report

struct VerifyConfig {
    int p_max = kWalkEnumerationLimit;
    std::vector<BigRational> beta_hats{BigRational(1, 2), BigRational(1), BigRational(2), BigRational(3, 7)};
    int u_h_max = kDyckEnumerationLimit;
    int kappa_N = 5;
    std::vector<double> kappa_grid{1.0, 10.0, 100.0, 1000.0};
    int limit_p_max = 4;
    std::vector<BigRational> limit_alphas{BigRational(1), BigRational(2)};
    std::vector<int> limit_N_grid{8, 16, 32, 64, 128, 256};
    double limit_ratio = 2.0;
    double limit_ratio_tol = 0.3;
    std::vector<BigRational> lemma_alphas{BigRational(0), BigRational(1), BigRational(2)};
    int lemma_n = 10;
};

/// Polynomial families the report checks. Defaults to the library; tests
/// swap in altered versions to exercise the failure path.
struct PolynomialSource {
    std::function<RationalPoly(int, const BigRational&)> m = m_polynomial;
    std::function<std::vector<RationalPoly>(int)> u = u_polynomials;
    std::function<RationalPoly(int)> h = h_polynomial;
};

struct VerifyRow {
    std::string check;
    int p = 0;
    std::optional<BigRational> beta_hat;
    std::optional<BigRational> alpha;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;

    [[nodiscard]] bool all_passed() const {
        return std::all_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.passed; });
    }
    [[nodiscard]] std::vector<VerifyRow> failures() const {
        std::vector<VerifyRow> out;
        std::copy_if(rows.begin(), rows.end(), std::back_inserter(out), [](const VerifyRow& r) { return !r.passed; });
        return out;
    }
};

inline VerifyReport run_verification(const VerifyConfig& cfg, const PolynomialSource& src = {}) {
    if (cfg.p_max < 0 || cfg.p_max > kWalkEnumerationLimit)
        throw std::out_of_range("run_verification: p_max must lie in [0, " + std::to_string(kWalkEnumerationLimit) +
                                "]");
    if (cfg.u_h_max < 0 || cfg.u_h_max > kDyckEnumerationLimit)
        throw std::out_of_range("run_verification: u_h_max must lie in [0, " +
                                std::to_string(kDyckEnumerationLimit) + "]");
    for (const auto& b : cfg.beta_hats)
        if (b <= 0) throw std::invalid_argument("run_verification: beta_hat values must be > 0");

    VerifyReport report;

    for (const auto& beta_hat : cfg.beta_hats) {
        for (int p = 0; p <= cfg.p_max; ++p) {
            const RationalPoly lhs = src.m(p, beta_hat);
            BigRational factor = rational_pow(beta_hat, static_cast<unsigned>(p));
            if (p % 2 != 0) factor = -factor;
            const RationalPoly rhs = scale_argument(src.m(p, BigRational(1) / beta_hat), BigRational(-beta_hat)) * factor;
            VerifyRow row{"duality", p, beta_hat, {}, lhs == rhs, {}};
            if (!row.passed) row.detail = "m_p(N) = " + to_string(lhs, "N") + " but dual side = " + to_string(rhs, "N");
            report.rows.push_back(std::move(row));
        }
    }

    const std::vector<RationalPoly> u = src.u(cfg.u_h_max);
    for (int p = 0; p <= cfg.u_h_max; ++p) {
        const RationalPoly h = src.h(p);
        VerifyRow row{"u_h_relation", p, {}, {}, check_u_h_relation(u[static_cast<std::size_t>(p)], h, p), {}};
        if (!row.passed)
            row.detail = "u_p = " + to_string(u[static_cast<std::size_t>(p)], "a") + ", h_p = " + to_string(h, "N");
        report.rows.push_back(std::move(row));
    }

    for (int p = 1; p <= cfg.p_max; ++p) {
        const BigRational h = evaluate(src.h(p), BigRational(cfg.kappa_N));
        std::vector<double> dev;
        for (double b : cfg.kappa_grid) {
            const BigRational beta_hat(b);
            const BigRational m = evaluate(src.m(p, beta_hat), BigRational(cfg.kappa_N));
            dev.push_back(std::abs(static_cast<double>(m / rational_pow(beta_hat, static_cast<unsigned>(p)) - h)));
        }
        bool ok = true;
        for (std::size_t i = 1; i < dev.size(); ++i) ok = ok && dev[i] < dev[i - 1];
        VerifyRow row{"kappa_limit", p, {}, {}, ok, {}};
        if (!ok) {
            row.detail = "deviations not strictly decreasing:";
            for (double d : dev) row.detail += " " + format_number(d);
        }
        report.rows.push_back(std::move(row));
    }

    for (const auto& alpha : cfg.limit_alphas) {
        const std::vector<BigRational> u_alpha = u_sequence(alpha, cfg.limit_p_max);
        for (int p = 1; p <= cfg.limit_p_max; ++p) {
            std::vector<double> dev;
            for (int N : cfg.limit_N_grid) {
                const BigRational m = evaluate(src.m(p, alpha / BigRational(N)), BigRational(N));
                dev.push_back(std::abs(static_cast<double>(m - u_alpha[static_cast<std::size_t>(p)])));
            }
            bool ok = true;
            std::string ratios;
            for (std::size_t i = 1; i < dev.size(); ++i) {
                const double ratio = dev[i - 1] / dev[i];
                ok = ok && std::abs(ratio - cfg.limit_ratio) <= cfg.limit_ratio_tol;
                ratios += " " + format_number(ratio);
            }
            VerifyRow row{"limit_to_u", p, {}, alpha, ok, {}};
            if (!ok) row.detail = "successive deviation ratios:" + ratios;
            report.rows.push_back(std::move(row));
        }
    }

    for (const auto& alpha : cfg.lemma_alphas) {
        const std::vector<BigRational> a = u_sequence(alpha, cfg.lemma_n);
        const std::vector<BigRational> b = lemma_two_step(a, alpha);
        const std::vector<BigRational> expected = u_sequence(BigRational(alpha + 1), cfg.lemma_n - 1);
        VerifyRow row{"lemma_two_step", cfg.lemma_n, {}, alpha, b == expected, {}};
        if (!row.passed) row.detail = "solved sequence differs from u(alpha + 1)";
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline Json to_json(const VerifyRow& r) {
    Json j;
    j["check"] = r.check;
    j["p"] = r.p;
    if (r.beta_hat) j["beta_hat"] = to_fraction_string(*r.beta_hat);
    if (r.alpha) j["alpha"] = to_fraction_string(*r.alpha);
    j["passed"] = r.passed;
    if (!r.detail.empty()) j["detail"] = r.detail;
    return j;
}

inline Json to_json(const VerifyReport& report) {
    Json j;
    j["all_passed"] = report.all_passed();
    Json rows = Json::array();
    for (const auto& r : report.rows) rows.push_back(to_json(r));
    j["rows"] = std::move(rows);
    Json failures = Json::array();
    for (const auto& r : report.failures()) failures.push_back(to_json(r));
    j["failures"] = std::move(failures);
    return j;
}

}  // namespace gbe
