#pragma once

/**
 * @file special.hpp
 * @brief Closed-form density of the mean spectral measure.
 *
 * The density is
 *
 *     mu(y) = exp(-y^2/2) / (sqrt(2 pi) |fhat(y)|^2),
 *     fhat(y) = sqrt(2/pi) int_0^inf f(t) exp(i y t) dt,
 *     f(t) = pi sqrt(alpha/Gamma(alpha)) t^(alpha-1) exp(-t^2/2) / sqrt(2 pi),
 *
 * and fhat = V_R + i V_I where V_R, V_I are Kummer functions of y^2/2.
 *
 * Two evaluation routes for fhat are provided:
 *  - `FhatMethod::kummer` sums the 1F1 series in log scale. The series
 *    cancels badly once alpha and y^2/2 are both large, and its own
 *    cancellation estimate is reported with every value.
 *  - `FhatMethod::quadrature` integrates the Fourier integral along the
 *    contour 0 -> i y/2 -> i y/2 + inf (for |y| > 1) where the integrand
 *    no longer oscillates, or along the real axis for |y| <= 1. When
 *    alpha < 1 the t^(alpha-1) endpoint is removed by t = s^(1/alpha).
 *
 * `FhatMethod::automatic` uses the series where y^2/2 <= x_switch and the
 * series is well conditioned, quadrature elsewhere, and cross-checks both in
 * the band y^2/2 in [x_switch/2, x_switch].
 *
 * Values of fhat are carried as mantissa * exp(log_scale) so that densities
 * for large alpha (where fhat ~ exp(-y^2/4)) do not underflow.
 */

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "moments.hpp"
#include "quadrature.hpp"

namespace gbe {

// ---------------------------------------------------------------------------
// Gamma

inline double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("ln_gamma: x must be positive and finite");
    return boost::math::lgamma(x);
}

namespace detail {

/// log|Gamma(x)| and its sign, for any x that is not a nonpositive integer.
inline double ln_abs_gamma(double x, int& sign) {
    if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("Gamma has a pole at a nonpositive integer");
    return boost::math::lgamma(x, &sign);
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Kummer 1F1

/// sign * exp(log_abs); sign is 0 for an exact zero.
struct ScaledReal {
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();

    [[nodiscard]] double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

struct KummerResult {
    ScaledReal value;
    /// log of sum_k |term_k|; exp(log_abs_sum - value.log_abs) is the
    /// cancellation factor of the series.
    double log_abs_sum = 0.0;
    int terms = 0;

    [[nodiscard]] double condition() const {
        return value.sign == 0 ? std::numeric_limits<double>::infinity() : std::exp(log_abs_sum - value.log_abs);
    }
};

inline constexpr double kDefaultSeriesTol = 1e-16;

/// 1F1(a; b; x) = sum_k (a)_k / (b)_k x^k / k! for x >= 0.
///
/// Stops once |term| <= tol |partial sum| and the term ratio has dropped below
/// one half, so the neglected tail is bounded by the last term.
inline KummerResult kummer_1f1_detailed(double a, double b, double x, double tol = kDefaultSeriesTol) {
    if (detail::is_nonpositive_integer(b)) throw std::domain_error("kummer_1f1: b must not be a nonpositive integer");
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("kummer_1f1: x must be finite and >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("kummer_1f1: tol must be > 0");
    constexpr double kRescale = 1e250;
    const double log_rescale = std::log(kRescale);
    constexpr int kMaxTerms = 1'000'000;

    double term = 1.0, sum = 1.0, abs_sum = 1.0, log_scale = 0.0;
    int k = 0;
    for (;; ++k) {
        if (k >= kMaxTerms) throw std::runtime_error("kummer_1f1: series did not converge");
        term *= (a + k) / (b + k) * x / (k + 1);
        if (term == 0.0) break;
        sum += term;
        abs_sum += std::abs(term);
        if (abs_sum > kRescale) {
            term /= kRescale;
            sum /= kRescale;
            abs_sum /= kRescale;
            log_scale += log_rescale;
        }
        const double next_ratio = std::abs((a + k + 1) / (b + k + 1)) * x / (k + 2);
        if (std::abs(term) <= tol * std::abs(sum) && next_ratio <= 0.5) break;
    }
    KummerResult r;
    r.terms = k + 1;
    r.log_abs_sum = std::log(abs_sum) + log_scale;
    if (sum != 0.0) r.value = {sum > 0 ? 1 : -1, std::log(std::abs(sum)) + log_scale};
    return r;
}

inline ScaledReal kummer_1f1(double a, double b, double x, double tol = kDefaultSeriesTol) {
    return kummer_1f1_detailed(a, b, x, tol).value;
}

// ---------------------------------------------------------------------------
// Fourier transform of f_alpha

enum class FhatMethod { kummer, quadrature, automatic };

inline std::string to_string(FhatMethod m) {
    switch (m) {
        case FhatMethod::kummer: return "kummer";
        case FhatMethod::quadrature: return "quadrature";
        case FhatMethod::automatic: return "auto";
    }
    return "unknown";
}

inline FhatMethod parse_fhat_method(const std::string& s) {
    if (s == "kummer") return FhatMethod::kummer;
    if (s == "quadrature") return FhatMethod::quadrature;
    if (s == "auto" || s == "automatic") return FhatMethod::automatic;
    throw std::invalid_argument("unknown method '" + s + "' (expected kummer, quadrature or auto)");
}

struct DensityParams {
    double alpha = 1.0;
    FhatMethod method = FhatMethod::automatic;
    double series_tol = kDefaultSeriesTol;
    /// y^2/2 threshold above which auto mode stops trusting the series.
    double x_switch = 50.0;
    /// Absolute quadrature tolerance, in units of the integrand's peak value.
    double quad_abs_tol = 1e-15;
    double quad_rel_tol = 1e-12;
    /// Largest cancellation-induced relative error auto mode accepts from
    /// the series.
    double kummer_max_rel_error = 1e-12;
    /// Required relative agreement between routes in the overlap band.
    double agreement_tol = 1e-8;

    void validate() const {
        if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("DensityParams: alpha must be > 0");
        if (!(series_tol > 0.0 && series_tol <= 1e-6))
            throw std::invalid_argument("DensityParams: series_tol must lie in (0, 1e-6]");
        if (!(x_switch > 0.0)) throw std::invalid_argument("DensityParams: x_switch must be > 0");
        if (!(quad_abs_tol > 0.0 && quad_rel_tol > 0.0))
            throw std::invalid_argument("DensityParams: quadrature tolerances must be > 0");
    }
};

/// mantissa * exp(log_scale)
struct ScaledComplex {
    std::complex<double> mantissa{};
    double log_scale = 0.0;

    [[nodiscard]] std::complex<double> value() const { return mantissa * std::exp(log_scale); }
    [[nodiscard]] double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

class MethodDisagreement : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FhatEvaluation {
    ScaledComplex scaled;
    FhatMethod method = FhatMethod::kummer;  // route that produced `scaled`
    /// Absolute error estimate in units of |fhat|.
    double relative_error = 0.0;
    /// Relative discrepancy between the two routes when both were run.
    std::optional<double> agreement;

    [[nodiscard]] std::complex<double> value() const { return scaled.value(); }
};

namespace detail {

struct KummerParts {
    // V_R = sign_r * exp(log_r), V_I = sign_i * exp(log_i)
    ScaledReal vr, vi;
    double log_err = -std::numeric_limits<double>::infinity();
};

inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

inline KummerParts kummer_parts(double y, double alpha, double tol) {
    const double x = 0.5 * y * y;
    const double ln2 = std::numbers::ln2;
    const double ln_pi = std::log(std::numbers::pi);
    const double half_ln_gamma_a1 = 0.5 * ln_gamma(alpha + 1.0);

    // V_R = 2^(-a/2) Gamma(a+1)^(1/2) Gamma(1/2)/Gamma(a/2+1/2) e^(-x) 1F1((1-a)/2; 1/2; x)
    const double log_pref_r = -0.5 * alpha * ln2 + half_ln_gamma_a1 + 0.5 * ln_pi - ln_gamma(0.5 * alpha + 0.5);
    const KummerResult fr = kummer_1f1_detailed(0.5 - 0.5 * alpha, 0.5, x, tol);

    // V_I = -2^(-a/2-1/2) Gamma(a+1)^(1/2) Gamma(-1/2)/Gamma(a/2) y e^(-x) 1F1(1-a/2; 3/2; x),
    // with -Gamma(-1/2) = 2 sqrt(pi)
    const double log_pref_i = (0.5 - 0.5 * alpha) * ln2 + 0.5 * ln_pi + half_ln_gamma_a1 - ln_gamma(0.5 * alpha);
    const KummerResult fi = kummer_1f1_detailed(1.0 - 0.5 * alpha, 1.5, x, tol);

    KummerParts out;
    out.vr = {fr.value.sign, log_pref_r - x + fr.value.log_abs};
    const int ysign = y > 0 ? 1 : (y < 0 ? -1 : 0);
    if (ysign != 0) out.vi = {ysign * fi.value.sign, log_pref_i + std::log(std::abs(y)) - x + fi.value.log_abs};
    // rounding error grows with the series' absolute sum
    const double log_eps = std::log(4.0 * std::numeric_limits<double>::epsilon());
    double log_err = log_eps + log_pref_r - x + fr.log_abs_sum + 0.5 * std::log(static_cast<double>(fr.terms));
    if (ysign != 0)
        log_err = log_add(log_err, log_eps + log_pref_i + std::log(std::abs(y)) - x + fi.log_abs_sum +
                                       0.5 * std::log(static_cast<double>(fi.terms)));
    out.log_err = log_err;
    return out;
}

inline FhatEvaluation fhat_kummer(double y, const DensityParams& p) {
    const KummerParts parts = kummer_parts(y, p.alpha, p.series_tol);
    const double scale = std::max(parts.vr.log_abs, parts.vi.log_abs);
    FhatEvaluation ev;
    ev.method = FhatMethod::kummer;
    ev.scaled.log_scale = scale;
    ev.scaled.mantissa = {parts.vr.sign * std::exp(parts.vr.log_abs - scale),
                          parts.vi.sign == 0 ? 0.0 : parts.vi.sign * std::exp(parts.vi.log_abs - scale)};
    ev.relative_error = std::exp(parts.log_err - ev.scaled.log_abs());
    return ev;
}

inline FhatEvaluation fhat_quadrature_nonneg(double y, const DensityParams& p) {
    using cplx = std::complex<double>;
    const double alpha = p.alpha;
    const double log_norm = 0.5 * (std::log(alpha) - ln_gamma(alpha));
    const double tail = std::sqrt(2.0 * std::log(1.0 / p.quad_abs_tol)) + 10.0;
    const bool substitute = alpha < 1.0;
    const double inv_alpha = 1.0 / alpha;

    QuadratureOptions opt;
    opt.rel_tol = p.quad_rel_tol;

    FhatEvaluation ev;
    ev.method = FhatMethod::quadrature;

    if (y <= 1.0) {
        // real axis; integrand t^(a-1) exp(-t^2/2 + i y t)
        double shift = 0.0;
        double upper;
        if (substitute) {
            shift = std::log(inv_alpha);
            upper = std::pow(tail, alpha);
        } else {
            const double peak = std::sqrt(alpha - 1.0);
            shift = alpha > 1.0 ? (alpha - 1.0) * std::log(peak) - 0.5 * peak * peak : 0.0;
            upper = peak + tail;
        }
        opt.abs_tol = p.quad_abs_tol;
        auto integrand = [&](double s) -> cplx {
            if (substitute) {
                // t = s^(1/a): t^(a-1) dt = ds / a
                const double t = std::pow(s, inv_alpha);
                return std::exp(cplx(std::log(inv_alpha) - 0.5 * t * t - shift, y * t));
            }
            if (s == 0.0) return alpha == 1.0 ? cplx(std::exp(-shift), 0.0) : cplx(0.0, 0.0);
            return std::exp(cplx((alpha - 1.0) * std::log(s) - 0.5 * s * s - shift, y * s));
        };
        auto r = integrate(integrand, 0.0, upper, opt);
        ev.scaled = {r.value, log_norm + shift};
        ev.relative_error = r.error / std::abs(r.value);
        return ev;
    }

    // Segment 1: t = i tau, tau in [0, y/2]. Contributes
    //   e^(i pi a / 2) int tau^(a-1) exp(tau^2/2 - y tau) dtau.
    // Segment 2: t = i y/2 + s, s >= 0. Contributes
    //   int exp((a-1) Log t - t^2/2 + i y t) ds.
    const double half_y = 0.5 * y;
    double peak1;
    if (substitute) {
        peak1 = std::log(inv_alpha);
    } else if (alpha == 1.0) {
        peak1 = 0.0;
    } else {
        const double disc = y * y - 4.0 * (alpha - 1.0);
        const double tau_star = disc >= 0.0 ? 0.5 * (y - std::sqrt(disc)) : half_y;
        peak1 = (alpha - 1.0) * std::log(tau_star) + 0.5 * tau_star * tau_star - y * tau_star;
    }
    const double s_star = std::sqrt(std::max(alpha - 1.0 - 0.25 * y * y, 0.0));
    const double peak2 = 0.5 * (alpha - 1.0) * std::log(s_star * s_star + 0.25 * y * y) - 0.5 * s_star * s_star -
                         0.375 * y * y;
    const double shift = std::max(peak1, peak2);
    opt.abs_tol = 0.5 * p.quad_abs_tol;

    auto seg1 = [&](double s) -> double {
        if (substitute) {
            const double tau = std::pow(s, inv_alpha);
            return std::exp(std::log(inv_alpha) + 0.5 * tau * tau - y * tau - shift);
        }
        if (s == 0.0) return alpha == 1.0 ? std::exp(-shift) : 0.0;
        return std::exp((alpha - 1.0) * std::log(s) + 0.5 * s * s - y * s - shift);
    };
    const double upper1 = substitute ? std::pow(half_y, alpha) : half_y;
    auto r1 = integrate(seg1, 0.0, upper1, opt);

    auto seg2 = [&](double s) -> cplx {
        const cplx t(s, half_y);
        return std::exp((alpha - 1.0) * std::log(t) - 0.5 * t * t + cplx(0.0, y) * t - shift);
    };
    auto r2 = integrate(seg2, 0.0, s_star + tail, opt, {s_star});

    const cplx phase = std::polar(1.0, 0.5 * std::numbers::pi * alpha);
    ev.scaled = {phase * r1.value + r2.value, log_norm + shift};
    ev.relative_error = (r1.error + r2.error) / std::abs(ev.scaled.mantissa);
    return ev;
}

}  // namespace detail

/// fhat at y by the requested route, with diagnostics.
inline FhatEvaluation f_hat_detailed(double y, const DensityParams& params) {
    params.validate();
    if (!std::isfinite(y)) throw std::domain_error("f_hat: y must be finite");
    auto quadrature = [&] {
        FhatEvaluation ev = detail::fhat_quadrature_nonneg(std::abs(y), params);
        if (y < 0) ev.scaled.mantissa = std::conj(ev.scaled.mantissa);
        return ev;
    };
    switch (params.method) {
        case FhatMethod::kummer: return detail::fhat_kummer(y, params);
        case FhatMethod::quadrature: return quadrature();
        case FhatMethod::automatic: break;
    }
    const double x = 0.5 * y * y;
    if (x > params.x_switch) return quadrature();
    FhatEvaluation series = detail::fhat_kummer(y, params);
    if (series.relative_error > params.kummer_max_rel_error) return quadrature();
    if (x >= 0.5 * params.x_switch) {
        FhatEvaluation quad = quadrature();
        const double diff = std::abs(series.value() - quad.value()) / std::abs(series.value());
        series.agreement = diff;
        if (!(diff <= params.agreement_tol))
            throw MethodDisagreement("f_hat: series and quadrature disagree by " + std::to_string(diff) +
                                     " (relative) at y = " + std::to_string(y));
    }
    return series;
}

inline std::complex<double> f_hat(double y, const DensityParams& params) { return f_hat_detailed(y, params).value(); }

inline double V_R(double y, double alpha, double series_tol = kDefaultSeriesTol) {
    if (!(alpha > 0.0)) throw std::domain_error("V_R: alpha must be > 0");
    return detail::kummer_parts(y, alpha, series_tol).vr.value();
}

inline double V_I(double y, double alpha, double series_tol = kDefaultSeriesTol) {
    if (!(alpha > 0.0)) throw std::domain_error("V_I: alpha must be > 0");
    return detail::kummer_parts(y, alpha, series_tol).vi.value();
}

// ---------------------------------------------------------------------------
// Density

inline double density(double y, const DensityParams& params) {
    const FhatEvaluation ev = f_hat_detailed(y, params);
    const double log_density = -0.5 * y * y - 0.5 * std::log(2.0 * std::numbers::pi) - 2.0 * ev.scaled.log_abs();
    return std::exp(log_density);
}

inline double density(double y, double alpha) {
    DensityParams p;
    p.alpha = alpha;
    return density(y, p);
}

inline double semicircle_density(double x) {
    return std::abs(x) < 2.0 ? std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi) : 0.0;
}

/// sqrt(alpha) * density(sqrt(alpha) x): the density of the measure scaled by
/// 1/sqrt(alpha), which tends to the semicircle law.
inline double rescaled_density(double x, const DensityParams& params) {
    const double s = std::sqrt(params.alpha);
    return s * density(s * x, params);
}

// ---------------------------------------------------------------------------
// Self-convolutive recurrences

/// Constants of u_n = (a1 n + a2) u_{n-1} + a3 sum_{i=1}^{n-1} u_i u_{n-i}, u_1 = 1.
struct SelfConvParams {
    double a1 = 2.0, a2 = -3.0, a3 = 1.0;

    [[nodiscard]] double k() const { return 1.0 / a1; }
    [[nodiscard]] double a() const { return a3 / a1; }
    [[nodiscard]] double b() const { return -1.0 - a2 / a1; }

    /// The parameters for u_n(alpha).
    static SelfConvParams for_alpha(double alpha) { return {2.0, -3.0, alpha}; }
};

/// Weight function nu with int_0^inf x^(n-1) nu(x) dx = u_n for the general
/// self-convolutive recurrence. Restricted to b in (0, 1).
inline double nu_general(double x, const SelfConvParams& params, double series_tol = kDefaultSeriesTol) {
    if (params.a1 == 0.0) throw std::domain_error("nu_general: a1 must be nonzero");
    if (!(x > 0.0)) throw std::domain_error("nu_general: x must be > 0");
    const double k = params.k(), a = params.a(), b = params.b();
    if (!(b > 0.0 && b < 1.0)) throw std::domain_error("nu_general: b = -1 - a2/a1 must lie in (0, 1)");
    if (!(k > 0.0)) throw std::domain_error("nu_general: a1 must be positive");
    const double X = k * x;
    constexpr double kNegInf = -std::numeric_limits<double>::infinity();

    int s_a_b1, s_a, s_a1, s_b1, s_1b;
    const double lg_1b = detail::ln_abs_gamma(1.0 - b, s_1b);
    const double lg_ab1 = detail::ln_abs_gamma(a - b + 1.0, s_a_b1);
    const double lg_b1 = detail::ln_abs_gamma(b - 1.0, s_b1);
    const double lg_a = detail::ln_abs_gamma(a, s_a);
    const double lg_a1 = detail::ln_abs_gamma(a + 1.0, s_a1);

    const ScaledReal f1 = kummer_1f1(b - a, b, X, series_tol);
    const ScaledReal f2 = kummer_1f1(1.0 - a, 2.0 - b, X, series_tol);

    // U_R = e^-X (A F1 - cos(pi b) B X^(1-b) F2), U_I = sin(pi b) e^-X B X^(1-b) F2
    const int sign1 = s_1b * s_a_b1 * f1.sign;
    const double log1 = lg_1b - lg_ab1 + f1.log_abs - X;
    const int sign2 = s_b1 * s_a * f2.sign;
    const double log2 = lg_b1 - lg_a + (1.0 - b) * std::log(X) + f2.log_abs - X;
    const double common = std::max(sign1 ? log1 : kNegInf, sign2 ? log2 : kNegInf);
    const double t1 = sign1 ? sign1 * std::exp(log1 - common) : 0.0;
    const double t2 = sign2 ? sign2 * std::exp(log2 - common) : 0.0;
    const double ur = t1 - std::cos(std::numbers::pi * b) * t2;
    const double ui = std::sin(std::numbers::pi * b) * t2;

    const int gamma_sign = s_a1 * s_a_b1;
    const double log_nu =
        std::log(k) - b * std::log(X) - X - lg_a1 - lg_ab1 - 2.0 * common - std::log(ur * ur + ui * ui);
    return gamma_sign * std::exp(log_nu);
}

// ---------------------------------------------------------------------------
// Hermite special cases

/// Probabilists' Hermite polynomial He_m(y).
inline double hermite_He(int m, double y) {
    if (m < 0 || m > 50) throw std::out_of_range("hermite_He: m must lie in [0, 50]");
    double prev = 1.0;
    if (m == 0) return prev;
    double cur = y;
    for (int j = 1; j < m; ++j) {
        const double next = y * cur - j * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// For integer alpha one component of fhat is elementary:
/// V_I for even alpha and V_R for odd alpha, both proportional to
/// He_{alpha-1}(y) exp(-y^2/2).
struct HermiteForm {
    bool imaginary = false;  // true: the value is V_I; false: V_R
    double value = 0.0;
};

inline HermiteForm hermite_closed_form(int alpha, double y) {
    if (alpha < 1 || alpha > 51) throw std::out_of_range("hermite_closed_form: alpha must lie in [1, 51]");
    const double c = std::numbers::pi * std::sqrt(alpha / std::tgamma(static_cast<double>(alpha)));
    const double gauss = std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi);
    const double he = hermite_He(alpha - 1, y);
    if (alpha % 2 == 0) {
        // -i^alpha = -(-1)^(alpha/2)
        const double sign = (alpha / 2) % 2 == 0 ? -1.0 : 1.0;
        return {true, sign * c * he * gauss};
    }
    // i^(alpha-1) = (-1)^((alpha-1)/2)
    const double sign = ((alpha - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return {false, sign * c * he * gauss};
}

// ---------------------------------------------------------------------------
// Moments of the density

struct DensityMomentCheck {
    double radius = 0.0;
    /// int y^{2n} mu over the real line, n = 0 .. n_max
    std::vector<double> even_moments;
    /// |int y^{2n} mu - u_n| / u_n
    std::vector<double> even_relative_deviation;
    /// int y^{2n+1} mu over the real line, n = 0 .. n_max
    std::vector<double> odd_moments;
};

/// Integrates the density against y^k on [-R, R], R grown until the tail of
/// the highest moment is negligible.
inline DensityMomentCheck density_moment_check(const DensityParams& params, int n_max) {
    params.validate();
    if (n_max < 0 || n_max > 6) throw std::out_of_range("density_moment_check: n_max must lie in [0, 6]");
    const std::vector<double> u = u_sequence(params.alpha, n_max);
    auto mu = [&](double y) { return density(y, params); };

    double radius = std::max(8.0, 4.0 * std::sqrt(params.alpha + 1.0));
    const int top = 2 * n_max;
    while (radius < 60.0 && std::pow(radius, top + 1) * mu(radius) > 1e-17 * u[static_cast<std::size_t>(n_max)])
        radius += 2.0;

    const double y_switch = std::sqrt(2.0 * params.x_switch);
    QuadratureOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-13;

    DensityMomentCheck out;
    out.radius = radius;
    for (int n = 0; n <= n_max; ++n) {
        auto even = [&](double y) { return std::pow(y, 2 * n) * mu(y); };
        const double moment = 2.0 * integrate(even, 0.0, radius, opt, {y_switch}).value;
        out.even_moments.push_back(moment);
        out.even_relative_deviation.push_back(std::abs(moment - u[static_cast<std::size_t>(n)]) /
                                              u[static_cast<std::size_t>(n)]);
        auto odd = [&](double y) { return std::pow(y, 2 * n + 1) * (mu(y) - mu(-y)); };
        out.odd_moments.push_back(integrate(odd, 0.0, radius, opt, {y_switch}).value);
    }
    return out;
}

}  // namespace gbe
