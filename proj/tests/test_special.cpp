#include <cmath>
#include <numbers>

#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <gtest/gtest.h>

#include "gbe_spectral/moments.hpp"
#include "gbe_spectral/quadrature.hpp"
#include "gbe_spectral/special.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

gbe::DensityParams params_for(double alpha, gbe::FhatMethod method = gbe::FhatMethod::automatic) {
    gbe::DensityParams p;
    p.alpha = alpha;
    p.method = method;
    return p;
}

// 80-digit mpmath evaluations of exp(-y^2/2) / (sqrt(2 pi) |fhat(y)|^2),
// fhat computed by direct integration of the Fourier integral.
struct DensityRef {
    double alpha, y, value;
};
const DensityRef kDensityRefs[] = {
    {64, 0, 0.039633620490693492},     {64, 8, 0.034279864607902308},     {64, 12, 0.026090878355775584},
    {64, 15.2, 0.012293098435690967},  {64, 20, 3.8736030863417661e-16},  {16, 6, 0.051021238034985295},
    {16, 7.6, 0.025819045701736577},   {16, 10, 1.1724115934620323e-5},   {4, 11, 1.5910242386040877e-20},
    {0.5, 14, 1.7256581503079762e-42}, {1, 0, 0.25397454373696384},       {2, 3, 0.065241125276329825},
    {7.5, 4.25, 0.069231474403812562},
};

// Integrates x^(n-1) nu(x) over (0, inf) with x = s^(1/(1-b)) to remove the
// x^(-b) endpoint singularity.
double nu_moment(const gbe::SelfConvParams& prm, int n) {
    const double b = prm.b();
    const double q = 1.0 / (1.0 - b);
    auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double x = std::pow(s, q);
        return gbe::nu_general(x, prm) * std::pow(x, n - 1) * q * std::pow(x, b);
    };
    const double x_max = 80.0 / prm.k();
    gbe::QuadratureOptions opt;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-11;
    const double s_max = std::pow(x_max, 1.0 - b);
    return gbe::integrate(f, 0.0, s_max, opt, {s_max / 8, s_max / 4, s_max / 2}).value;
}

}  // namespace

TEST(LnGamma, ClassicalValues) {
    EXPECT_EQ(gbe::ln_gamma(1.0), 0.0);
    EXPECT_NEAR(gbe::ln_gamma(0.5), 0.5 * std::log(kPi), 1e-15);
    EXPECT_NEAR(gbe::ln_gamma(10.0), std::log(362880.0), 1e-13);
    EXPECT_THROW(gbe::ln_gamma(0.0), std::domain_error);
    EXPECT_THROW(gbe::ln_gamma(-2.5), std::domain_error);
}

TEST(LnGamma, DuplicationRelation) {
    // Gamma(a/2 + 1/2) Gamma(a/2 + 1) / Gamma(1/2) = 2^(-a) Gamma(a + 1)
    for (double a : {3.0, 0.5, 1.0, 7.25, 40.0}) {
        const double lhs = gbe::ln_gamma(0.5 * a + 0.5) + gbe::ln_gamma(0.5 * a + 1.0) - gbe::ln_gamma(0.5);
        const double rhs = -a * std::log(2.0) + gbe::ln_gamma(a + 1.0);
        EXPECT_NEAR(std::exp(lhs - rhs), 1.0, 1e-12) << a;
    }
    EXPECT_NEAR(std::exp(gbe::ln_gamma(2.0) + gbe::ln_gamma(2.5) - gbe::ln_gamma(0.5)), 0.75, 1e-13);
}

TEST(Kummer, TrivialCases) {
    EXPECT_EQ(gbe::kummer_1f1(0.3, 1.7, 0.0).value(), 1.0);
    EXPECT_EQ(gbe::kummer_1f1(0.0, 0.5, 12.0).value(), 1.0);
    for (double x : {0.0, 0.75, 1.5, 4.0}) EXPECT_NEAR(gbe::kummer_1f1(-1.0, 1.5, x).value(), 1.0 - 2.0 * x / 3.0, 1e-15);
    EXPECT_EQ(gbe::kummer_1f1(-1.0, 1.5, 1.5).sign, 0);
}

TEST(Kummer, MatchesBoost) {
    for (double a : {-3.5, -0.5, 0.25, 1.0, 2.5})
        for (double b : {0.5, 1.5, 3.0})
            for (double x : {0.1, 1.0, 5.0, 20.0}) {
                const double want = boost::math::hypergeometric_1F1(a, b, x);
                EXPECT_LE(rel(gbe::kummer_1f1(a, b, x).value(), want), 1e-12) << a << " " << b << " " << x;
            }
}

TEST(Kummer, LogScaleSurvivesLargeArgument) {
    // 1F1(a; a; x) = e^x
    const gbe::ScaledReal r = gbe::kummer_1f1(1.5, 1.5, 1000.0);
    EXPECT_EQ(r.sign, 1);
    EXPECT_NEAR(r.log_abs, 1000.0, 1e-10);
}

TEST(Kummer, DomainErrors) {
    EXPECT_THROW(gbe::kummer_1f1(1.0, -2.0, 1.0), std::domain_error);
    EXPECT_THROW(gbe::kummer_1f1(1.0, 0.0, 1.0), std::domain_error);
    EXPECT_THROW(gbe::kummer_1f1(1.0, 1.0, -1.0), std::domain_error);
}

TEST(KummerParts, ValuesAtOrigin) {
    EXPECT_NEAR(gbe::V_R(0.0, 1.0), std::sqrt(kPi / 2), 1e-15);
    for (double a : {0.5, 1.0, 2.0, 9.0}) {
        EXPECT_EQ(gbe::V_I(0.0, a), 0.0);
        const double want = std::exp(-0.5 * a * std::log(2.0) + 0.5 * std::lgamma(a + 1.0) + 0.5 * std::log(kPi) -
                                     std::lgamma(0.5 * a + 0.5));
        EXPECT_LE(rel(gbe::V_R(0.0, a), want), 1e-14);
    }
}

TEST(KummerParts, Parity) {
    for (double a : {0.5, 2.0, 3.3})
        for (double y : {0.3, 1.7, 4.0}) {
            EXPECT_EQ(gbe::V_R(-y, a), gbe::V_R(y, a));
            EXPECT_EQ(gbe::V_I(-y, a), -gbe::V_I(y, a));
        }
}

TEST(FHat, ReferenceValuesAtAlphaTwo) {
    // mpmath, y = 3, alpha = 2
    EXPECT_LE(rel(gbe::V_R(3.0, 2.0), -0.25385223600797967), 1e-12);
    EXPECT_LE(rel(gbe::V_I(3.0, 2.0), 0.05907055108171087), 1e-12);
    const auto q = gbe::f_hat(3.0, params_for(2.0, gbe::FhatMethod::quadrature));
    const auto k = gbe::f_hat(3.0, params_for(2.0, gbe::FhatMethod::kummer));
    EXPECT_LE(std::abs(q - k) / std::abs(k), 1e-8);
}

TEST(FHat, OriginIsRealPositive) {
    for (auto m : {gbe::FhatMethod::kummer, gbe::FhatMethod::quadrature}) {
        const auto v = gbe::f_hat(0.0, params_for(1.0, m));
        EXPECT_NEAR(v.real(), std::sqrt(kPi / 2), 1e-12);
        EXPECT_NEAR(v.imag(), 0.0, 1e-14);
    }
}

TEST(FHat, ConjugateSymmetry) {
    for (auto m : {gbe::FhatMethod::kummer, gbe::FhatMethod::quadrature})
        for (double a : {0.5, 2.0, 5.5})
            for (double y : {0.4, 2.0, 6.0}) {
                const auto plus = gbe::f_hat(y, params_for(a, m)), minus = gbe::f_hat(-y, params_for(a, m));
                EXPECT_LE(std::abs(minus - std::conj(plus)), 1e-14 * std::abs(plus));
            }
}

TEST(FHat, MethodsAgreeOnGrid) {
    for (double a : {0.3, 0.5, 1.0, 2.0, 3.0, 6.5}) {
        for (int i = 0; i <= 48; ++i) {
            const double y = -6.0 + 0.25 * i;
            const auto q = gbe::f_hat(y, params_for(a, gbe::FhatMethod::quadrature));
            const auto k = gbe::f_hat(y, params_for(a, gbe::FhatMethod::kummer));
            EXPECT_LE(std::abs(q - k) / std::abs(k), 1e-8) << "alpha=" << a << " y=" << y;
        }
    }
}

TEST(FHat, AutoAvoidsIllConditionedSeries) {
    const auto ev = gbe::f_hat_detailed(10.0, params_for(64.0));
    EXPECT_EQ(ev.method, gbe::FhatMethod::quadrature);
    const auto series = gbe::f_hat_detailed(10.0, params_for(64.0, gbe::FhatMethod::kummer));
    EXPECT_GT(series.relative_error, 1e-12);
}

TEST(FHat, OverlapBandDisagreementIsReported) {
    auto p = params_for(2.0);
    p.agreement_tol = 1e-300;
    EXPECT_THROW(gbe::f_hat(8.0, p), gbe::MethodDisagreement);
    p.agreement_tol = 1e-8;
    const auto ev = gbe::f_hat_detailed(8.0, p);
    ASSERT_TRUE(ev.agreement.has_value());
    EXPECT_LE(*ev.agreement, 1e-8);
}

TEST(Density, ReferenceValues) {
    for (const auto& r : kDensityRefs) EXPECT_LE(rel(gbe::density(r.y, r.alpha), r.value), 1e-9) << r.alpha << " " << r.y;
    EXPECT_NEAR(gbe::density(0.0, 1.0), 1.0 / std::sqrt(2 * kPi) / (kPi / 2), 1e-15);
}

TEST(Density, EvenAndPositive) {
    for (double a : {0.5, 1.0, 4.0, 20.0})
        for (double y : {0.5, 3.0, 7.0, 12.0}) {
            const double v = gbe::density(y, a);
            EXPECT_GT(v, 0.0);
            EXPECT_EQ(gbe::density(-y, a), v);
        }
}

TEST(Density, MomentsMatchRecurrence) {
    for (double a : {0.5, 2.0}) {
        const auto check = gbe::density_moment_check(params_for(a), 3);
        for (double d : check.even_relative_deviation) EXPECT_LE(d, 1e-8) << a;
        for (double m : check.odd_moments) EXPECT_LE(std::abs(m), 1e-10);
    }
    const auto two = gbe::density_moment_check(params_for(2.0), 1);
    EXPECT_NEAR(two.even_moments[1], 3.0, 3e-8);
    EXPECT_THROW(gbe::density_moment_check(params_for(1.0), 7), std::out_of_range);
}

TEST(Density, RejectsBadParameters) {
    EXPECT_THROW(gbe::density(0.0, 0.0), std::domain_error);
    EXPECT_THROW(gbe::density(0.0, -1.0), std::domain_error);
    auto p = params_for(1.0);
    p.series_tol = 1e-3;
    EXPECT_THROW(gbe::density(0.0, p), std::invalid_argument);
    p = params_for(1.0);
    p.x_switch = 0.0;
    EXPECT_THROW(gbe::density(0.0, p), std::invalid_argument);
    EXPECT_THROW(gbe::parse_fhat_method("simpson"), std::invalid_argument);
}

TEST(Semicircle, Values) {
    EXPECT_NEAR(gbe::semicircle_density(0.0), 1.0 / kPi, 1e-16);
    EXPECT_EQ(gbe::semicircle_density(2.0), 0.0);
    EXPECT_EQ(gbe::semicircle_density(-2.0), 0.0);
    EXPECT_EQ(gbe::semicircle_density(3.0), 0.0);
    // x = 2 sin t removes the square-root endpoints
    const auto smooth = [](double t) { return gbe::semicircle_density(2 * std::sin(t)) * 2 * std::cos(t); };
    const double mass = gbe::integrate(smooth, -kPi / 2, kPi / 2).value;
    EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(Semicircle, RescaledTailIsSmall) {
    EXPECT_LE(gbe::rescaled_density(2.5, params_for(64.0)), 1e-3);
    EXPECT_LE(gbe::rescaled_density(-2.5, params_for(64.0)), 1e-3);
}

TEST(Hermite, Recurrence) {
    EXPECT_EQ(gbe::hermite_He(0, 3.7), 1.0);
    EXPECT_EQ(gbe::hermite_He(1, 3.7), 3.7);
    for (double y : {-1.5, 0.0, 0.5, 2.0}) EXPECT_NEAR(gbe::hermite_He(2, y), y * y - 1, 1e-15);
    EXPECT_EQ(gbe::hermite_He(3, 2.0), 2.0);
    EXPECT_NEAR(gbe::hermite_He(4, 1.0), 1.0 - 6.0 + 3.0, 1e-15);
    EXPECT_THROW(gbe::hermite_He(51, 1.0), std::out_of_range);
}

TEST(Hermite, ClosedFormsMatchSeries) {
    for (int a = 1; a <= 5; ++a)
        for (int i = 0; i <= 24; ++i) {
            const double y = -6.0 + 0.5 * i;
            const auto form = gbe::hermite_closed_form(a, y);
            EXPECT_EQ(form.imaginary, a % 2 == 0);
            const double series = form.imaginary ? gbe::V_I(y, a) : gbe::V_R(y, a);
            EXPECT_NEAR(form.value, series, 1e-10) << "alpha=" << a << " y=" << y;
        }
    // alpha = 2: V_I = pi sqrt(2) He_1(y) e^(-y^2/2) / sqrt(2 pi)
    EXPECT_NEAR(gbe::V_I(1.3, 2.0), kPi * std::sqrt(2.0) * 1.3 * std::exp(-0.845) / std::sqrt(2 * kPi), 1e-13);
}

TEST(SelfConvolutive, SpecializationConstants) {
    const auto p = gbe::SelfConvParams::for_alpha(3.0);
    EXPECT_EQ(p.k(), 0.5);
    EXPECT_EQ(p.a(), 1.5);
    EXPECT_EQ(p.b(), 0.5);
}

TEST(SelfConvolutive, NuReproducesDensity) {
    for (double a : {1.0, 2.0})
        for (double y : {-6.0, -2.5, -0.05, 0.3, 1.0, 4.0, 6.0}) {
            const double nu = gbe::nu_general(y * y, gbe::SelfConvParams::for_alpha(a));
            EXPECT_GT(nu, 0.0);
            EXPECT_LE(rel(std::abs(y) * nu, gbe::density(y, a)), 1e-9) << a << " " << y;
        }
}

TEST(SelfConvolutive, GeneralWeightMomentsSolveRecurrence) {
    // u_1 = 1, u_n = (a1 n + a2) u_{n-1} + a3 sum_{i=1}^{n-1} u_i u_{n-i}
    for (const auto& prm : {gbe::SelfConvParams{1.0, -1.7, 1.0}, gbe::SelfConvParams{1.0, -1.3, 0.5},
                            gbe::SelfConvParams{2.0, -2.5, 1.5}}) {
        std::vector<double> u{0.0, 1.0};
        for (int n = 2; n <= 5; ++n) {
            double conv = 0.0;
            for (int i = 1; i < n; ++i) conv += u[i] * u[n - i];
            u.push_back((prm.a1 * n + prm.a2) * u[n - 1] + prm.a3 * conv);
        }
        for (int n = 1; n <= 5; ++n) EXPECT_LE(rel(nu_moment(prm, n), u[n]), 1e-7) << "b=" << prm.b() << " n=" << n;
    }
}

TEST(SelfConvolutive, FrozenMoments) {
    const gbe::SelfConvParams prm{1.0, -1.7, 1.0};
    const double want[] = {1, 1.3, 4.29, 20.137, 117.8801};
    for (int n = 1; n <= 5; ++n) EXPECT_LE(rel(nu_moment(prm, n), want[n - 1]), 1e-7);
}

TEST(SelfConvolutive, RejectsUnsupportedParameters) {
    EXPECT_THROW(gbe::nu_general(1.0, {0.0, -3.0, 1.0}), std::domain_error);
    EXPECT_THROW(gbe::nu_general(1.0, {1.0, -1.0, 1.0}), std::domain_error);
    EXPECT_THROW(gbe::nu_general(0.0, gbe::SelfConvParams::for_alpha(1.0)), std::domain_error);
}
