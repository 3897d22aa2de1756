// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gbe_spectral/linalg.hpp"
#include "gbe_spectral/moments.hpp"
#include "gbe_spectral/quadrature.hpp"
#include "gbe_spectral/ratpoly.hpp"
#include "gbe_spectral/sampler.hpp"
#include "gbe_spectral/special.hpp"

using gbe::BigInt;
using gbe::BigRational;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
    /// Wall-clock budget in seconds; zero means none.
    double budget = 0.0;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::vector<double> grid_241() {
    std::vector<double> y;
    for (int i = 0; i <= 240; ++i) y.push_back(-6.0 + 0.05 * i);
    return y;
}

gbe::DensityParams params(double alpha, gbe::FhatMethod m = gbe::FhatMethod::automatic) {
    gbe::DensityParams p;
    p.alpha = alpha;
    p.method = m;
    return p;
}

Outcome recurrence_equivalence() {
    Outcome o{true, "", 1.0};
    const auto polys = gbe::u_polynomials(12);
    double worst = 0.0;
    for (const BigRational& alpha : {BigRational(0), BigRational(1, 2), BigRational(1), BigRational(2), BigRational(11, 3)}) {
        const auto exact = gbe::u_sequence(alpha, 12);
        const auto numeric = gbe::u_sequence(static_cast<double>(alpha), 12);
        for (int n = 0; n <= 12; ++n) {
            if (gbe::evaluate(polys[n], alpha) != exact[n]) {
                o.passed = false;
                o.detail = "exact mismatch at n=" + std::to_string(n);
            }
            const double from_poly = gbe::evaluate(polys[n], static_cast<double>(alpha));
            worst = std::max(worst, std::abs(from_poly - numeric[n]) / numeric[n]);
        }
    }
    if (worst > 1e-12) o.passed = false;
    if (o.detail.empty()) o.detail = "exact equal; float rel dev " + fmt(worst);
    return o;
}

Outcome dyck_oracle() {
    Outcome o{true, "", 5.0};
    std::mt19937 gen(20240);
    std::uniform_int_distribution<int> num(0, 60), den(1, 17);
    for (int trial = 0; trial < 5; ++trial) {
        const BigRational alpha(num(gen), den(gen));
        const auto u = gbe::u_sequence(alpha, 8);
        for (int n = 0; n <= 8; ++n)
            if (gbe::dyck_weight_sum(n, alpha) != u[n]) {
                o.passed = false;
                o.detail = "mismatch at alpha=" + gbe::to_fraction_string(alpha) + " n=" + std::to_string(n);
                return o;
            }
    }
    o.detail = "n<=8 at 5 random rationals";
    return o;
}

Outcome gaussian_case() {
    Outcome o;
    const auto u = gbe::u_sequence(BigRational(0), 12);
    BigInt df = 1;
    for (int n = 1; n <= 12; ++n) {
        df *= 2 * n - 1;
        if (u[n] != BigRational(df)) {
            o.passed = false;
            o.detail = "n=" + std::to_string(n);
        }
    }
    if (o.passed) o.detail = "u_12(0) = " + df.str();
    return o;
}

Outcome duality() {
    Outcome o{true, "", 60.0};
    for (const auto& b : {BigRational(1, 2), BigRational(1), BigRational(2), BigRational(3, 7)})
        for (int p = 0; p <= 8; ++p)
            if (!gbe::verify_duality(p, b)) {
                o.passed = false;
                o.detail += " (p=" + std::to_string(p) + ", beta_hat=" + gbe::to_fraction_string(b) + ")";
            }
    if (o.passed) o.detail = "36 exact polynomial identities";
    return o;
}

Outcome u_h_relation() {
    Outcome o;
    for (int p = 0; p <= 10; ++p)
        if (!gbe::verify_u_h_relation(p)) {
            o.passed = false;
            o.detail += " p=" + std::to_string(p);
        }
    if (o.passed) o.detail = "p<=10 exact";
    return o;
}

Outcome limit_rate() {
    Outcome o;
    const std::vector<int> N{8, 16, 32, 64, 128, 256};
    double lo = 1e300, hi = 0.0;
    for (const BigRational& alpha : {BigRational(1), BigRational(2)}) {
        for (double d : gbe::verify_limit_to_u(0, alpha, N))
            if (d != 0.0) o.passed = false;
        for (int p = 1; p <= 4; ++p) {
            const auto dev = gbe::verify_limit_to_u(p, alpha, N);
            for (std::size_t i = 1; i < dev.size(); ++i) {
                const double ratio = dev[i - 1] / dev[i];
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
                if (std::abs(ratio - 2.0) > 0.3) o.passed = false;
            }
        }
    }
    o.detail = "ratios in [" + fmt(lo) + ", " + fmt(hi) + "]";
    return o;
}

Outcome lemma_property() {
    Outcome o;
    double worst = 0.0;
    for (double alpha : {0.0, 1.0, 2.0, 3.5}) {
        const auto b = gbe::lemma_two_step(gbe::u_sequence(alpha, 10), alpha);
        for (double r : gbe::self_convolutive_residuals(b, alpha + 1.0)) worst = std::max(worst, r);
    }
    if (worst > 1e-10) o.passed = false;
    const auto b0 = gbe::lemma_two_step(gbe::u_sequence(BigRational(0), 10), BigRational(0));
    const bool exact = b0 == gbe::u_sequence(BigRational(1), 9);
    if (!exact) o.passed = false;
    o.detail = "max residual " + fmt(worst) + (exact ? "; alpha=0 gives u(1) exactly" : "; alpha=0 mismatch");
    return o;
}

Outcome density_moments() {
    Outcome o{true, "", 30.0};
    double worst_even = 0.0, worst_norm = 0.0, worst_odd = 0.0;
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        const auto c = gbe::density_moment_check(params(alpha), 6);
        worst_norm = std::max(worst_norm, c.even_relative_deviation[0]);
        for (double d : c.even_relative_deviation) worst_even = std::max(worst_even, d);
        for (double m : c.odd_moments) worst_odd = std::max(worst_odd, std::abs(m));
    }
    o.passed = worst_even <= 1e-6 && worst_norm <= 1e-8 && worst_odd <= 1e-10;
    o.detail = "even " + fmt(worst_even) + ", norm " + fmt(worst_norm) + ", odd " + fmt(worst_odd);
    return o;
}

Outcome hermite_cases() {
    Outcome o;
    double worst = 0.0;
    for (int alpha = 1; alpha <= 5; ++alpha)
        for (double y : grid_241()) {
            const auto form = gbe::hermite_closed_form(alpha, y);
            const double series = form.imaginary ? gbe::V_I(y, alpha) : gbe::V_R(y, alpha);
            worst = std::max(worst, std::abs(form.value - series));
        }
    o.passed = worst <= 1e-10;
    o.detail = "max abs dev " + fmt(worst);
    return o;
}

Outcome fourier_consistency() {
    Outcome o;
    double worst_value = 0.0, worst_modulus = 0.0;
    for (int alpha = 1; alpha <= 5; ++alpha)
        for (double y : grid_241()) {
            const std::complex<double> quad = gbe::f_hat(y, params(alpha, gbe::FhatMethod::quadrature));
            const double vr = gbe::V_R(y, alpha), vi = gbe::V_I(y, alpha);
            const std::complex<double> series(vr, vi);
            worst_value = std::max(worst_value, std::abs(quad - series) / std::abs(series));
            worst_modulus = std::max(worst_modulus, std::abs(vr * vr + vi * vi - std::norm(quad)) / std::norm(quad));
        }
    o.passed = worst_value <= 1e-8 && worst_modulus <= 1e-10;
    o.detail = "value " + fmt(worst_value) + ", modulus^2 " + fmt(worst_modulus);
    return o;
}

Outcome martin_kearney() {
    Outcome o;
    double worst = 0.0;
    for (double alpha : {1.0, 2.0})
        for (double y : grid_241()) {
            if (y == 0.0) continue;  // nu is defined for x > 0 only
            const double lhs = std::abs(y) * gbe::nu_general(y * y, gbe::SelfConvParams::for_alpha(alpha));
            const double rhs = gbe::density(y, alpha);
            worst = std::max(worst, std::abs(lhs - rhs) / rhs);
        }
    o.passed = worst <= 1e-9;
    o.detail = "max rel dev " + fmt(worst) + " (y = 0 excluded)";
    return o;
}

Outcome eigensolver() {
    Outcome o;
    std::mt19937_64 gen(1234);
    std::normal_distribution<double> normal;
    std::gamma_distribution<double> gamma(1.3);
    std::uniform_int_distribution<int> size(1, 12);
    double worst_mass = 0.0, worst_moment = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        gbe::FiniteJacobi J;
        const int n = size(gen);
        for (int i = 0; i < n; ++i) J.diag.push_back(normal(gen));
        for (int i = 0; i + 1 < n; ++i) J.offdiag.push_back(std::sqrt(gamma(gen)) + 1e-9);
        const auto mu = gbe::spectral_decomposition(J);
        worst_mass = std::max(worst_mass, std::abs(mu.total_mass() - 1.0));
        const auto powers = gbe::matrix_power_entries(J, 8);
        for (int k = 0; k <= 8; ++k)
            worst_moment =
                std::max(worst_moment, std::abs(mu.moment(k) - powers[k]) / std::max(1.0, std::abs(powers[k])));
    }
    o.passed = worst_mass <= 1e-12 && worst_moment <= 1e-9;
    o.detail = "mass " + fmt(worst_mass) + ", moments " + fmt(worst_moment);
    return o;
}

Outcome monte_carlo_moments() {
    Outcome o{true, "", 300.0};
    const auto r = gbe::mc_mean_moments(1.0, 64, 200000, 4, gbe::RngStream(7), {1, 1000});
    const double u[] = {1, 2, 10, 74, 706};
    std::ostringstream d;
    for (int p = 1; p <= 4; ++p) {
        const auto& e = r.moment_estimates[p];
        const double z = (e.mean - u[p]) / e.std_error;
        if (!(std::abs(z) <= 4.0)) o.passed = false;
        d << (p > 1 ? ", " : "") << "z" << p << "=" << fmt(z);
    }
    o.detail = d.str();
    return o;
}

Outcome histogram_vs_density() {
    Outcome o;
    const int bins = 60;
    const double y_max = 6.0, width = 2 * y_max / bins;
    const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    const auto r = gbe::mc_histogram(1.0, 200, 10000, bins, y_max, gbe::RngStream(2024), {threads, 1000});
    gbe::QuadratureOptions opt;
    opt.abs_tol = 1e-13;
    double worst_z = 0.0;
    int checked = 0;
    for (int i = 0; i < bins; ++i) {
        const auto& b = r.histogram[i];
        if (std::abs(b.center) > 3.0) continue;  // central half of the window
        const double lo = -y_max + i * width;
        const double exact = gbe::integrate([](double y) { return gbe::density(y, 1.0); }, lo, lo + width, opt).value;
        const double z = std::abs(b.mass - exact) / b.std_error;
        worst_z = std::max(worst_z, z);
        ++checked;
        if (!(z <= 4.0)) o.passed = false;
    }
    o.detail = std::to_string(checked) + " central bins, max |z| " + fmt(worst_z);
    return o;
}

Outcome semicircle_trend() {
    Outcome o;
    std::vector<double> sup;
    for (double alpha : {4.0, 16.0, 64.0}) {
        double s = 0.0;
        for (int i = -190; i <= 190; ++i) {
            const double x = 0.01 * i;
            s = std::max(s, std::abs(gbe::rescaled_density(x, params(alpha)) - gbe::semicircle_density(x)));
        }
        sup.push_back(s);
    }
    const bool decreasing = sup[1] < sup[0] && sup[2] < sup[1];
    const auto u = gbe::u_polynomials(10);
    bool catalan = true;
    for (int n = 0; n <= 10; ++n) catalan = catalan && u[n].leading_coefficient() == BigRational(gbe::catalan(n));
    o.passed = decreasing && catalan;
    o.detail = "sup dev " + fmt(sup[0]) + " > " + fmt(sup[1]) + " > " + fmt(sup[2]) +
               (catalan ? "; Catalan leading coefficients" : "; Catalan mismatch");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"recurrence equivalence", recurrence_equivalence},
        {"Dyck path oracle", dyck_oracle},
        {"Gaussian degenerate case", gaussian_case},
        {"duality", duality},
        {"u/h polynomial relation", u_h_relation},
        {"finite-N convergence rate", limit_rate},
        {"two-step lemma", lemma_property},
        {"density moment matching", density_moments},
        {"Hermite special cases", hermite_cases},
        {"Fourier consistency", fourier_consistency},
        {"Martin-Kearney consistency", martin_kearney},
        {"eigensolver", eigensolver},
        {"Monte Carlo moments", monte_carlo_moments},
        {"histogram vs density", histogram_vs_density},
        {"semicircle trend", semicircle_trend},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.budget > 0.0 && secs > o.budget) {
            o.passed = false;
            o.detail += "; over the " + fmt(o.budget) + " s budget";
        }
        if (!o.passed) ++failures;
        std::printf("%s %2zu %-28s %8.2f s  %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
