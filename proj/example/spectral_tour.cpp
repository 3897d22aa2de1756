// A short walk through the library: exact moments, the closed-form density,
// and a Monte Carlo estimate from truncated random Jacobi matrices.

#include <iomanip>
#include <iostream>

#include "gbe_spectral/moments.hpp"
#include "gbe_spectral/sampler.hpp"
#include "gbe_spectral/special.hpp"

int main() {
    using namespace gbe;

    const auto u = u_polynomials(3);
    std::cout << "u_3(a) = " << to_string(u[3], "a") << "\n";
    std::cout << "h_2(N) = " << to_string(h_polynomial(2), "N") << "\n";

    const BigRational alpha(1, 2);
    std::cout << "u_n(1/2):";
    for (const auto& v : u_sequence(alpha, 5)) std::cout << ' ' << to_fraction_string(v);
    std::cout << "\n";

    std::cout << std::setprecision(12);
    for (double y : {0.0, 1.0, 2.0, 4.0}) std::cout << "density(" << y << ", 1) = " << density(y, 1.0) << "\n";

    RngStream rng(2024);
    const McReport mc = mc_mean_moments(1.0, 8, 20000, 3, rng);
    for (std::size_t p = 0; p < mc.moment_estimates.size(); ++p)
        std::cout << "E[J^" << 2 * p << "(1,1)] ~ " << mc.moment_estimates[p].mean << " +- "
                  << mc.moment_estimates[p].std_error << "\n";
}
