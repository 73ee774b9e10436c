// Print the Taylor expansion of Delta|sigma_z at a CM point by the exact
// recursion and cross-check against the tau-series route.
#include <cstdio>

#include "cusptaylor/coefficients.hpp"

int main(int argc, char **argv) {
    using namespace cusptaylor;
    int D = argc > 1 ? std::atoi(argv[1]) : -20;
    const CMPointSpec &spec = registry(D);
    std::printf("Delta|sigma_z expansion at z_{%d} = %.6f + %.6fi\n", D, spec.z().real(),
                spec.z().imag());
    for (int m = 0; m <= 8; ++m) {
        if (!spec.nontrivial(m)) continue;
        Cplx exact = coeff_via_cm_exact(spec, m);
        Cplx series = coeff_via_derivatives(spec.z(), m);
        std::printf("  m=%2d  c = % .10f %+.1e i   (route gap %.2e)\n", m, exact.real(),
                    exact.imag(), std::abs(exact - series));
    }
    return 0;
}
