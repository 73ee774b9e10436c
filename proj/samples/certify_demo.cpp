// Reproduce the D = -7 story: detect the scalar repeat q_265 = 8 q_12 mod 23,
// derive the period 2783, and certify that every Fourier coefficient of Delta
// at z_{-7} is nonzero.
#include <cstdio>

#include "cusptaylor/periodicity.hpp"

int main() {
    using namespace cusptaylor;
    const CMPointSpec &spec = registry(-7);
    PeriodCertificate cert = certify_nonvanishing(spec, 23);
    std::printf("D = %d, l = %lld\n", spec.D, static_cast<long long>(cert.l));
    if (cert.shortcut)
        std::printf("shortcut: q_%lld = %s * q_%lld, unit order %lld\n",
                    static_cast<long long>(cert.shortcut->j0), cert.shortcut->unit.str().c_str(),
                    static_cast<long long>(cert.shortcut->i0),
                    static_cast<long long>(cert.shortcut->order));
    std::printf("periodic from %lld with period %lld (constants: %lld)\n",
                static_cast<long long>(cert.alpha), static_cast<long long>(cert.beta),
                static_cast<long long>(cert.constant_period));
    std::printf("verdict: %s\n", verdict_name(cert.verdict));
    return cert.verdict == Verdict::ALL_NONZERO ? 0 : 1;
}
