#ifndef CUSPTAYLOR_COEFFICIENTS_HPP
#define CUSPTAYLOR_COEFFICIENTS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "cusptaylor/cm_data.hpp"
#include "cusptaylor/eisenstein.hpp"
#include "cusptaylor/recurrences.hpp"

namespace cusptaylor {

constexpr int kMaxCoeffOrder = 64;  // coefficient-growth guard for the E_m path

namespace detail {

/// Shared B_0..B_64 table (exact integers, built once).
inline const std::vector<QRPoly> &bseq_table() {
    static const std::vector<QRPoly> table = bseq(kMaxCoeffOrder);
    return table;
}

/// Exact binomial, converted to double by the caller.
inline mpz_class binom(long n, long k) {
    if (k < 0 || k > n) return 0;
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline double factorial_d(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f.get_d();
}

}  // namespace detail

/// E_m(z) = sum_{r=0}^m (m!/r!) C(m+11, r+11) (E2*)^{m-r} B_r evaluated at
/// (Q, R) = (E4(z), E6(z)).  Values from precomputed series data, so grid
/// scans can reuse one evaluation of the Eisenstein series.
inline Cplx calE_from_values(int m, const SiegelValues &v) {
    if (m < 0 || m > kMaxCoeffOrder) throw std::invalid_argument("calE: order out of range");
    const auto &B = detail::bseq_table();
    // power tables: B_r has monomials R^a Q^b with 6a+4b = 2r, a <= r/3, b <= r/2
    int amax = m / 3 + 1, bmax = m / 2 + 1;
    std::vector<Cplx> Rpow(amax + 1), Qpow(bmax + 1);
    Rpow[0] = 1;
    Qpow[0] = 1;
    for (int i = 1; i <= amax; ++i) Rpow[i] = Rpow[i - 1] * v.e6;
    for (int i = 1; i <= bmax; ++i) Qpow[i] = Qpow[i - 1] * v.e4;
    std::vector<Cplx> Epow(m + 1);
    Epow[0] = 1;
    for (int i = 1; i <= m; ++i) Epow[i] = Epow[i - 1] * v.e2star;
    Cplx total = 0;
    for (int r = 0; r <= m; ++r) {
        if (B[r].is_zero()) continue;
        Cplx br = 0;
        for (const auto &[key, c] : B[r].terms())
            br += mpq_class(c).get_d() * Rpow[key.first] * Qpow[key.second];
        double w = detail::factorial_d(m) / detail::factorial_d(r) *
                   detail::binom(m + 11, r + 11).get_d();
        total += w * Epow[m - r] * br;
    }
    return total;
}

inline Cplx eval_calE(int m, Cplx z, const SeriesContext &ctx = {}) {
    return calE_from_values(m, eval_all(z, ctx));
}

// ---------------------------------------------------------------------------
// The three routes to c_z(Delta, m).
// ---------------------------------------------------------------------------

/// Route 1: c_z(Delta,m) = Delta(z) (pi i/6)^m (z - zbar)^{m+6} E_m(z) / m!.
inline Cplx coeff_via_theorem41(Cplx z, int m, const SeriesContext &ctx = {}) {
    if (m < 0 || m > kMaxCoeffOrder) throw std::invalid_argument("coeff order out of range");
    SiegelValues v = eval_all(z, ctx);
    Cplx em = calE_from_values(m, v);
    Cplx two_iy(0.0, 2 * z.imag());
    Cplx pref = std::pow(Cplx(0, M_PI / 6), m) * std::pow(two_iy, m + 6);
    return v.delta * pref * em / detail::factorial_d(m);
}

/// Route 2 (tau-series): c_z(Delta,m) =
///   (2iy)^6 sum_n tau(n) q^n sum_{r<=m} C(m+11, r+11) (-4 pi n y)^r / r!.
inline Cplx coeff_via_derivatives(Cplx z, int m, const SeriesContext &ctx = {}) {
    if (m < 0 || m > kMaxCoeffOrder) throw std::invalid_argument("coeff order out of range");
    (void)ctx;
    using LCplx = std::complex<long double>;
    double y = z.imag();
    if (y < detail::kMinSeriesY)
        throw std::invalid_argument("coeff_via_derivatives: reduce the point first");
    const auto &tau = tau_table();
    // the inner r-sum and the n-sum both cancel heavily for larger m, so the
    // accumulation runs in extended precision
    std::vector<long double> binom_over_fact(m + 1);
    for (int r = 0; r <= m; ++r)
        binom_over_fact[r] =
            static_cast<long double>(detail::binom(m + 11, r + 11).get_d()) / detail::factorial_d(r);
    LCplx q = std::exp(LCplx(0, 2 * M_PI) * LCplx(z.real(), z.imag()));
    LCplx qn = 1.0L;
    LCplx total = 0;
    long double scale = 0;
    int quiet = 0;
    for (int n = 1; n < static_cast<int>(tau.size()); ++n) {
        qn *= q;
        long double inner = 0, tpow = 1, base = -4 * static_cast<long double>(M_PI) * n * y;
        for (int r = 0; r <= m; ++r) {
            inner += binom_over_fact[r] * tpow;
            tpow *= base;
        }
        LCplx term = static_cast<long double>(tau[n].get_d()) * qn * inner;
        total += term;
        scale = std::max(scale, std::abs(term));
        if (std::abs(term) < 1e-22L * std::max(scale, 1e-300L)) {
            if (++quiet >= 3 && n >= 25 + m) break;
        } else {
            quiet = 0;
        }
    }
    LCplx two_iy(0.0L, 2.0L * y);
    LCplx p = two_iy * two_iy;
    LCplx out = p * p * p * total;
    return Cplx(static_cast<double>(out.real()), static_cast<double>(out.imag()));
}

/// Route 3 (CM points only): c_z(Delta,m) = kappa lambda^m q_m(0)/m! with the
/// exact integer q_m(0).  lambda^m q_m(0)/m! is assembled in 256-bit floats
/// since q_m(0) quickly outgrows double range.
inline Cplx coeff_via_cm_exact(const CMPointSpec &spec, int m, const SeriesContext &ctx = {}) {
    QuadPoly qm = cm_qseq(spec, m);
    QuadElt q0 = qm.eval0();
    Normalization nrm = normalization(spec, eval_delta(spec.z(), ctx));
    constexpr int kPrec = 256;
    mpf_class lam_m(1, kPrec);
    {
        mpf_class lam(nrm.lambda, kPrec);
        for (int i = 0; i < m; ++i) lam_m *= lam;
    }
    mpf_class q0f(q0.a, kPrec);
    if (q0.b != 0) {
        mpf_class root(0, kPrec);
        mpf_sqrt_ui(root.get_mpf_t(), static_cast<unsigned long>(spec.field.d));
        q0f += mpf_class(q0.b, kPrec) * root;
    }
    mpz_class mfact;
    mpz_fac_ui(mfact.get_mpz_t(), m);
    mpf_class result = lam_m * q0f / mpf_class(mfact, kPrec);
    return nrm.kappa * result.get_d();
}

/// Largest pairwise relative disagreement among supplied route values.
inline double max_rel_disagreement(const std::vector<Cplx> &vals) {
    double scale = 0;
    for (const auto &v : vals) scale = std::max(scale, std::abs(v));
    if (scale == 0) return 0;
    double worst = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t j = i + 1; j < vals.size(); ++j)
            worst = std::max(worst, std::abs(vals[i] - vals[j]) / scale);
    return worst;
}

}  // namespace cusptaylor

#endif
