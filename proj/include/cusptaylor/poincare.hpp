#ifndef CUSPTAYLOR_POINCARE_HPP
#define CUSPTAYLOR_POINCARE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cusptaylor/coefficients.hpp"
#include "cusptaylor/eisenstein.hpp"

namespace cusptaylor {

/// Truncation thresholds for the (infinite) Poincare sums.  cmax/dmax bound
/// the Gamma_inf \ Gamma coset enumeration, entry_max/tmax the full-Gamma
/// enumeration.  tail_estimate carries the magnitude accumulated on the outer
/// shell of the enumeration as a proxy for the dropped tail.
struct TruncationPolicy {
    long cmax = 150;
    long dmax_factor = 150;
    long entry_max = 150;
    long tmax = 60;

    long dmax(long c) const { return dmax_factor * std::max(1L, c); }
};

struct SeriesValue {
    Cplx value;
    double tail_estimate = 0;
};

namespace detail {

inline long ext_gcd(long a, long b, long &x, long &y) {
    if (b == 0) {
        x = 1;
        y = 0;
        return a;
    }
    long x1, y1;
    long g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

/// Completion (a, b) of a coprime column (c, d) to ad - bc = 1.
inline std::pair<long, long> complete_row(long c, long d) {
    long x, y;
    long g = ext_gcd(c, d, x, y);
    if (g != 1 && g != -1) throw std::logic_error("complete_row: not coprime");
    // a d - b c = 1 with a = y/g, b = -x/g
    return {y / g, -x / g};
}

inline Cplx ipow(Cplx base, long e) {
    Cplx r = 1.0;
    Cplx b = base;
    long n = e < 0 ? -e : e;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return e < 0 ? 1.0 / r : r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Parabolic series over Gamma_inf \ Gamma: F_k(z, n, s) and P_m(z).
// ---------------------------------------------------------------------------

/// F_k(z, n, s) for s = k/2 + jj, jj = jj_lo .. jj_hi, in one coset pass.
/// jj is the exponent of Im(gamma z) and may be negative (the sums with
/// weight k + 2m at s = k/2 + j carry jj = j - m); convergence needs
/// Re(s) > 1, i.e. jj > 1 - k/2.  Cosets are (0,1) and {c >= 1,
/// gcd(c,d) = 1}; the completion only moves gamma*z by an integer, which the
/// summand ignores.
inline std::vector<SeriesValue> fks_batch(int k, Cplx z, long n, int jj_lo, int jj_hi,
                                          const TruncationPolicy &policy = {}) {
    if (k < 4 || k % 2) throw std::invalid_argument("fks: weight must be even and >= 4");
    if (n < 1) throw std::invalid_argument("fks: n >= 1");
    if (jj_lo > jj_hi) throw std::invalid_argument("fks: empty exponent range");
    if (2 * jj_lo + k <= 2) throw std::invalid_argument("fks: Re(s) <= 1, series diverges");
    const int count = jj_hi - jj_lo + 1;
    std::vector<Cplx> acc(count, Cplx(0));
    std::vector<double> shell(count, 0.0);
    auto add_coset = [&](Cplx gz, Cplx jg, bool outer) {
        Cplx jk = detail::ipow(1.0 / jg, k);
        double im = gz.imag();
        Cplx term = jk * std::exp(Cplx(0, 2 * M_PI * n) * gz) * std::pow(im, jj_lo);
        for (int i = 0; i < count; ++i) {
            acc[i] += term;
            if (outer) shell[i] += std::abs(term);
            term *= im;
        }
    };
    add_coset(z, Cplx(1), false);
    for (long c = 1; c <= policy.cmax; ++c) {
        bool outer = c > policy.cmax - policy.cmax / 10;
        for (long d = -policy.dmax(c); d <= policy.dmax(c); ++d) {
            if (std::gcd(c, d) != 1) continue;
            auto [a, b] = detail::complete_row(c, d);
            Cplx jg = static_cast<double>(c) * z + static_cast<double>(d);
            Cplx gz = (static_cast<double>(a) * z + static_cast<double>(b)) / jg;
            add_coset(gz, jg, outer || std::abs(d) > policy.dmax(c) - policy.dmax(c) / 10);
        }
    }
    std::vector<SeriesValue> out(count);
    for (int i = 0; i < count; ++i) out[i] = {acc[i], shell[i]};
    return out;
}

/// F_k(z, n, k/2 + jj).
inline SeriesValue fks(int k, Cplx z, long n, int jj, const TruncationPolicy &policy = {}) {
    return fks_batch(k, z, n, jj, jj, policy)[0];
}

/// P_m(z) = F_k(z, m, k/2).
inline SeriesValue parabolic_poincare(long m, Cplx z, int k, const TruncationPolicy &policy = {}) {
    return fks_batch(k, z, m, 0, 0, policy)[0];
}

// ---------------------------------------------------------------------------
// Full-Gamma elliptic series: P_{z0,m} and G_k(z, z0; m, l).
// ---------------------------------------------------------------------------

struct GSeed {
    int m = 0, l = 0;
};

/// G_k(z, z0; m, l) for several seeds in one pass over
///   gamma = (a0 + t c, b0 + t d; c, d) with both signs folded into a factor 2
///   (even weight).  Terms use w = (gz - z0)/(gz - conj z0) in the safe form
///   w^m conj(w)^l / (|w|^2 - 1)^l, and j(sigma^{-1} gamma, z) =
///   j(gamma, z)(gz - conj z0).
inline std::vector<SeriesValue> gk_batch(int k, Cplx z, Cplx z0, const std::vector<GSeed> &seeds,
                                         const TruncationPolicy &policy = {}) {
    if (k < 4 || k % 2) throw std::invalid_argument("gk: weight must be even and >= 4");
    int lmax = 0, mmax = 0;
    for (const auto &s : seeds) {
        if (s.m < 0 || s.l < 0) throw std::invalid_argument("gk: seed out of range");
        if (s.l >= k / 2 - 2)
            throw std::invalid_argument("gk: l >= k/2 - 2 leaves the convergence range");
        lmax = std::max(lmax, s.l);
        mmax = std::max(mmax, s.m);
    }
    double beta = z0.imag();
    Cplx pref = 2.0 * detail::ipow(Cplx(0, 2 * beta), k / 2);
    std::vector<Cplx> acc(seeds.size(), Cplx(0));
    std::vector<double> shell(seeds.size(), 0.0);
    std::vector<Cplx> wpow(mmax + 1), wbpow(lmax + 1);
    std::vector<double> denpow(lmax + 1);

    auto add_gamma = [&](Cplx gz, Cplx jg, bool outer) {
        Cplx w = (gz - z0) / (gz - std::conj(z0));
        Cplx jfull = jg * (gz - std::conj(z0));
        Cplx jk = detail::ipow(1.0 / jfull, k);
        wpow[0] = 1.0;
        for (int i = 1; i <= mmax; ++i) wpow[i] = wpow[i - 1] * w;
        Cplx wb = std::conj(w);
        double den = std::norm(w) - 1.0;
        wbpow[0] = 1.0;
        denpow[0] = 1.0;
        for (int i = 1; i <= lmax; ++i) {
            wbpow[i] = wbpow[i - 1] * wb;
            denpow[i] = denpow[i - 1] * den;
        }
        for (std::size_t s = 0; s < seeds.size(); ++s) {
            Cplx term = jk * wpow[seeds[s].m] * wbpow[seeds[s].l] / denpow[seeds[s].l];
            acc[s] += term;
            if (outer) shell[s] += std::abs(term);
        }
    };

    const long E = policy.entry_max, T = policy.tmax;
    // c = 0 class: translations
    for (long t = -T; t <= T; ++t) add_gamma(z + static_cast<double>(t), Cplx(1), std::abs(t) > T - T / 8);
    for (long c = 1; c <= E; ++c) {
        for (long d = -E; d <= E; ++d) {
            if (std::gcd(c, d) != 1) continue;
            auto [a0, b0] = detail::complete_row(c, d);
            Cplx jg = static_cast<double>(c) * z + static_cast<double>(d);
            Cplx gz0 = (static_cast<double>(a0) * z + static_cast<double>(b0)) / jg;
            bool outer_cd = c > E - E / 10 || std::abs(d) > E - E / 10;
            for (long t = -T; t <= T; ++t)
                add_gamma(gz0 + static_cast<double>(t), jg, outer_cd || std::abs(t) > T - T / 8);
        }
    }
    std::vector<SeriesValue> out(seeds.size());
    for (std::size_t s = 0; s < seeds.size(); ++s) out[s] = {pref * acc[s], std::abs(pref) * shell[s]};
    return out;
}

inline SeriesValue gk(int k, Cplx z, Cplx z0, int m, int l, const TruncationPolicy &policy = {}) {
    return gk_batch(k, z, z0, {GSeed{m, l}}, policy)[0];
}

/// P_{z0,m}(z) = G_k(z, z0; m, 0).
inline SeriesValue elliptic_poincare(Cplx z0, int m, Cplx z, int k,
                                     const TruncationPolicy &policy = {}) {
    return gk(k, z, z0, m, 0, policy);
}

/// The (sum2) parametrization of G_k: the same group elements, but each term
/// computed from the entries of sigma_{z0}^{-1} gamma sigma_z.  Numerically
/// independent path for cross-checking gk.
inline SeriesValue gk_sum2(int k, Cplx z, Cplx z0, int m, int l,
                           const TruncationPolicy &policy = {}) {
    if (l >= k / 2 - 2) throw std::invalid_argument("gk_sum2: l out of the convergence range");
    double beta = z0.imag(), y = z.imag();
    Cplx pref = 2.0 * detail::ipow(Cplx(0, 2 * beta), k / 2) / detail::ipow(Cplx(0, 2 * y), k);
    Cplx acc = 0;
    double shell = 0;
    const long E = policy.entry_max, T = policy.tmax;
    auto add_gamma = [&](long p, long q, long r, long s, bool outer) {
        // row 2 of sigma_{z0}^{-1} (p q; r s):  (p - conj(z0) r,  q - conj(z0) s)
        Cplx r1 = static_cast<double>(p) - z0 * static_cast<double>(r);
        Cplx r2 = static_cast<double>(q) - z0 * static_cast<double>(s);
        Cplx s1 = static_cast<double>(p) - std::conj(z0) * static_cast<double>(r);
        Cplx s2 = static_cast<double>(q) - std::conj(z0) * static_cast<double>(s);
        // columns of sigma_z: (-conj z, -1) and (z, 1), scaled by 1/(2iy)
        Cplx bM = (r1 * z + r2) / Cplx(0, 2 * y);
        Cplx dM = (s1 * z + s2) / Cplx(0, 2 * y);
        Cplx ratio = bM / dM;
        Cplx term = detail::ipow(1.0 / dM, k) * detail::ipow(ratio, m) *
                    detail::ipow(std::conj(ratio), l) / detail::ipow(Cplx(std::norm(ratio) - 1.0), l);
        acc += term;
        if (outer) shell += std::abs(term);
    };
    for (long t = -T; t <= T; ++t) add_gamma(1, t, 0, 1, std::abs(t) > T - T / 8);
    for (long r = 1; r <= E; ++r)
        for (long s = -E; s <= E; ++s) {
            if (std::gcd(r, s) != 1) continue;
            auto [p0, q0] = detail::complete_row(r, s);
            bool outer = r > E - E / 10 || std::abs(s) > E - E / 10;
            for (long t = -T; t <= T; ++t)
                add_gamma(p0 + t * r, q0 + t * s, r, s, outer || std::abs(t) > T - T / 8);
        }
    return {pref * acc, std::abs(pref) * shell};
}

// ---------------------------------------------------------------------------
// Petersson norm of Delta by quadrature over the fundamental domain.
// ---------------------------------------------------------------------------

namespace detail {

/// 16-point Gauss-Legendre on [-1, 1].
inline const std::array<std::pair<double, double>, 8> &gl16() {
    static const std::array<std::pair<double, double>, 8> nw = {{
        {0.0950125098376374, 0.1894506104550685},
        {0.2816035507792589, 0.1826034150449236},
        {0.4580167776572274, 0.1691565193950025},
        {0.6178762444026438, 0.1495959888165767},
        {0.7554044083550030, 0.1246289712555339},
        {0.8656312023878318, 0.0951585116824928},
        {0.9445750230732326, 0.0622535239386479},
        {0.9894009349916499, 0.0271524594117541},
    }};
    return nw;
}

template <typename F>
double gl_integrate(F &&f, double a, double b, int panels) {
    double total = 0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        for (const auto &[xi, wi] : gl16()) {
            total += wi * (f(mid + xi * h / 2) + f(mid - xi * h / 2)) * h / 2;
        }
    }
    return total;
}

}  // namespace detail

/// ||Delta||^2 = int_F |Delta|^2 y^12 dx dy / y^2, refined until two
/// consecutive panelings agree to the requested relative tolerance.  |Delta|^2
/// is even in x, and the integrand above y = 8 is below 1e-40 of the total.
inline double petersson_norm_delta(double tol = 1e-10) {
    SeriesContext ctx;
    ctx.n_terms = 40;
    auto column = [&](double x, int ypanels) {
        double y0 = std::sqrt(std::max(0.0, 1.0 - x * x));
        return detail::gl_integrate(
            [&](double y) {
                Cplx d = detail::delta_raw(Cplx(x, y), ctx);
                return std::norm(d) * std::pow(y, 10);
            },
            y0, 8.0, ypanels);
    };
    double prev = 0;
    for (int refine = 1; refine <= 6; ++refine) {
        int panels = 4 << refine;
        double v = 2 * detail::gl_integrate([&](double x) { return column(x, panels); }, 0.0, 0.5,
                                            panels / 2);
        if (refine > 1 && std::abs(v - prev) < tol * std::abs(v)) return v;
        prev = v;
    }
    throw std::runtime_error("petersson_norm_delta: quadrature did not settle to tolerance");
}

inline double petersson_norm_delta_cached() {
    static const double value = petersson_norm_delta();
    return value;
}

// ---------------------------------------------------------------------------
// The average identities.
// ---------------------------------------------------------------------------

struct VerificationReport {
    Cplx lhs, rhs;
    double rel_err = 0;
    double tail_estimate = 0;
};

inline double rel_err_of(Cplx a, Cplx b) {
    double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0 ? 0 : std::abs(a - b) / scale;
}

/// tau(n) c_{z0}(Delta, m) = (64/10!) ||Delta||^2 Im(z0)^{m+6}
///     sum_j C(m+11, m-j) (-4 pi n)^{j+11} / j!  F_{2m+12}(z0, n, 6+j).
inline VerificationReport verify_parabolic_elliptic(Cplx z0, int m, long n,
                                                    const TruncationPolicy &policy = {}) {
    const auto &tau = tau_table();
    Cplx lhs = tau[n].get_d() * coeff_via_theorem41(z0, m);
    // F_{12+2m}(z0, n, 6+j) for j = 0..m: exponent of Im is (6+j) - (6+m) = j-m
    auto F = fks_batch(12 + 2 * m, z0, n, -m, 0, policy);
    Cplx sum = 0;
    double tail = 0;
    for (int j = 0; j <= m; ++j) {
        double w = detail::binom(m + 11, m - j).get_d() / detail::factorial_d(j) *
                   std::pow(-4 * M_PI * n, j + 11);
        sum += w * F[j].value;
        tail += std::abs(w) * F[j].tail_estimate;
    }
    double c = 64.0 / detail::factorial_d(10) * petersson_norm_delta_cached() *
               std::pow(z0.imag(), m + 6);
    VerificationReport rep;
    rep.lhs = lhs;
    rep.rhs = c * sum;
    rep.rel_err = rel_err_of(rep.lhs, rep.rhs);
    rep.tail_estimate = std::abs(c) * tail;
    return rep;
}

/// conj(c_{z0}(Delta,m)) c_{z0'}(Delta,n) / ||Delta||^2 =
///   2^9 (m+11)! (z0'-conj z0')^{n+6} / (pi m! 10!)
///     sum_j C(m,j) C(n+11, n-j) G_{12+2n}(z0', z0; m-j, n-j).
inline VerificationReport verify_elliptic_elliptic(Cplx z0, Cplx z0p, int m, int n,
                                                   const TruncationPolicy &policy = {}) {
    Cplx lhs = std::conj(coeff_via_theorem41(z0, m)) * coeff_via_theorem41(z0p, n) /
               petersson_norm_delta_cached();
    std::vector<GSeed> seeds;
    std::vector<double> weights;
    for (int j = 0; j <= n; ++j) {
        if (j > m) continue;  // C(m,j) = 0
        seeds.push_back(GSeed{m - j, n - j});
        weights.push_back(detail::binom(m, j).get_d() * detail::binom(n + 11, n - j).get_d());
    }
    auto G = gk_batch(12 + 2 * n, z0p, z0, seeds, policy);
    Cplx sum = 0;
    double tail = 0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        sum += weights[i] * G[i].value;
        tail += weights[i] * G[i].tail_estimate;
    }
    Cplx pref = 512.0 * detail::factorial_d(m + 11) *
                detail::ipow(Cplx(0, 2 * z0p.imag()), n + 6) /
                (M_PI * detail::factorial_d(m) * detail::factorial_d(10));
    VerificationReport rep;
    rep.lhs = lhs;
    rep.rhs = pref * sum;
    rep.rel_err = rel_err_of(rep.lhs, rep.rhs);
    rep.tail_estimate = std::abs(pref) * tail;
    return rep;
}

/// The final vanishing criterion: sum_j C(m,j) C(m+11,j) G_{2m+12}(z0,z0;j,j),
/// zero exactly when c_{z0}(Delta,m) = 0.
inline SeriesValue gsum_criterion(Cplx z0, int m, const TruncationPolicy &policy = {}) {
    std::vector<GSeed> seeds;
    std::vector<double> weights;
    for (int j = 0; j <= m; ++j) {
        seeds.push_back(GSeed{j, j});
        weights.push_back(detail::binom(m, j).get_d() * detail::binom(m + 11, j).get_d());
    }
    auto G = gk_batch(12 + 2 * m, z0, z0, seeds, policy);
    SeriesValue out{0, 0};
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        out.value += weights[i] * G[i].value;
        out.tail_estimate += weights[i] * G[i].tail_estimate;
    }
    return out;
}

struct DualRouteValue {
    Cplx via_fks;       // via the raising-operator expansion in F_{k+2m}
    Cplx via_cosets;    // Poisson-summation coset route
    double rel_err = 0;
};

/// c_inf(P_{z0,m}, n) two ways:
///   conj: (2 beta^{m+6} / (n (-2i)^6)) sum_j C(m,j) (-4 pi n)^{12+j}/(11+j)! F_{12+2m}(z0,n,6+j)
///   and the direct coset sum (2/(n (2i)^6)) sum_j beta^{6+j} C(m,j)
///     (-4 pi n)^{12+j}/(11+j)!  S_j,  S_j = sum a^{m-j} c^{-12-m-j} e^{2 pi i n d / c}.
inline DualRouteValue coeff_of_elliptic_at_infty(Cplx z0, int m, long n,
                                                 const TruncationPolicy &policy = {}) {
    double beta = z0.imag();
    auto F = fks_batch(12 + 2 * m, z0, n, -m, 0, policy);
    Cplx sum1 = 0;
    for (int j = 0; j <= m; ++j)
        sum1 += detail::binom(m, j).get_d() * std::pow(-4 * M_PI * n, 12 + j) /
                detail::factorial_d(11 + j) * F[j].value;
    Cplx conj_c = 2.0 * std::pow(beta, m + 6) / (static_cast<double>(n) * Cplx(-64)) * sum1;
    DualRouteValue out;
    out.via_fks = std::conj(conj_c);

    // coset route over Gamma/Gamma_inf: classes are the first columns (p, r)
    // of gamma up to sign; (a b; c d) = sigma_{z0}^{-1} gamma
    std::vector<Cplx> S(m + 1, Cplx(0));
    const long E = policy.entry_max;
    auto add_class = [&](long p, long r, long q, long s) {
        Cplx a = static_cast<double>(p) - z0 * static_cast<double>(r);
        Cplx c = static_cast<double>(p) - std::conj(z0) * static_cast<double>(r);
        Cplx d = static_cast<double>(q) - std::conj(z0) * static_cast<double>(s);
        Cplx e = std::exp(Cplx(0, 2 * M_PI * n) * (d / c));
        Cplx cpow = detail::ipow(1.0 / c, 12 + m);  // c^{-(12+m)}; one extra /c per j
        Cplx apow = detail::ipow(a, m);             // a^{m-j}: one /a per j... a may be tiny
        // build a^{m-j} c^{-12-m-j} stably: iterate j upward multiplying by 1/(a c)
        Cplx base = apow * cpow * e;
        Cplx f = 1.0 / (a * c);
        for (int j = 0; j <= m; ++j) {
            S[j] += base;
            base *= f;
        }
    };
    add_class(1, 0, 0, 1);
    for (long r = 1; r <= E; ++r)
        for (long p = -E; p <= E; ++p) {
            if (std::gcd(p, r) != 1) continue;
            // complete p s - q r = 1
            long x, y;
            long g = detail::ext_gcd(p, r, x, y);
            (void)g;  // g = +-1
            long s = g == 1 ? x : -x, q = g == 1 ? -y : y;
            add_class(p, r, q, s);
        }
    Cplx sum2 = 0;
    for (int j = 0; j <= m; ++j)
        sum2 += std::pow(beta, 6 + j) * detail::binom(m, j).get_d() *
                std::pow(-4 * M_PI * n, 12 + j) / detail::factorial_d(11 + j) * S[j];
    out.via_cosets = 2.0 / (static_cast<double>(n) * Cplx(-64)) * sum2;
    out.rel_err = rel_err_of(out.via_fks, out.via_cosets);
    return out;
}

/// Fourier-integral oracle: c_inf(P_{z0,m}, n) from
/// e^{2 pi n y} int_0^1 P_{z0,m}(x + iy) e^{-2 pi i n x} dx (trapezoid; the
/// integrand is smooth and 1-periodic so the rule converges geometrically).
inline Cplx coeff_of_elliptic_at_infty_integral(Cplx z0, int m, long n, double y = 1.1,
                                                int samples = 48,
                                                const TruncationPolicy &policy = {}) {
    Cplx acc = 0;
    for (int i = 0; i < samples; ++i) {
        double x = (i + 0.5) / samples;
        Cplx p = elliptic_poincare(z0, m, Cplx(x, y), 12, policy).value;
        acc += p * std::exp(Cplx(0, -2 * M_PI * n * x));
    }
    return acc / static_cast<double>(samples) * std::exp(2 * M_PI * n * y);
}

}  // namespace cusptaylor

#endif
