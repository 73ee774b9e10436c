#ifndef CUSPTAYLOR_EISENSTEIN_HPP
#define CUSPTAYLOR_EISENSTEIN_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace cusptaylor {

using Cplx = std::complex<double>;

struct UpperHalfPoint {
    double x = 0, y = 1;
    UpperHalfPoint() = default;
    UpperHalfPoint(double x_, double y_) : x(x_), y(y_) {
        if (!(y > 0)) throw std::invalid_argument("UpperHalfPoint: need y > 0");
    }
    explicit UpperHalfPoint(Cplx z) : UpperHalfPoint(z.real(), z.imag()) {}
    Cplx z() const { return {x, y}; }
};

/// Truncation length for the q-expansions plus the resulting tail bound.
/// With 25 terms and y >= sqrt(3)/2 the Eisenstein tails are below 1e-50.
struct SeriesContext {
    int n_terms = 25;

    /// Crude tail majorant for sum_{n>N} c n^k |q|^n with sigma_{k-1}(n) <= n^k.
    static double tail_bound(double coeff, int k, int N, double y) {
        double x = std::exp(-2 * M_PI * y);
        double total = 0;
        double xn = std::pow(x, N + 1);
        for (int n = N + 1; n < N + 400; ++n) {
            double term = coeff * std::pow(n, k) * xn;
            total += term;
            xn *= x;
            if (term < 1e-300) break;
        }
        return total;
    }
    double eisenstein_tail(double y) const { return tail_bound(504, 6, n_terms, y); }
};

inline std::int64_t sigma_sum(int k, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("sigma_sum: n >= 1");
    std::int64_t s = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        std::int64_t e = n / d;
        std::int64_t dk = 1, ek = 1;
        for (int i = 0; i < k; ++i) {
            dk *= d;
            ek *= e;
        }
        s += dk;
        if (e != d) s += ek;
    }
    return s;
}

// ---------------------------------------------------------------------------
// tau(n) via the eta product: Delta = q (prod (1-q^n))^24, with the inner
// product expanded by Euler's pentagonal number theorem (O(sqrt N) terms)
// and then raised to the 24th power by three squarings and a cube.
// ---------------------------------------------------------------------------

inline std::vector<mpz_class> delta_q_coeffs(int N) {
    if (N < 1 || N > 10000) throw std::invalid_argument("delta_q_coeffs: need 1 <= N <= 10^4");
    // f = prod (1-q^n) mod q^N
    std::vector<mpz_class> f(N, 0);
    f[0] = 1;
    for (long k = 1;; ++k) {
        long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
        if (e1 >= N && e2 >= N) break;
        mpz_class s = (k % 2 == 0) ? 1 : -1;
        if (e1 < N) f[e1] += s;
        if (e2 < N) f[e2] += s;
    }
    auto mul = [&](const std::vector<mpz_class> &a, const std::vector<mpz_class> &b) {
        std::vector<mpz_class> c(N, 0);
        for (int i = 0; i < N; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j + i < N; ++j)
                if (b[j] != 0) c[i + j] += a[i] * b[j];
        }
        return c;
    };
    std::vector<mpz_class> f3 = mul(mul(f, f), f);
    std::vector<mpz_class> f6 = mul(f3, f3);
    std::vector<mpz_class> f12 = mul(f6, f6);
    std::vector<mpz_class> f24 = mul(f12, f12);
    // tau(n) = coefficient of q^{n-1} in f24; return 1-indexed list tau(1..N)
    std::vector<mpz_class> tau(N + 1, 0);
    for (int n = 1; n <= N; ++n) tau[n] = f24[n - 1];
    return tau;
}

inline const std::vector<mpz_class> &tau_table(int N = 256) {
    static const std::vector<mpz_class> table = delta_q_coeffs(256);
    if (N > 256) throw std::invalid_argument("tau_table: beyond cached range");
    return table;
}

// ---------------------------------------------------------------------------
// SL(2,Z) reduction to the fundamental domain.
// ---------------------------------------------------------------------------

struct ReductionResult {
    Cplx z;                       // reduced point
    std::array<std::int64_t, 4> g;  // (a, b, c, d) with gz_in = z
    Cplx j;                       // j(g, z_in) = c z_in + d
};

inline ReductionResult reduce_to_fundamental(Cplx z) {
    if (!(z.imag() > 0)) throw std::invalid_argument("reduce_to_fundamental: need Im z > 0");
    std::int64_t a = 1, b = 0, c = 0, d = 1;
    Cplx w = z;
    for (int it = 0; it < 4096; ++it) {
        double n = std::nearbyint(w.real());
        if (n != 0) {
            std::int64_t ni = static_cast<std::int64_t>(n);
            w -= n;
            a -= ni * c;
            b -= ni * d;
        }
        if (std::norm(w) < 1.0 - 1e-15) {
            w = -1.0 / w;
            std::swap(a, c);
            std::swap(b, d);
            a = -a;
            b = -b;
            // (a b; c d) <- (0 -1; 1 0)(a b; c d)
        } else {
            break;
        }
    }
    // convention tidy-up on the boundary: |Re| <= 1/2
    if (w.real() > 0.5) {
        w -= 1.0;
        a -= c;
        b -= d;
    }
    ReductionResult r;
    r.z = w;
    r.g = {a, b, c, d};
    r.j = static_cast<double>(c) * z + static_cast<double>(d);
    return r;
}

// ---------------------------------------------------------------------------
// Series evaluation.  The raw evaluators require y >= sqrt(3)/2 - eps; the
// public ones reduce first and transform back by the weight factor.
// ---------------------------------------------------------------------------

namespace detail {

constexpr double kMinSeriesY = 0.8660254037844386 - 1e-9;

inline void require_reduced_y(double y) {
    if (y < kMinSeriesY)
        throw std::invalid_argument("series evaluation needs y >= sqrt(3)/2; reduce the point first");
}

inline Cplx eis_series_raw(int k, Cplx z, const SeriesContext &ctx) {
    require_reduced_y(z.imag());
    Cplx q = std::exp(Cplx(0, 2 * M_PI) * z);
    Cplx acc = 1.0;
    double c = (k == 2) ? -24 : (k == 4 ? 240 : -504);
    Cplx qn = 1.0;
    for (int n = 1; n <= ctx.n_terms; ++n) {
        qn *= q;
        acc += c * static_cast<double>(sigma_sum(k - 1, n)) * qn;
    }
    return acc;
}

inline Cplx delta_raw(Cplx z, const SeriesContext &ctx) {
    require_reduced_y(z.imag());
    Cplx q = std::exp(Cplx(0, 2 * M_PI) * z);
    Cplx prod = 1.0;
    Cplx qn = 1.0;
    int terms = std::max(ctx.n_terms, 25);
    for (int n = 1; n <= terms; ++n) {
        qn *= q;
        Cplx x = 1.0 - qn;
        // (1-q^n)^24
        Cplx x2 = x * x, x4 = x2 * x2, x8 = x4 * x4;
        prod *= x8 * x8 * x8;
    }
    return q * prod;
}

}  // namespace detail

/// Values of E2*, E4, E6, Delta at z, evaluated at the reduced point and
/// carried back by the weight transformation (E2* is weight 2 exactly).
struct SiegelValues {
    Cplx e2star, e4, e6, delta;
};

inline SiegelValues eval_all(Cplx z, const SeriesContext &ctx = {}) {
    ReductionResult r = reduce_to_fundamental(z);
    Cplx e2 = detail::eis_series_raw(2, r.z, ctx);
    Cplx e2s = e2 - 3.0 / (M_PI * r.z.imag());
    Cplx e4 = detail::eis_series_raw(4, r.z, ctx);
    Cplx e6 = detail::eis_series_raw(6, r.z, ctx);
    Cplx dl = detail::delta_raw(r.z, ctx);
    Cplx j2 = r.j * r.j;
    Cplx j4 = j2 * j2, j6 = j4 * j2, j12 = j6 * j6;
    SiegelValues v;
    v.e2star = e2s / j2;
    v.e4 = e4 / j4;
    v.e6 = e6 / j6;
    v.delta = dl / j12;
    return v;
}

inline Cplx eval_E2star(Cplx z, const SeriesContext &ctx = {}) { return eval_all(z, ctx).e2star; }
inline Cplx eval_E4(Cplx z, const SeriesContext &ctx = {}) { return eval_all(z, ctx).e4; }
inline Cplx eval_E6(Cplx z, const SeriesContext &ctx = {}) { return eval_all(z, ctx).e6; }
inline Cplx eval_delta(Cplx z, const SeriesContext &ctx = {}) { return eval_all(z, ctx).delta; }

}  // namespace cusptaylor

#endif
