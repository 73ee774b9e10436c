#ifndef CUSPTAYLOR_CM_DATA_HPP
#define CUSPTAYLOR_CM_DATA_HPP

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "cusptaylor/quadratic.hpp"
#include "cusptaylor/recurrences.hpp"

namespace cusptaylor {

using Cplx = std::complex<double>;

/// One CM point z_D = sqrt(D)/2 (D even) or (1+sqrt(D))/2 (D odd) together
/// with the normalization constants of its Fourier-coefficient recursion:
///   E2*(z) = k1 |D|^{-1/2} Om^2,  Q(z) = k2 Om^4,  R(z) = k3 |D|^{1/2} Om^6,
///   m1/m2 = k1 k2 / (|D| k3) in lowest integral terms.
/// k3 may have a small denominator (63/sqrt5 entries); only |D|k3 enters the
/// recursion polynomials and that product is integral.
struct CMPointSpec {
    int D;
    FieldSpec field;
    int k0;                    // 1 for every D in scope
    QuadElt k1, k2;
    QuadElt k3_num;            // k3 = k3_num / k3_den
    int k3_den;
    QuadElt m1, m2;            // unset for the special rows D = -3, -4
    int h_num, h_den;          // class-number weight in the Chowla-Selberg exponent
    int elliptic_order;        // N: 2 at i, 3 at omega, else 1

    bool special() const { return D == -3 || D == -4; }

    Cplx z() const {
        double s = std::sqrt(static_cast<double>(-D));
        return (D % 2 == 0) ? Cplx(0.0, s / 2) : Cplx(0.5, s / 2);
    }

    /// |D| k3, an element of O_K.
    QuadElt Dk3() const {
        mpz_class num_a = mpz_class(-D) * k3_num.a, num_b = mpz_class(-D) * k3_num.b;
        if (num_a % k3_den != 0 || num_b % k3_den != 0)
            throw std::logic_error("CMPointSpec: |D|k3 not integral");
        return QuadElt(num_a / k3_den, num_b / k3_den, field);
    }

    double k3_value() const { return k3_num.to_double() / k3_den; }

    /// Index n carries a (possibly) nonzero coefficient only when n = -k/2 = 0
    /// mod N; the others are trivial.
    bool nontrivial(long n) const { return n % elliptic_order == 0; }
};

inline const std::vector<CMPointSpec> &cm_registry() {
    static const std::vector<CMPointSpec> table = [] {
        std::vector<CMPointSpec> t;
        FieldSpec Q = FieldSpec::rational();
        FieldSpec Q5 = FieldSpec::quad(5);
        FieldSpec Q2 = FieldSpec::quad(2);
        auto q = [](long a, long b, FieldSpec f) { return QuadElt(mpz_class(a), mpz_class(b), f); };
        auto row = [&](int D, FieldSpec f, long k1a, long k1b, long k2a, long k2b, long k3a,
                       long k3b, int k3den, long m1a, long m1b, long m2a, long m2b, int hn,
                       int hd, int N) {
            CMPointSpec s;
            s.D = D;
            s.field = f;
            s.k0 = 1;
            s.k1 = q(k1a, k1b, f);
            s.k2 = q(k2a, k2b, f);
            s.k3_num = q(k3a, k3b, f);
            s.k3_den = k3den;
            s.m1 = q(m1a, m1b, f);
            s.m2 = q(m2a, m2b, f);
            s.h_num = hn;
            s.h_den = hd;
            s.elliptic_order = N;
            t.push_back(s);
        };
        //   D   field  k1        k2        k3 (num, den)   m1        m2       h     N
        row(-3,  Q,  0, 0,     0, 0,      24, 0, 1,       0, 0,     0, 0,     1, 3,  3);
        row(-4,  Q,  0, 0,    12, 0,       0, 0, 1,       0, 0,     0, 0,     1, 2,  2);
        row(-7,  Q,  3, 0,    15, 0,      27, 0, 1,       5, 0,    21, 0,     1, 1,  1);
        row(-8,  Q,  4, 0,    20, 0,      28, 0, 1,       5, 0,    14, 0,     1, 1,  1);
        row(-11, Q,  8, 0,    32, 0,      56, 0, 1,      32, 0,    77, 0,     1, 1,  1);
        row(-15, Q5, 6, 3,    15, 12,    210, 63, 5,     30, 13,   70, 21,    2, 1,  1);
        row(-19, Q,  24, 0,   96, 0,     216, 0, 1,      32, 0,    57, 0,     1, 1,  1);
        row(-20, Q5, 12, 4,   40, 12,    360, 112, 5,    45, 19,   90, 28,    2, 1,  1);
        row(-24, Q2, 12, 12,  60, 24,     84, 72, 1,      9, 7,    14, 12,    2, 1,  1);
        return t;
    }();
    return table;
}

inline const CMPointSpec &registry(int D) {
    for (const auto &s : cm_registry())
        if (s.D == D) return s;
    throw std::invalid_argument("registry: unknown discriminant " + std::to_string(D));
}

inline std::vector<int> all_discriminants() {
    std::vector<int> out;
    for (const auto &s : cm_registry()) out.push_back(s.D);
    return out;
}

/// Exact Delta(z_D)/Om_D^12 (the |epsilon| column of the CM table).
inline double delta_over_omega12(int D) {
    switch (D) {
        case -3: return -1.0;
        case -4: return 1.0;
        case -7: return -1.0;
        case -8: return 1.0;
        case -11: return -1.0;
        case -15: return (std::sqrt(5.0) - 3.0) / 2.0;
        case -19: return -1.0;
        case -20: return std::sqrt(5.0) - 2.0;
        case -24: return 3.0 - 2.0 * std::sqrt(2.0);
        default: throw std::invalid_argument("delta_over_omega12: unknown discriminant");
    }
}

// ---------------------------------------------------------------------------
// Kronecker symbol and the Chowla-Selberg period.
// ---------------------------------------------------------------------------

inline int jacobi_symbol(long a, long n) {
    // n odd positive
    a %= n;
    if (a < 0) a += n;
    int s = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long r = n % 8;
            if (r == 3 || r == 5) s = -s;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

/// Kronecker symbol (D|n) for n >= 1.
inline int kronecker_symbol(long D, long n) {
    if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
    int s = 1;
    while (n % 2 == 0) {
        if (D % 2 == 0) return 0;
        long r = ((D % 8) + 8) % 8;
        s *= (r == 1 || r == 7) ? 1 : -1;
        n /= 2;
    }
    if (n > 1) s *= jacobi_symbol(D, n);
    return s;
}

/// Lanczos approximation (g = 7, 9 terms), ~15 significant digits for x > 0.
inline double gamma_fn(double x) {
    static const std::array<double, 9> g = {
        0.99999999999980993,   676.5203681218851,   -1259.1392167224028,
        771.32342877765313,    -176.61502916214059, 12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection
        return M_PI / (std::sin(M_PI * x) * gamma_fn(1.0 - x));
    }
    x -= 1.0;
    double a = g[0];
    double t = x + 7.5;
    for (int i = 1; i < 9; ++i) a += g[i] / (x + i);
    return std::sqrt(2 * M_PI) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

/// Om_D = (2 pi |D|)^{-1/2} [ prod_j Gamma(j/|D|)^{(D|j)} ]^{1/(2h)}, with the
/// class number replaced by 1/3 for D = -3 and 1/2 for D = -4.  The product is
/// accumulated in log space.
inline double chowla_selberg(int D) {
    const CMPointSpec &s = registry(D);
    long aD = -D;
    double logprod = 0.0;
    for (long j = 1; j < aD; ++j) {
        int chi = kronecker_symbol(D, j);
        if (chi) logprod += chi * std::log(gamma_fn(static_cast<double>(j) / aD));
    }
    double expo = static_cast<double>(s.h_den) / (2.0 * s.h_num);
    return std::exp(expo * logprod) / std::sqrt(2 * M_PI * aD);
}

/// kappa = -|D|^3 Delta(z_D), lambda per the main theorem, Om_D.
struct Normalization {
    Cplx kappa;
    double lambda;
    double omega;
};

inline Normalization normalization(const CMPointSpec &s, Cplx delta_at_z) {
    Normalization n;
    n.omega = chowla_selberg(s.D);
    double aD3 = std::pow(static_cast<double>(-s.D), 3);
    n.kappa = -aD3 * delta_at_z;
    double om2 = n.omega * n.omega;
    if (s.D == -4)
        n.lambda = -2 * M_PI * om2 / std::sqrt(3.0);
    else if (s.D == -3)
        n.lambda = -M_PI * om2;
    else {
        double k2 = s.k2.to_double();
        n.lambda = -M_PI * om2 / (6.0 * std::pow(s.k0, 4) * k2 * k2 * s.m2.to_double());
    }
    return n;
}

// ---------------------------------------------------------------------------
// The recursion coefficients a1..a4 of the CM point.
// ---------------------------------------------------------------------------

namespace detail {

struct QuadRat {
    mpq_class a, b;  // a + b sqrt(d)
    int d;
    QuadRat(mpq_class a_, mpq_class b_, int d_) : a(std::move(a_)), b(std::move(b_)), d(d_) {}
    friend QuadRat operator*(const QuadRat &x, const QuadRat &y) {
        return QuadRat(x.a * y.a + x.d * x.b * y.b, x.a * y.b + x.b * y.a, x.d);
    }
    friend QuadRat operator+(const QuadRat &x, const QuadRat &y) {
        return QuadRat(x.a + y.a, x.b + y.b, x.d);
    }
    friend QuadRat operator-(const QuadRat &x, const QuadRat &y) {
        return QuadRat(x.a - y.a, x.b - y.b, x.d);
    }
    friend QuadRat operator*(const mpq_class &c, const QuadRat &x) {
        return QuadRat(c * x.a, c * x.b, x.d);
    }
    QuadElt to_integral(FieldSpec f) const {
        if (a.get_den() != 1 || b.get_den() != 1)
            throw std::logic_error("CM coefficient failed to clear denominators");
        return QuadElt(a.get_num(), b.get_num(), f);
    }
};

inline QuadRat qr(const QuadElt &x) { return QuadRat(mpq_class(x.a), mpq_class(x.b), x.field.d); }

}  // namespace detail

/// a1..a4 for D < -4:
///   a1 = 12 k0^4 k2 m1 |D| (t + k3)
///   a2 = 2  k0^4 k2 (m1 - m2) |D| (t + k3)
///   a3 = 6  k0^4 m2 (k2 |D| (t + k3)^2 - k2^4)
///   a4 = -k0^8 k2^5 m2 (m2 - 6 m1) |D| - k0^8 k2^2 m1 (4 m2 + m1) |D|^2 (t + k3)^2
/// D = -4 and D = -3 use the elliptic-point specializations (the general
/// formulas need Q(z) != 0 != R(z), which fails at i and omega).
inline ThreeTermRule cm_recursion_rule(const CMPointSpec &s) {
    if (s.D == -4) return pseq_rule();
    if (s.D == -3) return qseq_omega_rule();
    using detail::QuadRat;
    const int d = s.field.d;
    const mpq_class aD(-s.D);
    const mpz_class k04 = mpz_class(s.k0) * s.k0 * s.k0 * s.k0;
    QuadRat k2 = detail::qr(s.k2), m1 = detail::qr(s.m1), m2 = detail::qr(s.m2);
    QuadRat k3(mpq_class(s.k3_num.a, s.k3_den), mpq_class(s.k3_num.b, s.k3_den), d);
    // (t + k3) and (t + k3)^2 as rational-coefficient polynomials
    std::vector<QuadRat> tk = {k3, QuadRat(1, 0, d)};
    std::vector<QuadRat> tk2 = {k3 * k3, 2 * k3, QuadRat(1, 0, d)};
    auto scaled = [&](const std::vector<QuadRat> &p, const QuadRat &c) {
        std::vector<QuadRat> out;
        out.reserve(p.size());
        for (const auto &x : p) out.push_back(c * x);
        return out;
    };
    auto to_poly = [&](const std::vector<QuadRat> &p) {
        std::vector<QuadElt> coeffs;
        coeffs.reserve(p.size());
        for (const auto &x : p) coeffs.push_back(x.to_integral(s.field));
        return QuadPoly(coeffs, s.field);
    };
    ThreeTermRule r;
    r.field = s.field;
    r.a1 = to_poly(scaled(tk, mpq_class(12) * mpq_class(k04) * aD * (k2 * m1)));
    r.a2 = to_poly(scaled(tk, mpq_class(2) * mpq_class(k04) * aD * (k2 * (m1 - m2))));
    {
        QuadRat k2_4 = k2 * k2 * k2 * k2;
        std::vector<QuadRat> inner = scaled(tk2, aD * k2);
        inner[0] = inner[0] - k2_4;
        r.a3 = to_poly(scaled(inner, mpq_class(6) * mpq_class(k04) * m2));
    }
    {
        mpq_class k08(k04 * k04);
        QuadRat k2_2 = k2 * k2;
        QuadRat k2_5 = k2_2 * k2_2 * k2;
        QuadRat c0 = mpq_class(-1) * (aD * k08 * (k2_5 * (m2 * (m2 - 6 * m1))));
        QuadRat cq = mpq_class(-1) * (aD * aD * k08 * (k2_2 * (m1 * (4 * m2 + m1))));
        std::vector<QuadRat> a4 = scaled(tk2, cq);
        a4[0] = a4[0] + c0;
        r.a4 = to_poly(a4);
    }
    return r;
}

/// Exact q_{n,z}(t).
inline QuadPoly cm_qseq(const CMPointSpec &s, long n) {
    return ExactSeqStream::at(cm_recursion_rule(s), n);
}

/// Reduced stream of q-bar_n in R_l (l an odd prime).
inline ModThreeTermRule cm_mod_rule(const CMPointSpec &s, std::int64_t l) {
    return ModThreeTermRule(cm_recursion_rule(s), l);
}

}  // namespace cusptaylor

#endif
