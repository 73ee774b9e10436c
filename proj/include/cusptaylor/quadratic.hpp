#ifndef CUSPTAYLOR_QUADRATIC_HPP
#define CUSPTAYLOR_QUADRATIC_HPP

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace cusptaylor {

/// The coefficient field K: the rationals (d == 1) or Q(sqrt(d)) for d in {2, 5}.
/// Elements of O_K are written in the Z[sqrt(d)] sub-basis a + b*sqrt(d); every
/// constant appearing in the CM tables has this form, and reduction mod an odd
/// prime l uses Z/lZ[sqrt(d)] ~ O_K/lO_K.
struct FieldSpec {
    int d = 1;

    static FieldSpec rational() { return FieldSpec{1}; }
    static FieldSpec quad(int d) {
        if (d != 2 && d != 5)
            throw std::invalid_argument("FieldSpec: only d = 2, 5 supported");
        return FieldSpec{d};
    }
    bool is_rational() const { return d == 1; }
    friend bool operator==(const FieldSpec &x, const FieldSpec &y) { return x.d == y.d; }
    friend bool operator!=(const FieldSpec &x, const FieldSpec &y) { return x.d != y.d; }
};

inline void check_same_field(const FieldSpec &x, const FieldSpec &y) {
    if (x != y) throw std::invalid_argument("field mismatch");
}

/// Exact element a + b*sqrt(d) of O_K (b = 0 over the rationals).
struct QuadElt {
    mpz_class a, b;
    FieldSpec field;

    QuadElt() : a(0), b(0), field(FieldSpec::rational()) {}
    QuadElt(mpz_class a_, mpz_class b_, FieldSpec f) : a(std::move(a_)), b(std::move(b_)), field(f) {
        if (field.is_rational() && b != 0)
            throw std::invalid_argument("QuadElt: rational element with b != 0");
    }
    explicit QuadElt(long v) : a(v), b(0), field(FieldSpec::rational()) {}

    bool is_zero() const { return a == 0 && b == 0; }

    friend QuadElt operator+(const QuadElt &x, const QuadElt &y) {
        check_same_field(x.field, y.field);
        return QuadElt(x.a + y.a, x.b + y.b, x.field);
    }
    friend QuadElt operator-(const QuadElt &x, const QuadElt &y) {
        check_same_field(x.field, y.field);
        return QuadElt(x.a - y.a, x.b - y.b, x.field);
    }
    friend QuadElt operator-(const QuadElt &x) { return QuadElt(-x.a, -x.b, x.field); }
    friend QuadElt operator*(const QuadElt &x, const QuadElt &y) {
        check_same_field(x.field, y.field);
        return QuadElt(x.a * y.a + x.field.d * x.b * y.b, x.a * y.b + x.b * y.a, x.field);
    }
    friend QuadElt operator*(const mpz_class &c, const QuadElt &x) {
        return QuadElt(c * x.a, c * x.b, x.field);
    }
    friend bool operator==(const QuadElt &x, const QuadElt &y) {
        return x.field == y.field && x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const QuadElt &x, const QuadElt &y) { return !(x == y); }

    QuadElt conj() const { return QuadElt(a, -b, field); }
    mpz_class norm() const { return a * a - field.d * b * b; }

    /// Value under the real embedding sqrt(d) -> +sqrt(d).
    double to_double() const {
        return a.get_d() + b.get_d() * std::sqrt(static_cast<double>(field.d));
    }

    std::string str() const {
        std::ostringstream os;
        os << a;
        if (b != 0) os << (b > 0 ? "+" : "") << b << "*sqrt(" << field.d << ")";
        return os.str();
    }
    friend std::ostream &operator<<(std::ostream &os, const QuadElt &x) { return os << x.str(); }
};

inline QuadElt quad_add(const QuadElt &x, const QuadElt &y) { return x + y; }
inline QuadElt quad_mul(const QuadElt &x, const QuadElt &y) { return x * y; }

/// Element of O_K / lO_K for an odd prime l, components reduced to [0, l).
struct ResidueElt {
    std::int64_t a = 0, b = 0;
    std::int64_t l = 0;
    FieldSpec field;

    ResidueElt() = default;
    ResidueElt(std::int64_t a_, std::int64_t b_, std::int64_t l_, FieldSpec f)
        : a(((a_ % l_) + l_) % l_), b(((b_ % l_) + l_) % l_), l(l_), field(f) {
        if (l_ < 3 || l_ % 2 == 0) throw std::invalid_argument("ResidueElt: modulus must be an odd prime");
    }
    static ResidueElt one(std::int64_t l, FieldSpec f) { return ResidueElt(1, 0, l, f); }

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_one() const { return a == 1 && b == 0; }

    friend ResidueElt operator+(const ResidueElt &x, const ResidueElt &y) {
        check_compat(x, y);
        return ResidueElt(x.a + y.a, x.b + y.b, x.l, x.field);
    }
    friend ResidueElt operator-(const ResidueElt &x, const ResidueElt &y) {
        check_compat(x, y);
        return ResidueElt(x.a - y.a + x.l, x.b - y.b + x.l, x.l, x.field);
    }
    friend ResidueElt operator*(const ResidueElt &x, const ResidueElt &y) {
        check_compat(x, y);
        return ResidueElt((x.a * y.a + x.field.d * (x.b * y.b % x.l)) % x.l,
                          (x.a * y.b + x.b * y.a) % x.l, x.l, x.field);
    }
    friend bool operator==(const ResidueElt &x, const ResidueElt &y) {
        return x.l == y.l && x.field == y.field && x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const ResidueElt &x, const ResidueElt &y) { return !(x == y); }

    std::int64_t norm() const { return ((a * a - field.d * b * b) % l + l) % l; }
    bool is_unit() const { return norm() != 0; }

    static void check_compat(const ResidueElt &x, const ResidueElt &y) {
        if (x.l != y.l) throw std::invalid_argument("modulus mismatch");
        check_same_field(x.field, y.field);
    }

    std::string str() const {
        std::ostringstream os;
        os << a;
        if (b != 0) os << "+" << b << "*sqrt(" << field.d << ")";
        return os.str();
    }
};

/// Reduce an exact O_K element mod l.
inline ResidueElt reduce(const QuadElt &x, std::int64_t l) {
    mpz_class am = x.a % l, bm = x.b % l;
    return ResidueElt(am.get_si(), bm.get_si(), l, x.field);
}

inline std::int64_t mod_pow(std::int64_t base, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1 % m;
    base = ((base % m) + m) % m;
    while (e > 0) {
        if (e & 1) r = r * base % m;
        base = base * base % m;
        e >>= 1;
    }
    return r;
}

/// Inverse via the conjugate: (a + b sqrt d)^{-1} = (a - b sqrt d)/N(a + b sqrt d).
/// Throws std::domain_error when the element is not a unit (norm divisible by l,
/// which covers the ramified and split zero-divisor cases).
inline ResidueElt invert(const ResidueElt &u) {
    std::int64_t n = u.norm();
    if (n == 0) throw std::domain_error("invert: not a unit in O_K/lO_K");
    std::int64_t ninv = mod_pow(n, u.l - 2, u.l);  // l prime
    return ResidueElt(u.a * ninv % u.l, (u.l - u.b) * ninv % u.l, u.l, u.field);
}

inline ResidueElt pow(ResidueElt base, std::int64_t e) {
    ResidueElt r = ResidueElt::one(base.l, base.field);
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

/// Least e >= 1 with u^e = 1. The unit group has order at most l^2 - 1.
inline std::int64_t mult_order(const ResidueElt &u) {
    if (!u.is_unit()) throw std::domain_error("mult_order: not a unit");
    ResidueElt x = u;
    for (std::int64_t e = 1; e <= u.l * u.l; ++e) {
        if (x.is_one()) return e;
        x = x * u;
    }
    throw std::logic_error("mult_order: no order found below group bound");
}

}  // namespace cusptaylor

#endif
