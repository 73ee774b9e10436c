#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "cusptaylor/cm_data.hpp"
#include "cusptaylor/recurrences.hpp"

using namespace cusptaylor;

TEST_CASE("theta action on Q,R polynomials") {
    CHECK(theta_action(QRPoly::constant(1), 0).is_zero());
    QRPoly Q = QRPoly::monomial(0, 1, 1);
    QRPoly thQ = theta_action(Q, 4);  // -R/3
    CHECK(thQ.coeff(1, 0) == mpq_class(-1, 3));
    // theta(Q^3 - R^2) = 0, the cusp-form direction in weight 12
    QRPoly disc = QRPoly::monomial(0, 3, 1) - QRPoly::monomial(2, 0, 1);
    CHECK(theta_action(disc, 12).is_zero());
    CHECK_THROWS_AS(theta_action(Q + QRPoly::constant(1), 4), std::invalid_argument);
}

TEST_CASE("B_n: first values match the reference list") {
    auto B = bseq(6);
    CHECK(B[0] == QRPoly::constant(1));
    CHECK(B[1].is_zero());
    CHECK(B[2] == QRPoly::monomial(0, 1, -12));
    CHECK(B[3] == QRPoly::monomial(1, 0, 48));
    CHECK(B[4] == QRPoly::monomial(0, 2, 216));
    CHECK(B[5] == QRPoly::monomial(1, 1, -4608));
    CHECK(B[6] == QRPoly::monomial(0, 3, 1152 * 9) + QRPoly::monomial(2, 0, 1152 * 16));
}

TEST_CASE("B_n is weight homogeneous up to n = 60") {
    auto B = bseq(60);
    for (int n = 0; n <= 60; ++n) REQUIRE(B[n].is_homogeneous(2 * n));
}

TEST_CASE("p_n(0) and q_n(0) reference constants") {
    std::vector<long> p_expect = {1, 0, -12, 0, 216, 0, 10368, 0, -2052864, 0, 47029248, 0};
    auto p = pseq_constants(11);
    for (int n = 0; n <= 11; ++n) REQUIRE(p[n] == p_expect[n]);

    std::vector<long> q_expect = {1, 0, 0, 48, 0, 0, 18432, 0, 0, 13271040, 0, 0, 1974730752, 0, 0};
    auto q = qseq_omega_constants(14);
    for (int n = 0; n <= 14; ++n) REQUIRE(q[n] == q_expect[n]);
}

TEST_CASE("parity of p_n") {
    ExactSeqStream s(pseq_rule());
    for (long n = 0; n <= 21; ++n) {
        for (std::size_t j : s.current().support()) REQUIRE(j % 2 == static_cast<std::size_t>(n % 2));
        s.advance();
    }
}

namespace {

// Substitute B_n = Q^{n/2} p_n(R Q^{-3/2}): a monomial c t^j of p_n maps to
// c R^j Q^{(n-3j)/2}; the exponent must come out a nonnegative integer.
QRPoly from_p(const QuadPoly &p, long n) {
    QRPoly out;
    for (std::size_t j : p.support()) {
        long num = n - 3 * static_cast<long>(j);
        REQUIRE(num >= 0);
        REQUIRE(num % 2 == 0);
        out.add_term(static_cast<int>(j), static_cast<int>(num / 2), mpq_class(p.coeff(j).a));
    }
    return out;
}

// Substitute B_n = R^{n/3} q_n(Q R^{-2/3}): c t^j -> c Q^j R^{(n-2j)/3}.
QRPoly from_q(const QuadPoly &q, long n) {
    QRPoly out;
    for (std::size_t j : q.support()) {
        long num = n - 2 * static_cast<long>(j);
        REQUIRE(num >= 0);
        REQUIRE(num % 3 == 0);
        out.add_term(static_cast<int>(num / 3), static_cast<int>(j), mpq_class(q.coeff(j).a));
    }
    return out;
}

}  // namespace

TEST_CASE("one-variable substitutions reproduce B_n formally, n <= 20") {
    auto B = bseq(20);
    ExactSeqStream ps(pseq_rule()), qs(qseq_omega_rule());
    for (long n = 0; n <= 20; ++n) {
        REQUIRE(from_p(ps.current(), n) == B[n]);
        REQUIRE(from_q(qs.current(), n) == B[n]);
        ps.advance();
        qs.advance();
    }
}

TEST_CASE("general p_n sequence: initial terms and degeneration") {
    FieldSpec f = FieldSpec::rational();
    QuadElt m1(mpz_class(5), 0, f), m2(mpz_class(21), 0, f);
    QuadPoly p1 = general_pseq(m1, m2, 1);
    CHECK(p1.coeff(1) == QuadElt(mpz_class(60), 0, f));  // 12 m1 t
    CHECK(p1.coeff(0).is_zero());

    // m1 = 0, m2 = 1 collapses the rule to the recursion of p_n at i
    QuadElt z0(mpz_class(0), 0, f), one(mpz_class(1), 0, f);
    ExactSeqStream a(general_pseq_rule(z0, one)), b(pseq_rule());
    for (long n = 0; n <= 15; ++n) {
        REQUIRE(a.current() == b.current());
        a.advance();
        b.advance();
    }
}

TEST_CASE("CM recursion coefficients: elliptic specializations and D=-7") {
    auto at = [](const QuadPoly &p, std::size_t i) { return p.coeff(i).a.get_si(); };

    ThreeTermRule r4 = cm_recursion_rule(registry(-4));
    CHECK(r4.a1.is_zero());
    CHECK(at(r4.a2, 1) == -2);
    CHECK(at(r4.a3, 0) == -6);
    CHECK(at(r4.a3, 2) == 6);
    CHECK(at(r4.a4, 0) == -1);

    ThreeTermRule r3 = cm_recursion_rule(registry(-3));
    CHECK(at(r3.a2, 2) == -2);
    CHECK(at(r3.a3, 0) == -4);
    CHECK(at(r3.a3, 3) == 4);
    CHECK(at(r3.a4, 1) == -1);

    ThreeTermRule r7 = cm_recursion_rule(registry(-7));
    // a1 = 60*105*(t+27) = 6300 t + 170100
    CHECK(at(r7.a1, 1) == 6300);
    CHECK(at(r7.a1, 0) == 170100);
    // a1 + n a2 = 105(60-32n)(t+27)
    for (long n = 0; n <= 5; ++n) {
        QuadPoly lin = r7.a1 + QuadElt(mpz_class(n), 0, r7.field) * r7.a2;
        CHECK(lin.coeff(1).a == 105 * (60 - 32 * n));
        CHECK(lin.coeff(0).a == 105 * (60 - 32 * n) * 27);
    }
    // a3 = 126 (105 (t+27)^2 - 15^4)
    CHECK(at(r7.a3, 2) == 126 * 105);
    CHECK(at(r7.a3, 1) == 126 * 105 * 54);
    CHECK(r7.a3.coeff(0).a == mpz_class(126) * (105 * 27 * 27 - 50625));
    // a4 = 19845*15^4 - 445*105^2 (t+27)^2
    CHECK(r7.a4.coeff(2).a == mpz_class(-445) * 105 * 105);
    CHECK(r7.a4.coeff(0).a == mpz_class(19845) * 50625 - mpz_class(445) * 105 * 105 * 729);
}

TEST_CASE("cm_qseq at D=-4 and D=-3 reproduces p_n and q_n") {
    ExactSeqStream a(cm_recursion_rule(registry(-4))), p(pseq_rule());
    ExactSeqStream b(cm_recursion_rule(registry(-3))), q(qseq_omega_rule());
    for (long n = 0; n <= 25; ++n) {
        REQUIRE(a.current() == p.current());
        REQUIRE(b.current() == q.current());
        a.advance();
        p.advance();
        b.advance();
        q.advance();
    }
}

TEST_CASE("q_0 = 1 and q_1 = a1 for every registry row") {
    for (int D : all_discriminants()) {
        const auto &spec = registry(D);
        ThreeTermRule rule = cm_recursion_rule(spec);
        CHECK(cm_qseq(spec, 0) == QuadPoly::constant(QuadElt(mpz_class(1), 0, spec.field)));
        CHECK(cm_qseq(spec, 1) == rule.a1);
    }
}

namespace {

// Exact arithmetic in K(y) with y^2 = s, elements u + v y over rational quads.
struct TowerElt {
    detail::QuadRat u, v, s;
    TowerElt mul(const TowerElt &o) const {
        return TowerElt{u * o.u + s * (v * o.v), u * o.v + v * o.u, s};
    }
};

}  // namespace

TEST_CASE("q_n(0) equals the scaled sqrt-substitution of the general p_n, n <= 30") {
    using detail::QuadRat;
    for (int D : {-7, -8, -11, -15, -19, -20, -24}) {
        const auto &spec = registry(D);
        const int d = spec.field.d;
        QuadRat k2 = detail::qr(spec.k2);
        QuadRat k3(mpq_class(spec.k3_num.a, spec.k3_den), mpq_class(spec.k3_num.b, spec.k3_den), d);
        QuadRat aD(mpq_class(-spec.D), 0, d);
        QuadRat s = k2 * aD;  // y^2 = k2 |D|
        QuadRat k2inv2(0, 0, d);
        {  // 1/k2^2 via the conjugate
            QuadRat k22 = k2 * k2;
            mpq_class nrm = k22.a * k22.a - d * k22.b * k22.b;
            k2inv2 = QuadRat(k22.a / nrm, -k22.b / nrm, d);
        }
        ExactSeqStream ps(general_pseq_rule(spec.m1, spec.m2));
        ExactSeqStream qs(cm_recursion_rule(spec));
        for (long n = 0; n <= 30; ++n) {
            // RHS = (k0^4 k2^2 y)^n p_n(y k3 / k2^2), an element of K by parity
            TowerElt arg{QuadRat(0, 0, d), k3 * k2inv2, s};  // y * (k3/k2^2)
            TowerElt acc{QuadRat(0, 0, d), QuadRat(0, 0, d), s};
            const QuadPoly &pn = ps.current();
            // Horner from the top
            for (long j = static_cast<long>(pn.degree_bound()) - 1; j >= 0; --j) {
                acc = acc.mul(arg);
                QuadRat c = detail::qr(pn.coeff(j));
                acc.u = acc.u + c;
            }
            if (pn.is_zero()) acc = TowerElt{QuadRat(0, 0, d), QuadRat(0, 0, d), s};
            // multiply by (k2^2 y)^n   (k0 = 1 throughout the registry)
            TowerElt scale{k2 * k2, QuadRat(0, 0, d), s};
            TowerElt y_only{QuadRat(0, 0, d), QuadRat(1, 0, d), s};
            for (long i = 0; i < n; ++i) acc = acc.mul(scale).mul(y_only);
            REQUIRE(acc.v.a == 0);
            REQUIRE(acc.v.b == 0);
            QuadElt lhs = qs.current().eval0();
            REQUIRE(acc.u.a == mpq_class(lhs.a));
            REQUIRE(acc.u.b == mpq_class(lhs.b));
            ps.advance();
            qs.advance();
        }
    }
}
