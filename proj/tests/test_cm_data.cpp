#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cusptaylor/cm_data.hpp"
#include "cusptaylor/coefficients.hpp"
#include "cusptaylor/eisenstein.hpp"

using namespace cusptaylor;

TEST_CASE("registry rows and gcd normalization of (m1, m2)") {
    CHECK_THROWS_AS(registry(-5), std::invalid_argument);
    const auto &d7 = registry(-7);
    CHECK(d7.k1.a == 3);
    CHECK(d7.k2.a == 15);
    CHECK(d7.k3_num.a == 27);
    CHECK(d7.m1.a == 5);
    CHECK(d7.m2.a == 21);

    const auto &d15 = registry(-15);
    CHECK(d15.field.d == 5);
    CHECK(d15.m2 == QuadElt(mpz_class(70), mpz_class(21), d15.field));

    const auto &d24 = registry(-24);
    CHECK(d24.k1 == QuadElt(mpz_class(12), mpz_class(12), d24.field));
    CHECK(d24.m1 == QuadElt(mpz_class(9), mpz_class(7), d24.field));

    // m1 = k0^2 k1 k2 / g and m2 = k0^2 |D| k3 / g for one positive integer g
    for (int D : all_discriminants()) {
        const auto &s = registry(D);
        if (s.special()) continue;
        QuadElt k1k2 = s.k1 * s.k2;
        QuadElt Dk3 = s.Dk3();
        // g from the product side: it must divide every component
        mpz_class g(0);
        for (const mpz_class &c : {k1k2.a, k1k2.b, Dk3.a, Dk3.b}) {
            mpz_class t;
            mpz_gcd(t.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            g = t;
        }
        REQUIRE(g > 0);
        CHECK(mpz_class(g * s.m1.a) == k1k2.a);
        CHECK(mpz_class(g * s.m1.b) == k1k2.b);
        CHECK(mpz_class(g * s.m2.a) == Dk3.a);
        CHECK(mpz_class(g * s.m2.b) == Dk3.b);
        // D = -7: k1 k2 = 45, |D| k3 = 189, common factor 9
        if (D == -7) CHECK(g == 9);
    }
}

TEST_CASE("Lanczos gamma") {
    CHECK(gamma_fn(0.5) == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-14));
    CHECK(gamma_fn(1.0) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(6.0) == Catch::Approx(120.0).epsilon(1e-14));
    CHECK(gamma_fn(0.25) == Catch::Approx(3.6256099082219083).epsilon(1e-13));
    CHECK(gamma_fn(1.0 / 3) == Catch::Approx(2.6789385347077476).epsilon(1e-13));
}

TEST_CASE("Kronecker symbol") {
    // (D|j) exponents entering Omega_{-4}: product reduces to Gamma(1/4)/Gamma(3/4)
    CHECK(kronecker_symbol(-4, 1) == 1);
    CHECK(kronecker_symbol(-4, 2) == 0);
    CHECK(kronecker_symbol(-4, 3) == -1);
    CHECK(kronecker_symbol(-15, 2) == 1);
    CHECK(kronecker_symbol(-19, 41) == -1);  // 41 = 3 mod 19, a non-residue
    CHECK(kronecker_symbol(-19, 43) == 1);
    for (long l : {5L, 7L, 11L, 13L}) {
        // consistency with Euler's criterion for odd prime moduli
        for (long a = 1; a < l; ++a) {
            long e = mod_pow(a, (l - 1) / 2, l);
            int euler = e == 1 ? 1 : -1;
            CHECK(kronecker_symbol(a, l) == euler);
        }
    }
}

TEST_CASE("Chowla-Selberg periods") {
    double om4 = chowla_selberg(-4);
    double g14 = gamma_fn(0.25);
    CHECK(om4 == Catch::Approx(g14 * g14 / (4 * std::pow(M_PI, 1.5))).epsilon(1e-12));
    CHECK(om4 == Catch::Approx(0.59017029950).epsilon(1e-9));

    double om3 = chowla_selberg(-3);
    double g13 = gamma_fn(1.0 / 3);
    CHECK(om3 == Catch::Approx(std::pow(3.0, 0.25) * g13 * g13 * g13 / (4 * M_PI * M_PI))
                     .epsilon(1e-12));
    CHECK(om3 == Catch::Approx(0.64092738022).epsilon(1e-9));
}

TEST_CASE("table row constants match the Eisenstein values to 1e-10") {
    SeriesContext ctx;
    for (int D : all_discriminants()) {
        const auto &s = registry(D);
        double om = chowla_selberg(D);
        double rD = std::sqrt(static_cast<double>(-D));
        Cplx z = s.z();
        SiegelValues v = eval_all(z, ctx);
        double om2 = om * om, om4 = om2 * om2, om6 = om4 * om2;
        INFO("D = " << D);
        CHECK(std::abs(v.e2star - s.k1.to_double() / rD * om2) < 1e-10);
        CHECK(std::abs(v.e4 - s.k2.to_double() * om4) < 1e-10);
        CHECK(std::abs(v.e6 - s.k3_value() * rD * om6) < 1e-10);
        CHECK(std::abs(v.delta - delta_over_omega12(D) * std::pow(om, 12)) < 1e-12);
    }
}

TEST_CASE("zero of E2* - (m1/m2)(R/Q) at the CM point") {
    for (int D : {-7, -8, -11, -15, -19, -20, -24}) {
        const auto &s = registry(D);
        SiegelValues v = eval_all(s.z());
        Cplx resid = v.e2star - (s.m1.to_double() / s.m2.to_double()) * (v.e6 / v.e4);
        INFO("D = " << D);
        CHECK(std::abs(resid) < 1e-10);
    }
}

TEST_CASE("trivial index pattern") {
    CHECK_FALSE(registry(-4).nontrivial(3));
    CHECK(registry(-4).nontrivial(4));
    CHECK_FALSE(registry(-3).nontrivial(5));
    CHECK(registry(-3).nontrivial(6));
    for (long n = 0; n < 10; ++n) CHECK(registry(-7).nontrivial(n));
}

TEST_CASE("normalization constants") {
    const auto &s4 = registry(-4);
    double om = chowla_selberg(-4);
    Normalization n4 = normalization(s4, eval_delta(s4.z()));
    CHECK(n4.lambda == Catch::Approx(-2 * M_PI * om * om / std::sqrt(3.0)).epsilon(1e-12));
    // kappa = -|D|^3 Delta(i) = -64 Om^12
    CHECK(n4.kappa.real() == Catch::Approx(-64 * std::pow(om, 12)).epsilon(1e-10));
    CHECK(std::abs(n4.kappa.imag()) < 1e-14);

    const auto &s3 = registry(-3);
    double om3 = chowla_selberg(-3);
    Normalization n3 = normalization(s3, eval_delta(s3.z()));
    CHECK(n3.lambda == Catch::Approx(-M_PI * om3 * om3).epsilon(1e-12));
}

TEST_CASE("negative control: a wrong table constant trips the numeric guard") {
    // two plausible-looking but wrong entries (72 + 63/sqrt5 at D = -20 and
    // the D = -11 k-row at D = -19) sit far outside the 1e-10 consistency band
    double om20 = chowla_selberg(-20);
    SiegelValues v20 = eval_all(registry(-20).z());
    double wrong_k3 = 72.0 + 63.0 / std::sqrt(5.0);
    CHECK(std::abs(v20.e6 - wrong_k3 * std::sqrt(20.0) * std::pow(om20, 6)) > 1e-3);

    double om19 = chowla_selberg(-19);
    SiegelValues v19 = eval_all(registry(-19).z());
    CHECK(std::abs(v19.e4 - 32.0 * std::pow(om19, 4)) > 1e-3);
    CHECK(std::abs(v19.e4 - 96.0 * std::pow(om19, 4)) < 1e-10);
}
