#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cusptaylor/truncpoly.hpp"

using namespace cusptaylor;

namespace {

TruncPoly rand_poly(std::mt19937 &rng, std::int64_t l, FieldSpec f) {
    std::uniform_int_distribution<std::int64_t> d(0, l - 1);
    TruncPoly p(l, f);
    for (std::int64_t i = 0; i < l; ++i)
        p.set_coeff(i, ResidueElt(d(rng), f.is_rational() ? 0 : d(rng), l, f));
    return p;
}

}  // namespace

TEST_CASE("truncation at t^l") {
    FieldSpec f = FieldSpec::rational();
    const std::int64_t l = 7;
    TruncPoly tl1(l, f), t(l, f);
    tl1.set_coeff(l - 1, ResidueElt::one(l, f));
    t.set_coeff(1, ResidueElt::one(l, f));
    CHECK(trunc_mul(tl1, t).is_zero());

    std::mt19937 rng(3);
    TruncPoly p = rand_poly(rng, l, f);
    CHECK(trunc_mul(p, TruncPoly::one(l, f)) == p);
}

TEST_CASE("multiplication in R_5 over Q") {
    FieldSpec f = FieldSpec::rational();
    TruncPoly p(5, f), q(5, f);
    p.set_coeff(0, ResidueElt(3, 0, 5, f));
    p.set_coeff(1, ResidueElt(3, 0, 5, f));
    q.set_coeff(0, ResidueElt(1, 0, 5, f));
    q.set_coeff(1, ResidueElt(2, 0, 5, f));
    TruncPoly r = trunc_mul(p, q);  // (3+3t)(1+2t) = 3 + 9t + 6t^2 = 3 + 4t + t^2
    CHECK(r.coeff(0) == ResidueElt(3, 0, 5, f));
    CHECK(r.coeff(1) == ResidueElt(4, 0, 5, f));
    CHECK(r.coeff(2) == ResidueElt(1, 0, 5, f));
    CHECK(r.coeff(3).is_zero());
}

TEST_CASE("formal derivative in R_l") {
    FieldSpec f = FieldSpec::rational();
    TruncPoly c = TruncPoly::one(5, f);
    CHECK(trunc_derivative(c).is_zero());

    TruncPoly p(5, f);  // 3t + 2t^3 -> 3 + 6t^2 = 3 + t^2
    p.set_coeff(1, ResidueElt(3, 0, 5, f));
    p.set_coeff(3, ResidueElt(2, 0, 5, f));
    TruncPoly dp = trunc_derivative(p);
    CHECK(dp.coeff(0) == ResidueElt(3, 0, 5, f));
    CHECK(dp.coeff(2) == ResidueElt(1, 0, 5, f));

    for (std::int64_t l : {5, 11}) {
        TruncPoly q(l, f);
        q.set_coeff(l - 1, ResidueElt::one(l, f));
        TruncPoly dq = trunc_derivative(q);  // (l-1) t^{l-2}
        CHECK(dq.coeff(l - 2) == ResidueElt(l - 1, 0, l, f));
        CHECK(dq.coeff(l - 1).is_zero());
    }
}

TEST_CASE("derivative is a derivation and the ring is a ring") {
    std::mt19937 rng(20240817);
    INFO("seed 20240817");
    for (auto [l, d] : std::vector<std::pair<std::int64_t, int>>{{5, 1}, {7, 5}, {17, 2}}) {
        FieldSpec f = d == 1 ? FieldSpec::rational() : FieldSpec::quad(d);
        for (int i = 0; i < 300; ++i) {
            TruncPoly p = rand_poly(rng, l, f), q = rand_poly(rng, l, f), r = rand_poly(rng, l, f);
            REQUIRE(trunc_derivative(trunc_mul(p, q)) ==
                    trunc_mul(p, trunc_derivative(q)) + trunc_mul(q, trunc_derivative(p)));
            REQUIRE(trunc_mul(trunc_mul(p, q), r) == trunc_mul(p, trunc_mul(q, r)));
            REQUIRE(trunc_mul(p, q + r) == trunc_mul(p, q) + trunc_mul(p, r));
        }
    }
}
