#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "innerspace/inner.hpp"
#include "innerspace/random.hpp"
#include "innerspace/seq.hpp"

using namespace innerspace;

namespace {

CoeffSeq seq(std::initializer_list<cplx> xs) { return CoeffSeq(std::vector<cplx>(xs)); }

double max_abs_diff(const CoeffSeq& a, const CoeffSeq& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a[n] - b[n]));
    return m;
}

} // namespace

TEST_CASE("l2_norm_sq basics") {
    CHECK(l2_norm_sq(seq({1, 0, 0})).partial == 1.0);
    CHECK(l2_norm_sq(CoeffSeq::polynomial({1, 0, 0})).tail_sq.value() < 1e-30);
    CHECK(l2_norm_sq(seq({0.5, 0.5})).partial == 0.5);
    CHECK_FALSE(l2_norm_sq(seq({1, 2})).tail_sq.has_value()); // cert-less: tail unknown
}

TEST_CASE("l2_norm_sq of a truncated Blaschke factor matches the geometric series") {
    const std::size_t M = 40;
    const auto lam = blaschke_factor_coeffs(0.5, M);
    const double expect = 1.0 - 0.75 * std::pow(0.25, static_cast<double>(M));
    const auto est = l2_norm_sq(lam);
    CHECK(std::abs(est.partial - expect) <= 1e-15);
    // the certified interval contains the true value 1, up to summation roundoff
    CHECK(est.partial <= 1.0 + 1e-12);
    CHECK(est.partial + est.tail_sq.value() >= 1.0 - 1e-12);
}

TEST_CASE("convolve small cases") {
    const auto c = convolve(seq({1, 1}), seq({1, 1}));
    REQUIRE(c.size() == 3);
    CHECK(c[0] == cplx(1, 0));
    CHECK(c[1] == cplx(2, 0));
    CHECK(c[2] == cplx(1, 0));

    const auto b = seq({0.3, -1.25, cplx(0, 2)});
    const auto d = convolve(seq({1}), b); // delta_0 * b = b
    CHECK(max_abs_diff(d, b) == 0.0);
}

TEST_CASE("product of two Blaschke factors keeps unit mass") {
    const auto lam = blaschke_factor_coeffs(0.5, 200);
    const auto prod = convolve(lam, lam);
    const auto est = l2_norm_sq(prod);
    CHECK(est.partial <= 1.0 + 1e-12);
    CHECK(std::abs(est.partial - 1.0) <= 1e-12);
}

TEST_CASE("correlate basics") {
    CHECK(correlate(seq({0, 1, 0, 0}), 0).value == cplx(1, 0));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(correlate(seq({s, s}), 1).value - cplx(0.5, 0)) <= 1e-15);
    CHECK_THROWS_AS(correlate(seq({1, 2}), 2), std::invalid_argument);
}

TEST_CASE("correlate lag 1 of a Blaschke factor vanishes within its tail radius") {
    const auto lam = blaschke_factor_coeffs(0.5, 60);
    const auto r1 = correlate(lam, 1);
    CHECK(std::abs(r1.value) <= r1.tail_radius.value() + 1e-15);
    CHECK(std::abs(r1.value) <= 1e-10);
}

TEST_CASE("correlate at lag 0 equals the l2 partial sum exactly") {
    detail::Rng rng(11);
    const CoeffSeq s(rng.gaussian_tuple(37));
    CHECK(correlate(s, 0).value.real() == l2_norm_sq(s).partial);
    CHECK(correlate(s, 0).value.imag() == 0.0);
}

TEST_CASE("shift basics") {
    const auto sh = shift(seq({1, 2}), 1);
    REQUIRE(sh.size() == 3);
    CHECK(sh[0] == cplx(0, 0));
    CHECK(sh[1] == cplx(1, 0));
    CHECK(sh[2] == cplx(2, 0));

    detail::Rng rng(5);
    const CoeffSeq s(rng.gaussian_tuple(23));
    CHECK(l2_norm_sq(shift(s, 4)).partial == l2_norm_sq(s).partial); // isometry
    CHECK(max_abs_diff(shift(s, 0), s) == 0.0);
}

TEST_CASE("shift reindexes the decay certificate") {
    const auto lam = blaschke_factor_coeffs(cplx(0.3, 0.4), 50);
    const auto sh = shift(lam, 3);
    REQUIRE(sh.decay().has_value());
    CHECK(sh.decay()->rho == lam.decay()->rho);
    // construction validated |c_n| <= C rho^n for the shifted entries already;
    // spot-check the constant is C/rho^m
    CHECK(sh.decay()->C ==
          Catch::Approx(lam.decay()->C / std::pow(0.5, 3.0)).epsilon(1e-8));
}

TEST_CASE("convolution is commutative and bilinear") {
    detail::Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t la = 2 + rng.integer(40);
        const std::size_t lb = 2 + rng.integer(40);
        const CoeffSeq a(rng.unit_tuple(la));
        const CoeffSeq a2(rng.unit_tuple(la));
        const CoeffSeq b(rng.unit_tuple(lb));
        CHECK(max_abs_diff(convolve(a, b), convolve(b, a)) <= 1e-13);

        const cplx alpha = rng.complex_gauss();
        const cplx beta = rng.complex_gauss();
        const auto lhs = convolve(add(scaled(a, alpha), scaled(a2, beta)), b);
        const auto rhs = add(scaled(convolve(a, b), alpha), scaled(convolve(a2, b), beta));
        CHECK(max_abs_diff(lhs, rhs) <= 1e-13);
    }
}

TEST_CASE("shift commutes with convolve") {
    detail::Rng rng(23);
    SECTION("direct path: bit-identical") {
        for (int rep = 0; rep < 20; ++rep) {
            const CoeffSeq a(rng.gaussian_tuple(2 + rng.integer(20)));
            const CoeffSeq b(rng.gaussian_tuple(2 + rng.integer(20)));
            const auto lhs = convolve(a, shift(b, 1));
            const auto rhs = shift(convolve(a, b), 1);
            REQUIRE(lhs.size() == rhs.size());
            for (std::size_t n = 0; n < lhs.size(); ++n) {
                CHECK(lhs[n].real() == rhs[n].real());
                CHECK(lhs[n].imag() == rhs[n].imag());
            }
        }
    }
    SECTION("fft path: 1e-15 on unit-norm inputs") {
        for (int rep = 0; rep < 10; ++rep) {
            const CoeffSeq a(rng.unit_tuple(60 + rng.integer(80)));
            const CoeffSeq b(rng.unit_tuple(60 + rng.integer(80)));
            const auto lhs = convolve(a, shift(b, 1));
            const auto rhs = shift(convolve(a, b), 1);
            CHECK(max_abs_diff(lhs, rhs) <= 1e-15);
        }
    }
}

TEST_CASE("direct and fft convolution agree to 1e-12 relative") {
    detail::Rng rng(29);
    for (int rep = 0; rep < 10; ++rep) {
        const CoeffSeq a(rng.unit_tuple(512));
        const CoeffSeq b(rng.unit_tuple(512));
        const auto d = convolve_direct(a, b);
        const auto f = convolve_fft(a, b);
        double scale = 1.0;
        for (const auto& x : d.coeffs()) scale = std::max(scale, std::abs(x));
        CHECK(max_abs_diff(d, f) <= 1e-12 * scale);
    }
}

TEST_CASE("convolution combines decay certificates validly") {
    // construction re-checks |c_n| <= C rho^n, so surviving construction is the
    // assertion; exercise a few shapes
    const auto f1 = blaschke_factor_coeffs(cplx(0.1, 0.77), 120);
    const auto f2 = blaschke_factor_coeffs(0.5, 120);
    const auto p = convolve(f1, f2);
    REQUIRE(p.decay().has_value());
    CHECK(p.decay()->rho > 0.77);
    CHECK(p.decay()->rho < 1.0);
    const auto q = convolve(p, blaschke_factor_coeffs(cplx(-0.6, 0.2), 120));
    CHECK(q.decay().has_value());
}

TEST_CASE("cert-less operands propagate unknown tails") {
    const CoeffSeq a({cplx(1, 0), cplx(0.5, 0)});
    const auto lam = blaschke_factor_coeffs(0.5, 10);
    CHECK_FALSE(convolve(a, lam).decay().has_value());
    CHECK_FALSE(l2_norm_sq(convolve(a, lam)).tail_sq.has_value());
}

TEST_CASE("decay cert rejects invalid parameters and violating data") {
    CHECK_THROWS_AS(DecayCert(-1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(DecayCert(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(DecayCert(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CoeffSeq({cplx(2, 0), cplx(1, 0)}, DecayCert(1.0, 0.5)),
                    std::invalid_argument);
    CHECK_NOTHROW(CoeffSeq({cplx(1, 0), cplx(0.5, 0)}, DecayCert(1.0, 0.5)));
}

TEST_CASE("order_for_tail_sq brackets the target") {
    const DecayCert d(2.0, 0.8);
    const std::size_t M = d.order_for_tail_sq(1e-13);
    CHECK(d.tail_sq(M) <= 1e-13);
    if (M > 0) CHECK(d.tail_sq(M - 1) > 1e-13);
}

TEST_CASE("empty coefficient lists are rejected") {
    CHECK_THROWS_AS(CoeffSeq(std::vector<cplx>{}), std::invalid_argument);
}
