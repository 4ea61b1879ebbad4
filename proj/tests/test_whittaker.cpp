// Whittaker function W_ir(y) = sqrt(y) K_ir(y): certified evaluation,
// higher derivatives via the defining ODE, sup bounds, and the D-integral.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mcert/whittaker.hpp>

#include "oracles.hpp"

using namespace mcert;

// Containment of the frozen oracle value, allowing for the oracle's own
// decimal truncation (strings carry ~36 significant digits).
static bool contains_oracle(const Ball& computed, const char* s) {
    Ball point = Ball::from_string(s);
    Ball b = computed;
    b.add_error(1e-34 * (1.0 + point.abs_upper_double()));
    return b.contains(point);
}

static Ball grid_r(int i) { return Ball(15) * Ball(i) / Ball(19); }
static Ball grid_y(int j) {
    return Ball::from_string("0.1") + Ball::from_string("29.9") * Ball(j) / Ball(19);
}

TEST_CASE("Bessel integrals at classical reference points") {
    Ball K0 = wk::bessel_integral(0, Ball(1), Ball(0));
    CHECK(contains_oracle(K0, kK0_1));
    CHECK(K0.rad() < 1e-30);
    Ball K1 = wk::bessel_integral(1, Ball(1), Ball(0));  // -d/dy K_0 = K_1
    CHECK(contains_oracle(K1, kK1_1));
    CHECK_THROWS_AS(wk::bessel_integral(0, Ball(-1), Ball(0)), domain_error);
}

TEST_CASE("W and W' at r = 0, y = 1") {
    WhittakerEvaluator ev(Ball(1) / Ball(4), Ball(0));
    auto [W, Wp] = ev.whittaker(Ball(1));
    CHECK(contains_oracle(W, kW_r0_y1));
    CHECK(contains_oracle(Wp, kWp_r0_y1));
}

TEST_CASE("W at the shipped form's spectral parameter") {
    Ball r = Ball::from_string(kR_form, 1e-33);
    WhittakerEvaluator ev(sqr(r) + Ball(1) / Ball(4), r);
    Ball W = ev.whittaker(Ball(2) * Ball::pi()).first;
    CHECK(contains_oracle(W, kW_form_2pi));
}

TEST_CASE("grid subsample against the frozen oracle") {
    // The full 20x20 sweep runs in the acceptance suite; spot-check the
    // diagonal and one off-diagonal band here.
    for (int i = 0; i < kGridN; i += 3) {
        Ball r = grid_r(i);
        WhittakerEvaluator ev(sqr(r) + Ball(1) / Ball(4), r);
        for (int j : {i, (i + 7) % kGridN}) {
            Ball W = ev.whittaker(grid_y(j)).first;
            CHECK(contains_oracle(W, kGridW[i][j]));
        }
    }
}

TEST_CASE("derivative recursion satisfies the defining ODE") {
    for (int i : {0, 5, 11, 19}) {
        Ball r = grid_r(i);
        Ball lambda = sqr(r) + Ball(1) / Ball(4);
        WhittakerEvaluator ev(lambda, r);
        for (int j : {2, 9, 16}) {
            Ball y = grid_y(j);
            auto d = ev.derivatives(y, 4);
            REQUIRE(d.size() == 5);
            // W'' = (1 - lambda / y^2) W
            Ball res = d[2] - (Ball(1) - lambda / sqr(y)) * d[0];
            CHECK(res.contains_zero());
            // differentiated once: W''' = (1 - lambda/y^2) W' + 2 lambda y^-3 W
            Ball res3 = d[3] - (Ball(1) - lambda / sqr(y)) * d[1] -
                        Ball(2) * lambda * d[0] / (sqr(y) * y);
            CHECK(res3.contains_zero());
            // low-order entries agree with the direct evaluation
            auto [W, Wp] = ev.whittaker(y);
            CHECK((d[0] - W).contains_zero());
            CHECK((d[1] - Wp).contains_zero());
        }
    }
}

TEST_CASE("sup bounds dominate sampled derivative values") {
    Ball r = Ball::from_string(kR_form);
    Ball lambda = sqr(r) + Ball(1) / Ball(4);
    WhittakerEvaluator ev(lambda, r);
    Ball y0 = Ball(6);
    Ball delta = Ball::from_string("0.05");
    Ball theta = Ball::from_string("0.5");
    auto d = ev.derivatives(y0, 6);
    for (int l = 0; l <= 6; ++l) {
        Ball coarse = whittaker_sup_bound(l, y0, delta);
        Ball cauchy = whittaker_sup_bound_cauchy(l, y0, theta);
        CHECK(!abs(d[static_cast<size_t>(l)]).certainly_greater(coarse));
        CHECK(!abs(d[static_cast<size_t>(l)]).certainly_greater(cauchy));
    }
    // the decaying bound eventually beats the coarse one at large argument
    Ball u(30);
    CHECK(whittaker_sup_bound_cauchy(0, u, theta)
              .certainly_less(whittaker_sup_bound(0, u, Ball::from_string("0.05"))));
    CHECK_THROWS_AS(whittaker_sup_bound(1, Ball(-1), delta), domain_error);
    CHECK_THROWS_AS(whittaker_sup_bound_cauchy(1, y0, Ball(1)), domain_error);
}

TEST_CASE("the D-integral matches its frozen values at the form parameters") {
    Ball r = Ball::from_string(kR_form, 1e-33);
    WhittakerEvaluator ev(sqr(r) + Ball(1) / Ball(4), r);
    DParameters p;
    p.N = 5;
    p.omega = 1;
    p.m = 2;
    p.psi_count = 2;

    const std::pair<const char*, const char*> cases[] = {
        {"0.005", kD_delta_0_005}, {"0.01", kD_delta_0_01}, {"0.02", kD_delta_0_02}};
    for (const auto& [dstr, oracle_str] : cases) {
        p.delta = Ball::from_string(dstr);
        Ball D = compute_D(ev, p, 768);
        CHECK(D.is_positive());
        CHECK(D.contains(Ball::from_string(oracle_str)));
    }
    p.delta = Ball(0);
    CHECK_THROWS_AS(compute_D(ev, p), domain_error);
}
