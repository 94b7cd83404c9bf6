#include <doctest.h>

#include <limits>
#include <random>

#include "conlab/errors.hpp"
#include "conlab/weight.hpp"
#include "oracles.hpp"

using namespace conlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<WeightFunction> sample_family(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.2, 3.0);
    double R = u(gen);
    return {WeightFunction(CuckerSmale{u(gen), u(gen)}),
            WeightFunction(SmoothedConfidence{u(gen), R, R * 0.4}),
            WeightFunction(StepConfidence{u(gen)}),
            WeightFunction(LinearDecay{u(gen) * 3.0, u(gen), std::nullopt}),
            WeightFunction(Constant{u(gen)})};
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(WeightFunction(CuckerSmale{0.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(WeightFunction(CuckerSmale{1.0, -0.5}), InvalidInput);
    CHECK_THROWS_AS(WeightFunction(SmoothedConfidence{1.0, 1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(WeightFunction(StepConfidence{-1.0}), InvalidInput);
    CHECK_THROWS_AS(WeightFunction(LinearDecay{1.0, 0.0, std::nullopt}), InvalidInput);
    CHECK_THROWS_AS(WeightFunction(Constant{0.0}), InvalidInput);
    CHECK_THROWS_AS(WeightFunction(Constant{1.0})(-1e-3), InvalidInput);
}

TEST_CASE("point evaluations") {
    CHECK(WeightFunction(CuckerSmale{1.0, 1.0})(3.0) == doctest::Approx(0.25));
    WeightFunction step(StepConfidence{1.0});
    CHECK(step(0.5) == 1.0);
    CHECK(step(1.5) == 0.0);
    CHECK(step(1.0) == 0.0);
    CHECK(WeightFunction(SmoothedConfidence{1.0, 1.0, 0.1})(0.95 * 0.95) == doctest::Approx(0.5));
    CHECK(WeightFunction(SmoothedConfidence{1.0, 1.0, 0.1})(0.5) == 1.0);
    CHECK(WeightFunction(LinearDecay{25.0, 10.0, std::nullopt})(1.0) == doctest::Approx(15.0));
    CHECK(WeightFunction(LinearDecay{25.0, 10.0, std::nullopt})(2.5) == 0.0);
    CHECK(WeightFunction(LinearDecay{25.0, 10.0, 2.25})(2.3) == 0.0);
}

TEST_CASE("value at zero") {
    CHECK(WeightFunction(CuckerSmale{7.0, 2.0}).at_zero() == 7.0);
    CHECK(WeightFunction(SmoothedConfidence{2.0, 1.0, 0.1}).at_zero() == 2.0);
    CHECK(WeightFunction(StepConfidence{3.0}).at_zero() == 1.0);
    CHECK(WeightFunction(LinearDecay{25.0, 10.0, std::nullopt}).at_zero() == 25.0);
    CHECK(WeightFunction(Constant{4.0}).at_zero() == 4.0);
}

TEST_CASE("support and continuity") {
    CHECK_FALSE(WeightFunction(CuckerSmale{}).compact_support());
    CHECK(*WeightFunction(SmoothedConfidence{1.0, 2.0, 0.5}).support_sq() == 4.0);
    CHECK(*WeightFunction(LinearDecay{25.0, 10.0, std::nullopt}).support_sq() == 2.5);
    CHECK(*WeightFunction(LinearDecay{25.0, 10.0, 2.25}).support_sq() == 2.25);
    CHECK_FALSE(WeightFunction(StepConfidence{}).continuous());
    CHECK_FALSE(WeightFunction(LinearDecay{25.0, 10.0, 2.25}).continuous());
    CHECK(WeightFunction(LinearDecay{25.0, 10.0, std::nullopt}).continuous());
    CHECK(WeightFunction(SmoothedConfidence{}).continuous());
}

TEST_CASE("weights are nonincreasing and vanish exactly outside their support") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> s(0.0, 12.0);
    for (int family = 0; family < 20; ++family) {
        for (const auto& w : sample_family(gen)) {
            for (int k = 0; k < 1000; ++k) {
                double a = s(gen), b = s(gen);
                if (a > b) std::swap(a, b);
                CHECK(w(a) >= w(b));
                if (auto R2 = w.support_sq()) CHECK((w(a) > 0.0) == (a < *R2));
            }
        }
    }
}

TEST_CASE("integrals against independent closed forms") {
    CHECK(integral_weight(WeightFunction(CuckerSmale{1.0, 3.0}), kInf) == doctest::Approx(0.5));
    CHECK(std::isinf(integral_weight(WeightFunction(CuckerSmale{1.0, 1.0}), kInf)));
    CHECK(std::isinf(integral_weight(WeightFunction(CuckerSmale{1.0, 0.5}), kInf)));
    CHECK(std::isinf(integral_weight(WeightFunction(Constant{2.0}), kInf)));
    CHECK(integral_weight(WeightFunction(StepConfidence{1.0}), kInf) == 1.0);
    CHECK(integral_weight(WeightFunction(Constant{2.5}), 3.0) == doctest::Approx(7.5));
    CHECK(integral_weight(WeightFunction(LinearDecay{25.0, 10.0, std::nullopt}), kInf) == doctest::Approx(31.25));
    CHECK(integral_weight(WeightFunction(StepConfidence{1.0}), 0.0) == 0.0);

    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.1, 3.0), z(0.0, 10.0);
    for (int k = 0; k < 300; ++k) {
        const double H = u(gen), beta = u(gen), c = u(gen), R = u(gen), eps = R * 0.3, at = z(gen);
        CHECK(integral_weight(WeightFunction(CuckerSmale{H, beta}), at) ==
              doctest::Approx(oracle::cucker_smale_integral(H, beta, at)).epsilon(1e-12));
        CHECK(integral_weight(WeightFunction(CuckerSmale{H, 1.0}), at) ==
              doctest::Approx(oracle::cucker_smale_integral(H, 1.0, at)).epsilon(1e-12));
        CHECK(std::abs(integral_weight(WeightFunction(SmoothedConfidence{c, R, eps}), at) -
                       oracle::smoothed_integral(c, R, eps, at)) < 1e-10);
        const double a = u(gen) * 5, b = u(gen);
        WeightFunction lin(LinearDecay{a, b, std::nullopt});
        CHECK(std::abs(integral_weight(lin, at) - oracle::simpson([&](double s) { return lin(s); }, 0.0, std::min(at, a / b))) <
              1e-9);
    }
}

TEST_CASE("staircase examples") {
    WeightFunction cs(CuckerSmale{1.0, 1.0});
    CHECK(staircase_w(cs, 1.0, 3.5) == doctest::Approx(0.5 + 1.0 / 3.0 + 0.25 + 0.1));
    CHECK(staircase_w(WeightFunction(StepConfidence{1.0}), 0.1, 1.0) == doctest::Approx(0.9));
    CHECK(staircase_w(WeightFunction(Constant{3.0}), 0.7, 2.3) == doctest::Approx(6.9));
    CHECK(staircase_w(cs, 0.3, 0.0) == 0.0);
    CHECK(staircase_w(cs, 0.0, 2.0) == doctest::Approx(std::log(3.0)));
    CHECK(staircase_w(cs, 0.5, 0.2) == doctest::Approx(cs(0.5) * 0.2));
    CHECK_THROWS_AS(staircase_w(cs, -0.1, 1.0), InvalidInput);
}

TEST_CASE("staircase matches the term-by-term formula, including exact multiples of r") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> r(0.01, 1.5), z(0.0, 8.0);
    std::uniform_int_distribution<int> mult(0, 40);
    for (int trial = 0; trial < 200; ++trial) {
        for (const auto& w : sample_family(gen)) {
            const double rr = r(gen);
            for (double at : {z(gen), mult(gen) * rr, 0.1 * 3.0, rr * 7.0}) {
                const double mine = staircase_w(w, rr, at);
                const double ref = oracle::staircase([&](double s) { return w(s); }, rr, at);
                CHECK(std::abs(mine - ref) < 1e-12 * (1.0 + std::abs(ref)));
            }
        }
    }
}

TEST_CASE("staircase sandwich and monotonicity on random triples") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> r(0.001, 2.0), z(0.0, 10.0);
    int checked = 0;
    while (checked < 1000) {
        for (const auto& w : sample_family(gen)) {
            const double rr = r(gen);
            double z1 = z(gen), z2 = z(gen);
            if (z1 > z2) std::swap(z1, z2);
            const double w1 = staircase_w(w, rr, z1), w2 = staircase_w(w, rr, z2);
            CHECK(w1 <= w2 + 1e-9);
            const double upper = integral_weight(w, z2);
            const double lower = z2 >= rr ? upper - integral_weight(w, rr) : 0.0;
            CHECK(w2 <= upper + 1e-9);
            CHECK(w2 >= lower - 1e-9);
            ++checked;
        }
    }
}

TEST_CASE("staircase converges to the integral as r shrinks") {
    WeightFunction cs(CuckerSmale{1.0, 2.0});
    for (double z : {0.3, 1.0, 2.75, 6.0}) {
        const double exact = integral_weight(cs, z);
        double previous = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= 14; ++k) {
            const double gap = std::abs(staircase_w(cs, std::ldexp(1.0, -k), z) - exact);
            CHECK(gap <= previous + 1e-15);
            previous = gap;
        }
        CHECK(previous < 1e-4);
    }
}

TEST_CASE("value semantics") {
    WeightFunction a(SmoothedConfidence{1.0, 1.0, 0.1});
    WeightFunction b(SmoothedConfidence{1.0, 1.0, 0.1});
    CHECK(a == b);
    CHECK_FALSE(a == WeightFunction(SmoothedConfidence{1.0, 1.0, 0.2}));
    CHECK(a.name() == "smoothed-confidence");
    CHECK(WeightFunction().name() == "constant");
}
