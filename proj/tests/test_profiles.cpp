#include <catch2/catch_amalgamated.hpp>

#include <mildns/profiles.hpp>

#include <cmath>

using namespace mildns;

TEST_CASE("quintic fill coefficients match an independent linear solve") {
  // frozen from a dense numpy solve of the same 5x5 system (d=2, r0=0.625)
  auto p = power_tail_profile(2, 1.5, 0.625);
  std::array<double, 5> want = {46.2641221682633, -237.929771151069, 454.229563106586,
                                -370.112977346107, 109.572920924834};
  for (int j = 0; j < 5; ++j) REQUIRE(p.a[j] == Catch::Approx(want[j]).epsilon(1e-12));

  // beta = 1 solves to short rationals
  auto p1 = power_tail_profile(2, 1.0, 0.625);
  std::array<double, 5> want1 = {10.5, -42.0, 75.6, -60.0, 17.5};
  for (int j = 0; j < 5; ++j) REQUIRE(p1.a[j] == Catch::Approx(want1[j]).epsilon(1e-12));
}

TEST_CASE("seam is C^2 and the tail is the pure power law") {
  for (double beta : {0.5, 1.0, 1.25, 1.5}) {
    auto p = power_tail_profile(2, beta, 0.625);
    double r0 = p.r0;
    REQUIRE(p(r0) == Catch::Approx(std::pow(r0, -beta)).epsilon(1e-12));
    // analytic fill derivatives at the seam vs the power tail's
    double s = std::pow(r0, -beta);
    double d1 = 0, d2 = 0;  // r f' and r^2 f'' of the fill at z = 1
    for (int j = 0; j < 5; ++j) {
      d1 += 2.0 * j * p.a[j];
      d2 += 2.0 * j * (2.0 * j - 1.0) * p.a[j];
    }
    REQUIRE(d1 == Catch::Approx(-beta * s).margin(1e-10));
    REQUIRE(d2 == Catch::Approx(beta * (beta + 1) * s).margin(1e-10));
    REQUIRE(p(2.0) == std::pow(2.0, -beta));
  }
}

TEST_CASE("core fill preserves ball mass and second moment") {
  int d = 2;
  for (double beta : {1.0, 1.5}) {
    auto p = power_tail_profile(d, beta, 0.625);
    // Simpson integral of fill(r) r^{d-1} and fill(r) r^{d+1} over [0, r0]
    int n = 4000;
    double h = p.r0 / n, mass = 0, mom = 0;
    for (int i = 0; i <= n; ++i) {
      double r = i * h;
      double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      mass += w * p(r) * std::pow(r, d - 1);
      mom += w * p(r) * std::pow(r, d + 1);
    }
    mass *= h / 3;
    mom *= h / 3;
    REQUIRE(mass == Catch::Approx(std::pow(p.r0, d - beta) / (d - beta)).epsilon(1e-9));
    REQUIRE(mom == Catch::Approx(std::pow(p.r0, d + 2 - beta) / (d + 2 - beta)).epsilon(1e-9));
  }
}

TEST_CASE("core fill stays positive") {
  for (double beta : {0.5, 1.0, 1.25, 1.5}) {
    auto p = power_tail_profile(2, beta, 0.625);
    for (int i = 0; i <= 1000; ++i) {
      double r = p.r0 * i / 1000.0;
      REQUIRE(p(r) > 0);
    }
  }
}

TEST_CASE("regularized profile and rejection of bad parameters") {
  auto p = regularized_profile(1.5, 0.625);
  CHECK(p(0.0) == Catch::Approx(std::pow(0.625, -1.5)));
  CHECK(p(10.0) == Catch::Approx(std::pow(0.625 * 0.625 + 100.0, -0.75)));
  CHECK_THROWS(power_tail_profile(2, 2.0, 0.625));  // beta >= d
  CHECK_THROWS(power_tail_profile(2, 0.0, 0.625));
  CHECK_THROWS(power_tail_profile(2, 1.0, 0.0));
  CHECK_THROWS(regularized_profile(-1.0, 0.1));
}
