#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "sops/problem.hpp"

using namespace sops;

TEST_CASE("validate accepts dp1 and reports targeted violations") {
  auto fx = fixtures::dp1();
  CHECK(validate(fx.spec).empty());

  SUBCASE("wrong L shape is named") {
    ProblemSpec bad = fx.spec;
    bad.L.clear();
    bad.L.emplace(std::make_pair(0, 0), LinearOp(Mat::Identity(3, 2)));
    auto v = validate(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("L[y1,x1]") != std::string::npos);
  }

  SUBCASE("operator dimension mismatch is named") {
    ProblemSpec bad = fx.spec;
    bad.A[0] = make_resolvent(fixtures::zero_desc(), 3);
    auto v = validate(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0].find("A[x1]") != std::string::npos);
  }

  SUBCASE("missing operator family is reported") {
    ProblemSpec bad = fx.spec;
    bad.Dc.clear();
    CHECK(!validate(bad).empty());
  }
}

TEST_CASE("nonpositive cocoercivity constants are rejected") {
  // the catalog refuses to build them, and validate re-checks stored ones
  CHECK_THROWS_AS(make_cocoercive(fixtures::zero_desc(-1.0), 2),
                  std::invalid_argument);
}

TEST_CASE("alpha_min") {
  auto fx = fixtures::dp1();
  CHECK(alpha_min(fx.spec) == 1.0);

  ProblemSpec s = fx.spec;
  s.Dc[0] = make_cocoercive(fixtures::zero_desc(0.5), 2);
  CHECK(alpha_min(s) == 0.5);
  s.C[0] = make_cocoercive(fixtures::zero_desc(2.0), 2);
  s.Bc[0] = make_cocoercive(fixtures::zero_desc(1.0), 2);
  CHECK(alpha_min(s) == 0.5);
}

TEST_CASE("kt_residual vanishes at the dp1 solution pair") {
  auto fx = fixtures::dp1();
  KTCandidate cand{fx.zero.x, fx.zero.vstar};
  CHECK(kt_residual(fx.spec, cand, 1.0) < 1e-10);
  // with explicit auxiliary state
  CHECK(kt_residual(fx.spec, cand, 1.0, fx.zero.y, fx.zero.z) < 1e-12);
  // gamma-independence at zeros
  CHECK(kt_residual(fx.spec, cand, 0.5) < 1e-10);
  CHECK(kt_residual(fx.spec, cand, 2.3) < 1e-10);
}

TEST_CASE("kt_residual is far from zero at the origin") {
  auto fx = fixtures::dp1();
  KTCandidate cand{BlockVec(fx.spec.h_layout), BlockVec(fx.spec.g_layout)};
  CHECK(kt_residual(fx.spec, cand, 1.0) > 0.1);
  CHECK_THROWS_AS(kt_residual(fx.spec, cand, 0.0), std::invalid_argument);
}

TEST_CASE("kt_residual vanishes on the qp2 and lbox zeros") {
  for (auto fx : {fixtures::qp2(), fixtures::lbox()}) {
    KTCandidate cand{fx.zero.x, fx.zero.vstar};
    CHECK(kt_residual(fx.spec, cand, 1.0, fx.zero.y, fx.zero.z) < 1e-12);
    CHECK(kt_residual(fx.spec, cand, 1.0) < 1e-10);
  }
}

TEST_CASE("kt_residual is lipschitz-continuous in the candidate") {
  auto fx = fixtures::qp2();
  std::mt19937_64 rng(61);
  std::normal_distribution<double> dist;
  for (int t = 0; t < 40; ++t) {
    KTCandidate cand{BlockVec(fx.spec.h_layout), BlockVec(fx.spec.g_layout)};
    for (int j = 0; j < cand.x.total_dim(); ++j) cand.x.data()[j] = dist(rng);
    for (int j = 0; j < cand.vstar.total_dim(); ++j) {
      cand.vstar.data()[j] = dist(rng);
    }
    double base = kt_residual(fx.spec, cand, 1.0);
    const double h = 1e-6;
    KTCandidate pert = cand;
    pert.x.data()[0] += h;
    pert.vstar.data()[1] -= h;
    double moved = kt_residual(fx.spec, pert, 1.0);
    CHECK(std::abs(moved - base) <= 100 * h);
  }
}
