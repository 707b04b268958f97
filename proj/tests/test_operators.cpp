#include <cmath>

#include "doctest.h"
#include "mhls/lab/chain.hpp"
#include "mhls/operators.hpp"
#include "mhls/reference.hpp"
#include "mhls/rng.hpp"

using namespace mhls;

namespace {

SimpleFunction random_function(const TreePtr& tree, int level, Rng& rng) {
  std::vector<double> v(tree->level_size(level));
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return SimpleFunction(tree, level, std::move(v));
}

void check_values(const SimpleFunction& f, std::vector<double> expected, double eps = 1e-12) {
  REQUIRE(f.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(f[i] == doctest::Approx(expected[i]).epsilon(eps));
}

TreePtr dyadic2() { return build_tree(tree_spec::Dyadic{2}); }

}  // namespace

TEST_CASE("operators on the two-level dyadic tree") {
  auto tree = dyadic2();
  const auto m = MartingaleSequence::from_terminal(SimpleFunction(tree, 2, {4, 0, 0, 0}));
  const double s2 = std::sqrt(2.0);
  check_values(apply_i_alpha(m, 0.5), {1 + s2, 1 - s2, -1, -1});
  // b_1^alpha dF_1 + b_2^alpha dF_2 = (1/s2)(1, 1, -1, -1) + (1/2)(2, -2, 0, 0).
  const std::vector<double> atomic = {1 + 1 / s2, 1 / s2 - 1, -1 / s2, -1 / s2};
  check_values(apply_atomic(m, 0.5), atomic);
  check_values(apply_tilde(m, 0.5), atomic);
  check_values(apply_atomic(m, Exponents::from_alpha_p(0.5, 4.0 / 3.0)), atomic);
  CHECK(apply_atomic(m, 0.5)[0] == doctest::Approx(1.70711).epsilon(1e-5));
}

TEST_CASE("exponents") {
  const auto e = Exponents::from_alpha_p(0.5, 4.0 / 3.0);
  CHECK(e.q == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(Exponents::from_p_q(4.0 / 3.0, 4.0).alpha == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_NOTHROW(Exponents::checked(0.5, 4.0 / 3.0, 4.0));
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& err) {
      return err.code();
    }
    return ErrorCode::IOError;
  };
  CHECK(code_of([] { Exponents::checked(0.5, 4.0 / 3.0, 4.1); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { Exponents::from_alpha_p(0.5, 2.0); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { Exponents::from_alpha_p(1.0, 0.9); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { check_alpha(0.0); }) == ErrorCode::InvalidExponent);
  CHECK(code_of([] { apply_i_alpha(MartingaleSequence::from_terminal(SimpleFunction::constant(dyadic2(), 2, 1.0)), 1.5); }) ==
        ErrorCode::InvalidExponent);
}

TEST_CASE("operator kinds") {
  CHECK(parse_operator_kind("i") == OperatorKind::NakaiSadasue);
  CHECK(parse_operator_kind("tilde") == OperatorKind::Tilde);
  CHECK(parse_operator_kind("ia") == OperatorKind::Atomic);
  CHECK(parse_operator_kind("adjoint") == OperatorKind::AtomicAdjoint);
  CHECK(parse_operator_kind(to_string(OperatorKind::Atomic)) == OperatorKind::Atomic);
  CHECK_THROWS_AS(parse_operator_kind("riesz"), Error);
  CHECK(is_martingale_transform(OperatorKind::NakaiSadasue));
  CHECK(is_martingale_transform(OperatorKind::Tilde));
  CHECK_FALSE(is_martingale_transform(OperatorKind::Atomic));
}

TEST_CASE("kernels agree with the serial reference") {
  Rng rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    auto tree = build_tree(tree_spec::Random{rng.bits(), static_cast<int>(rng.integer(1, 6)), 4, 0.02, 0.25});
    const int level = static_cast<int>(rng.integer(0, tree->depth()));
    const auto f = random_function(tree, level, rng);
    const double alpha = rng.uniform(0.05, 0.95);
    for (auto kind : {OperatorKind::NakaiSadasue, OperatorKind::Tilde, OperatorKind::Atomic,
                      OperatorKind::AtomicAdjoint}) {
      const auto expected = reference::apply(kind, f, alpha);
      const auto actual = reference::leaf_values(apply(kind, f, alpha));
      REQUIRE(expected.size() == actual.size());
      for (std::size_t x = 0; x < actual.size(); ++x) {
        CHECK(actual[x] == doctest::Approx(expected[x]).epsilon(1e-12).scale(1.0));
      }
    }
  }
}

TEST_CASE("adjoint pairing") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    auto tree = build_tree(tree_spec::Random{rng.bits(), static_cast<int>(rng.integer(1, 7)), 3, 0.05, 0.3});
    const auto f = random_function(tree, tree->depth(), rng);
    const auto g = random_function(tree, static_cast<int>(rng.integer(0, tree->depth())), rng);
    const double alpha = rng.uniform(0.05, 0.95);
    const double lhs = pairing(apply_atomic(MartingaleSequence::from_terminal(f), alpha), g);
    const double rhs = pairing(f, apply_atomic_adjoint(g, alpha));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("J1 + J2 is the adjoint") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto tree = build_tree(tree_spec::Random{rng.bits(), static_cast<int>(rng.integer(1, 6)), 3, 0.05, 0.3});
    const int level = static_cast<int>(rng.integer(0, tree->depth()));
    const auto g = random_function(tree, level, rng);
    const double alpha = rng.uniform(0.05, 0.95);
    const auto split = split_adjoint(g, alpha, level);
    const auto whole = apply_atomic_adjoint(g, alpha);
    for (std::size_t x = 0; x < whole.size(); ++x) {
      CHECK(split.near[x] + split.far[x] == doctest::Approx(whole[x]).epsilon(1e-12).scale(1.0));
    }
    if (level == 0) {
      for (double v : split.near.values()) CHECK(v == 0.0);
    }
  }
  auto tree = dyadic2();
  try {
    split_adjoint(SimpleFunction::constant(tree, 1, 1.0), 0.5, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LevelMismatch);
  }
}

TEST_CASE("J1 on the dyadic chain") {
  const lab::ChainInstance c{{1.0, 0.5, 0.25, 0.125}, 0.5};
  const auto j1 = lab::chain_j1(c);
  CHECK(j1[1] == doctest::Approx(-0.29289).epsilon(1e-5));
  CHECK(j1[2] == doctest::Approx(0.29289).epsilon(1e-5));
  CHECK(j1[3] == doctest::Approx(3.12132).epsilon(1e-5));

  const auto [tree, w] = lab::chain_tree(c);
  const auto g = atomic_function(tree, w, 8.0);
  const auto split = split_adjoint(g, 0.5, 3);
  const auto shells = lab::shell_of_leaves(*tree, w);
  for (std::size_t x = 0; x < shells.size(); ++x) {
    CHECK(split.near[x] == doctest::Approx(j1[static_cast<std::size_t>(shells[x])]).epsilon(1e-12));
  }
}

TEST_CASE("J2 below a non-uniform split") {
  // w = w_1 of mass r splits into a = 0.3 r and b = 0.7 r. For G = chi_w / r,
  // J2 on a is a^alpha / r - (a^{1+alpha} + b^{1+alpha}) / r^2.
  const double r = 0.4;
  const double a = 0.3 * r;
  const double b = 0.7 * r;
  const double alpha = 0.5;
  auto tree = build_tree(tree_spec::Explicit{NodeSpec{1.0, {{r, {{a, {}}, {b, {}}}}, {1 - r, {}}}}});
  const auto g = atomic_function(tree, 1, 1.0 / r);
  const auto split = split_adjoint(g, alpha, 1);
  const double mix = (std::pow(a, 1 + alpha) + std::pow(b, 1 + alpha)) / (r * r);
  CHECK(split.far[0] == doctest::Approx(std::pow(a, alpha) / r - mix).epsilon(1e-12));
  CHECK(split.far[1] == doctest::Approx(std::pow(b, alpha) / r - mix).epsilon(1e-12));
  CHECK(split.far[2] == 0.0);
  // A uniform split below w_N makes each far term vanish.
  auto even = build_tree(tree_spec::Explicit{NodeSpec{1.0, {{r, {{r / 2, {}}, {r / 2, {}}}}, {1 - r, {}}}}});
  const auto split_even = split_adjoint(atomic_function(even, 1, 1.0 / r), alpha, 1);
  for (double v : split_even.far.values()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("truncations") {
  Rng rng(8);
  auto tree = build_tree(tree_spec::Random{rng.bits(), 5, 3, 0.02, 0.2});
  const auto m = MartingaleSequence::from_terminal(random_function(tree, 5, rng));
  for (auto kind : {OperatorKind::NakaiSadasue, OperatorKind::Tilde}) {
    const auto s = truncated_transform(m, 0.3, kind, 5);
    CHECK(s.transform);
    CHECK(s.sums.size() == 6);
    CHECK(martingale_defect(s) < 1e-12);
    const auto full = apply(kind, m.terminal(), 0.3);
    for (std::size_t i = 0; i < full.size(); ++i) CHECK(s.sums.back()[i] == doctest::Approx(full[i]).epsilon(1e-12));
  }
  const auto atomic = truncated_transform(m, 0.3, OperatorKind::Atomic, 5);
  CHECK_FALSE(atomic.transform);
  CHECK_THROWS_AS(truncated_transform(m, 0.3, OperatorKind::Atomic, 6), Error);
}

TEST_CASE("coefficients") {
  auto tree = build_tree(tree_spec::Explicit{NodeSpec{1.0, {{0.9, {}}, {0.1, {}}}}});
  CHECK(coefficient(tree, OperatorKind::NakaiSadasue, 1, 0.5)[0] == 1.0);
  CHECK(coefficient(tree, OperatorKind::Tilde, 1, 0.5)[0] == doctest::Approx(std::sqrt(0.1)));
  const auto atomic = coefficient(tree, OperatorKind::Atomic, 1, 0.5);
  CHECK(atomic.level() == 1);
  CHECK(atomic[1] == doctest::Approx(std::sqrt(0.1)));
  CHECK_THROWS_AS(coefficient(tree, OperatorKind::AtomicAdjoint, 1, 0.5), Error);
}

TEST_CASE("large levels take the parallel kernel path") {
  auto tree = build_tree(tree_spec::Uniform{2, 16});
  Rng rng(99);
  const auto f = random_function(tree, 16, rng);
  for (auto kind : {OperatorKind::NakaiSadasue, OperatorKind::Atomic, OperatorKind::AtomicAdjoint}) {
    const auto expected = reference::apply(kind, f, 0.3);
    const auto actual = apply(kind, f, 0.3);
    REQUIRE(actual.size() == expected.size());
    double worst = 0.0;
    for (std::size_t x = 0; x < expected.size(); ++x) worst = std::max(worst, std::abs(actual[x] - expected[x]));
    CHECK(worst < 1e-12);
  }
}
