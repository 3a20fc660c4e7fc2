#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mahnn/gradcheck.hpp"
#include "mahnn/rng.hpp"
#include "mahnn/tensor.hpp"

using namespace mahnn;
using T = double;

TEST_CASE("matmul: identity leaves the operand unchanged") {
  Tape<T> tp;
  auto eye = make_tensor<T>(2, 2, {1, 0, 0, 1});
  auto a = make_tensor<T>(2, 2, {1, 2, 3, 4});
  auto c = matmul(tp, eye, a);
  CHECK(c->value == std::vector<T>{1, 2, 3, 4});
}

TEST_CASE("matmul: zero operand annihilates") {
  Tape<T> tp;
  auto z = make_tensor<T>(2, 3);
  auto a = make_tensor<T>(3, 2, {1, 2, 3, 4, 5, 6});
  auto c = matmul(tp, z, a);
  for (const T v : c->value) CHECK(v == 0.0);
  CHECK(c->rows == 2);
  CHECK(c->cols == 2);
}

TEST_CASE("matmul: 1x2 times 2x1 hand expansion") {
  Tape<T> tp;
  auto a = make_tensor<T>(1, 2, {1, 2});
  auto b = make_tensor<T>(2, 1, {3, 4});
  auto c = matmul(tp, a, b);
  CHECK(c->value[0] == doctest::Approx(11.0));
}

TEST_CASE("matmul: inner-dimension mismatch names both shapes") {
  Tape<T> tp;
  auto a = make_tensor<T>(2, 3);
  auto b = make_tensor<T>(2, 2);
  CHECK_THROWS_AS(matmul(tp, a, b), DimensionError);
  try {
    matmul(tp, a, b);
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("2x3") != std::string::npos);
    CHECK(msg.find("2x2") != std::string::npos);
  }
}

TEST_CASE("pointwise fixed points") {
  Tape<T> tp;
  auto x = make_tensor<T>(4, 1, {0.0, 0.0, -3.0, 3.0});
  CHECK(vtanh(tp, x)->value[0] == 0.0);
  CHECK(vsigmoid(tp, x)->value[0] == doctest::Approx(0.5));
  auto r = vrelu(tp, x);
  CHECK(r->value[2] == 0.0);
  CHECK(r->value[3] == 3.0);
}

TEST_CASE("sigmoid(1) matches the analytic value") {
  Tape<T> tp;
  auto x = make_tensor<T>(1, 1, std::vector<T>{1.0});
  CHECK(vsigmoid(tp, x)->value[0] ==
        doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("softmax: uniform scores give uniform weights") {
  Tape<T> tp;
  auto x = make_tensor<T>(3, 1, {0, 0, 0});
  auto y = softmax_along(tp, x, 0);
  for (const T v : y->value) CHECK(v == doctest::Approx(1.0 / 3));
}

TEST_CASE("softmax: a -99999 gap drives the weight below 1e-12") {
  Tape<T> tp;
  auto x = make_tensor<T>(2, 1, {5.0, 5.0 - 99999.0});
  auto y = softmax_along(tp, x, 0);
  CHECK(y->value[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(y->value[1] <= 1e-12);
}

TEST_CASE("softmax: (1,2,3) against the direct-exponentiation oracle") {
  Tape<T> tp;
  auto x = make_tensor<T>(3, 1, {1, 2, 3});
  auto y = softmax_along(tp, x, 0);
  const T z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  CHECK(y->value[0] == doctest::Approx(std::exp(1.0) / z).epsilon(1e-12));
  CHECK(y->value[1] == doctest::Approx(std::exp(2.0) / z).epsilon(1e-12));
  CHECK(y->value[2] == doctest::Approx(std::exp(3.0) / z).epsilon(1e-12));
  CHECK(y->value[0] == doctest::Approx(0.09003057));
  CHECK(y->value[1] == doctest::Approx(0.24472847));
  CHECK(y->value[2] == doctest::Approx(0.66524096));
}

TEST_CASE("softmax: outputs normalize and shifting all scores is a no-op") {
  Rng rng(11);
  for (int it = 0; it < 50; ++it) {
    Tape<T> tp;
    auto x = make_tensor<T>(4, 3);
    for (auto& v : x->value) v = uniform<T>(rng, -5, 5);
    const int axis = it % 2;
    auto y = softmax_along(tp, x, axis);
    const std::size_t groups = axis == 0 ? x->cols : x->rows;
    const std::size_t len = axis == 0 ? x->rows : x->cols;
    const std::size_t gs = axis == 0 ? 1 : x->cols;
    const std::size_t es = axis == 0 ? x->cols : 1;
    for (std::size_t g = 0; g < groups; ++g) {
      T s = 0;
      for (std::size_t i = 0; i < len; ++i) s += y->value[g * gs + i * es];
      CHECK(s == doctest::Approx(1.0).epsilon(1e-9));
    }
    auto shifted = make_tensor<T>(x->rows, x->cols, x->value);
    for (auto& v : shifted->value) v += 7.25;
    auto y2 = softmax_along(tp, shifted, axis);
    for (std::size_t i = 0; i < y->size(); ++i)
      CHECK(std::abs(y->value[i] - y2->value[i]) <= 1e-12);
  }
}

TEST_CASE("softmax: NaN input raises a numeric error") {
  Tape<T> tp;
  auto x = make_tensor<T>(2, 1,
                          {1.0, std::numeric_limits<T>::quiet_NaN()});
  CHECK_THROWS_AS(softmax_along(tp, x, 0), NumericError);
}

TEST_CASE("softmax: invalid axis raises a contract error") {
  Tape<T> tp;
  auto x = make_tensor<T>(2, 1, {1.0, 2.0});
  CHECK_THROWS_AS(softmax_along(tp, x, 2), ContractError);
}

TEST_CASE("backward: identity loss has unit gradient") {
  Tape<T> tp;
  auto x = make_tensor<T>(1, 1, {3.0}, true);
  auto y = scale(tp, x, T(1));
  tp.backward(y);
  CHECK(x->grad[0] == 1.0);
}

TEST_CASE("backward: sum of squares gives 2x") {
  Tape<T> tp;
  auto x = make_tensor<T>(3, 1, {1.0, -2.0, 0.5}, true);
  auto loss = sum_squares(tp, x);
  tp.backward(loss);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(x->grad[i] == doctest::Approx(2 * x->value[i]));
}

TEST_CASE("backward: a node consumed twice sums both path gradients") {
  Tape<T> tp;
  auto x = make_tensor<T>(1, 1, {1.5}, true);
  auto y = add(tp, x, x);
  tp.backward(y);
  CHECK(x->grad[0] == 2.0);
}

TEST_CASE("backward: replaying the same tape is bit-identical") {
  Tape<T> tp;
  auto x = make_tensor<T>(4, 1, {0.3, -0.7, 1.1, 0.05}, true);
  auto loss = sum(tp, vtanh(tp, mul(tp, x, x)));
  x->zero_grad();
  tp.backward(loss);
  const std::vector<T> first = x->grad;
  x->zero_grad();
  tp.backward(loss);
  CHECK(x->grad == first);
}

TEST_CASE("backward: non-scalar loss is rejected") {
  Tape<T> tp;
  auto x = make_tensor<T>(2, 1, {1.0, 2.0}, true);
  auto y = scale(tp, x, T(2));
  CHECK_THROWS_AS(tp.backward(y), ContractError);
}

TEST_CASE("finite_diff_check: quadratic has near-zero error") {
  auto theta = make_tensor<T>(1, 1, {3.0}, true);
  auto loss = [&](bool with_grad) -> T {
    Tape<T> tp;
    auto l = sum_squares(tp, theta);
    if (with_grad) tp.backward(l);
    return l->value[0];
  };
  CHECK(finite_diff_check<T>(loss, {theta}) <= 1e-9);
}

TEST_CASE("finite_diff_check: sum of tanh stays below 1e-7") {
  Rng rng(3);
  auto theta = make_tensor<T>(5, 1, true);
  for (auto& v : theta->value) v = uniform<T>(rng, -2, 2);
  auto loss = [&](bool with_grad) -> T {
    Tape<T> tp;
    auto l = sum(tp, vtanh(tp, theta));
    if (with_grad) tp.backward(l);
    return l->value[0];
  };
  CHECK(finite_diff_check<T>(loss, {theta}) <= 1e-7);
}

TEST_CASE("finite_diff_check: frozen parameters are skipped") {
  auto live = make_tensor<T>(1, 1, {2.0}, true);
  auto frozen = make_tensor<T>(1, 1, {5.0}, false);
  auto loss = [&](bool with_grad) -> T {
    Tape<T> tp;
    // loss depends on the frozen tensor too, but it must not be perturbed
    auto l = sum_squares(tp, add(tp, live, frozen));
    if (with_grad) tp.backward(l);
    return l->value[0];
  };
  CHECK(finite_diff_check<T>(loss, {live, frozen}) <= 1e-8);
}

TEST_CASE("finite_diff_check: non-positive step size is rejected") {
  auto theta = make_tensor<T>(1, 1, {1.0}, true);
  auto loss = [&](bool) -> T { return 0.0; };
  CHECK_THROWS_AS(finite_diff_check<T>(loss, {theta}, T(0)), ContractError);
}

TEST_CASE("shape errors carry both operand shapes") {
  Tape<T> tp;
  auto a = make_tensor<T>(2, 2);
  auto b = make_tensor<T>(3, 2);
  CHECK_THROWS_AS(add(tp, a, b), DimensionError);
  CHECK_THROWS_AS(mul(tp, a, b), DimensionError);
  CHECK_THROWS_AS(concat_rows(tp, a, make_tensor<T>(2, 3)), DimensionError);
  CHECK_THROWS_AS(row_scale(tp, a, make_tensor<T>(3, 1)), DimensionError);
  CHECK_THROWS_AS(row_select(tp, a, {0, 2}), std::out_of_range);
}

TEST_CASE("nll_pick: clamps tiny probabilities and validates labels") {
  Tape<T> tp;
  auto p = make_tensor<T>(2, 1, {1.0, 0.0});
  CHECK(nll_pick(tp, p, 0)->value[0] == doctest::Approx(0.0));
  CHECK(nll_pick(tp, p, 1)->value[0] ==
        doctest::Approx(-std::log(1e-12)));
  CHECK_THROWS_AS(nll_pick(tp, p, 2), ContractError);
  CHECK_THROWS_AS(nll_pick(tp, p, -1), ContractError);
}

TEST_CASE("inference tapes record nothing") {
  Tape<T> tp;
  tp.recording = false;
  auto x = make_tensor<T>(2, 2, {1, 2, 3, 4}, true);
  auto y = vtanh(tp, matmul(tp, x, x));
  CHECK(tp.node_count() == 0);
  CHECK(y->requires_grad == false);
}
