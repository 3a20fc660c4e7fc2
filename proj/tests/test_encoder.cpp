#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mahnn/gradcheck.hpp"
#include "mahnn/lstm.hpp"

using namespace mahnn;
using T = double;

namespace {

LstmParams<T> zero_params(std::size_t h, std::size_t d) {
  LstmParams<T> p;
  p.w_f = make_tensor<T>(h, h + d);
  p.w_i = make_tensor<T>(h, h + d);
  p.w_o = make_tensor<T>(h, h + d);
  p.w_c = make_tensor<T>(h, h + d);
  p.b_f = make_tensor<T>(h, 1);
  p.b_i = make_tensor<T>(h, 1);
  p.b_o = make_tensor<T>(h, 1);
  p.b_c = make_tensor<T>(h, 1);
  return p;
}

}  // namespace

TEST_CASE("lstm_step: all-zero parameters and state stay at zero") {
  Tape<T> tp;
  auto p = zero_params(3, 2);
  auto h0 = make_tensor<T>(3, 1);
  auto c0 = make_tensor<T>(3, 1);
  auto x = make_tensor<T>(2, 1, {1.0, -1.0});
  auto [h, c] = lstm_step(tp, p, h0, c0, x);
  for (const T v : h->value) CHECK(v == 0.0);
  for (const T v : c->value) CHECK(v == 0.0);
}

TEST_CASE("lstm_step: zero parameters halve the carried cell state") {
  Tape<T> tp;
  auto p = zero_params(2, 1);
  auto h0 = make_tensor<T>(2, 1);
  auto c0 = make_tensor<T>(2, 1, {0.8, -0.4});
  auto x = make_tensor<T>(1, 1, std::vector<T>{0.0});
  auto [h, c] = lstm_step(tp, p, h0, c0, x);
  // gates are all sigma(0) = 0.5 and the candidate is tanh(0) = 0
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(c->value[i] == doctest::Approx(0.5 * c0->value[i]));
    CHECK(h->value[i] ==
          doctest::Approx(0.5 * std::tanh(0.5 * c0->value[i])));
  }
}

TEST_CASE("lstm_step: scalar unit-weight cell against a hand oracle") {
  Tape<T> tp;
  auto p = zero_params(1, 1);
  for (auto* w : {&p.w_f, &p.w_i, &p.w_o, &p.w_c})
    (*w)->value = {1.0, 1.0};
  auto h0 = make_tensor<T>(1, 1);
  auto c0 = make_tensor<T>(1, 1);
  auto x = make_tensor<T>(1, 1, std::vector<T>{1.0});
  auto [h, c] = lstm_step(tp, p, h0, c0, x);
  const double sig1 = 1.0 / (1.0 + std::exp(-1.0));  // f = i = o, approx 0.73106
  const double cand = std::tanh(1.0);                // approx 0.76159
  const double c_t = sig1 * cand;                    // approx 0.55677
  const double h_t = sig1 * std::tanh(c_t);
  CHECK(sig1 == doctest::Approx(0.73106).epsilon(1e-4));
  CHECK(cand == doctest::Approx(0.76159).epsilon(1e-4));
  CHECK(c->value[0] == doctest::Approx(c_t).epsilon(1e-12));
  CHECK(h->value[0] == doctest::Approx(h_t).epsilon(1e-12));
}

TEST_CASE("bilstm: single-token sequence has one row of both passes") {
  Tape<T> tp;
  Rng rng(2);
  auto fwd = LstmParams<T>::random(3, 2, rng);
  auto bwd = LstmParams<T>::random(3, 2, rng);
  auto x = make_tensor<T>(1, 2, {0.3, -0.6});
  auto seq = bilstm_encode_embedded(tp, x, {false}, fwd, bwd);
  CHECK(seq.states->rows == 1);
  CHECK(seq.states->cols == 6);

  // each half must equal a single cell update on the same input
  Tape<T> tp2;
  auto h0 = make_tensor<T>(3, 1);
  auto c0 = make_tensor<T>(3, 1);
  auto xc = make_tensor<T>(2, 1, {0.3, -0.6});
  auto hf = lstm_step(tp2, fwd, h0, c0, xc).first;
  auto hb = lstm_step(tp2, bwd, h0, c0, xc).first;
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(seq.states->value[j] == hf->value[j]);
    CHECK(seq.states->value[3 + j] == hb->value[j]);
  }
}

TEST_CASE("bilstm: zero parameters give a zero annotation matrix") {
  Tape<T> tp;
  auto fwd = zero_params(2, 2);
  auto bwd = zero_params(2, 2);
  auto x = make_tensor<T>(3, 2, {1, 2, 3, 4, 5, 6});
  auto seq = bilstm_encode_embedded(tp, x, {false, false, false}, fwd, bwd);
  for (const T v : seq.states->value) CHECK(v == 0.0);
}

TEST_CASE("bilstm: reversing the input swaps the two directions") {
  Rng rng(4);
  auto shared = LstmParams<T>::random(3, 2, rng);
  const std::size_t n = 3;
  auto x = make_tensor<T>(n, 2, {0.1, 0.2, -0.3, 0.4, 0.5, -0.6});
  auto xrev = make_tensor<T>(n, 2);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t j = 0; j < 2; ++j)
      xrev->value[t * 2 + j] = x->value[(n - 1 - t) * 2 + j];

  Tape<T> tp;
  auto orig = bilstm_encode_embedded(tp, x, {false, false, false}, shared,
                                     shared);
  auto rev = bilstm_encode_embedded(tp, xrev, {false, false, false}, shared,
                                    shared);
  // forward states of the reversed input match backward states of the
  // original at mirrored positions, and vice versa
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(rev.states->value[t * 6 + j] ==
            orig.states->value[(n - 1 - t) * 6 + 3 + j]);
      CHECK(rev.states->value[t * 6 + 3 + j] ==
            orig.states->value[(n - 1 - t) * 6 + j]);
    }
}

TEST_CASE("bilstm: forward states are causal in the prefix") {
  Rng rng(6);
  auto fwd = LstmParams<T>::random(2, 2, rng);
  auto bwd = LstmParams<T>::random(2, 2, rng);
  auto x = make_tensor<T>(4, 2);
  for (auto& v : x->value) v = uniform<T>(rng, -1, 1);
  auto y = make_tensor<T>(4, 2, x->value);
  y->value[3 * 2 + 0] += 5.0;  // perturb only the last position

  Tape<T> tp;
  auto a = bilstm_encode_embedded(tp, x, {false, false, false, false}, fwd,
                                  bwd);
  auto b = bilstm_encode_embedded(tp, y, {false, false, false, false}, fwd,
                                  bwd);
  // forward halves at positions before the perturbation are bit-identical
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(a.states->value[t * 4 + j] == b.states->value[t * 4 + j]);
  // the backward half at the last position is also unaffected by nothing
  // after it, so only earlier backward states may change
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(a.states->value[3 * 4 + 2 + j] != b.states->value[3 * 4 + 2 + j]);
}

TEST_CASE("bilstm: hidden entries stay strictly inside (-1, 1)") {
  Rng rng(8);
  auto fwd = LstmParams<T>::random(3, 2, rng, T(2.0));
  auto bwd = LstmParams<T>::random(3, 2, rng, T(2.0));
  auto x = make_tensor<T>(6, 2);
  for (auto& v : x->value) v = uniform<T>(rng, -3, 3);
  Tape<T> tp;
  auto seq = bilstm_encode_embedded(tp, x, std::vector<bool>(6, false), fwd,
                                    bwd);
  for (const T v : seq.states->value) CHECK(std::abs(v) < 1.0);
}

TEST_CASE("bilstm: gradients through a 6-step chain verify") {
  Rng rng(21);
  auto fwd = LstmParams<T>::random(2, 3, rng);
  auto bwd = LstmParams<T>::random(2, 3, rng);
  auto x = make_tensor<T>(6, 3, true);
  for (auto& v : x->value) v = uniform<T>(rng, -0.8, 0.8);

  auto loss_fn = [&](bool with_grad) -> T {
    Tape<T> tp;
    auto seq = bilstm_encode_embedded(tp, x, std::vector<bool>(6, false), fwd,
                                      bwd);
    auto l = sum_squares(tp, seq.states);
    if (with_grad) tp.backward(l);
    return l->value[0];
  };
  std::vector<Tensor<T>> params = {x};
  for (const auto& t : fwd.all()) params.push_back(t);
  for (const auto& t : bwd.all()) params.push_back(t);
  for (const auto& p : params) p->requires_grad = true;
  CHECK(finite_diff_check<T>(loss_fn, params, T(1e-5)) <= 1e-4);
}
