#include <doctest.h>

#include <cmath>

#include "wartem/nn.hpp"
#include "wartem/rng.hpp"

using namespace wartem;

namespace {

Tensor random_tensor(int rows, int cols, Engine& rng) {
  Tensor t(rows, cols);
  for (auto& v : t.data) v = rng.normal();
  return t;
}

}  // namespace

TEST_SUITE("nn") {

TEST_CASE("conv1d forward") {
  SUBCASE("identity kernel") {
    const Conv1d spec{1, 1, 3};
    const std::vector<double> params{0, 1, 0, 0};  // kernel [0,1,0], bias 0
    const Tensor out = conv1d_forward(Tensor::from_series({1, 2, 3}), spec, params);
    CHECK(out.data == std::vector<double>{1, 2, 3});
  }
  SUBCASE("box kernel with zero padding at the edges") {
    const Conv1d spec{1, 1, 3};
    const std::vector<double> params{1, 1, 1, 0};
    const Tensor out = conv1d_forward(Tensor::from_series({1, 1, 1}), spec, params);
    CHECK(out.data == std::vector<double>{2, 3, 2});
  }
  SUBCASE("bias passthrough on zero input") {
    const Conv1d spec{1, 2, 3};
    const std::vector<double> params{0, 0, 0, 0, 0, 0, 1.5, -0.5};
    const Tensor out = conv1d_forward(Tensor::from_series({0, 0, 0, 0}), spec, params);
    CHECK(out.rows == 2);
    for (int t = 0; t < 4; ++t) {
      CHECK(out.at(0, t) == 1.5);
      CHECK(out.at(1, t) == -0.5);
    }
  }
  SUBCASE("channel mismatch is an error") {
    const Conv1d spec{2, 1, 3};
    const std::vector<double> params(7, 0.0);
    CHECK_THROWS_AS(conv1d_forward(Tensor::from_series({1, 2}), spec, params),
                    std::invalid_argument);
  }
  SUBCASE("even kernels are rejected") {
    CHECK_THROWS_AS(layer_output_shape(Conv1d{1, 1, 4}, Shape{1, 8}), std::invalid_argument);
  }
}

TEST_CASE("maxpool1d forward") {
  std::vector<int> argmax;
  SUBCASE("window maxima") {
    const Tensor out = maxpool1d_forward(Tensor::from_series({1, 3, 2, 4}), 2, argmax);
    CHECK(out.data == std::vector<double>{3, 4});
    CHECK(argmax == std::vector<int>{1, 3});
  }
  SUBCASE("ties take the earliest index") {
    const Tensor out = maxpool1d_forward(Tensor::from_series({5, 5}), 2, argmax);
    CHECK(out.data == std::vector<double>{5});
    CHECK(argmax == std::vector<int>{0});
  }
  SUBCASE("partial final window") {
    const Tensor out = maxpool1d_forward(Tensor::from_series({1, 2, 3}), 2, argmax);
    CHECK(out.data == std::vector<double>{2, 3});
  }
  SUBCASE("size below 2 is an error") {
    CHECK_THROWS_AS(maxpool1d_forward(Tensor::from_series({1, 2}), 1, argmax),
                    std::invalid_argument);
  }
}

TEST_CASE("upsample1d forward") {
  CHECK(upsample1d_forward(Tensor::from_series({1, 2}), 2).data == std::vector<double>{1, 1, 2, 2});
  const Tensor constant = upsample1d_forward(Tensor::from_series({3, 3, 3}), 3);
  for (const double v : constant.data) CHECK(v == 3.0);

  // upsample then maxpool with the same factor is the identity
  Engine rng(8);
  const Tensor x = random_tensor(2, 5, rng);
  std::vector<int> argmax;
  const Tensor up = upsample1d_forward(x, 2);
  const Tensor pooled = maxpool1d_forward(up, 2, argmax);
  CHECK(pooled.data == x.data);
}

TEST_CASE("dense forward") {
  SUBCASE("identity weights") {
    const Dense spec{2, 2, 1};
    const std::vector<double> params{1, 0, 0, 1, 0, 0};
    CHECK(dense_forward(Tensor::from_series({3, 4}), spec, params).data ==
          std::vector<double>{3, 4});
  }
  SUBCASE("zero input returns the bias") {
    const Dense spec{2, 2, 1};
    const std::vector<double> params{1, 2, 3, 4, 5, 6};
    CHECK(dense_forward(Tensor::from_series({0, 0}), spec, params).data ==
          std::vector<double>{5, 6});
  }
  SUBCASE("hand matvec") {
    const Dense spec{2, 2, 1};
    const std::vector<double> params{1, 2, 3, 4, 0, 0};
    CHECK(dense_forward(Tensor::from_series({1, 1}), spec, params).data ==
          std::vector<double>{3, 7});
  }
  SUBCASE("flattened input size must match") {
    const Dense spec{3, 2, 1};
    const std::vector<double> params(8, 0.0);
    CHECK_THROWS_AS(dense_forward(Tensor::from_series({1, 2}), spec, params),
                    std::invalid_argument);
  }
}

TEST_CASE("relu and losses") {
  CHECK(relu_forward(Tensor::from_series({-1, 2})).data == std::vector<double>{0, 2});
  const Tensor x = Tensor::from_series({1, -2, 3});
  CHECK(mse_loss(x, x) == 0.0);
  CHECK(mse_loss(Tensor::from_series({3}), Tensor::from_series({0})) == 9.0);
  CHECK(softmax_cross_entropy(std::vector<double>{0, 0}, 0) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(softmax_cross_entropy(std::vector<double>{0, 0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(mse_loss(x, Tensor::from_series({1, 2})), std::invalid_argument);
}

TEST_CASE("softmax cross entropy stays finite for large logits") {
  const std::vector<double> logits{1e3, -1e3, 0.0};
  for (int label = 0; label < 3; ++label) {
    CHECK(std::isfinite(softmax_cross_entropy(logits, label)));
  }
  // gradient sums to zero and stays finite
  const auto grad = softmax_cross_entropy_grad(logits, 1);
  double sum = 0.0;
  for (const double g : grad) {
    CHECK(std::isfinite(g));
    sum += g;
  }
  CHECK(sum == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("backward through a passthrough network gives the mse derivative") {
  // loss = mse(x, 0) at scalar x = 3: d loss / d x = 2 * 3 = 6
  Network net({Identity{}}, Shape{1, 1});
  Tape tape;
  const Tensor out = net.forward(Tensor::from_series({3.0}), tape);
  std::vector<double> grads;
  const Tensor grad_in = net.backward(mse_loss_grad(out, Tensor(1, 1)), tape, grads);
  CHECK(grad_in.data[0] == 6.0);
}

TEST_CASE("gradient through relu at negative input is zero") {
  Network net({Relu{}}, Shape{1, 1});
  Tape tape;
  const Tensor out = net.forward(Tensor::from_series({-2.0}), tape);
  std::vector<double> grads;
  const Tensor grad_in = net.backward(mse_loss_grad(out, Tensor::from_series({1.0})), tape, grads);
  CHECK(grad_in.data[0] == 0.0);
}

TEST_CASE("tape reuse is a state error") {
  Network net({Identity{}}, Shape{1, 1});
  Tape tape;
  const Tensor out = net.forward(Tensor::from_series({1.0}), tape);
  std::vector<double> grads;
  net.backward(out, tape, grads);
  CHECK_THROWS_AS(net.backward(out, tape, grads), std::logic_error);
}

TEST_CASE("network shape bookkeeping") {
  Network net({Conv1d{1, 4, 5}, Relu{}, MaxPool1d{2}, Conv1d{4, 8, 3}, Relu{}, MaxPool1d{2},
               Dense{8 * 3, 5, 1}},
              Shape{1, 9});
  CHECK(net.output_shape().channels == 1);
  CHECK(net.output_shape().length == 5);
  CHECK(net.param_count() == (4 * 1 * 5 + 4) + (8 * 4 * 3 + 8) + (5 * 24 + 5));
  CHECK_THROWS_AS(Network({Dense{7, 3, 1}}, Shape{1, 9}), std::invalid_argument);
}

TEST_CASE("forward is deterministic") {
  Network net({Conv1d{1, 3, 3}, Relu{}, MaxPool1d{2}, Dense{3 * 4, 4, 1}}, Shape{1, 8});
  net.init_params(5);
  Engine rng(6);
  const Tensor x = random_tensor(1, 8, rng);
  const Tensor a = net.forward(x);
  const Tensor b = net.forward(x);
  CHECK(a.data == b.data);

  Network again({Conv1d{1, 3, 3}, Relu{}, MaxPool1d{2}, Dense{3 * 4, 4, 1}}, Shape{1, 8});
  again.init_params(5);
  CHECK(std::vector<double>(again.params().begin(), again.params().end()) ==
        std::vector<double>(net.params().begin(), net.params().end()));
}

TEST_CASE("gradient check: linear network, quadratic loss") {
  Network net({Dense{6, 4, 1}, Identity{}, Dense{4, 3, 1}}, Shape{1, 6});
  net.init_params(11);
  Engine rng(12);
  const Tensor x = random_tensor(1, 6, rng);
  CHECK(gradient_check(net, x, 1e-5) < 1e-8);
}

TEST_CASE("gradient check: random conv-pool-dense networks") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Engine rng(mix_seed(400, seed));
    const int length = rng.uniform_int(6, 14);
    const int filters = rng.uniform_int(2, 5);
    const int pooled = (length + 1) / 2;
    Network net({Conv1d{1, filters, 3}, Relu{}, MaxPool1d{2}, Dense{filters * pooled, 3, 1}},
                Shape{1, length});
    net.init_params(mix_seed(500, seed));
    const Tensor x = random_tensor(1, length, rng);
    CHECK(gradient_check(net, x, 1e-5) < 1e-4);
  }
}

TEST_CASE("gradient check: upsample path") {
  Network net({Dense{5, 12, 3}, Relu{}, Upsample1d{2}, Conv1d{3, 1, 3}}, Shape{1, 5});
  net.init_params(21);
  Engine rng(22);
  const Tensor x = random_tensor(1, 5, rng);
  CHECK(gradient_check(net, x, 1e-5) < 1e-4);
}

TEST_CASE("input gradients match finite differences") {
  Network net({Conv1d{1, 2, 3}, Relu{}, MaxPool1d{2}, Dense{2 * 3, 2, 1}}, Shape{1, 6});
  net.init_params(31);
  Engine rng(32);
  Tensor x = random_tensor(1, 6, rng);
  const Tensor target(1, 2);

  Tape tape;
  const Tensor out = net.forward(x, tape);
  std::vector<double> param_grads(static_cast<std::size_t>(net.param_count()), 0.0);
  const Tensor input_grad = net.backward(mse_loss_grad(out, target), tape, param_grads);

  const double eps = 1e-6;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double saved = x.data[i];
    x.data[i] = saved + eps;
    const double up = mse_loss(net.forward(x), target);
    x.data[i] = saved - eps;
    const double down = mse_loss(net.forward(x), target);
    x.data[i] = saved;
    const double numeric = (up - down) / (2 * eps);
    CHECK(input_grad.data[i] == doctest::Approx(numeric).epsilon(1e-5));
  }
}

TEST_CASE("gradient check rejects epsilon = 0") {
  Network net({Identity{}}, Shape{1, 2});
  CHECK_THROWS_AS(gradient_check(net, Tensor(1, 2), 0.0), std::invalid_argument);
}

TEST_CASE("adam") {
  SUBCASE("zero gradient leaves parameters unchanged") {
    std::vector<double> params{1.0, -2.0};
    const std::vector<double> grads{0.0, 0.0};
    AdamState adam(2, AdamConfig{});
    adam.step(params, grads);
    CHECK(params == std::vector<double>{1.0, -2.0});
  }
  SUBCASE("single step with unit gradient moves by about the learning rate") {
    // bias-corrected moments after one step: m_hat = v_hat = 1, so the update
    // is lr / (1 + eps) = 0.001 * (1 - 1e-8 + ...)
    std::vector<double> params{0.5};
    const std::vector<double> grads{1.0};
    AdamState adam(1, AdamConfig{});
    adam.step(params, grads);
    CHECK(params[0] == doctest::Approx(0.5 - 0.001).epsilon(1e-6));
    CHECK(params[0] < 0.5);
  }
  SUBCASE("identical state sequences give identical parameters") {
    std::vector<double> a{1.0}, b{1.0};
    AdamState sa(1, AdamConfig{}), sb(1, AdamConfig{});
    for (int i = 0; i < 10; ++i) {
      const std::vector<double> g{0.1 * i};
      sa.step(a, g);
      sb.step(b, g);
    }
    CHECK(a == b);
  }
  SUBCASE("size mismatch is an error") {
    std::vector<double> params{1.0};
    const std::vector<double> grads{1.0, 2.0};
    AdamState adam(1, AdamConfig{});
    CHECK_THROWS_AS(adam.step(params, grads), std::invalid_argument);
  }
}

}  // TEST_SUITE
