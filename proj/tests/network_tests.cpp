#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "shotscore/checkpoint.hpp"
#include "shotscore/network.hpp"
#include "shotscore/ops.hpp"
#include "shotscore/rng.hpp"

using namespace shotscore;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
  const fs::path p = fs::temp_directory_path() /
                     (std::string("shotscore-") + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("conv forward: all-ones 3x3 with same padding") {
  Tensor<double> x({3, 3, 1});
  x.fill(1.0);
  Tensor<double> w({3, 3, 1, 1});
  w.fill(1.0);
  Tensor<double> b({1});
  const auto y = conv2d_forward(x, w, b);
  REQUIRE(y.dims() == std::vector<int>{3, 3, 1});
  CHECK(y.at(1, 1, 0) == doctest::Approx(9.0));  // full window
  CHECK(y.at(0, 0, 0) == doctest::Approx(4.0));  // corner sees 2x2
  CHECK(y.at(0, 1, 0) == doctest::Approx(6.0));  // edge sees 2x3
}

TEST_CASE("conv forward: 1x1 kernel is a per-pixel linear map") {
  Tensor<double> x({1, 1, 1});
  x[0] = 2.0;
  Tensor<double> w({1, 1, 1, 1});
  w[0] = 3.0;
  Tensor<double> b({1});
  b[0] = 0.5;
  CHECK(conv2d_forward(x, w, b)[0] == doctest::Approx(6.5));

  Tensor<double> x2({1, 1, 2});
  x2[0] = 1.0;
  x2[1] = 2.0;
  Tensor<double> w2({1, 1, 2, 1});
  w2[0] = 3.0;
  w2[1] = 4.0;
  Tensor<double> b2({1});
  b2[0] = 1.0;
  CHECK(conv2d_forward(x2, w2, b2)[0] == doctest::Approx(12.0));
}

TEST_CASE("conv shape validation") {
  Tensor<double> x({3, 3, 2});
  Tensor<double> w_even({2, 2, 2, 1});
  Tensor<double> w_chan({3, 3, 3, 1});
  Tensor<double> w_ok({3, 3, 2, 4});
  Tensor<double> b1({1}), b4({4});
  CHECK_THROWS_AS(conv2d_forward(x, w_even, b1), ShapeError);
  CHECK_THROWS_AS(conv2d_forward(x, w_chan, b1), ShapeError);
  CHECK_THROWS_AS(conv2d_forward(x, w_ok, b1), ShapeError);  // bias size
  CHECK_NOTHROW(conv2d_forward(x, w_ok, b4));
}

TEST_CASE("conv backward: scalar chain by hand") {
  // y = w*x + b with x=3, w=2: dL/dw = x*g, dL/dx = w*g, dL/db = g for g=1.
  Tensor<double> x({1, 1, 1});
  x[0] = 3.0;
  Tensor<double> w({1, 1, 1, 1});
  w[0] = 2.0;
  Tensor<double> g({1, 1, 1});
  g[0] = 1.0;
  const auto grads = conv2d_backward(x, w, g);
  CHECK(grads.filters[0] == doctest::Approx(3.0));
  CHECK(grads.input[0] == doctest::Approx(2.0));
  CHECK(grads.bias[0] == doctest::Approx(1.0));
}

TEST_CASE("conv backward matches finite differences") {
  Rng rng(101);
  Tensor<double> x({6, 5, 2});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(-1, 1);
  Tensor<double> w({3, 3, 2, 3});
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-1, 1);
  Tensor<double> b({3});
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng.uniform(-1, 1);
  Tensor<double> g({6, 5, 3});
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = rng.uniform(-1, 1);

  // L = sum(g * conv(x, w, b)); check dL/d{x,w,b} against central differences.
  const auto loss = [&](const Tensor<double>& xx, const Tensor<double>& ww,
                        const Tensor<double>& bb) {
    const auto y = conv2d_forward(xx, ww, bb);
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += g[i] * y[i];
    return s;
  };
  const auto grads = conv2d_backward(x, w, g);
  const double h = 1e-6;

  for (const std::size_t i : {std::size_t(0), x.size() / 2, x.size() - 1}) {
    auto xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (loss(xp, w, b) - loss(xm, w, b)) / (2 * h);
    CHECK(grads.input[i] == doctest::Approx(fd).epsilon(1e-6));
  }
  for (const std::size_t i : {std::size_t(0), w.size() / 2, w.size() - 1}) {
    auto wp = w, wm = w;
    wp[i] += h;
    wm[i] -= h;
    const double fd = (loss(x, wp, b) - loss(x, wm, b)) / (2 * h);
    CHECK(grads.filters[i] == doctest::Approx(fd).epsilon(1e-6));
  }
  for (const std::size_t i : {std::size_t(0), b.size() - 1}) {
    auto bp = b, bm = b;
    bp[i] += h;
    bm[i] -= h;
    const double fd = (loss(x, w, bp) - loss(x, w, bm)) / (2 * h);
    CHECK(grads.bias[i] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("maxpool forward picks window maxima") {
  Tensor<double> x({2, 2, 1});
  x[0] = 1;
  x[1] = 2;
  x[2] = 3;
  x[3] = 4;
  const auto r = maxpool_forward(x);
  REQUIRE(r.output.dims() == std::vector<int>{1, 1, 1});
  CHECK(r.output[0] == 4.0);

  Tensor<double> y({4, 4, 1});
  for (int i = 0; i < 16; ++i) y[static_cast<std::size_t>(i)] = i + 1;
  const auto r2 = maxpool_forward(y);
  REQUIRE(r2.output.dims() == std::vector<int>{2, 2, 1});
  CHECK(r2.output.at(0, 0, 0) == 6.0);
  CHECK(r2.output.at(0, 1, 0) == 8.0);
  CHECK(r2.output.at(1, 0, 0) == 14.0);
  CHECK(r2.output.at(1, 1, 0) == 16.0);
}

TEST_CASE("maxpool rejects odd spatial dims") {
  Tensor<double> x({3, 4, 1});
  CHECK_THROWS_AS(maxpool_forward(x), ShapeError);
}

TEST_CASE("maxpool backward scatters to the argmax only") {
  Tensor<double> x({2, 2, 1});
  x[0] = 1;
  x[1] = 2;
  x[2] = 3;
  x[3] = 4;
  const auto r = maxpool_forward(x);
  Tensor<double> g({1, 1, 1});
  g[0] = 5.0;
  const auto gi = maxpool_backward(r.indices, g);
  CHECK(gi[0] == 0.0);
  CHECK(gi[1] == 0.0);
  CHECK(gi[2] == 0.0);
  CHECK(gi[3] == 5.0);
}

TEST_CASE("dense forward and backward by hand") {
  Tensor<double> x({2});
  x[0] = 1;
  x[1] = 2;
  Tensor<double> w({2, 2});  // identity
  w.at(0, 0) = 1;
  w.at(1, 1) = 1;
  Tensor<double> b({2});
  b.fill(10.0);
  const auto y = dense_forward(x, w, b);
  CHECK(y[0] == doctest::Approx(11.0));
  CHECK(y[1] == doctest::Approx(12.0));

  Tensor<double> w2({2, 1});
  w2[0] = 3;
  w2[1] = 4;
  Tensor<double> g({1});
  g[0] = 5;
  const auto grads = dense_backward(x, w2, g);
  CHECK(grads.weights.at(0, 0) == doctest::Approx(5.0));   // x0*g
  CHECK(grads.weights.at(1, 0) == doctest::Approx(10.0));  // x1*g
  CHECK(grads.bias[0] == doctest::Approx(5.0));
  CHECK(grads.input[0] == doctest::Approx(15.0));  // w00*g
  CHECK(grads.input[1] == doctest::Approx(20.0));  // w10*g
}

TEST_CASE("relu and its subgradient at zero") {
  Tensor<double> x({3});
  x[0] = -1;
  x[1] = 0;
  x[2] = 2;
  const auto y = relu(x);
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 0.0);
  CHECK(y[2] == 2.0);
  Tensor<double> g({3});
  g[0] = 5;
  g[1] = 6;
  g[2] = 7;
  const auto gi = relu_backward(x, g);
  CHECK(gi[0] == 0.0);
  CHECK(gi[1] == 0.0);  // subgradient at 0 taken as 0
  CHECK(gi[2] == 7.0);
}

TEST_CASE("build_network produces the documented parameter shapes") {
  auto net = build_network<float>(32, 3, ModelConfig{});
  const auto params = net.params();
  REQUIRE(params.size() == 10);
  const std::vector<std::string> names = {"W1", "B1", "W2", "B2", "W3",
                                          "B3", "W4", "B4", "WR", "BR"};
  for (std::size_t i = 0; i < names.size(); ++i)
    CHECK(params[i].name == names[i]);
  CHECK(params[0].value->dims() == std::vector<int>{5, 5, 3, 32});
  CHECK(params[1].value->dims() == std::vector<int>{32});
  CHECK(params[2].value->dims() == std::vector<int>{5, 5, 32, 64});
  CHECK(params[4].value->dims() == std::vector<int>{5, 5, 64, 64});
  CHECK(params[6].value->dims() == std::vector<int>{4096, 10});  // (32/4)^2*64
  CHECK(params[8].value->dims() == std::vector<int>{10, 1});
  CHECK(net.flatten_width() == 4096);
}

TEST_CASE("full-size network flattens to (256/4)^2 * 64") {
  // Geometry only; parameters are allocated but never run here.
  auto net = build_network<float>(256, 3, ModelConfig{});
  CHECK(net.flatten_width() == 262144);
  CHECK(net.params()[6].value->dims() == std::vector<int>{262144, 10});
}

TEST_CASE("build_network validates its inputs") {
  CHECK_THROWS_AS(build_network<float>(30, 3, ModelConfig{}), ConfigError);
  CHECK_THROWS_AS(build_network<float>(0, 3, ModelConfig{}), ConfigError);
  CHECK_THROWS_AS(build_network<float>(32, 0, ModelConfig{}), ConfigError);
  ModelConfig bad;
  bad.kernel = 4;
  CHECK_THROWS_AS(build_network<float>(32, 3, bad), ConfigError);
  ModelConfig bad2;
  bad2.keep_prob = 0.0;
  CHECK_THROWS_AS(build_network<float>(32, 3, bad2), ConfigError);
}

TEST_CASE("zero network predicts zero; eval clamps to the score scale") {
  auto net = build_network<float>(8, 3, ModelConfig{});
  Tensor<float> frame({8, 8, 3});
  frame.fill(0.7f);
  CHECK(net.forward(frame) == 0.0f);  // eval mode, all-zero weights

  // With zero hidden path the prediction equals the regressor bias.
  auto params = net.params();
  Tensor<float>* br = params[9].value;
  (*br)[0] = -1.0f;
  CHECK(net.forward(frame) == 0.0f);  // clamped from below
  (*br)[0] = 7.25f;
  CHECK(net.forward(frame) == 5.0f);  // clamped to L = 5
  (*br)[0] = 3.5f;
  CHECK(net.forward(frame) == 3.5f);

  // Train mode is unclamped.
  net.set_mode(Mode::train);
  Rng rng(1);
  (*br)[0] = 7.25f;
  CHECK(net.forward(frame, &rng) == 7.25f);
}

TEST_CASE("train-mode forward requires an rng for dropout") {
  auto net = build_network<float>(8, 3, ModelConfig{});
  net.set_mode(Mode::train);
  Tensor<float> frame({8, 8, 3});
  CHECK_THROWS_AS(net.forward(frame), StateError);
}

TEST_CASE("backward before forward is a state error") {
  auto net = build_network<float>(8, 3, ModelConfig{});
  CHECK_THROWS_AS(net.backward(1.0f), StateError);
}

TEST_CASE("forward rejects wrong frame dims") {
  auto net = build_network<float>(8, 3, ModelConfig{});
  Tensor<float> bad({8, 8, 1});
  CHECK_THROWS_AS(net.forward(bad), ShapeError);
}

TEST_CASE("glorot init bounds every weight and zeroes every bias") {
  auto net = build_network<double>(16, 3, ModelConfig{});
  Rng rng(2024);
  glorot_init(net, rng);
  auto params = net.params();
  for (const auto& p : params) {
    const auto& dims = p.value->dims();
    if (p.name[0] == 'B') {
      for (std::size_t i = 0; i < p.value->size(); ++i)
        CHECK((*p.value)[i] == 0.0);
      continue;
    }
    const std::size_t fan_in =
        dims.size() == 4 ? static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]
                         : static_cast<std::size_t>(dims[0]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    double lo = 1e9, hi = -1e9;
    for (std::size_t i = 0; i < p.value->size(); ++i) {
      const double w = (*p.value)[i];
      CHECK(std::abs(w) <= bound);
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    // The draw actually spreads over the interval.
    CHECK(lo < -0.5 * bound);
    CHECK(hi > 0.5 * bound);
  }
}

TEST_CASE("glorot init is deterministic given the seed") {
  auto a = build_network<float>(8, 3, ModelConfig{});
  auto b = build_network<float>(8, 3, ModelConfig{});
  Rng ra(5), rb(5);
  glorot_init(a, ra);
  glorot_init(b, rb);
  auto pa = a.params(), pb = b.params();
  for (std::size_t i = 0; i < pa.size(); ++i)
    CHECK(*pa[i].value == *pb[i].value);
}

TEST_CASE("eval forward is repeatable") {
  auto net = build_network<float>(8, 3, ModelConfig{});
  Rng rng(9);
  glorot_init(net, rng);
  Tensor<float> frame({8, 8, 3});
  for (std::size_t i = 0; i < frame.size(); ++i)
    frame[i] = static_cast<float>(rng.uniform());
  const float a = net.forward(frame);
  const float b = net.forward(frame);
  CHECK(a == b);
}

TEST_CASE("cast preserves parameter values") {
  auto net = build_network<float>(8, 3, ModelConfig{});
  Rng rng(12);
  glorot_init(net, rng);
  auto dnet = net.cast<double>();
  auto pf = net.params();
  auto pd = dnet.params();
  REQUIRE(pf.size() == pd.size());
  for (std::size_t i = 0; i < pf.size(); ++i) {
    REQUIRE(pf[i].value->size() == pd[i].value->size());
    for (std::size_t k = 0; k < pf[i].value->size(); ++k)
      CHECK(static_cast<double>((*pf[i].value)[k]) == (*pd[i].value)[k]);
  }
}

TEST_CASE("checkpoint round-trips parameters bit-exactly") {
  const auto dir = temp_dir("ckpt");
  auto net = build_network<float>(8, 3, ModelConfig{});
  Rng rng(77);
  glorot_init(net, rng);
  const std::string path = (dir / "model.fckp").string();
  checkpoint_save(net, path);
  auto loaded = checkpoint_load<float>(path, 8, 3, ModelConfig{});
  auto pa = net.params(), pb = loaded.params();
  for (std::size_t i = 0; i < pa.size(); ++i)
    CHECK(*pa[i].value == *pb[i].value);
  fs::remove_all(dir);
}

TEST_CASE("checkpoint load rejects wrong geometry and corrupt files") {
  const auto dir = temp_dir("ckpt-bad");
  auto net = build_network<float>(8, 3, ModelConfig{});
  Rng rng(78);
  glorot_init(net, rng);
  const std::string path = (dir / "model.fckp").string();
  checkpoint_save(net, path);

  // Different input side changes the dense shape.
  CHECK_THROWS_AS(checkpoint_load<float>(path, 16, 3, ModelConfig{}),
                  CheckpointError);

  {
    std::ifstream in(path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    bytes[0] = 'X';
    std::ofstream out((dir / "bad.fckp"), std::ios::binary);
    out << bytes;
  }
  CHECK_THROWS_AS(checkpoint_load<float>((dir / "bad.fckp").string(), 8, 3,
                                         ModelConfig{}),
                  FormatError);
  CHECK_THROWS_AS(checkpoint_load<float>((dir / "missing.fckp").string(), 8,
                                         3, ModelConfig{}),
                  IoError);
  fs::remove_all(dir);
}
