#include <cmath>
#include <random>

#include "doctest.h"
#include "stt/error.hpp"
#include "stt/eval.hpp"
#include "stt/pipeline.hpp"
#include "synth.hpp"

using namespace stt;
namespace st = stt::testing;

namespace {

void check_identities(const EvalReport& r) {
  std::size_t sum = 0, diag = 0;
  for (std::size_t i = 0; i < r.confusion().size(); ++i) {
    for (std::size_t j = 0; j < r.confusion()[i].size(); ++j) sum += r.confusion()[i][j];
    diag += r.confusion()[i][i];
  }
  CHECK(sum == r.total());
  CHECK(diag == r.correct());
  CHECK(r.accuracy() >= 0.0);
  CHECK(r.accuracy() <= 1.0);
}

}  // namespace

TEST_CASE("counting") {
  EvalReport r({"a", "b"});
  r.record("a", std::string("a"));
  r.record("b", std::string("a"));
  CHECK(r.total() == 2);
  CHECK(r.correct() == 1);
  CHECK(r.accuracy() == 0.5);
  CHECK(r.confusion()[1][0] == 1);
  CHECK(r.confusion()[0][0] == 1);
  check_identities(r);

  r.record("b", std::nullopt);
  CHECK(r.no_speech() == 1);
  CHECK(r.confusion()[1][2] == 1);
  CHECK(r.per_label().at("b").total == 2);
  CHECK(r.per_label().at("b").correct == 0);
  check_identities(r);

  CHECK_THROWS_AS(r.record("zzz", std::string("a")), Error);
}

TEST_CASE("counting identities under random outcomes") {
  std::mt19937 rng(3);
  const std::vector<std::string> labels = {"x", "y", "z"};
  EvalReport r(labels);
  for (int i = 0; i < 500; ++i) {
    const auto& truth = labels[rng() % 3];
    if (rng() % 10 == 0) {
      r.record(truth, std::nullopt);
    } else {
      r.record(truth, labels[rng() % 3]);
    }
  }
  check_identities(r);
}

TEST_CASE("text and CSV rendering") {
  EvalReport r({"one", "two"});
  r.record("one", std::string("one"));
  r.record("two", std::string("one"));
  const auto text = r.to_text();
  CHECK(text.find("accuracy 0.500 (1/2)") != std::string::npos);
  CHECK(r.confusion_csv() == "truth,one,two,(none)\none,1,0,0\ntwo,1,0,0\n");
}

TEST_CASE("evaluate on datasets") {
  st::TempDir dir;
  const auto data = st::make_dataset({"alpha", "beta", "gamma"}, 2, 91);
  st::write_dataset(dir / "train", data.labels, data.train);
  const auto model = train_from_dataset(dir / "train");

  SUBCASE("training set scores 1.0") {
    const auto r = evaluate(model, dir / "train");
    CHECK(r.accuracy() == 1.0);
    CHECK(r.total() == 6);
    check_identities(r);
  }
  SUBCASE("empty test directory") {
    std::filesystem::create_directories(dir / "empty");
    try {
      evaluate(model, dir / "empty");
      FAIL("expected EmptyDataset");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kEmptyDataset);
    }
  }
  SUBCASE("unknown label") {
    st::write_dataset(dir / "other", {"delta"}, {data.train[0]});
    try {
      evaluate(model, dir / "other");
      FAIL("expected UnknownLabel");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kUnknownLabel);
    }
  }
  SUBCASE("silent files count as errors") {
    st::write_dataset(dir / "mixed", {"alpha"}, {data.train[0]});
    write_wav(dir / "mixed" / "alpha" / "silent.wav", st::silence(8000));
    const auto r = evaluate(model, dir / "mixed");
    CHECK(r.total() == 3);
    CHECK(r.correct() == 2);
    CHECK(r.no_speech() == 1);
    check_identities(r);
  }
}

TEST_CASE("feature_correlation") {
  std::mt19937 rng(6);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(50), w(50), neg(50), affine(50);
    for (std::size_t i = 0; i < 50; ++i) {
      v[i] = g(rng);
      w[i] = g(rng);
      neg[i] = -v[i];
    }
    CHECK(feature_correlation(v, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(feature_correlation(v, neg) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(feature_correlation(v, w) == doctest::Approx(feature_correlation(w, v)).epsilon(1e-12));
    const double a = std::abs(g(rng)) + 0.1, b = g(rng);
    for (std::size_t i = 0; i < 50; ++i) affine[i] = a * w[i] + b;
    CHECK(feature_correlation(v, affine) == doctest::Approx(feature_correlation(v, w)).epsilon(1e-9));
  }
  const std::vector<double> flat(10, 3.0), ramp = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK(feature_correlation(flat, ramp) == 0.0);
  CHECK_THROWS_AS(feature_correlation(flat, std::vector<double>(3, 1.0)), Error);
}
