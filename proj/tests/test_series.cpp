#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers/testutil.hpp"
#include "wartem/rng.hpp"
#include "wartem/series.hpp"

using namespace wartem;

TEST_SUITE("series") {

TEST_CASE("load parses labels and values") {
  const auto path = testutil::temp_path("basic.tsv");
  testutil::write_file(path, "1\t0.0\t1.0\t2.0\t3.0\n2\t3.0\t2.0\t1.0\t0.0\n");
  const LabeledDataset d = load_ucr_tsv(path);
  CHECK(d.size() == 2);
  CHECK(d.length == 4);
  CHECK(d.class_count == 2);
  CHECK(d.labels == std::vector<int>{0, 1});
  CHECK(d.series[0] == TimeSeries{0.0, 1.0, 2.0, 3.0});
  CHECK(d.series[1] == TimeSeries{3.0, 2.0, 1.0, 0.0});
}

TEST_CASE("load remaps labels in first-occurrence order") {
  const auto path = testutil::temp_path("remap.tsv");
  testutil::write_file(path, "3\t0\t0\t0\t0\n7\t1\t1\t1\t1\n3\t2\t2\t2\t2\n");
  const LabeledDataset d = load_ucr_tsv(path);
  CHECK(d.labels == std::vector<int>{0, 1, 0});
  CHECK(d.class_count == 2);
  CHECK(d.original_labels == std::vector<double>{3.0, 7.0, 3.0});
}

TEST_CASE("load accepts CRLF and exponent notation") {
  const auto path = testutil::temp_path("crlf.tsv");
  testutil::write_file(path, "1\t1.0e0\t-2.5E-1\t0\t4\r\n1\t0\t0\t0\t1e2\r\n");
  const LabeledDataset d = load_ucr_tsv(path);
  CHECK(d.series[0][1] == -0.25);
  CHECK(d.series[1][3] == 100.0);
}

TEST_CASE("load rejects ragged rows naming the line") {
  const auto path = testutil::temp_path("ragged.tsv");
  testutil::write_file(path, "1\t0\t1\t2\t3\n2\t0\t1\t2\t3\t4\n");
  CHECK_THROWS_WITH_AS(load_ucr_tsv(path), doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("load rejects non-numeric fields") {
  const auto path = testutil::temp_path("nonnum.tsv");
  testutil::write_file(path, "1\t0\tabc\t2\t3\n1\t0\t1\t2\t3\n");
  CHECK_THROWS_WITH_AS(load_ucr_tsv(path), doctest::Contains("abc"), std::runtime_error);
}

TEST_CASE("load rejects tiny datasets") {
  const auto one_row = testutil::temp_path("onerow.tsv");
  testutil::write_file(one_row, "1\t0\t1\t2\t3\n");
  CHECK_THROWS_WITH_AS(load_ucr_tsv(one_row), doctest::Contains("too small"), std::runtime_error);

  const auto short_series = testutil::temp_path("short.tsv");
  testutil::write_file(short_series, "1\t0\t1\t2\n2\t0\t1\t2\n");
  CHECK_THROWS_AS(load_ucr_tsv(short_series), std::runtime_error);
}

TEST_CASE("load rejects fractional labels") {
  const auto path = testutil::temp_path("fraclabel.tsv");
  testutil::write_file(path, "1.5\t0\t1\t2\t3\n1\t0\t1\t2\t3\n");
  CHECK_THROWS_AS(load_ucr_tsv(path), std::runtime_error);
}

TEST_CASE("write then load round-trips values bit-exactly") {
  LabeledDataset d;
  d.length = 6;
  d.class_count = 2;
  Engine rng(20240601);
  for (int i = 0; i < 8; ++i) {
    TimeSeries t;
    for (int j = 0; j < 6; ++j) t.push_back(rng.normal() * std::pow(10.0, rng.uniform_int(-8, 8)));
    t[0] = 1.0 / 3.0;  // non-terminating binary fraction
    d.series.push_back(t);
    d.labels.push_back(i % 2);
    d.original_labels.push_back(i % 2);
  }
  const auto path = testutil::temp_path("roundtrip.tsv");
  write_ucr_tsv(path, d);
  const LabeledDataset loaded = load_ucr_tsv(path);
  REQUIRE(loaded.size() == d.size());
  for (int i = 0; i < d.size(); ++i) {
    CHECK(loaded.series[i] == d.series[i]);  // bitwise
    CHECK(loaded.labels[i] == d.labels[i]);
  }
}

TEST_CASE("znormalize matches the hand-computed oracle") {
  // (x - mean) / population std for [1,2,3]: mean 2, std sqrt(2/3)
  const TimeSeries out = znormalize({1.0, 2.0, 3.0});
  CHECK(out[0] == doctest::Approx(-1.2247).epsilon(1e-4));
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == doctest::Approx(1.2247).epsilon(1e-4));
}

TEST_CASE("znormalize maps constant series to zeros") {
  CHECK(znormalize({5.0, 5.0, 5.0, 5.0}) == TimeSeries{0.0, 0.0, 0.0, 0.0});
}

TEST_CASE("znormalize is idempotent") {
  Engine rng(7);
  TimeSeries t;
  for (int i = 0; i < 32; ++i) t.push_back(rng.normal());
  const TimeSeries once = znormalize(t);
  const TimeSeries twice = znormalize(once);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-12));
}

TEST_CASE("znormalize output moments") {
  Engine rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    TimeSeries t;
    for (int i = 0; i < 50; ++i) t.push_back(rng.uniform_real(-5.0, 5.0));
    const TimeSeries z = znormalize(t);
    double mean = 0.0;
    for (const double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    double var = 0.0;
    for (const double v : z) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(z.size()));
    CHECK(std::abs(mean) < 1e-10);
    CHECK(std::abs(sd - 1.0) < 1e-10);
  }
}

TEST_CASE("holdout_split sizes and determinism") {
  LabeledDataset d;
  d.length = 4;
  d.class_count = 1;
  for (int i = 0; i < 10; ++i) {
    d.series.push_back({double(i), 0, 0, 0});
    d.labels.push_back(0);
    d.original_labels.push_back(0);
  }
  const auto [rest, held] = holdout_split(d, 0.1, 7);
  CHECK(rest.size() == 9);
  CHECK(held.size() == 1);

  const auto [rest2, held2] = holdout_split(d, 0.1, 7);
  CHECK(rest2.series == rest.series);
  CHECK(held2.series == held.series);
}

TEST_CASE("split_indices is disjoint and exhaustive") {
  const auto [kept, held] = split_indices(100, 0.2, 3);
  CHECK(kept.size() == 80);
  CHECK(held.size() == 20);
  std::set<int> all(kept.begin(), kept.end());
  all.insert(held.begin(), held.end());
  CHECK(all.size() == 100);
  CHECK(*all.begin() == 0);
  CHECK(*all.rbegin() == 99);
}

TEST_CASE("split_indices rejects bad fractions") {
  CHECK_THROWS_AS(split_indices(10, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_indices(10, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split_indices(10, -0.5, 1), std::invalid_argument);
}

}  // TEST_SUITE
