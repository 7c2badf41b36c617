// Copyright 2026 The QRC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "catch_amalgamated.hpp"
#include "qrc/classifiers.hpp"
#include "qrc/datasets.hpp"
#include "qrc/rng.hpp"

using namespace qrc;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const std::string kMnist = std::string(QRC_SOURCE_DIR) + "/data/mnist/";

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qrc_test_datasets_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

int parse_error_line(const std::string& text) {
  try {
    parse_vowels(text, "inline");
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("noise-free two-class moons lie on their arcs", "[datasets]") {
  Dataset d = make_moons_multiclass(200, 2, 0.0, 3);
  double worst = 0.0;
  for (long i = 0; i < d.size(); ++i) {
    double cx = d.labels(i) == 0 ? 0.0 : 1.0, cy = d.labels(i) == 0 ? 0.0 : 0.5;
    double r = std::hypot(d.X(i, 0) - cx, d.X(i, 1) - cy);
    worst = std::max(worst, std::abs(r - 1.0));
    if (d.labels(i) == 0)
      CHECK(d.X(i, 1) >= -1e-12);
    else
      CHECK(d.X(i, 1) <= 0.5 + 1e-12);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("moons are balanced and validated", "[datasets]") {
  for (std::uint64_t seed : {1, 2, 3}) {
    Dataset d = make_moons_multiclass(603, 5, 0.1, seed);
    auto c = d.class_counts();
    CHECK(*std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end()) <= 1);
  }
  Dataset m4 = make_moons_multiclass(600, 4, 0.1, 1);
  CHECK(m4.class_counts() == std::vector<long>(4, 150));
  CHECK(m4.dims() == 2);
  CHECK_THROWS_AS(make_moons_multiclass(600, 7, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_moons_multiclass(600, 1, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_moons_multiclass(20, 4, 0.1, 1), std::invalid_argument);
}

TEST_CASE("generators are deterministic and reproduce provenance hashes", "[datasets][property]") {
  Dataset a = make_moons_multiclass(600, 4, 0.1, 9), b = make_moons_multiclass(600, 4, 0.1, 9);
  CHECK(a.X == b.X);
  CHECK(a.provenance == b.provenance);
  CHECK(a.provenance.count("content_hash"));
  Dataset c = make_moons_multiclass(600, 4, 0.1, 10);
  CHECK(c.provenance.at("content_hash") != a.provenance.at("content_hash"));
  CHECK(make_blobs(600, 5, 1.0, 10.0, 2).provenance == make_blobs(600, 5, 1.0, 10.0, 2).provenance);
  CHECK(make_vowels_synthetic(37, 4).X == make_vowels_synthetic(37, 4).X);
}

TEST_CASE("blobs", "[datasets]") {
  Dataset d = make_blobs(600, 5, 1.0, 10.0, 1);
  CHECK(d.size() == 600);
  CHECK(d.classes() == 5);
  CHECK(d.class_counts() == std::vector<long>(5, 120));

  Dataset tight = make_blobs(100, 2, 0.0, 10.0, 1);
  Vec f = anova_f(tight.X, tight.labels);
  CHECK(std::isinf(f(0)));
  CHECK(std::isinf(f(1)));

  Dataset sep = make_blobs(600, 5, 0.01, 10.0, 1);
  Mat centers = Mat::Zero(5, 2);
  for (long i = 0; i < sep.size(); ++i) centers.row(sep.labels(i)) += sep.X.row(i) / 120.0;
  double closest = 1e300;
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) closest = std::min(closest, (centers.row(a) - centers.row(b)).norm());
  REQUIRE(closest > 10 * 0.01);
  auto sp = split(sep, SplitSpec{});
  Dataset tr = subset(sep, sp.train), te = subset(sep, sp.test);
  CHECK(evaluate(svm_train(tr.X, tr.labels), te.X, te.labels).accuracy == 1.0);
}

TEST_CASE("synthetic vowels have the benchmark shape", "[datasets]") {
  Dataset v = make_vowels_synthetic(37, 1);
  CHECK(v.size() == 259);
  CHECK(v.dims() == 12);
  CHECK(v.classes() == 7);
  CHECK(v.class_counts() == std::vector<long>(7, 37));
  CHECK(v.class_names.size() == 7);
}

TEST_CASE("vowel CSV round trip", "[datasets]") {
  Dataset v = make_vowels_synthetic(37, 2);
  std::string csv = dataset_to_csv(v);
  CHECK(csv.rfind("# name: vowels\n", 0) == 0);
  CHECK(csv.find("x11,label\n") != std::string::npos);
  auto dir = temp_dir("vowels");
  write_file(dir / "v.csv", csv);
  Dataset back = load_vowels((dir / "v.csv").string());
  CHECK(back.X == v.X);
  CHECK(back.labels == v.labels);
  CHECK(back.class_names == v.class_names);
  CHECK(back.provenance.count("feature_minmax"));
  CHECK(back.provenance.count("warning") == 0);
}

TEST_CASE("vowel parse errors carry line numbers", "[datasets]") {
  CHECK_THROWS_AS(parse_vowels("", "empty"), ParseError);
  CHECK_THROWS_AS(parse_vowels("# only a comment\n", "empty"), ParseError);
  CHECK(parse_error_line("a,b,label\n1,2,x\n1,y\n") == 3);
  CHECK(parse_error_line("# c\na,b,label\n1,2,x\n1,zz,y\n") == 4);
  CHECK(parse_error_line("a,b,label\n1,2,\n") == 2);
  CHECK_THROWS_WITH(parse_vowels("a,b,label\n1,2,x\n1,y\n", "f"), ContainsSubstring("line 3"));
  CHECK_THROWS_AS(load_vowels("/nonexistent/vowels.csv"), std::runtime_error);
}

TEST_CASE("unequal vowel classes warn and proceed", "[datasets]") {
  Dataset d = parse_vowels("f0,f1,label\n1,2,a\n3,4,a\n5,6,b\n", "inline");
  CHECK(d.size() == 3);
  REQUIRE(d.provenance.count("warning"));
  CHECK_THAT(d.provenance.at("warning"), ContainsSubstring("a=2"));
  Dataset numeric = parse_vowels("f0,label\n1,1\n2,0\n", "inline");
  CHECK(numeric.labels(0) == 1);
  CHECK(numeric.class_names == std::vector<std::string>{"0", "1"});
}

TEST_CASE("IDX round trip and corruption", "[datasets]") {
  auto dir = temp_dir("idx");
  Mat img(3, 4);
  img << 0, 1, 0.5, 0.25, 1, 1, 0, 0, 0.2, 0.4, 0.6, 0.8;
  img = (img * 255).array().round() / 255;
  IVec lab(3);
  lab << 7, 0, 3;
  write_idx_images((dir / "i.idx").string(), img, 2, 2);
  write_idx_labels((dir / "l.idx").string(), lab);
  CHECK((read_idx_images((dir / "i.idx").string()) - img).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(read_idx_labels((dir / "l.idx").string()) == lab);
  CHECK_THROWS_WITH(read_idx_images((dir / "l.idx").string()), ContainsSubstring("magic"));
  CHECK_THROWS_WITH(read_idx_labels((dir / "i.idx").string()), ContainsSubstring("magic"));
  auto size = std::filesystem::file_size(dir / "i.idx");
  std::filesystem::resize_file(dir / "i.idx", size - 1);
  CHECK_THROWS_WITH(read_idx_images((dir / "i.idx").string()), ContainsSubstring("truncated"));
  std::filesystem::resize_file(dir / "i.idx", 6);
  CHECK_THROWS_WITH(read_idx_images((dir / "i.idx").string()), ContainsSubstring("truncated"));
}

TEST_CASE("MNIST subset shapes", "[datasets]") {
  Dataset two = load_mnist(kMnist + "images.idx", kMnist + "labels.idx", 50, {0, 1}, 1);
  CHECK(two.size() == 100);
  CHECK(two.dims() == 784);
  CHECK(two.classes() == 2);
  CHECK(two.X.maxCoeff() <= 1.0);
  CHECK(two.X.minCoeff() >= 0.0);
  SplitSpec spec;
  auto full = load_mnist_pca(kMnist + "images.idx", kMnist + "labels.idx", 300, 100, 1, spec);
  CHECK(full.data.size() == 3000);
  CHECK(full.data.dims() == 100);
  CHECK(full.data.classes() == 10);
}

TEST_CASE("MNIST PCA is fitted on training rows only", "[datasets]") {
  SplitSpec spec;
  spec.seed = 4;
  auto m = load_mnist_pca(kMnist + "images.idx", kMnist + "labels.idx", 100, 784, 4, spec);
  Dataset raw = load_mnist(kMnist + "images.idx", kMnist + "labels.idx", 100, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, 4);
  Dataset train = subset(raw, m.split.train);
  CHECK((m.pca.mean - train.X.colwise().mean().transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Mat back = m.pca.inverse_transform(subset(m.data, m.split.train).X);
  CHECK((back - train.X).cwiseAbs().maxCoeff() < 1e-6);
  Mat once = m.pca.transform(raw.X);
  CHECK((once - m.data.X).cwiseAbs().maxCoeff() < 1e-9);
  Mat twice = m.pca.transform(m.pca.inverse_transform(once));
  CHECK((twice - once).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("MNIST file errors", "[datasets]") {
  CHECK_THROWS_AS(load_mnist(kMnist + "labels.idx", kMnist + "labels.idx", 10, {0, 1}, 1), std::runtime_error);
  CHECK_THROWS_AS(load_mnist(kMnist + "images.idx", kMnist + "labels.idx", 100000, {0, 1}, 1), std::exception);
}

TEST_CASE("stratified split sizes and determinism", "[datasets]") {
  Dataset d = make_moons_multiclass(600, 4, 0.1, 1);
  SplitSpec spec;
  auto a = split(d, spec), b = split(d, spec);
  CHECK(a.train.size() == 540);
  CHECK(a.test.size() == 60);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  spec.seed = 2;
  CHECK(split(d, spec).test != a.test);
  std::set<int> all(a.train.begin(), a.train.end());
  all.insert(a.test.begin(), a.test.end());
  CHECK(all.size() == 600);
  Dataset tr = subset(d, a.train);
  for (long c : tr.class_counts()) CHECK(std::abs(c - 0.9 * 150) <= 1.0);
}

TEST_CASE("train, validation and test protocol", "[datasets]") {
  Dataset d = make_blobs(600, 5, 1.0, 10.0, 1);
  SplitSpec spec;
  spec.train = 0.84;
  spec.validation = 0.08;
  spec.test = 0.08;
  auto s = split(d, spec);
  CHECK(s.validation.size() == 48);
  CHECK(s.test.size() == 48);
  CHECK(s.train.size() == 504);
  for (long c : subset(d, s.validation).class_counts()) CHECK(std::abs(c - 0.08 * 120) <= 1.0);
  spec.test = 0.5;
  CHECK_THROWS_AS(split(d, spec), std::invalid_argument);
}

TEST_CASE("a class missing from train is an error", "[datasets]") {
  Dataset d;
  d.name = "tiny";
  d.X = Mat::Zero(11, 1);
  d.labels = IVec::Zero(11);
  d.labels(10) = 1;
  d.class_names = {"a", "b"};
  SplitSpec spec;
  spec.train = 0.5;
  spec.test = 0.5;
  CHECK_THROWS_AS(split(d, spec), std::invalid_argument);
}

TEST_CASE("coherent budget follows Poisson linearity exactly", "[datasets]") {
  const int m = 8;
  const double eta = 0.6, det_eff = 0.71, target = 1.76e5;
  const long f = 5000;
  auto det = DetectionModel::centered(m, m, det_eff, 0.05);
  for (std::string profile : {"cw", "broadband"}) {
    SourceProfile p;
    p.coherent = profile;
    auto cal = calibrate_budget({SourceKind::coherent}, target, {f}, m, Vec::Constant(m, eta), det, p);
    double total = cal.sources[0].source.alpha.cwiseAbs2().sum();
    CHECK_THAT(total, WithinRel(target / (f * eta * det_eff), 1e-12));
    CHECK_THAT(cal.sources[0].expected_total, WithinRel(target, 1e-12));
  }
}

TEST_CASE("all sources meet the budget within 2 percent", "[datasets]") {
  const int m = 32;
  auto det = DetectionModel::centered(m, m, 0.71, 0.05);
  std::vector<SourceKind> kinds = {SourceKind::squeezed, SourceKind::coherent, SourceKind::thermal,
                                   SourceKind::supercontinuum};
  for (double target : {1.76e5, 3.7e5}) {
    auto cal = calibrate_budget(kinds, target, {5000, 5000, 5000, 5000}, m, Vec::Constant(m, 0.6), det,
                                SourceProfile{});
    CHECK(cal.max_relative_spread() <= 0.02);
    for (const auto& s : cal.sources) CHECK_THAT(s.expected_total, WithinRel(target, 0.02));
  }
}

TEST_CASE("budget totals agree with Monte-Carlo for classical sources", "[datasets]") {
  const int m = 8;
  const long f = 4000;
  auto det = DetectionModel::centered(m, m, 0.71, 0.0);
  Vec eta = Vec::Constant(m, 0.6);
  auto cal = calibrate_budget({SourceKind::coherent, SourceKind::thermal, SourceKind::supercontinuum}, 2.0e4,
                              {f, f, f}, m, eta, det, SourceProfile{});
  for (std::size_t i = 0; i < cal.sources.size(); ++i) {
    ReservoirRun run{cal.sources[i].source, {CMat::Identity(m, m)}, eta};
    double mc = total_counts(*sample_frames(run, det, f, SamplingMode::classical_mixture, 50 + i).frames);
    double sd = std::sqrt(f * pixel_moments(run, det).sigma.sum());
    CHECK(std::abs(mc - cal.sources[i].expected_total) < 3.0 * sd);
  }
}

TEST_CASE("an unreachable squeezed budget names the cap", "[datasets]") {
  auto det = DetectionModel::centered(4, 4, 0.71, 0.05);
  SourceProfile p;
  p.r_cap = 0.5;
  CHECK_THROWS_WITH(
      calibrate_budget({SourceKind::squeezed}, 1e6, {100}, 4, Vec::Constant(4, 0.6), det, p),
      ContainsSubstring("r_max = 0.5"));
  CHECK_THROWS_AS(calibrate_budget({SourceKind::coherent}, 0.0, {100}, 4, Vec::Constant(4, 0.6), det, p),
                  std::invalid_argument);
}
