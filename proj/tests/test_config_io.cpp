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

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "catch_amalgamated.hpp"
#include "qrc/config.hpp"
#include "qrc/experiment.hpp"
#include "qrc/io.hpp"
#include "qrc/rng.hpp"

using namespace qrc;
using Catch::Matchers::ContainsSubstring;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("qrc_test_config_io_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("INI parsing and typed access", "[config]") {
  Config c = Config::parse(
      "top = 1\n"
      "[budget]\n"
      "target_photons = 1.76e5\n"
      "frames = 5000\n"
      "[features]\n"
      "kind = covariance, mean_field\n"
      "k_grid = 16, 32,64\n"
      "select = true\n");
  CHECK(c.raw("top") == "1");
  CHECK(c.get_double("budget.target_photons", 0) == 1.76e5);
  CHECK(c.get_long("budget.frames", 0) == 5000);
  CHECK(c.get_bool("features.select", false));
  CHECK(split_list(c.raw("features.kind")) == std::vector<std::string>{"covariance", "mean_field"});
  CHECK(c.get_longs("features.k_grid", {}) == std::vector<long>{16, 32, 64});
  CHECK(c.get_double("missing.key", 2.5) == 2.5);
  CHECK_THROWS_AS(c.raw("missing.key"), std::out_of_range);
  CHECK(c.get_long("budget.target_photons", 0) == 176000);
  c.set("budget.frames", "12.5");
  CHECK_THROWS_AS(c.get_long("budget.frames", 0), std::invalid_argument);
  CHECK_THROWS_AS(c.get_bool("budget.frames", false), std::invalid_argument);
}

TEST_CASE("malformed INI reports the line", "[config]") {
  try {
    Config::parse("[a]\nx = 1\nthis line has no equals sign\n", "bad.ini");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK_THAT(e.what(), ContainsSubstring("bad.ini"));
  }
}

TEST_CASE("layers, includes and overrides", "[config]") {
  auto dir = temp_dir("layers");
  std::filesystem::create_directories(dir / "sub");
  write_file(dir / "base.ini", "[a]\nx = 1\ny = 2\n[b]\nz = base\n");
  write_file(dir / "sub" / "child.ini", "include = ../base.ini\n[a]\ny = 20\n");
  write_file(dir / "top.ini", "[b]\nz = top\n");
  Config c = Config::load_layers({(dir / "sub" / "child.ini").string(), (dir / "top.ini").string()});
  CHECK(c.raw("a.x") == "1");
  CHECK(c.raw("a.y") == "20");
  CHECK(c.raw("b.z") == "top");
  CHECK_FALSE(c.has("include"));
  c.apply_override("a.x = 99");
  CHECK(c.get_long("a.x", 0) == 99);
  CHECK_THROWS_AS(c.apply_override("no-equals"), std::invalid_argument);

  write_file(dir / "loop1.ini", "include = loop2.ini\n");
  write_file(dir / "loop2.ini", "include = loop1.ini\n");
  CHECK_THROWS_WITH(Config::load_layers({(dir / "loop1.ini").string()}), ContainsSubstring("cycle"));
  CHECK_THROWS_AS(Config::load((dir / "missing.ini").string()), std::runtime_error);
}

TEST_CASE("config text round trip", "[config]") {
  Config c;
  c.set("zeta", "last");
  c.set("b.key", "value with spaces");
  c.set("a.key", "1.5");
  std::string ini = c.to_ini();
  CHECK(ini.rfind("zeta = last\n", 0) == 0);
  CHECK(ini.find("[a]") < ini.find("[b]"));
  CHECK(Config::parse(ini).values() == c.values());
}

TEST_CASE("experiment config round trip and validation", "[config]") {
  ExperimentConfig e;
  e.task = "blobs";
  e.classes = 5;
  e.kinds = {"covariance", "mean_field", "raw"};
  e.sweep_axis = "frames";
  e.sweep_values = {500, 5000};
  e.svm_c = 0.3;
  e.k_grid = {8, 16};
  Config c = e.to_config();
  ExperimentConfig back = ExperimentConfig::from_config(Config::parse(c.to_ini()));
  CHECK(back.to_config().to_ini() == c.to_ini());
  CHECK(back.hash() == e.hash());
  back.svm_c = 0.31;
  CHECK(back.hash() != e.hash());

  Config bad = c;
  bad.set("classifier.kernel", "rbf");
  CHECK_THROWS_WITH(ExperimentConfig::from_config(bad), ContainsSubstring("classifier.kernel"));

  ExperimentConfig v;
  v.train = 0.95;
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  v = ExperimentConfig{};
  v.sweep_axis = "temperature";
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  v = ExperimentConfig{};
  v.kinds = {"spectrum"};
  CHECK_THROWS_AS(v.validate(), std::invalid_argument);
  CHECK_NOTHROW(ExperimentConfig{}.validate());
}

TEST_CASE("shipped configs load and validate", "[config]") {
  const std::string dir = std::string(QRC_SOURCE_DIR) + "/configs/";
  for (const char* name : {"base.ini", "moons.ini", "blobs.ini", "vowels.ini", "mnist.ini", "modes_sweep.ini"}) {
    INFO(name);
    auto e = ExperimentConfig::from_config(Config::load_layers({dir + name}));
    CHECK_NOTHROW(e.validate());
  }
}

TEST_CASE("frame files round trip bit for bit", "[io]") {
  auto dir = temp_dir("frames");
  Rng rng(1);
  std::normal_distribution<double> nd;
  FrameSet fs{RowMat(17, 5), 0xfeedbeefULL};
  for (long i = 0; i < fs.frames.size(); ++i) fs.frames.data()[i] = std::abs(nd(rng)) * 1e3;
  auto path = (dir / "f.qrcf").string();
  write_frames(path, fs);
  FrameSet back = read_frames(path);
  CHECK(back.frames == fs.frames);
  CHECK(back.seed == fs.seed);
  CHECK(std::filesystem::file_size(path) == 4 + 4 + 4 + 8 + 4 + 8 + 8 + 17 * 5 * 8);
  CHECK(slurp(path).substr(0, 4) == "QRCF");

  MomentEstimate est{Vec::LinSpaced(4, 0, 3), Mat::Random(4, 4), 5000, 42};
  write_estimate((dir / "e.qrcf").string(), est);
  MomentEstimate eb = read_estimate((dir / "e.qrcf").string());
  CHECK(eb.mu == est.mu);
  CHECK(eb.sigma == est.sigma);
  CHECK(eb.frames == 5000);
  CHECK(eb.seed == 42);
  CHECK_THROWS_AS(read_frames((dir / "e.qrcf").string()), std::runtime_error);
  CHECK_THROWS_AS(read_estimate(path), std::runtime_error);
}

TEST_CASE("corrupt frame files are rejected", "[io]") {
  auto dir = temp_dir("corrupt");
  FrameSet fs{RowMat::Ones(3, 2), 1};
  auto path = (dir / "f.qrcf").string();
  write_frames(path, fs);
  std::string bytes = slurp(path);
  write_file(dir / "trailing.qrcf", bytes + "x");
  CHECK_THROWS_AS(read_frames((dir / "trailing.qrcf").string()), std::runtime_error);
  write_file(dir / "short.qrcf", bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_frames((dir / "short.qrcf").string()), std::runtime_error);
  std::string magic = bytes;
  magic[0] = 'X';
  write_file(dir / "magic.qrcf", magic);
  CHECK_THROWS_AS(read_frames((dir / "magic.qrcf").string()), std::runtime_error);
}

TEST_CASE("mask, selection and model text round trips", "[io]") {
  auto enc = EncoderConfig::defaults(3);
  Vec x(3);
  x << 0.25, -0.5, 0.125;
  PhaseMask m = encode_features(x, enc);
  PhaseMask mb = mask_from_text(mask_to_text(m));
  CHECK(mb.values == m.values);
  CHECK(mb.d == 3);
  CHECK(mb.chirp == m.chirp);

  SelectionMask s;
  s.indices = {1, 4, 9};
  s.k = 3;
  SelectionMask sb = selection_from_text(selection_to_text(s, 10));
  CHECK(sb.indices == s.indices);
  CHECK(sb.k == 3);
  CHECK_THROWS_AS(selection_from_text("qrc-selection 1\nk 2 features 10\n4\n1\n"), ParseError);

  Rng rng(2);
  std::normal_distribution<double> nd;
  Mat xs(60, 4);
  IVec y(60);
  for (int i = 0; i < 60; ++i) {
    y(i) = i % 3;
    for (int j = 0; j < 4; ++j) xs(i, j) = nd(rng) + (j == y(i) ? 2.0 : 0.0);
  }
  for (const LinearModel& model : {svm_train(xs, y), ridge_train(xs, y, 0.5)}) {
    LinearModel back = model_from_text(model_to_text(model));
    CHECK(back.kind == model.kind);
    CHECK(back.W == model.W);
    CHECK(back.b == model.b);
    CHECK(back.pairs == model.pairs);
    REQUIRE(back.duals.size() == model.duals.size());
    for (std::size_t i = 0; i < back.duals.size(); ++i) {
      CHECK(back.duals[i].support == model.duals[i].support);
      CHECK(back.duals[i].coef == model.duals[i].coef);
    }
    CHECK(back.predict(xs) == model.predict(xs));
  }
  CHECK_THROWS_AS(model_from_text("qrc-model 2\n"), ParseError);
}

TEST_CASE("doubles print in shortest round-trip form", "[io][property]") {
  Rng rng(3);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int t = 0; t < 10000; ++t) {
    std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::nan("")) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("CSV escaping", "[io]") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("text writes are atomic replacements", "[io]") {
  auto dir = temp_dir("text");
  auto path = (dir / "t.txt").string();
  write_text(path, "first");
  write_text(path, "second");
  CHECK(read_text(path) == "second");
  int files = 0;
  for (auto& e : std::filesystem::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 1);
  CHECK_THROWS_AS(read_text((dir / "none").string()), std::runtime_error);
}
