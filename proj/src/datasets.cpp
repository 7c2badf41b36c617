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

#include "qrc/datasets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "qrc/rng.hpp"

namespace qrc {

namespace {

constexpr double kPi = 3.141592653589793;

std::string content_hash(const Mat& x, const IVec& y) {
  std::uint64_t h = fnv1a(x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
  h = fnv1a(y.data(), sizeof(int) * static_cast<std::size_t>(y.size()), h);
  return hex64(h);
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void finish(Dataset& ds) {
  ds.provenance["content_hash"] = content_hash(ds.X, ds.labels);
  if (ds.class_names.empty())
    for (int c = 0; c < ds.classes(); ++c) ds.class_names.push_back(std::to_string(c));
  ds.validate();
}

std::vector<long> balanced_counts(long n, int classes) {
  std::vector<long> per(classes, n / classes);
  for (int c = 0; c < n % classes; ++c) ++per[c];
  return per;
}

}  // namespace

int Dataset::classes() const { return labels.size() ? labels.maxCoeff() + 1 : 0; }

std::vector<long> Dataset::class_counts() const {
  std::vector<long> n(classes(), 0);
  for (long i = 0; i < labels.size(); ++i) ++n[labels(i)];
  return n;
}

void Dataset::validate() const {
  if (X.rows() != labels.size()) throw ContractViolation("dataset: row count and label count differ");
  if (!X.allFinite()) throw ContractViolation("dataset '" + name + "' contains non-finite values");
  if (labels.size() && labels.minCoeff() < 0) throw ContractViolation("dataset: negative label");
  for (long n : class_counts())
    if (n == 0) throw ContractViolation("dataset '" + name + "' has an empty class");
}

Dataset make_moons_multiclass(long n, int classes, double noise, std::uint64_t seed) {
  if (classes < 2 || classes > 6) throw std::invalid_argument("moons: classes must be in 2..6");
  if (n < 10L * classes) throw std::invalid_argument("moons: need at least 10 samples per class");
  if (noise < 0) throw std::invalid_argument("moons: noise must be >= 0");
  Rng rng(derive_seed(seed, "moons"));
  std::normal_distribution<double> nd(0.0, 1.0);
  Dataset ds;
  ds.name = "moons";
  ds.X.resize(n, 2);
  ds.labels.resize(n);
  auto per = balanced_counts(n, classes);
  long row = 0;
  for (int c = 0; c < classes; ++c) {
    double a = 2.0 * kPi * c / classes, ca = std::cos(a), sa = std::sin(a);
    for (long i = 0; i < per[c]; ++i, ++row) {
      double t = per[c] > 1 ? kPi * i / (per[c] - 1) : 0.0;
      double px = std::cos(t) - 0.5, py = std::sin(t) - 0.25;
      ds.X(row, 0) = ca * px - sa * py + 0.5;
      ds.X(row, 1) = sa * px + ca * py + 0.25;
      ds.labels(row) = c;
    }
  }
  if (noise > 0)
    for (long i = 0; i < n; ++i)
      for (int j = 0; j < 2; ++j) ds.X(i, j) += noise * nd(rng);
  ds.provenance = {{"generator", "moons"}, {"n", std::to_string(n)}, {"classes", std::to_string(classes)},
                   {"noise", num(noise)}, {"seed", std::to_string(seed)}};
  finish(ds);
  return ds;
}

Dataset make_blobs(long n, int classes, double sigma, double box, std::uint64_t seed) {
  if (classes < 2 || classes > 6) throw std::invalid_argument("blobs: classes must be in 2..6");
  if (n < 10L * classes) throw std::invalid_argument("blobs: need at least 10 samples per class");
  if (sigma < 0 || box <= 0) throw std::invalid_argument("blobs: sigma must be >= 0 and box > 0");
  Rng rng(derive_seed(seed, "blobs"));
  std::uniform_real_distribution<double> ud(-box, box);
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat centers(classes, 2);
  for (int c = 0; c < classes; ++c)
    for (int j = 0; j < 2; ++j) centers(c, j) = ud(rng);
  Dataset ds;
  ds.name = "blobs";
  ds.X.resize(n, 2);
  ds.labels.resize(n);
  for (long i = 0; i < n; ++i) {
    int c = static_cast<int>(i % classes);
    ds.labels(i) = c;
    for (int j = 0; j < 2; ++j) ds.X(i, j) = centers(c, j) + sigma * nd(rng);
  }
  ds.provenance = {{"generator", "blobs"}, {"n", std::to_string(n)}, {"classes", std::to_string(classes)},
                   {"sigma", num(sigma)}, {"box", num(box)}, {"seed", std::to_string(seed)}};
  finish(ds);
  return ds;
}

Dataset make_vowels_synthetic(int per_class, std::uint64_t seed) {
  if (per_class < 2) throw std::invalid_argument("vowels: per_class must be >= 2");
  // Adult-male steady-state targets (Hz) and durations (ms).
  struct Vowel {
    const char* name;
    double f1, f2, f3, dur;
  };
  // Sorted by name so a CSV round trip keeps the label indices.
  const std::array<Vowel, 7> vowels{{{"had", 588, 1952, 2601, 278},
                                     {"head", 580, 1799, 2605, 189},
                                     {"heed", 342, 2322, 3000, 243},
                                     {"hid", 427, 2034, 2684, 192},
                                     {"hod", 768, 1333, 2522, 267},
                                     {"hud", 623, 1200, 2550, 188},
                                     {"whod", 378, 997, 2343, 237}}};
  const std::array<double, 3> group_f0{131, 220, 237};
  const std::array<double, 3> group_scale{1.0, 1.16, 1.28};
  const std::array<double, 3> neutral{500, 1500, 2500};
  Rng rng(derive_seed(seed, "vowels"));
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_int_distribution<int> group(0, 2);
  Dataset ds;
  ds.name = "vowels";
  const long n = 7L * per_class;
  ds.X.resize(n, 12);
  ds.labels.resize(n);
  long row = 0;
  for (int c = 0; c < 7; ++c) {
    const Vowel& v = vowels[c];
    std::array<double, 3> target{v.f1, v.f2, v.f3};
    for (int t = 0; t < per_class; ++t, ++row) {
      int g = group(rng);
      double speaker = group_scale[g] * std::exp(0.05 * nd(rng));
      double f0 = group_f0[g] * std::exp(0.08 * nd(rng));
      std::array<double, 3> steady;
      for (int k = 0; k < 3; ++k) steady[k] = target[k] * speaker * std::exp(0.04 * nd(rng));
      // Columns: F0, F1..F3 steady, F1..F3 at 20% and 80% of the vowel, F4, duration.
      ds.X(row, 0) = f0;
      for (int k = 0; k < 3; ++k) {
        double onset = steady[k] + (0.10 + 0.03 * nd(rng)) * (neutral[k] * speaker - steady[k]);
        double offset = steady[k] + (0.20 + 0.05 * nd(rng)) * (neutral[k] * speaker - steady[k]);
        ds.X(row, 1 + k) = steady[k];
        ds.X(row, 4 + k) = onset;
        ds.X(row, 7 + k) = offset;
      }
      ds.X(row, 10) = 3500.0 * speaker * std::exp(0.04 * nd(rng));
      ds.X(row, 11) = v.dur * std::exp(0.15 * nd(rng));
      ds.labels(row) = c;
    }
    ds.class_names.push_back(v.name);
  }
  ds.provenance = {{"generator", "vowels_synthetic"}, {"per_class", std::to_string(per_class)},
                   {"seed", std::to_string(seed)}};
  finish(ds);
  return ds;
}

Dataset parse_vowels(const std::string& text, const std::string& source_name) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (header.empty()) {
      header = cells;
      if (header.size() < 2) throw ParseError("vowels: header needs feature columns and a label column", lineno);
      continue;
    }
    if (cells.size() != header.size())
      throw ParseError("vowels: expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       lineno);
    std::vector<double> vals;
    for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cells[k], &used);
      } catch (const std::exception&) {
        throw ParseError("vowels: field " + std::to_string(k + 1) + " is not numeric: '" + cells[k] + "'", lineno);
      }
      if (used != cells[k].size() || !std::isfinite(v))
        throw ParseError("vowels: field " + std::to_string(k + 1) + " is not numeric: '" + cells[k] + "'", lineno);
      vals.push_back(v);
    }
    if (cells.back().empty()) throw ParseError("vowels: missing label", lineno);
    rows.push_back(std::move(vals));
    raw_labels.push_back(cells.back());
  }
  if (header.empty()) throw ParseError("vowels: empty file", 0);
  if (rows.empty()) throw ParseError("vowels: no data rows", 0);
  bool numeric = std::all_of(raw_labels.begin(), raw_labels.end(), [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  });
  Dataset ds;
  ds.name = "vowels";
  ds.X.resize(static_cast<long>(rows.size()), static_cast<long>(header.size() - 1));
  ds.labels.resize(static_cast<long>(rows.size()));
  std::map<std::string, int> index;
  if (numeric) {
    int maxl = 0;
    for (auto& s : raw_labels) maxl = std::max(maxl, std::stoi(s));
    for (int c = 0; c <= maxl; ++c) ds.class_names.push_back(std::to_string(c));
  } else {
    std::set<std::string> names(raw_labels.begin(), raw_labels.end());
    for (auto& s : names) {
      index[s] = static_cast<int>(ds.class_names.size());
      ds.class_names.push_back(s);
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) ds.X(static_cast<long>(i), static_cast<long>(k)) = rows[i][k];
    ds.labels(static_cast<long>(i)) = numeric ? std::stoi(raw_labels[i]) : index[raw_labels[i]];
  }
  ds.provenance = {{"source", source_name}, {"columns", std::to_string(header.size() - 1)}};
  Vec lo = ds.X.colwise().minCoeff(), hi = ds.X.colwise().maxCoeff();
  std::ostringstream mm;
  for (long k = 0; k < lo.size(); ++k) mm << (k ? ";" : "") << num(lo(k)) << ":" << num(hi(k));
  ds.provenance["feature_minmax"] = mm.str();
  finish(ds);
  auto counts = ds.class_counts();
  if (std::adjacent_find(counts.begin(), counts.end(), std::not_equal_to<>()) != counts.end()) {
    std::ostringstream w;
    w << "unequal class counts:";
    for (std::size_t c = 0; c < counts.size(); ++c) w << " " << ds.class_names[c] << "=" << counts[c];
    ds.provenance["warning"] = w.str();
  }
  return ds;
}

Dataset load_vowels(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_vowels(ss.str(), path);
}

namespace {

std::uint32_t read_be32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error(path + ": truncated IDX header");
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

void write_be32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<char*>(b), 4);
}

std::vector<unsigned char> read_payload(std::istream& in, std::size_t bytes, const std::string& path) {
  std::vector<unsigned char> buf(bytes);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes)))
    throw std::runtime_error(path + ": truncated IDX payload");
  return buf;
}

}  // namespace

Mat read_idx_images(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint32_t magic = read_be32(in, path);
  if (magic != 0x00000803) throw std::runtime_error(path + ": IDX magic mismatch for images");
  std::uint32_t n = read_be32(in, path), rows = read_be32(in, path), cols = read_be32(in, path);
  auto buf = read_payload(in, std::size_t{n} * rows * cols, path);
  Mat x(n, static_cast<long>(rows) * cols);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t k = 0; k < rows * cols; ++k) x(i, k) = buf[std::size_t{i} * rows * cols + k] / 255.0;
  return x;
}

IVec read_idx_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint32_t magic = read_be32(in, path);
  if (magic != 0x00000801) throw std::runtime_error(path + ": IDX magic mismatch for labels");
  std::uint32_t n = read_be32(in, path);
  auto buf = read_payload(in, n, path);
  IVec y(n);
  for (std::uint32_t i = 0; i < n; ++i) y(i) = buf[i];
  return y;
}

void write_idx_images(const std::string& path, const Mat& images, int rows, int cols) {
  if (images.cols() != static_cast<long>(rows) * cols) throw std::invalid_argument("IDX: image size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_be32(out, 0x00000803);
  write_be32(out, static_cast<std::uint32_t>(images.rows()));
  write_be32(out, static_cast<std::uint32_t>(rows));
  write_be32(out, static_cast<std::uint32_t>(cols));
  for (long i = 0; i < images.rows(); ++i)
    for (long k = 0; k < images.cols(); ++k) {
      double v = std::clamp(std::round(images(i, k) * 255.0), 0.0, 255.0);
      out.put(static_cast<char>(static_cast<unsigned char>(v)));
    }
}

void write_idx_labels(const std::string& path, const IVec& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_be32(out, 0x00000801);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  for (long i = 0; i < labels.size(); ++i) out.put(static_cast<char>(labels(i)));
}

Dataset load_mnist(const std::string& images, const std::string& labels, int per_class,
                   const std::vector<int>& digits, std::uint64_t seed) {
  Mat x = read_idx_images(images);
  IVec y = read_idx_labels(labels);
  if (x.rows() != y.size()) throw std::runtime_error("MNIST: image and label counts differ");
  if (per_class < 1) throw std::invalid_argument("MNIST: per_class must be >= 1");
  Rng rng(derive_seed(seed, "mnist"));
  std::vector<int> rows;
  Dataset ds;
  ds.name = "mnist";
  for (std::size_t c = 0; c < digits.size(); ++c) {
    std::vector<int> idx;
    for (long i = 0; i < y.size(); ++i)
      if (y(i) == digits[c]) idx.push_back(static_cast<int>(i));
    if (static_cast<int>(idx.size()) < per_class)
      throw std::invalid_argument("MNIST: digit " + std::to_string(digits[c]) + " has only " +
                                  std::to_string(idx.size()) + " images");
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(per_class);
    std::sort(idx.begin(), idx.end());
    rows.insert(rows.end(), idx.begin(), idx.end());
    ds.class_names.push_back(std::to_string(digits[c]));
  }
  ds.X.resize(static_cast<long>(rows.size()), x.cols());
  ds.labels.resize(static_cast<long>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ds.X.row(static_cast<long>(i)) = x.row(rows[i]);
    ds.labels(static_cast<long>(i)) = static_cast<int>(i / per_class);
  }
  ds.provenance = {{"images", images}, {"labels", labels}, {"per_class", std::to_string(per_class)},
                   {"seed", std::to_string(seed)}};
  finish(ds);
  return ds;
}

void SplitSpec::validate() const {
  if (train <= 0 || validation < 0 || test < 0) throw std::invalid_argument("split: fractions must be >= 0, train > 0");
  if (std::abs(train + validation + test - 1.0) > 1e-9) throw std::invalid_argument("split: fractions must sum to 1");
}

namespace {

// Largest-remainder apportionment of `total` over weights.
std::vector<long> apportion(long total, const std::vector<long>& weights) {
  long w = std::accumulate(weights.begin(), weights.end(), 0L);
  std::vector<long> out(weights.size());
  std::vector<std::pair<double, std::size_t>> rem;
  long used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double q = static_cast<double>(total) * weights[i] / w;
    out[i] = static_cast<long>(std::floor(q));
    used += out[i];
    rem.push_back({-(q - out[i]), i});
  }
  std::sort(rem.begin(), rem.end());
  for (long k = 0; k < total - used; ++k) ++out[rem[k].second];
  return out;
}

}  // namespace

Split split(const Dataset& ds, const SplitSpec& spec) {
  spec.validate();
  const long n = ds.size();
  Rng rng(derive_seed(spec.seed, "split"));
  long n_test = std::lround(spec.test * n), n_val = std::lround(spec.validation * n);
  std::vector<std::vector<int>> groups;
  if (spec.stratify) {
    groups.resize(ds.classes());
    for (long i = 0; i < n; ++i) groups[ds.labels(i)].push_back(static_cast<int>(i));
  } else {
    groups.resize(1);
    for (long i = 0; i < n; ++i) groups[0].push_back(static_cast<int>(i));
  }
  std::vector<long> sizes;
  for (auto& g : groups) sizes.push_back(static_cast<long>(g.size()));
  auto test_per = apportion(n_test, sizes);
  auto val_per = apportion(n_val, sizes);
  Split out;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    auto g = groups[c];
    std::shuffle(g.begin(), g.end(), rng);
    long t = test_per[c], v = val_per[c];
    if (t + v >= static_cast<long>(g.size()))
      throw std::invalid_argument("split: class " + std::to_string(c) + " absent from train");
    out.test.insert(out.test.end(), g.begin(), g.begin() + t);
    out.validation.insert(out.validation.end(), g.begin() + t, g.begin() + t + v);
    out.train.insert(out.train.end(), g.begin() + t + v, g.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.validation.begin(), out.validation.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

Dataset subset(const Dataset& ds, const std::vector<int>& rows) {
  Dataset out;
  out.name = ds.name;
  out.class_names = ds.class_names;
  out.provenance = ds.provenance;
  out.X.resize(static_cast<long>(rows.size()), ds.X.cols());
  out.labels.resize(static_cast<long>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<long>(i)) = ds.X.row(rows[i]);
    out.labels(static_cast<long>(i)) = ds.labels(rows[i]);
  }
  return out;
}

Dataset select_classes(const Dataset& ds, const std::vector<int>& classes) {
  std::vector<int> map(ds.classes(), -1);
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (classes[c] < 0 || classes[c] >= ds.classes()) throw std::invalid_argument("select_classes: class out of range");
    map[classes[c]] = static_cast<int>(c);
  }
  std::vector<int> rows;
  for (long i = 0; i < ds.size(); ++i)
    if (map[ds.labels(i)] >= 0) rows.push_back(static_cast<int>(i));
  Dataset out = subset(ds, rows);
  for (long i = 0; i < out.size(); ++i) out.labels(i) = map[out.labels(i)];
  out.class_names.clear();
  for (int c : classes)
    out.class_names.push_back(c < static_cast<int>(ds.class_names.size()) ? ds.class_names[c] : std::to_string(c));
  out.provenance["content_hash"] = content_hash(out.X, out.labels);
  out.validate();
  return out;
}

MnistPca load_mnist_pca(const std::string& images, const std::string& labels, int per_class, int components,
                        std::uint64_t seed, const SplitSpec& spec) {
  std::vector<int> digits(10);
  std::iota(digits.begin(), digits.end(), 0);
  Dataset raw = load_mnist(images, labels, per_class, digits, seed);
  MnistPca out;
  out.split = split(raw, spec);
  Dataset train = subset(raw, out.split.train);
  out.pca = pca(train.X, components);
  out.data = raw;
  out.data.X = out.pca.transform(raw.X);
  out.data.provenance["pca_components"] = std::to_string(components);
  out.data.provenance["content_hash"] = content_hash(out.data.X, out.data.labels);
  return out;
}

namespace {

Vec gaussian_envelope(int modes, double width_fraction) {
  Vec env(modes);
  double c = 0.5 * (modes - 1), w = std::max(width_fraction * modes, 1e-9);
  for (int k = 0; k < modes; ++k) env(k) = std::exp(-0.5 * std::pow((k - c) / w, 2));
  return env / env.sum();
}

}  // namespace

SourceSpec make_source(SourceKind kind, int modes, double photons, const SourceProfile& profile) {
  if (modes < 1) throw std::invalid_argument("source: modes must be >= 1");
  if (!(photons >= 0)) throw std::invalid_argument("source: photon number must be >= 0");
  SourceSpec s;
  s.kind = kind;
  switch (kind) {
    case SourceKind::squeezed: {
      Vec w(modes);
      if (profile.squeezing == "equal") {
        w.setConstant(1.0);
      } else if (profile.squeezing == "decay") {
        for (int k = 0; k < modes; ++k) w(k) = std::pow(profile.squeezing_decay, k);
      } else {
        throw std::invalid_argument("source: unknown squeezing profile '" + profile.squeezing +
                                    "' (expected equal, decay)");
      }
      w /= w.sum();
      s.r.resize(modes);
      for (int k = 0; k < modes; ++k) {
        s.r(k) = std::asinh(std::sqrt(photons * w(k)));
        if (s.r(k) > profile.r_cap) {
          std::ostringstream msg;
          msg << "squeezed source needs r = " << s.r(k) << " on mode " << k << ", above the cap r_max = "
              << profile.r_cap;
          throw std::domain_error(msg.str());
        }
      }
      break;
    }
    case SourceKind::coherent:
      s.alpha = CVec::Zero(modes);
      if (profile.coherent == "cw") {
        s.alpha(modes / 2) = std::sqrt(photons);
      } else if (profile.coherent == "broadband") {
        s.alpha = (photons * gaussian_envelope(modes, profile.supercontinuum_width)).cwiseSqrt().cast<cplx>();
      } else {
        throw std::invalid_argument("source: unknown coherent profile '" + profile.coherent +
                                    "' (expected cw, broadband)");
      }
      break;
    case SourceKind::thermal:
      s.nbar = photons * gaussian_envelope(modes, profile.thermal_width);
      break;
    case SourceKind::supercontinuum:
      s.alpha = (photons * gaussian_envelope(modes, profile.supercontinuum_width)).cwiseSqrt().cast<cplx>();
      s.g = profile.supercontinuum_g;
      break;
  }
  s.validate();
  return s;
}

double BudgetCalibration::max_relative_spread() const {
  if (sources.empty()) return 0.0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (auto& s : sources) {
    lo = std::min(lo, s.expected_total);
    hi = std::max(hi, s.expected_total);
  }
  return (hi - lo) / target;
}

BudgetCalibration calibrate_budget(const std::vector<SourceKind>& kinds, double target,
                                   const std::vector<long>& frames, int modes, const Vec& eta,
                                   const DetectionModel& det, const SourceProfile& profile) {
  if (!(target > 0)) throw std::invalid_argument("calibrate_budget: target must be > 0");
  if (frames.size() != kinds.size()) throw std::invalid_argument("calibrate_budget: one frame count per source");
  BudgetCalibration cal;
  cal.target = target;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (frames[i] < 1) throw std::invalid_argument("calibrate_budget: frames must be >= 1");
    ReservoirRun run;
    run.U.U = CMat::Identity(modes, modes);
    run.eta = eta;
    // Detected mean is linear in input power, so one probe fixes the scale.
    run.source = make_source(kinds[i], modes, static_cast<double>(modes), SourceProfile{
        profile.squeezing, profile.squeezing_decay, profile.thermal_width, profile.supercontinuum_width,
        profile.supercontinuum_g, profile.coherent, std::numeric_limits<double>::infinity()});
    double per_photon = expected_total(run, det, frames[i]) / modes;
    if (!(per_photon > 0)) throw std::domain_error("calibrate_budget: source is not detected");
    SourceBudget b;
    b.kind = kinds[i];
    b.frames = frames[i];
    b.input_photons = target / per_photon;
    b.source = make_source(kinds[i], modes, b.input_photons, profile);
    run.source = b.source;
    b.expected_total = expected_total(run, det, frames[i]);
    cal.sources.push_back(b);
  }
  return cal;
}

std::string dataset_to_csv(const Dataset& ds) {
  std::ostringstream os;
  os << "# name: " << ds.name << "\n";
  for (auto& [k, v] : ds.provenance) os << "# " << k << ": " << v << "\n";
  for (long k = 0; k < ds.X.cols(); ++k) os << "x" << k << ",";
  os << "label\n";
  os << std::setprecision(17);
  for (long i = 0; i < ds.size(); ++i) {
    for (long k = 0; k < ds.X.cols(); ++k) os << ds.X(i, k) << ",";
    int l = ds.labels(i);
    os << (l < static_cast<int>(ds.class_names.size()) ? ds.class_names[l] : std::to_string(l)) << "\n";
  }
  return os.str();
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dataset_to_csv(ds);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace qrc
