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

#include "qrc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qrc {

namespace {

constexpr char kMagic[4] = {'Q', 'R', 'C', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(sizeof(double) == 8, "binary layout assumes 64-bit doubles");

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error(path + ": truncated header");
  return v;
}

struct Header {
  std::uint32_t kind;
  std::uint64_t rows;
  std::uint32_t cols;
  std::uint64_t seed;
  std::uint64_t frames;
};

void write_binary(const std::string& path, const Header& h, const double* data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out.write(kMagic, 4);
    put(out, kVersion);
    put(out, h.kind);
    put(out, h.rows);
    put(out, h.cols);
    put(out, h.seed);
    put(out, h.frames);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(sizeof(double) * h.rows * h.cols));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

RowMat read_binary(const std::string& path, std::uint32_t kind, Header& h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error(path + ": not a QRCF file");
  auto version = get<std::uint32_t>(in, path);
  if (version != kVersion) throw std::runtime_error(path + ": unsupported version " + std::to_string(version));
  h.kind = get<std::uint32_t>(in, path);
  if (h.kind != kind) throw std::runtime_error(path + ": unexpected record kind " + std::to_string(h.kind));
  h.rows = get<std::uint64_t>(in, path);
  h.cols = get<std::uint32_t>(in, path);
  h.seed = get<std::uint64_t>(in, path);
  h.frames = get<std::uint64_t>(in, path);
  RowMat m(static_cast<long>(h.rows), static_cast<long>(h.cols));
  std::streamsize bytes = static_cast<std::streamsize>(sizeof(double) * h.rows * h.cols);
  if (!in.read(reinterpret_cast<char*>(m.data()), bytes)) throw std::runtime_error(path + ": truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) throw std::runtime_error(path + ": trailing bytes");
  return m;
}

}  // namespace

void write_frames(const std::string& path, const FrameSet& fs) {
  Header h{0, static_cast<std::uint64_t>(fs.frames.rows()), static_cast<std::uint32_t>(fs.frames.cols()), fs.seed,
           static_cast<std::uint64_t>(fs.frames.rows())};
  write_binary(path, h, fs.frames.data());
}

FrameSet read_frames(const std::string& path) {
  Header h;
  FrameSet fs;
  fs.frames = read_binary(path, 0, h);
  fs.seed = h.seed;
  return fs;
}

void write_estimate(const std::string& path, const MomentEstimate& est) {
  const long p = est.mu.size();
  RowMat m(1 + p, p);
  m.row(0) = est.mu.transpose();
  m.bottomRows(p) = est.sigma;
  Header h{1, static_cast<std::uint64_t>(1 + p), static_cast<std::uint32_t>(p), est.seed,
           static_cast<std::uint64_t>(est.frames)};
  write_binary(path, h, m.data());
}

MomentEstimate read_estimate(const std::string& path) {
  Header h;
  RowMat m = read_binary(path, 1, h);
  if (m.rows() != m.cols() + 1) throw std::runtime_error(path + ": estimate must have P + 1 rows");
  MomentEstimate est;
  est.mu = m.row(0).transpose();
  est.sigma = m.bottomRows(m.cols());
  est.frames = static_cast<long>(h.frames);
  est.seed = h.seed;
  return est;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, int line) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("not a number: '" + s + "'", line);
  return v;
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}
  std::istringstream next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return std::istringstream(line);
    }
    throw ParseError(std::string("unexpected end of input, expected ") + what, line_);
  }
  void expect(std::istringstream& ss, const std::string& word) {
    std::string w;
    if (!(ss >> w) || w != word) throw ParseError("expected '" + word + "'", line_);
  }
  template <typename T>
  T value(std::istringstream& ss) {
    std::string w;
    if (!(ss >> w)) throw ParseError("missing field", line_);
    if constexpr (std::is_same_v<T, std::string>) {
      return w;
    } else if constexpr (std::is_floating_point_v<T>) {
      return parse_double(w, line_);
    } else {
      T v;
      auto res = std::from_chars(w.data(), w.data() + w.size(), v);
      if (res.ec != std::errc() || res.ptr != w.data() + w.size()) throw ParseError("not an integer: '" + w + "'", line_);
      return v;
    }
  }
  void finish(std::istringstream& ss) {
    std::string w;
    if (ss >> w) throw ParseError("unexpected trailing field '" + w + "'", line_);
  }
  int line() const { return line_; }
  bool at_end() {
    std::string rest;
    while (std::getline(in_, rest))
      if (rest.find_first_not_of(" \t\r") != std::string::npos) return false;
    return true;
  }

 private:
  std::istringstream in_;
  int line_ = 0;
};

}  // namespace

std::string mask_to_text(const PhaseMask& mask) {
  std::ostringstream os;
  os << "qrc-mask 1\n";
  os << "d " << mask.d << " p " << mask.p << " sigma_g " << format_double(mask.sigma_g) << " chirp "
     << format_double(mask.chirp) << " scale " << format_double(mask.scale) << " pixels " << mask.values.size()
     << "\n";
  for (long i = 0; i < mask.values.size(); ++i) os << format_double(mask.values(i)) << "\n";
  return os.str();
}

PhaseMask mask_from_text(const std::string& text) {
  LineReader r(text);
  auto h = r.next("header");
  r.expect(h, "qrc-mask");
  if (r.value<int>(h) != 1) throw ParseError("unsupported mask version", r.line());
  PhaseMask m;
  auto s = r.next("mask parameters");
  r.expect(s, "d");
  m.d = r.value<int>(s);
  r.expect(s, "p");
  m.p = r.value<int>(s);
  r.expect(s, "sigma_g");
  m.sigma_g = r.value<double>(s);
  r.expect(s, "chirp");
  m.chirp = r.value<double>(s);
  r.expect(s, "scale");
  m.scale = r.value<double>(s);
  r.expect(s, "pixels");
  long n = r.value<long>(s);
  r.finish(s);
  if (n < 1) throw ParseError("mask needs at least one pixel", r.line());
  m.values.resize(n);
  for (long i = 0; i < n; ++i) {
    auto v = r.next("mask value");
    m.values(i) = r.value<double>(v);
    r.finish(v);
  }
  if (!r.at_end()) throw ParseError("trailing data after mask values", r.line());
  return m;
}

std::string selection_to_text(const SelectionMask& mask, long features) {
  std::ostringstream os;
  os << "qrc-selection 1\n";
  os << "k " << mask.indices.size() << " features " << features << "\n";
  for (int i : mask.indices) os << i << "\n";
  return os.str();
}

SelectionMask selection_from_text(const std::string& text) {
  LineReader r(text);
  auto h = r.next("header");
  r.expect(h, "qrc-selection");
  if (r.value<int>(h) != 1) throw ParseError("unsupported selection version", r.line());
  auto s = r.next("selection shape");
  r.expect(s, "k");
  long k = r.value<long>(s);
  r.expect(s, "features");
  long d = r.value<long>(s);
  r.finish(s);
  if (k < 0 || k > d) throw ParseError("selection size must lie in [0, features]", r.line());
  SelectionMask m;
  m.k = static_cast<int>(k);
  for (long i = 0; i < k; ++i) {
    auto l = r.next("feature index");
    int idx = r.value<int>(l);
    r.finish(l);
    if (idx < 0 || idx >= d) throw ParseError("feature index out of range", r.line());
    if (!m.indices.empty() && idx <= m.indices.back()) throw ParseError("feature indices must ascend", r.line());
    m.indices.push_back(idx);
  }
  if (!r.at_end()) throw ParseError("trailing data after selection", r.line());
  return m;
}

std::string model_to_text(const LinearModel& m) {
  std::ostringstream os;
  os << "qrc-model 1\n";
  os << "kind " << to_string(m.kind) << " classes " << m.classes << " outputs " << m.W.rows() << " features "
     << m.W.cols() << "\n";
  for (long i = 0; i < m.W.rows(); ++i) {
    for (long j = 0; j < m.W.cols(); ++j) os << (j ? " " : "") << format_double(m.W(i, j));
    os << "\n";
  }
  for (long i = 0; i < m.b.size(); ++i) os << (i ? " " : "") << format_double(m.b(i));
  os << "\n";
  os << "pairs " << m.pairs.size() << "\n";
  for (auto& [a, b] : m.pairs) os << a << " " << b << "\n";
  os << "duals " << m.duals.size() << "\n";
  for (const auto& d : m.duals) {
    os << d.positive << " " << d.negative << " " << d.support.size() << "\n";
    for (std::size_t k = 0; k < d.support.size(); ++k)
      os << d.support[k] << " " << format_double(d.coef(static_cast<long>(k))) << "\n";
  }
  return os.str();
}

LinearModel model_from_text(const std::string& text) {
  LineReader r(text);
  auto h = r.next("header");
  r.expect(h, "qrc-model");
  if (r.value<int>(h) != 1) throw ParseError("unsupported model version", r.line());
  LinearModel m;
  auto s = r.next("model shape");
  r.expect(s, "kind");
  m.kind = model_kind_from_string(r.value<std::string>(s));
  r.expect(s, "classes");
  m.classes = r.value<int>(s);
  r.expect(s, "outputs");
  long rows = r.value<long>(s);
  r.expect(s, "features");
  long cols = r.value<long>(s);
  r.finish(s);
  if (rows < 1 || cols < 1 || m.classes < 1) throw ParseError("model dimensions must be positive", r.line());
  m.W.resize(rows, cols);
  for (long i = 0; i < rows; ++i) {
    auto row = r.next("weight row");
    for (long j = 0; j < cols; ++j) m.W(i, j) = r.value<double>(row);
    r.finish(row);
  }
  m.b.resize(rows);
  auto bl = r.next("bias");
  for (long i = 0; i < rows; ++i) m.b(i) = r.value<double>(bl);
  r.finish(bl);
  auto p = r.next("pairs");
  r.expect(p, "pairs");
  long np = r.value<long>(p);
  for (long i = 0; i < np; ++i) {
    auto l = r.next("pair");
    int a = r.value<int>(l), b = r.value<int>(l);
    r.finish(l);
    m.pairs.push_back({a, b});
  }
  auto d = r.next("duals");
  r.expect(d, "duals");
  long nd = r.value<long>(d);
  for (long i = 0; i < nd; ++i) {
    auto l = r.next("dual header");
    BinaryDual bd;
    bd.positive = r.value<int>(l);
    bd.negative = r.value<int>(l);
    long cnt = r.value<long>(l);
    r.finish(l);
    bd.coef.resize(cnt);
    for (long k = 0; k < cnt; ++k) {
      auto sv = r.next("support vector");
      bd.support.push_back(r.value<int>(sv));
      bd.coef(k) = r.value<double>(sv);
      r.finish(sv);
    }
    m.duals.push_back(std::move(bd));
  }
  if (!r.at_end()) throw ParseError("trailing data after model", r.line());
  if (!m.W.allFinite() || !m.b.allFinite()) throw ParseError("model contains non-finite weights", 0);
  return m;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace qrc
