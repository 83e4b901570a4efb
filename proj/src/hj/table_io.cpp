// Copyright 2026 The awe-reach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "awe/hj/table_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace awe::hj {

namespace {

static_assert(std::endian::native == std::endian::little,
              "table files are little-endian; big-endian hosts unsupported");

constexpr char kValueMagic[8] = "AWEVF01";
constexpr char kControlMagic[8] = "AWECT01";
constexpr uint32_t kVersion = 1;
constexpr int kMaxDim = 16;

struct Writer {
  std::ofstream out;
  explicit Writer(const std::string& path)
      : out(path, std::ios::binary | std::ios::trunc) {
    if (!out) throw std::runtime_error("table io: cannot open " + path);
  }
  void bytes(const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  template <typename T>
  void pod(T v) {
    bytes(&v, sizeof(T));
  }
};

struct Reader {
  std::vector<char> data;
  std::size_t pos = 0;
  explicit Reader(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("table io: cannot open " + path);
    const std::streamsize size = in.tellg();
    in.seekg(0);
    data.resize(static_cast<std::size_t>(size));
    in.read(data.data(), size);
    if (!in) throw std::runtime_error("table io: short read");
  }
  void bytes(void* p, std::size_t n) {
    if (pos + n > data.size())
      throw std::runtime_error("table io: truncated file");
    std::memcpy(p, data.data() + pos, n);
    pos += n;
  }
  template <typename T>
  T pod() {
    T v;
    bytes(&v, sizeof(T));
    return v;
  }
};

void write_header(Writer& w, const char* magic, const Grid& g) {
  w.bytes(magic, 7);
  w.pod<uint32_t>(kVersion);
  w.pod<uint32_t>(static_cast<uint32_t>(g.ndim()));
  for (int d = 0; d < g.ndim(); ++d) {
    const Axis& a = g.axis(d);
    w.pod<uint64_t>(static_cast<uint64_t>(a.n));
    w.pod<double>(a.lo);
    w.pod<double>(a.hi);
    w.pod<uint8_t>(a.periodic ? 1 : 0);
  }
}

Grid read_header(Reader& r, const char* magic, const std::string& path) {
  char m[7];
  r.bytes(m, 7);
  if (std::memcmp(m, magic, 7) != 0)
    throw std::runtime_error("table io: bad magic in " + path);
  const uint32_t version = r.pod<uint32_t>();
  if (version != kVersion)
    throw std::runtime_error("table io: unsupported version in " + path);
  const uint32_t ndim = r.pod<uint32_t>();
  if (ndim == 0 || ndim > kMaxDim)
    throw std::runtime_error("table io: bad dimension count in " + path);
  std::vector<Axis> axes(ndim);
  for (uint32_t d = 0; d < ndim; ++d) {
    const uint64_t n = r.pod<uint64_t>();
    axes[d].lo = r.pod<double>();
    axes[d].hi = r.pod<double>();
    axes[d].periodic = r.pod<uint8_t>() != 0;
    if (n == 0 || n > (1ull << 32) || !(axes[d].hi > axes[d].lo))
      throw std::runtime_error("table io: bad axis in " + path);
    axes[d].n = static_cast<int>(n);
  }
  return Grid(axes);
}

std::array<uint32_t, 256> make_crc_table() {
  std::array<uint32_t, 256> t{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = i;
    for (int k = 0; k < 8; ++k)
      c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    t[i] = c;
  }
  return t;
}

}  // namespace

uint32_t crc32_ieee(const void* data, std::size_t len) {
  static const std::array<uint32_t, 256> table = make_crc_table();
  const auto* p = static_cast<const unsigned char*>(data);
  uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i)
    c = table[(c ^ p[i]) & 0xFFu] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

std::size_t table_file_size(const Grid& grid, int fields) {
  return 7 + 4 + 4 + static_cast<std::size_t>(grid.ndim()) * (8 + 8 + 8 + 1) +
         8 * grid.size() * fields + 4;
}

void save_value_function(const std::string& path, const ValueFunction& v) {
  if (static_cast<std::size_t>(v.values.size()) != v.grid.size())
    throw std::invalid_argument("table io: value size mismatch");
  Writer w(path);
  write_header(w, kValueMagic, v.grid);
  const std::size_t bytes = 8 * v.grid.size();
  w.bytes(v.values.data(), bytes);
  w.pod<uint32_t>(crc32_ieee(v.values.data(), bytes));
  if (!w.out) throw std::runtime_error("table io: write failed for " + path);
}

ValueFunction load_value_function(const std::string& path) {
  Reader r(path);
  ValueFunction v;
  v.grid = read_header(r, kValueMagic, path);
  if (r.data.size() != table_file_size(v.grid, 1))
    throw std::runtime_error("table io: wrong file size for " + path);
  v.values.resize(static_cast<Eigen::Index>(v.grid.size()));
  const std::size_t bytes = 8 * v.grid.size();
  r.bytes(v.values.data(), bytes);
  const uint32_t crc = r.pod<uint32_t>();
  if (crc != crc32_ieee(v.values.data(), bytes))
    throw std::runtime_error("table io: checksum mismatch in " + path);
  return v;
}

void save_control_table(const std::string& path, const ControlTable& t) {
  const auto n = static_cast<Eigen::Index>(t.grid.size());
  if (t.alpha.size() != n || t.mu.size() != n)
    throw std::invalid_argument("table io: control size mismatch");
  Writer w(path);
  write_header(w, kControlMagic, t.grid);
  std::vector<double> payload(2 * t.grid.size());
  std::memcpy(payload.data(), t.alpha.data(), 8 * t.grid.size());
  std::memcpy(payload.data() + t.grid.size(), t.mu.data(), 8 * t.grid.size());
  const std::size_t bytes = 8 * payload.size();
  w.bytes(payload.data(), bytes);
  w.pod<uint32_t>(crc32_ieee(payload.data(), bytes));
  if (!w.out) throw std::runtime_error("table io: write failed for " + path);
}

ControlTable load_control_table(const std::string& path) {
  Reader r(path);
  ControlTable t;
  t.grid = read_header(r, kControlMagic, path);
  if (r.data.size() != table_file_size(t.grid, 2))
    throw std::runtime_error("table io: wrong file size for " + path);
  std::vector<double> payload(2 * t.grid.size());
  const std::size_t bytes = 8 * payload.size();
  r.bytes(payload.data(), bytes);
  const uint32_t crc = r.pod<uint32_t>();
  if (crc != crc32_ieee(payload.data(), bytes))
    throw std::runtime_error("table io: checksum mismatch in " + path);
  const auto n = static_cast<Eigen::Index>(t.grid.size());
  t.alpha.resize(n);
  t.mu.resize(n);
  std::memcpy(t.alpha.data(), payload.data(), 8 * t.grid.size());
  std::memcpy(t.mu.data(), payload.data() + t.grid.size(), 8 * t.grid.size());
  return t;
}

}  // namespace awe::hj
