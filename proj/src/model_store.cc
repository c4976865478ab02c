// Copyright 2026 The swalk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "swalk/model_store.h"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iterator>
#include <limits>

#include "swalk/error.h"

namespace swalk {

DenseMatrix<float> CsrMatrix::ToDense() const {
  const auto size = static_cast<Eigen::Index>(n);
  DenseMatrix<float> dense = DenseMatrix<float>::Zero(size, size);
  for (std::size_t r = 0; r < n; ++r) {
    const auto c = RowCols(r);
    const auto v = RowValues(r);
    for (std::size_t k = 0; k < c.size(); ++k) dense(r, c[k]) = v[k];
  }
  return dense;
}

std::size_t KeepCount(double keep_ratio, std::size_t total) {
  const long double product =
      static_cast<long double>(keep_ratio) * static_cast<long double>(total);
  const long double nearest = std::round(product);
  const long double count =
      std::abs(product - nearest) <= 1e-9L * std::max(1.0L, product)
          ? nearest
          : std::ceil(product);
  return std::min(total, static_cast<std::size_t>(count));
}

namespace {

// Row-major walk over entries; `visit(row, col, value)`.
template <typename Visit>
void ForEachEntry(const CsrMatrix& m, Visit&& visit) {
  for (std::size_t r = 0; r < m.n; ++r) {
    const auto c = m.RowCols(r);
    const auto v = m.RowValues(r);
    for (std::size_t k = 0; k < c.size(); ++k) visit(r, c[k], v[k]);
  }
}

template <typename Scalar, typename Visit>
void ForEachEntry(const DenseMatrix<Scalar>& m, Visit&& visit) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Scalar* row = m.row(r).data();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      visit(static_cast<std::size_t>(r), static_cast<std::uint32_t>(c), row[c]);
    }
  }
}

template <typename Source>
CsrMatrix PruneImpl(const Source& m, std::size_t n, double keep_ratio) {
  if (!(keep_ratio > 0 && keep_ratio <= 1)) {
    throw ConfigError(
        fmt::format("keep_ratio must be in (0, 1], got {}", keep_ratio));
  }
  // An entry is a candidate only if it survives the f32 store.
  auto stored = [](auto v) { return static_cast<float>(v) != 0.0f; };

  std::vector<double> magnitudes;
  ForEachEntry(m, [&](std::size_t, std::uint32_t, auto v) {
    if (stored(v)) magnitudes.push_back(std::abs(static_cast<double>(v)));
  });
  const std::size_t target = KeepCount(keep_ratio, n * n);

  double threshold = 0;
  std::size_t ties_allowed = magnitudes.size();
  if (target < magnitudes.size()) {
    auto nth = magnitudes.begin() + static_cast<std::ptrdiff_t>(target - 1);
    std::nth_element(magnitudes.begin(), nth, magnitudes.end(),
                     std::greater<>());
    threshold = *nth;
    const auto above = static_cast<std::size_t>(
        std::count_if(magnitudes.begin(), magnitudes.end(),
                      [&](double x) { return x > threshold; }));
    ties_allowed = target - above;
  }
  magnitudes = {};

  CsrMatrix out;
  out.n = n;
  out.row_ptr.assign(n + 1, 0);
  std::size_t ties_kept = 0;
  ForEachEntry(m, [&](std::size_t r, std::uint32_t c, auto v) {
    if (!stored(v)) return;
    const double mag = std::abs(static_cast<double>(v));
    bool keep = mag > threshold;
    if (!keep && mag == threshold && ties_kept < ties_allowed) {
      keep = true;
      ++ties_kept;
    }
    if (!keep) return;
    out.cols.push_back(c);
    out.values.push_back(static_cast<float>(v));
    ++out.row_ptr[r + 1];
  });
  for (std::size_t r = 0; r < n; ++r) out.row_ptr[r + 1] += out.row_ptr[r];
  return out;
}

}  // namespace

template <typename Scalar>
CsrMatrix PruneMagnitude(const DenseMatrix<Scalar>& m, double keep_ratio) {
  if (m.rows() != m.cols()) throw NumericError("model matrix is not square");
  return PruneImpl(m, static_cast<std::size_t>(m.rows()), keep_ratio);
}

CsrMatrix PruneMagnitude(const CsrMatrix& m, double keep_ratio) {
  return PruneImpl(m, m.n, keep_ratio);
}

template CsrMatrix PruneMagnitude(const DenseMatrix<float>&, double);
template CsrMatrix PruneMagnitude(const DenseMatrix<double>&, double);

// Binary layout --------------------------------------------------------------
//   "SWLK" | u32 version | u64 n | u64 nnz | nnz x (u32 row, u32 col, f32)
// All integers little-endian; records sorted by (row, col).

namespace {

constexpr std::size_t kHeaderBytes = 24;
constexpr std::size_t kRecordBytes = 12;
constexpr char kMagic[4] = {'S', 'W', 'L', 'K'};

template <typename T>
void PutLe(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
  }
}

template <typename T>
T GetLe(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(bytes[offset + i]) << (8 * i);
  }
  return value;
}

Error CorruptAt(std::size_t offset, const std::string& what) {
  return IoError(fmt::format("{} at offset {}", what, offset));
}

}  // namespace

std::vector<std::uint8_t> EncodeMatrix(const CsrMatrix& m) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + kRecordBytes * m.nnz());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  PutLe<std::uint32_t>(out, kModelFormatVersion);
  PutLe<std::uint64_t>(out, m.n);
  PutLe<std::uint64_t>(out, m.nnz());
  ForEachEntry(m, [&](std::size_t r, std::uint32_t c, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    PutLe<std::uint32_t>(out, static_cast<std::uint32_t>(r));
    PutLe<std::uint32_t>(out, c);
    PutLe<std::uint32_t>(out, bits);
  });
  return out;
}

CsrMatrix DecodeMatrix(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw CorruptAt(bytes.size(),
                    fmt::format("truncated header ({} of {} bytes)",
                                bytes.size(), kHeaderBytes));
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw CorruptAt(0, "bad magic");
  }
  const auto version = GetLe<std::uint32_t>(bytes, 4);
  if (version != kModelFormatVersion) {
    throw CorruptAt(4, fmt::format("version mismatch: file has {}, reader "
                                   "supports {}",
                                   version, kModelFormatVersion));
  }
  const auto n = GetLe<std::uint64_t>(bytes, 8);
  const auto nnz = GetLe<std::uint64_t>(bytes, 16);
  if (n > std::numeric_limits<std::uint32_t>::max() || (n > 0 && nnz / n > n) ||
      (n == 0 && nnz > 0)) {
    throw CorruptAt(16, fmt::format("nnz {} impossible for n {}", nnz, n));
  }
  const std::size_t body = bytes.size() - kHeaderBytes;
  if (body / kRecordBytes < nnz) {
    const std::size_t complete = body / kRecordBytes;
    throw CorruptAt(
        kHeaderBytes + complete * kRecordBytes,
        fmt::format("truncated file: {} of {} records present", complete, nnz));
  }
  if (body != nnz * kRecordBytes) {
    throw CorruptAt(kHeaderBytes + nnz * kRecordBytes,
                    "trailing bytes after last record");
  }

  CsrMatrix m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  m.cols.reserve(nnz);
  m.values.reserve(nnz);
  std::uint64_t prev_key = 0;
  for (std::uint64_t k = 0; k < nnz; ++k) {
    const std::size_t offset = kHeaderBytes + k * kRecordBytes;
    const auto row = GetLe<std::uint32_t>(bytes, offset);
    const auto col = GetLe<std::uint32_t>(bytes, offset + 4);
    const auto bits = GetLe<std::uint32_t>(bytes, offset + 8);
    if (row >= n || col >= n) {
      throw CorruptAt(offset, fmt::format("index ({}, {}) out of range for "
                                          "n {}",
                                          row, col, n));
    }
    const std::uint64_t key = (std::uint64_t{row} << 32) | col;
    if (k > 0 && key <= prev_key) {
      throw CorruptAt(offset, "unsorted triples");
    }
    prev_key = key;
    float value;
    std::memcpy(&value, &bits, sizeof(value));
    if (!std::isfinite(value)) throw CorruptAt(offset + 8, "non-finite value");
    m.cols.push_back(col);
    m.values.push_back(value);
    ++m.row_ptr[row + 1];
  }
  for (std::size_t r = 0; r < n; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

std::filesystem::path MetaPath(const std::filesystem::path& prefix) {
  return prefix.string() + ".meta.json";
}

std::filesystem::path MatrixPath(const std::filesystem::path& prefix) {
  return prefix.string() + ".coo.bin";
}

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void SaveModel(const ModelArtifact& artifact,
               const std::filesystem::path& prefix) {
  const auto& m = artifact.matrix;
  if (artifact.vocab.size() != m.n) {
    throw IoError(fmt::format("vocab size {} does not match matrix size {}",
                              artifact.vocab.size(), m.n));
  }
  nlohmann::json meta = {
      {"format_version", artifact.meta.format_version},
      {"n", m.n},
      {"nnz", m.nnz()},
      {"hyperparameters", artifact.meta.hyper.ToJson()},
      {"composition", artifact.meta.composition},
      {"kstep", artifact.meta.kstep},
      {"transition", artifact.meta.transition},
      {"teleportation", artifact.meta.teleportation},
      {"created_at", artifact.meta.created_at},
      {"vocab", artifact.vocab},
      {"extra", artifact.meta.extra},
  };
  {
    const auto path = MetaPath(prefix);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out << meta.dump(2) << '\n';
    if (!out)
      throw IoError(fmt::format("write failed for '{}'", path.string()));
  }
  {
    const auto path = MatrixPath(prefix);
    const auto bytes = EncodeMatrix(m);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
      throw IoError(fmt::format("write failed for '{}'", path.string()));
  }
}

ModelArtifact LoadModel(const std::filesystem::path& prefix) {
  const auto meta_path = MetaPath(prefix);
  const auto bin_path = MatrixPath(prefix);
  nlohmann::json meta;
  {
    std::ifstream in(meta_path);
    if (!in) throw IoError(fmt::format("cannot read '{}'", meta_path.string()));
    try {
      meta = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(fmt::format("{}: {}", meta_path.string(), e.what()));
    }
  }
  std::vector<std::uint8_t> bytes;
  {
    std::ifstream in(bin_path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read '{}'", bin_path.string()));
    bytes.assign(std::istreambuf_iterator<char>(in),
                 std::istreambuf_iterator<char>());
  }

  ModelArtifact artifact;
  try {
    artifact.matrix = DecodeMatrix(bytes);
  } catch (const Error& e) {
    throw IoError(fmt::format("{}: {}", bin_path.string(), e.what()));
  }
  try {
    auto& out = artifact.meta;
    out.format_version = meta.at("format_version").get<std::uint32_t>();
    if (out.format_version != kModelFormatVersion) {
      throw IoError(fmt::format(
          "{}: version mismatch: file has {}, reader "
          "supports {}",
          meta_path.string(), out.format_version, kModelFormatVersion));
    }
    const auto n = meta.at("n").get<std::uint64_t>();
    const auto nnz = meta.at("nnz").get<std::uint64_t>();
    if (n != artifact.matrix.n || nnz != artifact.matrix.nnz()) {
      throw IoError(fmt::format(
          "{}: meta declares n={} nnz={} but matrix has n={} nnz={}",
          meta_path.string(), n, nnz, artifact.matrix.n,
          artifact.matrix.nnz()));
    }
    artifact.vocab = meta.at("vocab").get<std::vector<std::string>>();
    if (artifact.vocab.size() != n) {
      throw IoError(fmt::format("{}: vocab has {} ids for n={}",
                                meta_path.string(), artifact.vocab.size(), n));
    }
    if (meta.contains("hyperparameters")) {
      out.hyper.MergeJson(meta["hyperparameters"]);
    }
    out.composition = meta.value("composition", "rwr");
    out.kstep = meta.value("kstep", 0);
    out.transition = meta.value("transition", "ours");
    out.teleportation = meta.value("teleportation", "ours");
    out.created_at = meta.value("created_at", "");
    if (meta.contains("extra")) out.extra = meta["extra"];
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("{}: {}", meta_path.string(), e.what()));
  }
  return artifact;
}

}  // namespace swalk
