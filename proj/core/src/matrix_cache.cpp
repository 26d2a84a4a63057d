#include "pdolab/matrix_cache.hpp"

#include <zlib.h>

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "pdolab/errors.hpp"

namespace pdolab {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'D', 'O', 'L', 'A', 'B', 'M', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename U>
void put_le(std::vector<unsigned char>& out, U v) {
  for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

void put_float(std::vector<unsigned char>& out, double v, CachePrecision prec) {
  if (prec == CachePrecision::complex64)
    put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  else
    put_le(out, std::bit_cast<std::uint64_t>(v));
}

std::uint32_t crc_of(const unsigned char* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void write_matrix_cache(const std::filesystem::path& path, const OperatorMatrix& T, CachePrecision precision) {
  const std::size_t n = T.size();
  const std::uint32_t entry_bytes = precision == CachePrecision::complex64 ? 8 : 16;

  std::vector<unsigned char> payload;
  payload.reserve(n * n * entry_bytes);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Complex v = T.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      put_float(payload, v.real(), precision);
      put_float(payload, v.imag(), precision);
    }

  std::vector<unsigned char> header(kMagic.begin(), kMagic.end());
  put_le<std::uint32_t>(header, kVersion);
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(T.basis.dim()));
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(T.basis.cutoff()));
  put_le<std::uint32_t>(header, entry_bytes);
  put_le<std::uint64_t>(header, n);
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(T.label.size()));
  header.insert(header.end(), T.label.begin(), T.label.end());
  put_le<std::uint32_t>(header, crc_of(payload.data(), payload.size()));

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

OperatorMatrix read_matrix_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open matrix cache " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  auto need = [&](std::size_t upto) {
    if (bytes.size() < upto) throw Error("matrix cache " + path.string() + " is truncated");
  };
  need(36);
  if (std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    throw Error("matrix cache " + path.string() + " has a bad magic number");
  const auto version = get_le<std::uint32_t>(&bytes[8]);
  if (version != kVersion) throw Error("unsupported matrix cache version " + std::to_string(version));
  const auto d = static_cast<int>(get_le<std::uint32_t>(&bytes[12]));
  const auto K = static_cast<int>(get_le<std::uint32_t>(&bytes[16]));
  const auto entry_bytes = get_le<std::uint32_t>(&bytes[20]);
  const auto n = static_cast<std::size_t>(get_le<std::uint64_t>(&bytes[24]));
  const auto label_len = get_le<std::uint32_t>(&bytes[32]);
  if (entry_bytes != 8 && entry_bytes != 16) throw Error("matrix cache: bad entry width");
  need(36 + label_len + 4);
  std::string label(bytes.begin() + 36, bytes.begin() + 36 + label_len);
  const auto crc = get_le<std::uint32_t>(&bytes[36 + label_len]);
  const std::size_t offset = 40 + label_len;
  const std::size_t payload_size = n * n * entry_bytes;
  if (bytes.size() != offset + payload_size) throw Error("matrix cache " + path.string() + " has the wrong size");
  if (crc_of(bytes.data() + offset, payload_size) != crc)
    throw Error("matrix cache " + path.string() + " failed its checksum");

  FrequencyBasis basis = enumerate_frequencies(d, K, n);
  if (basis.size() != n) throw Error("matrix cache: N does not match (2K+1)^d");

  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const unsigned char* p = bytes.data() + offset;
  const std::size_t half = entry_bytes / 2;
  auto read_float = [&](const unsigned char* q) {
    return half == 4 ? static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(q)))
                     : std::bit_cast<double>(get_le<std::uint64_t>(q));
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = Complex{read_float(p), read_float(p + half)};
      p += entry_bytes;
    }
  return OperatorMatrix{std::move(basis), std::move(m), std::move(label)};
}

}  // namespace pdolab
