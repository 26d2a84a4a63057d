#pragma once

#include <filesystem>

#include "pdolab/operator.hpp"

namespace pdolab {

/// Payload precision of a cached matrix.
enum class CachePrecision { complex64, complex128 };

/// Binary cache layout, all integers and floats little-endian:
///
///   offset  size  field
///   0       8     magic "PDOLABM1"
///   8       4     u32 format version (1)
///   12      4     u32 d
///   16      4     u32 K
///   20      4     u32 bytes per complex entry (8 = complex64, 16 = complex128)
///   24      8     u64 N = (2K+1)^d
///   32      4     u32 label length L
///   36      L     label bytes (UTF-8, no terminator)
///   36+L    4     u32 CRC-32 of the payload bytes
///   40+L    ...   payload: N*N entries row-major, each (re, im) as IEEE-754
///
/// The basis is not stored; it is re-enumerated from (d, K) on load.
void write_matrix_cache(const std::filesystem::path& path, const OperatorMatrix& T,
                        CachePrecision precision = CachePrecision::complex128);

/// Throws Error on bad magic, version, size or checksum mismatch.
OperatorMatrix read_matrix_cache(const std::filesystem::path& path);

}  // namespace pdolab
