#ifndef INEXT_TENSOR_CACHE_HPP
#define INEXT_TENSOR_CACHE_HPP

#include "inext/assembly.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace inext {

/// Identifies a stiffness-independent tensor assembly.
struct TensorCacheKey {
  int N = 0;
  double length = 0.0;
  int resolution = 0;
  QuadratureRule rule = QuadratureRule::Simpson;
  int points_per_panel = 0;
  std::uint64_t grid_hash = 0;

  static TensorCacheKey from(const ModeBasis& basis, const QuadratureGrid& grid);
  std::string filename() const;
  bool operator==(const TensorCacheKey&) const = default;
};

/// Binary layout (native little-endian):
///   "INEXTTC1" | u32 version | i32 N | f64 L | i32 M | i32 rule | i32 points
///   | u64 grid hash | f64[N] kappa^4 | f64[N*N] convection (row-major)
///   | f64[N^4] S | f64[N^4] I | u64 FNV-1a checksum of every preceding byte.
/// Stiffness D is not stored; stiffness_diag is rebuilt on load.
void save_tensor_cache(const std::filesystem::path& path, const TensorCacheKey& key,
                       const TensorSet& tensors);

/// Empty when the file is missing or was built for a different key. A file
/// that exists with the right key but fails its checksum throws.
std::optional<TensorSet> load_tensor_cache(const std::filesystem::path& path,
                                           const TensorCacheKey& key, double D);

/// Loads `<dir>/<key.filename()>` if present, otherwise assembles and
/// writes it. An empty dir disables caching.
TensorSet load_or_assemble(const ModeBasis& basis, const ModeSamples& samples, double D,
                           const std::filesystem::path& dir);

}  // namespace inext

#endif  // INEXT_TENSOR_CACHE_HPP
