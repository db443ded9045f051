#pragma once

// Reference implementations used as test oracles. They are written for
// clarity rather than speed and share no code with the library beyond the
// raster and RNG types.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hotspot/geometry.hpp"
#include "hotspot/raster.hpp"
#include "hotspot/rng.hpp"

namespace hotspot::oracle {

using Matrix = std::vector<std::vector<double>>;

/// Column means, centering and X^T X / n with three explicit loops.
Matrix naive_covariance(const Matrix& tile);

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-12 of the total norm (at most 100 sweeps). Eigenvalues sorted descending.
std::vector<double> jacobi_eigenvalues(Matrix a);

/// Smallest j whose top-j sum reaches t * total, found by re-summing every
/// prefix from scratch. 0 for a zero total.
int prefix_scan_count(const std::vector<double>& spectrum, double t);

struct OracleFeature {
    int k = 0;
    /// min |prefix_j / total - t| over the boundary prefixes j = k-1 and j = k.
    double boundary_gap = 1.0;
};

/// naive_covariance -> jacobi_eigenvalues (negatives clamped) -> prefix_scan_count.
OracleFeature composed_oracle(const Matrix& tile, double t);

Matrix random_binary_tile(int n, Rng& rng, double density);

/// Destination pixel d samples the source pixel whose extent contains the
/// destination pixel centre, located by linear search.
GrayRaster nearest_resize_oracle(const GrayRaster& src, int target_side);

/// Jittered row placement re-derived from its written description.
std::vector<PixelRect> jitter_reference(int rows, int cols, int clip_side, int canvas_side, Rng& rng);

/// IoU of two integer-aligned pixel boxes by rasterizing both on a grid.
double pixel_count_iou(const PixelRect& a, const PixelRect& b);

/// FNV-1a over every regular file's relative path and bytes, in path order.
std::uint64_t directory_hash(const std::filesystem::path& root);

/// Unique directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Directory holding the shipped fixtures (set at configure time).
std::filesystem::path fixture_dir();

}  // namespace hotspot::oracle
