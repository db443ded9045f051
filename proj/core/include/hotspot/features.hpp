#pragma once

#include <span>
#include <vector>

#include "hotspot/raster.hpp"

namespace hotspot::features {

/// Dense square matrix of doubles, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(int n, double fill = 0.0);
    SquareMatrix(int n, std::vector<double> values);

    int size() const noexcept { return n_; }
    double operator()(int r, int c) const noexcept { return data_[offset(r, c)]; }
    double& operator()(int r, int c) noexcept { return data_[offset(r, c)]; }
    std::span<const double> values() const noexcept { return data_; }

    /// Copies the n x n window of `image` whose top-left corner is (x0, y0),
    /// raw intensities, no normalization.
    static SquareMatrix from_tile(const GrayRaster& image, int x0, int y0, int n);

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t offset(int r, int c) const noexcept {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c);
    }

    int n_ = 0;
    std::vector<double> data_;
};

/// Parameters of the dual-scale variance-count feature.
struct FeatureParams {
    double threshold = 0.999;   ///< variance coverage t, in (0, 1]
    int small_tile = 32;        ///< side of the fine tiles
    int tile_ratio = 4;         ///< large_tile = tile_ratio * small_tile
    double weight_small = 0.5;
    double weight_large = 0.5;
    bool pad = false;           ///< zero-pad right/bottom to a multiple of large_tile, crop after

    int large_tile() const noexcept { return small_tile * tile_ratio; }
    /// Largest fused value attainable: every tile needs all of its components.
    double max_fused_value() const noexcept { return weight_small * small_tile + weight_large * large_tile(); }

    /// Sets weights proportional to (a, b), normalized so they sum to one.
    void set_weights(double a, double b);
    void validate() const;
};

struct CenteredTile {
    SquareMatrix centered;
    std::vector<double> means;
};

/// Intermediate products of one tile's analysis, kept for diagnostics.
struct PcaTrace {
    std::vector<double> means;
    SquareMatrix centered;
    SquareMatrix covariance;
    std::vector<double> spectrum;  ///< eigenvalues, descending, clamped at 0
};

struct TileFeature {
    int k = 0;
    PcaTrace trace;
};

/// Per-tile grid of variance counts, row-major over tiles.
struct KMap {
    int tiles_x = 0;
    int tiles_y = 0;
    int tile_side = 0;
    std::vector<int> k_values;

    int at(int tx, int ty) const { return k_values.at(static_cast<std::size_t>(ty) * tiles_x + tx); }
    int covered_width() const noexcept { return tiles_x * tile_side; }
    int covered_height() const noexcept { return tiles_y * tile_side; }
    void validate() const;

    bool operator==(const KMap&) const = default;
};

/// Per-pixel real-valued map (the fused feature before quantization).
struct FusedMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    float at(int x, int y) const { return values.at(static_cast<std::size_t>(y) * width + x); }
    bool operator==(const FusedMap&) const = default;
};

/// Subtracts each column's mean (columns are the samples' coordinates).
CenteredTile column_center(const SquareMatrix& tile);

/// (1/n) X^T X for a column-centred n x n matrix. The divisor is n, not n-1.
SquareMatrix covariance(const SquareMatrix& centered);

/// Covariance of `tile` compressed over repeated rows and columns. With
/// unique columns of multiplicity m_i and unique rows of multiplicity w_r,
/// entry (i, j) is sqrt(m_i m_j) / n * sum_r w_r (x_ri - mu_i)(x_rj - mu_j).
/// Its eigenvalues are exactly the non-zero eigenvalues of
/// covariance(column_center(tile)); the rest of that spectrum is zero.
SquareMatrix reduced_covariance(const SquareMatrix& tile);

/// Eigenvalues of a symmetric matrix, sorted descending. Values in
/// [-tol, 0) are clamped to 0 where tol = 1e-9 * max(1, largest |eigenvalue|);
/// anything more negative raises NumericalError, as does QL non-convergence.
/// Asymmetric input raises ContractViolation.
std::vector<double> eigen_spectrum(const SquareMatrix& symmetric);

/// Smallest k such that the top-k entries reach t * total. Zero total -> 0.
int count_components(std::span<const double> spectrum, double t);

TileFeature extract_tile_feature(const SquareMatrix& tile, double t);

/// Variance count of a single tile without retaining the trace.
int tile_variance_count(const SquareMatrix& tile, double t);

/// One k per non-overlapping tile_side tile. Dimensions must be multiples of
/// tile_side unless `pad` is set, in which case the image is zero-padded on
/// the right/bottom first. Numerical failures carry the tile coordinates.
KMap extract_kmap(const GrayRaster& image, int tile_side, double t, bool pad = false);

/// Per-pixel weighted sum of the enclosing small and large tile counts.
FusedMap fuse_kmaps(const KMap& small, const KMap& large, const FeatureParams& params);

/// Maps a fused value to [0, 255]: round(255 f / f_max), ties away from zero.
std::uint8_t quantize_fused(double fused, const FeatureParams& params);

struct AugmentResult {
    RgbRaster image;   ///< R = 0, G = quantized fused map, B = input
    KMap small;
    KMap large;
    FusedMap fused;    ///< cropped to the input dimensions
};

AugmentResult augment_image_detailed(const GrayRaster& image, const FeatureParams& params);
RgbRaster augment_image(const GrayRaster& image, const FeatureParams& params);

}  // namespace hotspot::features
