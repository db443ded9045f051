#include "hotspot/features.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "hotspot/errors.hpp"

namespace hotspot::features {

namespace {

constexpr int kMaxQlIterations = 100;
constexpr double kSymmetryTolerance = 1e-9;
constexpr double kNegativeEigenTolerance = 1e-9;

void require_square_n(int n) {
    if (n < 1) throw ContractViolation("tile must be at least 1x1");
}

// Householder reduction of a symmetric matrix to tridiagonal form, values
// only. The full matrix is kept symmetric so every inner loop runs along a
// contiguous row. On return `diag` holds the diagonal and `off[i]` the entry
// coupling i-1 and i (off[0] = 0). `a` is destroyed.
void tridiagonalize(std::vector<double>& a, int n, std::vector<double>& diag, std::vector<double>& off) {
    const auto row = [&a, n](int r) { return a.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(n); };
    diag.assign(static_cast<std::size_t>(n), 0.0);
    off.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> u_store(static_cast<std::size_t>(n));
    std::vector<double> q_store(static_cast<std::size_t>(n));
    double* __restrict u = u_store.data();
    double* __restrict q = q_store.data();

    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        const double* ai = row(i);
        if (l == 0) {
            off[i] = ai[0];
            continue;
        }
        double scale = 0.0;
        for (int k = 0; k <= l; ++k) scale += std::abs(ai[k]);
        if (scale == 0.0) {
            off[i] = ai[l];
            continue;
        }
        double h = 0.0;
        for (int k = 0; k <= l; ++k) {
            u[k] = ai[k] / scale;
            h += u[k] * u[k];
        }
        const double f = u[l];
        const double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        off[i] = scale * g;
        h -= f * g;
        u[l] = f - g;

        double uq = 0.0;
        for (int j = 0; j <= l; ++j) {
            const double* __restrict aj = row(j);
            double s = 0.0;
            for (int k = 0; k <= l; ++k) s += aj[k] * u[k];
            q[j] = s / h;
            uq += q[j] * u[j];
        }
        const double hh = uq / (h + h);
        for (int j = 0; j <= l; ++j) q[j] -= hh * u[j];
        for (int j = 0; j <= l; ++j) {
            double* __restrict aj = row(j);
            const double uj = u[j];
            const double qj = q[j];
            for (int k = 0; k <= l; ++k) aj[k] -= uj * q[k] + qj * u[k];
        }
    }
    for (int i = 0; i < n; ++i) diag[i] = row(i)[i];
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
void tridiagonal_ql(std::vector<double>& diag, std::vector<double>& off) {
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) off[i - 1] = off[i];
    if (n > 0) off[n - 1] = 0.0;

    // Deflation threshold: relative to neighbouring diagonals, or to the whole
    // matrix when those are themselves at round-off level (rank deficiency).
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm = std::max(norm, std::abs(diag[i]) + std::abs(off[i]) + (i > 0 ? std::abs(off[i - 1]) : 0.0));
    const double eps = std::numeric_limits<double>::epsilon();

    for (int l = 0; l < n; ++l) {
        int iterations = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= eps * dd || std::abs(off[m]) <= eps * norm) break;
            }
            if (m == l) break;
            if (++iterations > kMaxQlIterations) {
                throw NumericalError(fmt::format("eigensolver did not converge for eigenvalue {} within {} iterations",
                                                 l, kMaxQlIterations));
            }
            double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + off[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                const double f = s * off[i];
                const double b = c * off[i];
                r = std::hypot(f, g);
                off[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        } while (m != l);
    }
}

void check_threshold(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw ContractViolation(fmt::format("threshold t={} outside (0, 1]", t));
}

GrayRaster pad_to_multiple(const GrayRaster& image, int multiple) {
    const auto round_up = [multiple](int v) { return (v + multiple - 1) / multiple * multiple; };
    const int w = round_up(image.width());
    const int h = round_up(image.height());
    if (w == image.width() && h == image.height()) return image;
    GrayRaster padded(w, h, 0);
    padded.paste(image, 0, 0);
    return padded;
}

double fused_value(const KMap& small, const KMap& large, const FeatureParams& params, int x, int y) {
    return params.weight_small * small.at(x / small.tile_side, y / small.tile_side) +
           params.weight_large * large.at(x / large.tile_side, y / large.tile_side);
}

}  // namespace

SquareMatrix::SquareMatrix(int n, double fill) : n_(n) {
    require_square_n(n);
    data_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill);
}

SquareMatrix::SquareMatrix(int n, std::vector<double> values) : n_(n), data_(std::move(values)) {
    require_square_n(n);
    if (data_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw ContractViolation(fmt::format("matrix is not square: {} values for n={}", data_.size(), n));
    }
}

SquareMatrix SquareMatrix::from_tile(const GrayRaster& image, int x0, int y0, int n) {
    if (x0 < 0 || y0 < 0 || x0 + n > image.width() || y0 + n > image.height()) {
        throw ContractViolation("tile window out of bounds");
    }
    SquareMatrix m(n);
    for (int r = 0; r < n; ++r) {
        const auto line = image.row(y0 + r);
        for (int c = 0; c < n; ++c) m(r, c) = static_cast<double>(line[static_cast<std::size_t>(x0 + c)]);
    }
    return m;
}

void FeatureParams::set_weights(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || a + b <= 0.0) throw ContractViolation("fusion weights must be >= 0, not both 0");
    weight_small = a / (a + b);
    weight_large = 1.0 - weight_small;
}

void FeatureParams::validate() const {
    check_threshold(threshold);
    if (small_tile < 1) throw ContractViolation("small_tile must be positive");
    if (tile_ratio < 1) throw ContractViolation("tile_ratio must be a positive integer");
    if (!(weight_small >= 0.0) || !(weight_large >= 0.0)) throw ContractViolation("fusion weights must be >= 0");
    if (weight_small + weight_large != 1.0) {
        throw ContractViolation(
            fmt::format("fusion weights must sum to 1, got {} + {}", weight_small, weight_large));
    }
}

void KMap::validate() const {
    if (tiles_x < 1 || tiles_y < 1 || tile_side < 1) throw ContractViolation("k-map dimensions must be positive");
    if (k_values.size() != static_cast<std::size_t>(tiles_x) * static_cast<std::size_t>(tiles_y)) {
        throw ContractViolation("k-map value count does not match tiles_x * tiles_y");
    }
    for (int k : k_values) {
        if (k < 0 || k > tile_side) throw ContractViolation(fmt::format("k={} outside [0, {}]", k, tile_side));
    }
}

CenteredTile column_center(const SquareMatrix& tile) {
    const int n = tile.size();
    require_square_n(n);
    std::vector<double> means(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) means[c] += tile(r, c);
    }
    for (auto& m : means) m /= n;

    SquareMatrix centered(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) centered(r, c) = tile(r, c) - means[c];
    }
    return {std::move(centered), std::move(means)};
}

SquareMatrix covariance(const SquareMatrix& centered) {
    const int n = centered.size();
    require_square_n(n);
    SquareMatrix cov(n);
    // Upper triangle accumulated row by row, then scaled and mirrored.
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < n; ++i) {
            const double xi = centered(r, i);
            if (xi == 0.0) continue;
            for (int j = i; j < n; ++j) cov(i, j) += xi * centered(r, j);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            cov(i, j) /= n;
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

SquareMatrix reduced_covariance(const SquareMatrix& tile) {
    const int n = tile.size();
    require_square_n(n);
    const auto nn = static_cast<std::size_t>(n);

    // Unique columns, in order of first appearance.
    std::map<std::vector<double>, int> column_ids;
    std::vector<int> column_repr;
    std::vector<double> column_mult;
    std::vector<double> column(nn);
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) column[r] = tile(r, c);
        const auto [it, inserted] = column_ids.try_emplace(column, static_cast<int>(column_repr.size()));
        if (inserted) {
            column_repr.push_back(c);
            column_mult.push_back(0.0);
        }
        column_mult[it->second] += 1.0;
    }
    const int u = static_cast<int>(column_repr.size());

    // Unique rows restricted to the unique columns.
    std::map<std::vector<double>, int> row_ids;
    std::vector<std::vector<double>> rows;
    std::vector<double> row_weight;
    std::vector<double> line(static_cast<std::size_t>(u));
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < u; ++i) line[i] = tile(r, column_repr[i]);
        const auto [it, inserted] = row_ids.try_emplace(line, static_cast<int>(rows.size()));
        if (inserted) {
            rows.push_back(line);
            row_weight.push_back(0.0);
        }
        row_weight[it->second] += 1.0;
    }

    std::vector<double> mean(static_cast<std::size_t>(u), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int i = 0; i < u; ++i) mean[i] += row_weight[r] * rows[r][i];
    }
    for (auto& m : mean) m /= n;
    for (auto& row : rows) {
        for (int i = 0; i < u; ++i) row[i] -= mean[i];
    }

    SquareMatrix cov(u);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& x = rows[r];
        for (int i = 0; i < u; ++i) {
            const double xi = row_weight[r] * x[i];
            if (xi == 0.0) continue;
            for (int j = i; j < u; ++j) cov(i, j) += xi * x[j];
        }
    }
    for (int i = 0; i < u; ++i) {
        for (int j = i; j < u; ++j) {
            cov(i, j) *= std::sqrt(column_mult[i] * column_mult[j]) / n;
            cov(j, i) = cov(i, j);
        }
    }
    return cov;
}

std::vector<double> eigen_spectrum(const SquareMatrix& symmetric) {
    const int n = symmetric.size();
    require_square_n(n);

    double max_abs = 0.0;
    for (double v : symmetric.values()) max_abs = std::max(max_abs, std::abs(v));
    const double sym_tol = kSymmetryTolerance * std::max(1.0, max_abs);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(symmetric(i, j) - symmetric(j, i)) > sym_tol) {
                throw ContractViolation(fmt::format("matrix is not symmetric at ({}, {})", i, j));
            }
        }
    }

    std::vector<double> work(symmetric.values().begin(), symmetric.values().end());
    std::vector<double> diag;
    std::vector<double> off;
    tridiagonalize(work, n, diag, off);
    tridiagonal_ql(diag, off);

    std::sort(diag.begin(), diag.end(), std::greater<>());
    const double neg_tol = kNegativeEigenTolerance * std::max(1.0, std::abs(diag.front()));
    for (auto& v : diag) {
        if (v < 0.0) {
            if (v < -neg_tol) {
                throw NumericalError(fmt::format("eigenvalue {} is negative beyond tolerance {}", v, neg_tol));
            }
            v = 0.0;
        }
    }
    return diag;
}

int count_components(std::span<const double> spectrum, double t) {
    check_threshold(t);
    double total = 0.0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (spectrum[i] < 0.0) throw ContractViolation("spectrum entries must be non-negative");
        if (i > 0 && spectrum[i] > spectrum[i - 1]) throw ContractViolation("spectrum must be non-increasing");
        total += spectrum[i];
    }
    if (total == 0.0) return 0;

    const double target = t * total;
    double prefix = 0.0;
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        prefix += spectrum[j];
        if (prefix >= target) return static_cast<int>(j + 1);
    }
    return static_cast<int>(spectrum.size());
}

TileFeature extract_tile_feature(const SquareMatrix& tile, double t) {
    check_threshold(t);
    TileFeature out;
    auto centered = column_center(tile);
    out.trace.covariance = covariance(centered.centered);
    out.trace.spectrum = eigen_spectrum(out.trace.covariance);
    out.trace.centered = std::move(centered.centered);
    out.trace.means = std::move(centered.means);
    out.k = count_components(out.trace.spectrum, t);
    return out;
}

int tile_variance_count(const SquareMatrix& tile, double t) {
    check_threshold(t);
    return count_components(eigen_spectrum(reduced_covariance(tile)), t);
}

KMap extract_kmap(const GrayRaster& image, int tile_side, double t, bool pad) {
    if (tile_side < 1) throw ContractViolation("tile_side must be positive");
    check_threshold(t);
    if (!pad && (image.width() % tile_side != 0 || image.height() % tile_side != 0)) {
        throw ContractViolation(fmt::format("image {}x{} is not divisible into {}-pixel tiles (enable padding)",
                                            image.width(), image.height(), tile_side));
    }
    const GrayRaster source = pad ? pad_to_multiple(image, tile_side) : image;

    KMap map;
    map.tile_side = tile_side;
    map.tiles_x = source.width() / tile_side;
    map.tiles_y = source.height() / tile_side;
    map.k_values.reserve(static_cast<std::size_t>(map.tiles_x) * static_cast<std::size_t>(map.tiles_y));
    for (int ty = 0; ty < map.tiles_y; ++ty) {
        for (int tx = 0; tx < map.tiles_x; ++tx) {
            const auto tile = SquareMatrix::from_tile(source, tx * tile_side, ty * tile_side, tile_side);
            try {
                map.k_values.push_back(tile_variance_count(tile, t));
            } catch (const NumericalError& e) {
                throw TileNumericalError(e.what(), tx, ty);
            }
        }
    }
    return map;
}

FusedMap fuse_kmaps(const KMap& small, const KMap& large, const FeatureParams& params) {
    params.validate();
    small.validate();
    large.validate();
    if (small.tile_side * params.tile_ratio != large.tile_side) {
        throw ContractViolation(fmt::format("tile sides {} and {} do not match ratio {}", small.tile_side,
                                            large.tile_side, params.tile_ratio));
    }
    if (small.covered_width() != large.covered_width() || small.covered_height() != large.covered_height()) {
        throw ContractViolation("k-maps cover different image dimensions");
    }

    FusedMap fused;
    fused.width = small.covered_width();
    fused.height = small.covered_height();
    fused.values.resize(static_cast<std::size_t>(fused.width) * static_cast<std::size_t>(fused.height));
    for (int y = 0; y < fused.height; ++y) {
        for (int x = 0; x < fused.width; ++x) {
            fused.values[static_cast<std::size_t>(y) * fused.width + x] =
                static_cast<float>(fused_value(small, large, params, x, y));
        }
    }
    return fused;
}

std::uint8_t quantize_fused(double fused, const FeatureParams& params) {
    const double scaled = 255.0 * fused / params.max_fused_value();
    return static_cast<std::uint8_t>(std::clamp(std::round(scaled), 0.0, 255.0));
}

AugmentResult augment_image_detailed(const GrayRaster& image, const FeatureParams& params) {
    params.validate();
    const int large_side = params.large_tile();
    if (!params.pad && (image.width() % large_side != 0 || image.height() % large_side != 0)) {
        throw ContractViolation(fmt::format("image {}x{} is not divisible into {}-pixel tiles (enable padding)",
                                            image.width(), image.height(), large_side));
    }
    const GrayRaster source = params.pad ? pad_to_multiple(image, large_side) : image;

    KMap small = extract_kmap(source, params.small_tile, params.threshold);
    KMap large = extract_kmap(source, large_side, params.threshold);

    const int w = image.width();
    const int h = image.height();
    GrayRaster green(w, h);
    FusedMap fused{w, h, std::vector<float>(static_cast<std::size_t>(w) * static_cast<std::size_t>(h))};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double f = fused_value(small, large, params, x, y);
            fused.values[static_cast<std::size_t>(y) * w + x] = static_cast<float>(f);
            green.at(x, y) = quantize_fused(f, params);
        }
    }
    return {RgbRaster(GrayRaster(w, h, 0), std::move(green), image), std::move(small), std::move(large),
            std::move(fused)};
}

RgbRaster augment_image(const GrayRaster& image, const FeatureParams& params) {
    return augment_image_detailed(image, params).image;
}

}  // namespace hotspot::features
