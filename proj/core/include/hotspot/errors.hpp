#pragma once

#include <stdexcept>
#include <string>

namespace hotspot {

/// Caller broke a documented precondition (shape mismatch, out-of-range parameter).
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or unreadable input data, missing files, failed writes.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine could not honour its contract (non-convergence,
/// covariance with a clearly negative eigenvalue).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NumericalError raised while processing a particular tile of an image.
class TileNumericalError : public NumericalError {
public:
    TileNumericalError(const std::string& what, int tile_x, int tile_y)
        : NumericalError(what + " (tile x=" + std::to_string(tile_x) + ", y=" + std::to_string(tile_y) + ")"),
          tile_x_(tile_x),
          tile_y_(tile_y) {}

    int tile_x() const noexcept { return tile_x_; }
    int tile_y() const noexcept { return tile_y_; }

private:
    int tile_x_;
    int tile_y_;
};

}  // namespace hotspot
