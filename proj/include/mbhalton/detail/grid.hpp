#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace mbhalton::detail {

// Packs integer cell indices of a d-dimensional grid into one 64-bit key.
// Cells are half-open boxes [i*side, (i+1)*side) anchored at the origin.
class CellPacker
{
  public:
    CellPacker(std::size_t dims, double side) : dims_(dims), side_(side)
    {
        if (dims == 0 || dims > 8)
            throw std::invalid_argument("CellPacker: dimension must be in [1, 8]");
        if (!(side > 0))
            throw std::invalid_argument("CellPacker: cell side must be positive");
        bits_ = static_cast<unsigned>(64 / dims);
        if (bits_ > 31)
            bits_ = 31;
        bias_ = std::int64_t{1} << (bits_ - 1);
    }

    std::int64_t index(double x) const { return static_cast<std::int64_t>(std::floor(x / side_)); }

    std::uint64_t key(std::span<const double> x) const
    {
        std::uint64_t k = 0;
        for (std::size_t d = 0; d < dims_; ++d)
            k = (k << bits_) | biased(index(x[d]));
        return k;
    }

    std::uint64_t key_from_indices(std::span<const std::int64_t> idx) const
    {
        std::uint64_t k = 0;
        for (std::size_t d = 0; d < dims_; ++d)
            k = (k << bits_) | biased(idx[d]);
        return k;
    }

    void indices(std::uint64_t key, std::span<std::int64_t> out) const
    {
        const std::uint64_t mask = (std::uint64_t{1} << bits_) - 1;
        for (std::size_t d = dims_; d-- > 0;) {
            out[d] = static_cast<std::int64_t>(key & mask) - bias_;
            key >>= bits_;
        }
    }

    std::size_t dims() const { return dims_; }
    double side() const { return side_; }

  private:
    std::uint64_t biased(std::int64_t i) const
    {
        std::int64_t b = i + bias_;
        if (b < 0 || b >= 2 * bias_)
            throw std::out_of_range("CellPacker: cell index outside packable range");
        return static_cast<std::uint64_t>(b);
    }

    std::size_t dims_;
    double side_;
    unsigned bits_ = 0;
    std::int64_t bias_ = 0;
};

// Index of the torus cell containing x in [0,1)^d with n_side cells per axis.
inline std::size_t torus_cell(std::span<const double> x, std::size_t n_side)
{
    std::size_t idx = 0;
    for (double c : x) {
        auto i = static_cast<std::size_t>(c * static_cast<double>(n_side));
        if (i >= n_side)
            i = n_side - 1;
        idx = idx * n_side + i;
    }
    return idx;
}

// 1/side as an integer, throwing unless side divides the unit interval exactly.
inline std::size_t cells_per_axis(double side)
{
    if (!(side > 0) || side > 1)
        throw std::invalid_argument("cell side must be in (0, 1]");
    double n = 1.0 / side;
    double r = std::round(n);
    if (std::fabs(n - r) > 1e-9 * r)
        throw std::invalid_argument("cell side must be 1/integer on the torus");
    return static_cast<std::size_t>(r);
}

} // namespace mbhalton::detail
