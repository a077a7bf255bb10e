#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace risbeam {

/// Dense row-major 2-D grid. Indices are 0-based here; the element
/// numbering of the surface itself (1-based (i, j)) lives in ArrayGeometry.
template <typename T>
class Grid2D {
public:
    Grid2D() = default;

    Grid2D(int rows, int cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 1 || cols < 1) throw std::invalid_argument("Grid2D: rows and cols must be >= 1");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    T& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const T& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    T& operator[](std::size_t linear) { return data_[linear]; }
    const T& operator[](std::size_t linear) const { return data_[linear]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    bool same_shape(int rows, int cols) const { return rows_ == rows && cols_ == cols; }

    bool operator==(const Grid2D&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

}  // namespace risbeam
