#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sidon/small_field.hpp"

namespace sidon {

/// Row-major matrix of encoded F_q values.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<SmallField::Value> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

    [[nodiscard]] SmallField::Value& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    [[nodiscard]] SmallField::Value at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    [[nodiscard]] std::span<SmallField::Value> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    [[nodiscard]] std::span<const SmallField::Value> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }
    void append_row(std::span<const SmallField::Value> values);
    /// Keeps the first `r` rows.
    void truncate(std::size_t r);

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;
};

/// Brings `m` to reduced row echelon form in place (pivots scaled to 1, pivot
/// columns cleared, zero rows last) and returns the rank. Over F_2 the rows are
/// bit-packed into 64-bit words for the elimination.
std::size_t rref(DenseMatrix& m, const SmallField& f);

[[nodiscard]] std::size_t rank(DenseMatrix m, const SmallField& f);

/// RREF basis of the left kernel {x : x * m = 0}.
[[nodiscard]] DenseMatrix left_kernel(const DenseMatrix& m, const SmallField& f);

}  // namespace sidon
