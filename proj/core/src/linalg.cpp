#include "sidon/linalg.hpp"

#include <algorithm>
#include <cstdint>

namespace sidon {

void DenseMatrix::append_row(std::span<const SmallField::Value> values) {
    if (rows == 0 && cols == 0) cols = values.size();
    data.insert(data.end(), values.begin(), values.end());
    ++rows;
}

void DenseMatrix::truncate(std::size_t r) {
    rows = std::min(rows, r);
    data.resize(rows * cols);
}

namespace {

std::size_t rref_f2(DenseMatrix& m) {
    const std::size_t words = (m.cols + 63) / 64;
    std::vector<std::uint64_t> bits(m.rows * words, 0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (m.at(r, c) != 0) bits[r * words + c / 64] |= std::uint64_t{1} << (c % 64);
        }
    }
    auto row = [&](std::size_t r) { return bits.data() + r * words; };

    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
        const std::size_t w = c / 64;
        const std::uint64_t mask = std::uint64_t{1} << (c % 64);
        std::size_t pivot = rank;
        while (pivot < m.rows && (row(pivot)[w] & mask) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank) std::swap_ranges(row(pivot), row(pivot) + words, row(rank));
        const std::uint64_t* prow = row(rank);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == rank || (row(r)[w] & mask) == 0) continue;
            std::uint64_t* target = row(r);
            // Columns before c are zero in the pivot row.
            for (std::size_t k = w; k < words; ++k) target[k] ^= prow[k];
        }
        ++rank;
    }

    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            m.at(r, c) = static_cast<SmallField::Value>((row(r)[c / 64] >> (c % 64)) & 1U);
        }
    }
    return rank;
}

std::size_t rref_generic(DenseMatrix& m, const SmallField& f) {
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols && rank < m.rows; ++c) {
        std::size_t pivot = rank;
        while (pivot < m.rows && m.at(pivot, c) == 0) ++pivot;
        if (pivot == m.rows) continue;
        if (pivot != rank) std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(), m.row(rank).begin());
        auto prow = m.row(rank);
        const auto scale = f.inv(prow[c]);
        for (std::size_t k = c; k < m.cols; ++k) prow[k] = f.mul(prow[k], scale);
        for (std::size_t r = 0; r < m.rows; ++r) {
            if (r == rank) continue;
            const auto factor = m.at(r, c);
            if (factor == 0) continue;
            auto target = m.row(r);
            for (std::size_t k = c; k < m.cols; ++k) {
                if (prow[k] != 0) target[k] = f.sub(target[k], f.mul(factor, prow[k]));
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

std::size_t rref(DenseMatrix& m, const SmallField& f) {
    if (f.order() == 2) return rref_f2(m);
    return rref_generic(m, f);
}

std::size_t rank(DenseMatrix m, const SmallField& f) { return rref(m, f); }

DenseMatrix left_kernel(const DenseMatrix& m, const SmallField& f) {
    DenseMatrix aug(m.rows, m.cols + m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols + r) = 1;
    }
    const std::size_t rk = rref(aug, f);
    DenseMatrix kernel(0, m.rows);
    for (std::size_t r = 0; r < rk; ++r) {
        bool zero_left = true;
        for (std::size_t c = 0; c < m.cols && zero_left; ++c) zero_left = aug.at(r, c) == 0;
        if (!zero_left) continue;
        kernel.append_row(aug.row(r).subspan(m.cols));
    }
    return kernel;
}

}  // namespace sidon
