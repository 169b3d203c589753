#ifndef FFB_LINALG_HPP
#define FFB_LINALG_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ffb/field.hpp"

namespace ffb {

/// Dense matrix over a Field.  Deterministic elimination: pivots are always
/// the first usable row/column, so every derived basis is reproducible.
class Mat {
  public:
    Mat() = default;
    Mat(FieldPtr field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    static Mat identity(FieldPtr field, std::size_t n);
    static Mat from_rows(FieldPtr field, const std::vector<std::vector<elem>>& rows);
    static Mat from_columns(FieldPtr field, const std::vector<std::vector<elem>>& cols);

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    elem& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    elem at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<elem> row(std::size_t i) const;
    std::vector<elem> column(std::size_t j) const;

    Mat operator*(const Mat& rhs) const;
    std::vector<elem> apply(std::span<const elem> v) const;  // this * v
    Mat transpose() const;
    Mat vstack(const Mat& below) const;
    Mat hstack(const Mat& right) const;

    /// In-place row reduction to reduced row echelon form; returns pivot columns.
    std::vector<std::size_t> rref();
    std::size_t rank() const;
    /// Columns form a basis of {v : this * v = 0}; deterministic order
    /// (free columns ascending, with -1 at the free slot convention).
    Mat nullspace() const;
    /// Inverse of a square matrix; throws ShapeMismatch when singular.
    Mat inverse() const;
    /// One solution x of this * x = b, if any.
    std::optional<std::vector<elem>> solve(std::span<const elem> b) const;

    bool operator==(const Mat& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
    }

  private:
    FieldPtr field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<elem> data_;
};

/// Dimension of the span of a list of vectors.
std::size_t span_dimension(const FieldPtr& field, const std::vector<std::vector<elem>>& vectors);

/// Intersection of column spans is not needed; what the slicing code wants is
/// the joint nullspace: columns v with A_i v = 0 for every stacked block.
Mat joint_nullspace(const std::vector<Mat>& blocks);

}  // namespace ffb

#endif
