#include "ffb/linalg.hpp"

#include <algorithm>

namespace ffb {

Mat Mat::identity(FieldPtr field, std::size_t n) {
    Mat m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat Mat::from_rows(FieldPtr field, const std::vector<std::vector<elem>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Mat m(std::move(field), rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw Error(ErrorCode::ShapeMismatch, "ragged rows");
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::from_columns(FieldPtr field, const std::vector<std::vector<elem>>& cols) {
    std::size_t rows = cols.empty() ? 0 : cols.front().size();
    Mat m(std::move(field), rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != rows) throw Error(ErrorCode::ShapeMismatch, "ragged columns");
        for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
    }
    return m;
}

std::vector<elem> Mat::row(std::size_t i) const {
    return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_};
}

std::vector<elem> Mat::column(std::size_t j) const {
    std::vector<elem> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
}

Mat Mat::operator*(const Mat& rhs) const {
    if (cols_ != rhs.rows_) throw Error(ErrorCode::ShapeMismatch, "matrix product shape mismatch");
    const Field& F = *field_;
    Mat out(field_, rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            elem a = at(i, k);
            if (!a) continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out.at(i, j) = F.add(out.at(i, j), F.mul(a, rhs.at(k, j)));
        }
    return out;
}

std::vector<elem> Mat::apply(std::span<const elem> v) const {
    if (v.size() != cols_) throw Error(ErrorCode::ShapeMismatch, "vector length mismatch");
    const Field& F = *field_;
    std::vector<elem> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        elem acc = 0;
        for (std::size_t j = 0; j < cols_; ++j) acc = F.add(acc, F.mul(at(i, j), v[j]));
        out[i] = acc;
    }
    return out;
}

Mat Mat::transpose() const {
    Mat out(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

Mat Mat::vstack(const Mat& below) const {
    if (below.rows_ == 0) return *this;
    if (rows_ == 0) return below;
    if (cols_ != below.cols_) throw Error(ErrorCode::ShapeMismatch, "vstack width mismatch");
    Mat out(field_, rows_ + below.rows_, cols_);
    std::copy(data_.begin(), data_.end(), out.data_.begin());
    std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + data_.size());
    return out;
}

Mat Mat::hstack(const Mat& right) const {
    if (right.cols_ == 0) return *this;
    if (cols_ == 0) return right;
    if (rows_ != right.rows_) throw Error(ErrorCode::ShapeMismatch, "hstack height mismatch");
    Mat out(field_, rows_, cols_ + right.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
        for (std::size_t j = 0; j < right.cols_; ++j) out.at(i, cols_ + j) = right.at(i, j);
    }
    return out;
}

std::vector<std::size_t> Mat::rref() {
    const Field& F = *field_;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t sel = r;
        while (sel < rows_ && at(sel, c) == 0) ++sel;
        if (sel == rows_) continue;
        if (sel != r)
            for (std::size_t j = 0; j < cols_; ++j) std::swap(at(sel, j), at(r, j));
        elem inv = F.inv(at(r, c));
        for (std::size_t j = 0; j < cols_; ++j) at(r, j) = F.mul(at(r, j), inv);
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r) continue;
            elem factor = at(i, c);
            if (!factor) continue;
            for (std::size_t j = 0; j < cols_; ++j)
                at(i, j) = F.sub(at(i, j), F.mul(factor, at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t Mat::rank() const {
    Mat copy = *this;
    return copy.rref().size();
}

Mat Mat::nullspace() const {
    Mat red = *this;
    auto pivots = red.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    const Field& F = *field_;
    std::vector<std::vector<elem>> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free]) continue;
        std::vector<elem> v(cols_, 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = F.neg(red.at(r, free));
        basis.push_back(std::move(v));
    }
    Mat out = Mat::from_columns(field_, basis);
    if (basis.empty()) out = Mat(field_, cols_, 0);
    return out;
}

Mat Mat::inverse() const {
    if (rows_ != cols_) throw Error(ErrorCode::ShapeMismatch, "inverse of non-square matrix");
    Mat aug = hstack(identity(field_, rows_));
    auto pivots = aug.rref();
    if (pivots.size() != rows_ || (rows_ && pivots.back() >= rows_))
        throw Error(ErrorCode::ShapeMismatch, "matrix is singular");
    Mat out(field_, rows_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < rows_; ++j) out.at(i, j) = aug.at(i, rows_ + j);
    return out;
}

std::optional<std::vector<elem>> Mat::solve(std::span<const elem> b) const {
    if (b.size() != rows_) throw Error(ErrorCode::ShapeMismatch, "rhs length mismatch");
    Mat aug(field_, rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = b[i];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;  // inconsistent
    std::vector<elem> x(cols_, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, cols_);
    return x;
}

std::size_t span_dimension(const FieldPtr& field, const std::vector<std::vector<elem>>& vectors) {
    if (vectors.empty()) return 0;
    return Mat::from_rows(field, vectors).rank();
}

Mat joint_nullspace(const std::vector<Mat>& blocks) {
    if (blocks.empty()) throw Error(ErrorCode::InvalidArgument, "no blocks");
    Mat stacked = blocks.front();
    for (std::size_t i = 1; i < blocks.size(); ++i) stacked = stacked.vstack(blocks[i]);
    return stacked.nullspace();
}

}  // namespace ffb
