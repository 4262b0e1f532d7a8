#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

/**
 * Dense row-major matrix whose rows and columns carry string labels
 * (country codes on rows, product or sector codes on columns).
 *
 * Labels are unique along each axis. Lookups by label are O(1).
 */
template <class T>
class LabeledMatrix {
public:
    LabeledMatrix() = default;

    LabeledMatrix(std::vector<std::string> rows, std::vector<std::string> cols, T fill = T{})
        : rows_(std::move(rows)), cols_(std::move(cols)), data_(rows_.size() * cols_.size(), fill) {
        reindex();
    }

    LabeledMatrix(std::vector<std::string> rows, std::vector<std::string> cols, std::vector<T> data)
        : rows_(std::move(rows)), cols_(std::move(cols)), data_(std::move(data)) {
        if (data_.size() != rows_.size() * cols_.size())
            throw ForgeError(ErrorKind::InvalidArgument, "matrix data size does not match its labels");
        reindex();
    }

    std::size_t n_rows() const noexcept { return rows_.size(); }
    std::size_t n_cols() const noexcept { return cols_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    const std::vector<std::string>& row_labels() const noexcept { return rows_; }
    const std::vector<std::string>& col_labels() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_.size() + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_.size() + c]; }

    std::span<T> row(std::size_t r) { return {data_.data() + r * cols_.size(), cols_.size()}; }
    std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_.size(), cols_.size()}; }

    std::optional<std::size_t> row_index(const std::string& label) const {
        auto it = row_lookup_.find(label);
        if (it == row_lookup_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<std::size_t> col_index(const std::string& label) const {
        auto it = col_lookup_.find(label);
        if (it == col_lookup_.end()) return std::nullopt;
        return it->second;
    }

    const T& at(const std::string& row_label, const std::string& col_label) const {
        auto r = row_index(row_label);
        auto c = col_index(col_label);
        if (!r || !c)
            throw ForgeError(ErrorKind::UnknownCode, "unknown matrix entry (" + row_label + ", " + col_label + ")");
        return (*this)(*r, *c);
    }

    std::span<const T> data() const noexcept { return data_; }
    std::span<T> data() noexcept { return data_; }

    bool same_labels(const LabeledMatrix<T>& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    template <class U>
    bool same_labels(const LabeledMatrix<U>& other) const {
        return rows_ == other.row_labels() && cols_ == other.col_labels();
    }

    friend bool operator==(const LabeledMatrix& a, const LabeledMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    void reindex() {
        row_lookup_.clear();
        col_lookup_.clear();
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (!row_lookup_.emplace(rows_[i], i).second)
                throw ForgeError(ErrorKind::InvalidArgument, "duplicate row label " + rows_[i]);
        for (std::size_t j = 0; j < cols_.size(); ++j)
            if (!col_lookup_.emplace(cols_[j], j).second)
                throw ForgeError(ErrorKind::InvalidArgument, "duplicate column label " + cols_[j]);
    }

    std::vector<std::string> rows_;
    std::vector<std::string> cols_;
    std::vector<T> data_;
    std::unordered_map<std::string, std::size_t> row_lookup_;
    std::unordered_map<std::string, std::size_t> col_lookup_;
};

using Matrix = LabeledMatrix<double>;
using BinaryMatrix = LabeledMatrix<std::uint8_t>;

} // namespace forge
