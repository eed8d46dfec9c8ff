#pragma once

// Integer partitions (Young diagrams) and the hook/conjugate combinatorics
// needed by the conformal-block coefficients.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace isorabi {

// Weakly decreasing list of positive row lengths; empty list = empty diagram.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> rows) : rows_(std::move(rows)) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i] < 1)
                throw std::invalid_argument("Partition: rows must be positive");
            if (i > 0 && rows_[i] > rows_[i - 1])
                throw std::invalid_argument("Partition: rows must be weakly decreasing");
        }
    }

    Partition(std::initializer_list<int> rows)
        : Partition(std::vector<int>(rows)) {}

    const std::vector<int>& rows() const { return rows_; }

    int weight() const {
        return std::accumulate(rows_.begin(), rows_.end(), 0);
    }

    std::size_t num_rows() const { return rows_.size(); }

    // Row length, 1-based; zero outside the diagram.
    int row(int i) const {
        return (i >= 1 && i <= static_cast<int>(rows_.size())) ? rows_[i - 1] : 0;
    }

    bool contains(int i, int j) const {
        return i >= 1 && j >= 1 && j <= row(i);
    }

    bool operator==(const Partition& other) const { return rows_ == other.rows_; }
    bool operator!=(const Partition& other) const { return rows_ != other.rows_; }

private:
    std::vector<int> rows_;
};

// Column counts lambda'_j.
inline Partition conjugate(const Partition& lambda) {
    if (lambda.num_rows() == 0) return Partition{};
    std::vector<int> cols(static_cast<std::size_t>(lambda.rows().front()));
    for (int j = 1; j <= lambda.rows().front(); ++j) {
        int count = 0;
        for (int r : lambda.rows())
            if (r >= j) ++count;
        cols[static_cast<std::size_t>(j - 1)] = count;
    }
    return Partition(std::move(cols));
}

// h_lambda(i,j) = lambda_i + lambda'_j - i - j + 1, 1-based box indices.
inline int hook_length(const Partition& lambda, int i, int j) {
    if (!lambda.contains(i, j))
        throw std::out_of_range("hook_length: box outside diagram");
    const Partition conj = conjugate(lambda);
    return lambda.row(i) + conj.row(j) - i - j + 1;
}

// All partitions of weight exactly n, in lexicographically decreasing order.
inline std::vector<Partition> partitions_of(int n) {
    if (n < 0) throw std::invalid_argument("partitions_of: n must be >= 0");
    std::vector<Partition> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int rem, int maxpart) -> void {
        if (rem == 0) {
            out.emplace_back(cur);
            return;
        }
        for (int p = std::min(rem, maxpart); p >= 1; --p) {
            cur.push_back(p);
            self(self, rem - p, p);
            cur.pop_back();
        }
    };
    rec(rec, n, n);
    return out;
}

} // namespace isorabi
