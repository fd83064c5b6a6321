// Sparse matrices over GF(2): nullspaces and pruning of weak columns.
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ecrank {

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}
  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v = true) {
    if (v)
      w_[i >> 6] |= uint64_t(1) << (i & 63);
    else
      w_[i >> 6] &= ~(uint64_t(1) << (i & 63));
  }
  void flip(std::size_t i) { w_[i >> 6] ^= uint64_t(1) << (i & 63); }
  BitVector& operator^=(const BitVector& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  std::size_t count() const;
  std::vector<std::size_t> ones() const;
  const std::vector<uint64_t>& words() const { return w_; }
  std::vector<uint64_t>& words() { return w_; }
  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<uint64_t> w_;
};

class SparseBitMatrix {
 public:
  explicit SparseBitMatrix(std::size_t cols = 0) : cols_(cols), col_weight_(cols, 0) {}
  // Adds a row; repeated column indices cancel in pairs.
  void add_row(std::vector<uint32_t> cols);
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<uint32_t>& row(std::size_t i) const { return rows_[i]; }
  const std::vector<std::size_t>& column_weights() const { return col_weight_; }
  SparseBitMatrix transpose() const;
  // Rows listed in order, all columns.
  SparseBitMatrix select_rows(const std::vector<std::size_t>& keep) const;
  // Product v M for a row-combination vector v (length rows()).
  BitVector left_multiply(const BitVector& v) const;
  // Product M x for x of length cols().
  BitVector right_multiply(const BitVector& x) const;

 private:
  std::size_t cols_;
  std::vector<std::vector<uint32_t>> rows_;
  std::vector<std::size_t> col_weight_;
};

struct Nullspace {
  std::size_t dim = 0;
  std::vector<BitVector> basis;
};

// {x : M x = 0}. Columns met by a single row are pivoted out first; the rest
// is reduced densely with 64-bit words.
Nullspace right_nullspace(const SparseBitMatrix& m);
inline std::size_t right_nullity(const SparseBitMatrix& m) { return right_nullspace(m).dim; }
// {v : v M = 0}, vectors of length rows().
Nullspace left_nullspace(const SparseBitMatrix& m);
std::size_t rank(const SparseBitMatrix& m);

struct PruneResult {
  SparseBitMatrix matrix;
  std::vector<std::size_t> kept_rows;        // indices into the input rows
  std::vector<std::size_t> removed_columns;  // ascending
  std::vector<std::size_t> removed_rows;     // ascending
  std::vector<std::size_t> zero_protected;   // weight-0 columns at norm <= the protected bound
};

// Repeatedly drops columns of weight < min_weight whose norm exceeds
// protected_bound, with every row touching them; then drops columns carrying a
// nullspace basis vector supported on <= spurious_support unprotected columns,
// again with incident rows. Protected columns are never removed. Removed
// columns stay in the matrix as all-zero columns so indices are stable.
PruneResult prune(const SparseBitMatrix& m, const std::vector<uint64_t>& column_norms, uint64_t protected_bound,
                  std::size_t min_weight = 2, std::size_t spurious_support = 3);

// Right nullity of the pruned matrix not counting the removed columns.
std::size_t pruned_nullity(const PruneResult& r);

}  // namespace ecrank
