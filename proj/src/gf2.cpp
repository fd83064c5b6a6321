#include "ecrank/gf2.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace ecrank {

std::size_t BitVector::count() const {
  std::size_t c = 0;
  for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
  return c;
}

std::vector<std::size_t> BitVector::ones() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < w_.size(); ++k) {
    uint64_t x = w_[k];
    while (x) {
      out.push_back(k * 64 + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return out;
}

void SparseBitMatrix::add_row(std::vector<uint32_t> cols) {
  std::sort(cols.begin(), cols.end());
  std::vector<uint32_t> row;
  for (std::size_t i = 0; i < cols.size();) {
    std::size_t j = i;
    while (j < cols.size() && cols[j] == cols[i]) ++j;
    if ((j - i) % 2) row.push_back(cols[i]);
    i = j;
  }
  for (auto c : row) {
    if (c >= cols_) {
      cols_ = c + 1;
      col_weight_.resize(cols_, 0);
    }
    ++col_weight_[c];
  }
  rows_.push_back(std::move(row));
}

SparseBitMatrix SparseBitMatrix::transpose() const {
  std::vector<std::vector<uint32_t>> t(cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (auto c : rows_[i]) t[c].push_back(static_cast<uint32_t>(i));
  SparseBitMatrix out(rows_.size());
  for (auto& r : t) out.add_row(std::move(r));
  return out;
}

SparseBitMatrix SparseBitMatrix::select_rows(const std::vector<std::size_t>& keep) const {
  SparseBitMatrix out(cols_);
  for (auto i : keep) out.add_row(rows_[i]);
  return out;
}

BitVector SparseBitMatrix::left_multiply(const BitVector& v) const {
  BitVector out(cols_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    if (v.get(i))
      for (auto c : rows_[i]) out.flip(c);
  return out;
}

BitVector SparseBitMatrix::right_multiply(const BitVector& x) const {
  BitVector out(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    bool s = false;
    for (auto c : rows_[i]) s ^= x.get(c);
    if (s) out.set(i);
  }
  return out;
}

namespace {

struct SingletonStep {
  uint32_t col;
  std::size_t row;
};

// Removes (row, column) pairs where the column meets exactly one live row.
// x_col is then fixed by that row, so the nullspace of what remains lifts
// uniquely. Returns the pivots in elimination order and marks dead rows.
std::vector<SingletonStep> singleton_pass(const SparseBitMatrix& m, std::vector<char>& row_dead,
                                          std::vector<char>& col_dead) {
  const std::size_t nc = m.cols();
  std::vector<std::vector<std::size_t>> col_rows(nc);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto c : m.row(i)) col_rows[c].push_back(i);
  std::vector<std::size_t> live(nc);
  for (std::size_t c = 0; c < nc; ++c) live[c] = col_rows[c].size();
  std::vector<uint32_t> queue;
  for (std::size_t c = 0; c < nc; ++c)
    if (live[c] == 1) queue.push_back(static_cast<uint32_t>(c));
  std::vector<SingletonStep> steps;
  while (!queue.empty()) {
    uint32_t c = queue.back();
    queue.pop_back();
    if (col_dead[c] || live[c] != 1) continue;
    std::size_t r = 0;
    for (auto i : col_rows[c])
      if (!row_dead[i]) r = i;
    row_dead[r] = 1;
    col_dead[c] = 1;
    steps.push_back({c, r});
    for (auto cc : m.row(r)) {
      if (--live[cc] == 1 && !col_dead[cc]) queue.push_back(cc);
    }
  }
  return steps;
}

}  // namespace

Nullspace right_nullspace(const SparseBitMatrix& m) {
  const std::size_t nc = m.cols();
  std::vector<char> row_dead(m.rows(), 0), col_dead(nc, 0);
  auto steps = singleton_pass(m, row_dead, col_dead);

  // Dense tail on the surviving rows and columns.
  std::vector<uint32_t> cols_live;
  std::vector<std::size_t> local(nc, SIZE_MAX);
  for (std::size_t c = 0; c < nc; ++c)
    if (!col_dead[c]) {
      local[c] = cols_live.size();
      cols_live.push_back(static_cast<uint32_t>(c));
    }
  const std::size_t w = cols_live.size();
  std::vector<BitVector> dense;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (row_dead[i]) continue;
    BitVector v(w);
    for (auto c : m.row(i)) v.flip(local[c]);
    if (v.any()) dense.push_back(std::move(v));
  }
  // Reduced row echelon form.
  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < w && rank < dense.size(); ++c) {
    std::size_t p = rank;
    while (p < dense.size() && !dense[p].get(c)) ++p;
    if (p == dense.size()) continue;
    std::swap(dense[rank], dense[p]);
    const std::size_t k0 = c >> 6;
    for (std::size_t i = 0; i < dense.size(); ++i) {
      if (i == rank || !dense[i].get(c)) continue;
      auto& dst = dense[i].words();
      const auto& src = dense[rank].words();
      for (std::size_t k = k0; k < dst.size(); ++k) dst[k] ^= src[k];
    }
    pivot_col.push_back(c);
    ++rank;
  }
  std::vector<char> is_pivot(w, 0);
  for (auto c : pivot_col) is_pivot[c] = 1;

  Nullspace out;
  for (std::size_t f = 0; f < w; ++f) {
    if (is_pivot[f]) continue;
    BitVector x(nc);
    x.set(cols_live[f]);
    for (std::size_t i = 0; i < rank; ++i)
      if (dense[i].get(f)) x.set(cols_live[pivot_col[i]]);
    // Lift through the singleton pivots, last eliminated first.
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      bool s = false;
      for (auto c : m.row(it->row))
        if (c != it->col) s ^= x.get(c);
      x.set(it->col, s);
    }
    out.basis.push_back(std::move(x));
  }
  out.dim = out.basis.size();
  return out;
}

Nullspace left_nullspace(const SparseBitMatrix& m) {
  Nullspace ns = right_nullspace(m.transpose());
  // Each vector is rechecked against the original matrix.
  for (auto& v : ns.basis)
    if (m.left_multiply(v).any()) throw std::logic_error("left_nullspace: vector fails v M = 0");
  return ns;
}

std::size_t rank(const SparseBitMatrix& m) { return m.cols() - right_nullspace(m).dim; }

PruneResult prune(const SparseBitMatrix& m, const std::vector<uint64_t>& column_norms, uint64_t protected_bound,
                  std::size_t min_weight, std::size_t spurious_support) {
  const std::size_t nc = m.cols();
  auto is_protected = [&](std::size_t c) { return c < column_norms.size() && column_norms[c] <= protected_bound; };
  std::vector<char> row_dead(m.rows(), 0), col_removed(nc, 0);
  std::vector<std::vector<std::size_t>> col_rows(nc);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto c : m.row(i)) col_rows[c].push_back(i);
  std::vector<std::size_t> weight(nc);
  for (std::size_t c = 0; c < nc; ++c) weight[c] = col_rows[c].size();

  auto remove_column = [&](std::size_t c, std::vector<std::size_t>& touched) {
    col_removed[c] = 1;
    for (auto r : col_rows[c]) {
      if (row_dead[r]) continue;
      row_dead[r] = 1;
      for (auto cc : m.row(r)) {
        --weight[cc];
        touched.push_back(cc);
      }
    }
  };

  auto weight_pass = [&]() {
    std::vector<std::size_t> work(nc);
    std::iota(work.begin(), work.end(), 0);
    while (!work.empty()) {
      std::vector<std::size_t> next;
      for (auto c : work)
        if (!col_removed[c] && !is_protected(c) && weight[c] < min_weight) remove_column(c, next);
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      work = std::move(next);
    }
  };

  auto live_matrix = [&]() {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (!row_dead[i]) keep.push_back(i);
    return std::make_pair(m.select_rows(keep), keep);
  };

  weight_pass();
  if (spurious_support > 0) {
    while (true) {
      auto [sub, keep] = live_matrix();
      auto ns = right_nullspace(sub);
      // Reduce the basis with protected coordinates ordered first; rows whose
      // pivot is unprotected then vanish on every protected column.
      std::vector<std::size_t> order;
      for (std::size_t c = 0; c < nc; ++c)
        if (is_protected(c)) order.push_back(c);
      const std::size_t n_prot = order.size();
      for (std::size_t c = 0; c < nc; ++c)
        if (!is_protected(c)) order.push_back(c);
      std::vector<BitVector> red;
      for (auto& v : ns.basis) {
        BitVector u(nc);
        for (std::size_t k = 0; k < nc; ++k)
          if (v.get(order[k])) u.set(k);
        red.push_back(std::move(u));
      }
      std::size_t rk = 0;
      std::vector<std::size_t> piv;
      for (std::size_t k = 0; k < nc && rk < red.size(); ++k) {
        std::size_t p = rk;
        while (p < red.size() && !red[p].get(k)) ++p;
        if (p == red.size()) continue;
        std::swap(red[rk], red[p]);
        for (std::size_t i = 0; i < red.size(); ++i)
          if (i != rk && red[i].get(k)) red[i] ^= red[rk];
        piv.push_back(k);
        ++rk;
      }
      std::vector<std::size_t> doomed;
      for (std::size_t i = 0; i < rk; ++i) {
        if (piv[i] < n_prot) continue;
        auto support = red[i].ones();
        if (support.size() > spurious_support) continue;
        bool fresh = true;
        for (auto& k : support) {
          k = order[k];
          if (col_removed[k]) fresh = false;
        }
        if (fresh) doomed.insert(doomed.end(), support.begin(), support.end());
      }
      if (doomed.empty()) break;
      std::vector<std::size_t> touched;
      for (auto c : doomed)
        if (!col_removed[c]) remove_column(c, touched);
      weight_pass();
    }
  }

  PruneResult out;
  auto [sub, keep] = live_matrix();
  out.matrix = std::move(sub);
  out.kept_rows = std::move(keep);
  for (std::size_t c = 0; c < nc; ++c) {
    if (col_removed[c]) out.removed_columns.push_back(c);
    else if (is_protected(c) && weight[c] == 0) out.zero_protected.push_back(c);
  }
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (row_dead[i]) out.removed_rows.push_back(i);
  return out;
}

std::size_t pruned_nullity(const PruneResult& r) {
  return right_nullspace(r.matrix).dim - r.removed_columns.size();
}

}  // namespace ecrank
