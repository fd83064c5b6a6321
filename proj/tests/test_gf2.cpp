#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ecrank/gf2.hpp"

using namespace ecrank;

namespace {

// Plain row reduction on vector<vector<bool>>.
std::size_t dense_rank(std::vector<std::vector<bool>> a, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && !a[p][c]) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != r && a[i][c])
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = a[i][j] != a[r][j];
    ++r;
  }
  return r;
}

std::vector<std::vector<bool>> to_dense(const SparseBitMatrix& m) {
  std::vector<std::vector<bool>> a(m.rows(), std::vector<bool>(m.cols(), false));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto c : m.row(i)) a[i][c] = true;
  return a;
}

SparseBitMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density) {
  SparseBitMatrix m(cols);
  std::bernoulli_distribution bit(density);
  for (std::size_t i = 0; i < rows; ++i) {
    std::vector<uint32_t> r;
    for (std::size_t c = 0; c < cols; ++c)
      if (bit(rng)) r.push_back(static_cast<uint32_t>(c));
    m.add_row(r);
  }
  return m;
}

// Basis check: every vector is in the kernel and the set is independent.
void check_basis(const SparseBitMatrix& m, const Nullspace& ns, bool right) {
  std::vector<std::vector<bool>> vecs;
  for (auto& v : ns.basis) {
    CHECK_FALSE((right ? m.right_multiply(v) : m.left_multiply(v)).any());
    std::vector<bool> row(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) row[i] = v.get(i);
    vecs.push_back(row);
  }
  CHECK(dense_rank(vecs, right ? m.cols() : m.rows()) == ns.dim);
}

}  // namespace

TEST_CASE("zero and identity") {
  SparseBitMatrix z(7);
  for (int i = 0; i < 4; ++i) z.add_row({});
  CHECK(right_nullity(z) == 7);
  CHECK(left_nullspace(z).dim == 4);
  CHECK(rank(z) == 0);

  SparseBitMatrix id(6);
  for (uint32_t i = 0; i < 6; ++i) id.add_row({i});
  CHECK(right_nullity(id) == 0);
  CHECK(left_nullspace(id).dim == 0);
  CHECK(rank(id) == 6);
}

TEST_CASE("duplicate rows and repeated indices") {
  SparseBitMatrix m(5);
  m.add_row({0, 1, 3});
  m.add_row({3, 1, 0});
  m.add_row({2, 2, 4});  // the two 2s cancel
  CHECK(m.row(2) == std::vector<uint32_t>{4});
  CHECK(rank(m) == 2);
  auto left = left_nullspace(m);
  REQUIRE(left.dim == 1);
  CHECK(left.basis[0].ones() == std::vector<std::size_t>{0, 1});
  check_basis(m, right_nullspace(m), true);
}

TEST_CASE("random matrices against dense elimination") {
  std::mt19937_64 rng(20261016);
  for (int t = 0; t < 100; ++t) {
    std::size_t rows = 1 + rng() % 500, cols = 1 + rng() % 500;
    if (t < 20) {
      rows = 1 + rng() % 40;
      cols = 1 + rng() % 40;
    }
    // Sparse cases exercise the singleton pass, dense ones the tail.
    double density = (t % 3 == 0) ? 0.5 : 3.0 / static_cast<double>(cols);
    auto m = random_matrix(rng, rows, cols, std::min(density, 0.5));
    const std::size_t r = dense_rank(to_dense(m), cols);
    INFO("rows=" << rows << " cols=" << cols);
    auto rn = right_nullspace(m);
    CHECK(rn.dim == cols - r);
    check_basis(m, rn, true);
    auto ln = left_nullspace(m);
    CHECK(ln.dim == rows - r);
    check_basis(m, ln, false);
  }
}

TEST_CASE("prune removes weak unprotected columns") {
  // Column 3 (norm 100) is met once; its row goes and then column 2 (norm 90)
  // is empty and goes too. Column 4 is protected and empty.
  SparseBitMatrix m(5);
  m.add_row({0, 1});
  m.add_row({0, 1});
  m.add_row({1, 2, 3});
  m.add_row({0});
  std::vector<uint64_t> norms{2, 3, 90, 100, 5};
  auto r = prune(m, norms, 10);
  CHECK(r.removed_columns == std::vector<std::size_t>{2, 3});
  CHECK(r.removed_rows == std::vector<std::size_t>{2});
  CHECK(r.kept_rows == std::vector<std::size_t>{0, 1, 3});
  CHECK(r.zero_protected == std::vector<std::size_t>{4});
  CHECK(r.matrix.column_weights()[2] == 0);
  CHECK(pruned_nullity(r) == 1);  // only column 4 is free
}

TEST_CASE("spurious vectors on large primes are pruned") {
  // Columns 2 and 3 sit above the bound and always appear together, so e2+e3
  // lies in the nullspace.
  SparseBitMatrix m(4);
  m.add_row({0, 2, 3});
  m.add_row({1, 2, 3});
  m.add_row({0, 1});
  std::vector<uint64_t> norms{2, 3, 50, 60};
  auto kept = prune(m, norms, 10, 2, 0);
  CHECK(kept.removed_columns.empty());
  auto r = prune(m, norms, 10, 2, 3);
  CHECK(r.removed_columns == std::vector<std::size_t>{2, 3});
  CHECK(r.kept_rows == std::vector<std::size_t>{2});
}

TEST_CASE("prune keeps the nullspace seen by protected columns") {
  // Dimension of the nullspace projected to the protected coordinates.
  auto projected = [](const SparseBitMatrix& m, const std::vector<uint64_t>& norms, uint64_t bound) {
    std::vector<std::vector<bool>> vecs;
    for (auto& v : right_nullspace(m).basis) {
      std::vector<bool> row(m.cols(), false);
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (norms[c] <= bound) row[c] = v.get(c);
      vecs.push_back(row);
    }
    return dense_rank(vecs, m.cols());
  };
  std::mt19937_64 rng(7);
  for (int t = 0; t < 40; ++t) {
    const std::size_t cols = 20 + rng() % 150, rows = cols / 2 + rng() % cols;
    auto m = random_matrix(rng, rows, cols, 2.5 / static_cast<double>(cols));
    std::vector<uint64_t> norms(cols);
    for (auto& n : norms) n = 2 + rng() % 1000;
    const uint64_t bound = 300;
    auto r = prune(m, norms, bound, 2, 0);
    CHECK(projected(r.matrix, norms, bound) == projected(m, norms, bound));
    for (auto c : r.removed_columns) CHECK(norms[c] > bound);
    for (std::size_t c = 0; c < cols; ++c)
      if (norms[c] > bound && r.matrix.column_weights()[c] > 0) CHECK(r.matrix.column_weights()[c] >= 2);
  }
}
