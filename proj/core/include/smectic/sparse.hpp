#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <span>
#include <vector>

namespace smectic {

/// Compressed-row matrix with sorted, unique column indices per row.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;

  [[nodiscard]] long long nnz() const { return static_cast<long long>(values.size()); }
  /// Position of (i, j) in `values`, or -1 if structurally zero.
  [[nodiscard]] long long find(int i, int j) const;
  /// Adds `v` at (i, j); the entry must be in the pattern.
  void add(int i, int j, double v);
  [[nodiscard]] double coeff(int i, int j) const;
  [[nodiscard]] Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  [[nodiscard]] CsrMatrix transpose() const;
  [[nodiscard]] Eigen::MatrixXd to_dense() const;
  [[nodiscard]] static CsrMatrix from_dense(const Eigen::MatrixXd& a, double drop = 0.0);
  /// Every value finite, indices in range, strictly increasing in each row.
  [[nodiscard]] bool well_formed() const;
};

/// Collects the symbolic pattern row by row.
class SparsityBuilder {
 public:
  SparsityBuilder(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows) {}

  void insert(int i, int j) { entries_[i].push_back(j); }
  /// All couplings (i, j) with i in `row_dofs`, j in `col_dofs`.
  void insert_block(std::span<const int> row_dofs, std::span<const int> col_dofs);
  /// Sorts, removes duplicates and returns a zero-valued matrix.
  [[nodiscard]] CsrMatrix build();

 private:
  int rows_, cols_;
  std::vector<std::vector<int>> entries_;
};

/// Plain-text triplets "row col value" with 17 significant digits, one per
/// stored entry, preceded by a header line "rows cols nnz".
void write_triplets(std::ostream& os, const CsrMatrix& a);
void write_vector(std::ostream& os, const Eigen::VectorXd& v);

}  // namespace smectic
