#include "smectic/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>

namespace smectic {

long long CsrMatrix::find(int i, int j) const {
  const auto first = col_idx.begin() + row_ptr[i];
  const auto last = col_idx.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return -1;
  return it - col_idx.begin();
}

void CsrMatrix::add(int i, int j, double v) {
  const long long pos = find(i, j);
  if (pos < 0) {
    throw std::logic_error("CsrMatrix::add: entry (" + std::to_string(i) + ", " +
                           std::to_string(j) + ") is not in the sparsity pattern");
  }
  values[pos] += v;
}

double CsrMatrix::coeff(int i, int j) const {
  const long long pos = find(i, j);
  return pos < 0 ? 0.0 : values[pos];
}

Eigen::VectorXd CsrMatrix::multiply(const Eigen::VectorXd& x) const {
  if (x.size() != cols) throw std::invalid_argument("CsrMatrix::multiply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
  for (int i = 0; i < rows; ++i) {
    double s = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += values[p] * x(col_idx[p]);
    y(i) = s;
  }
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  CsrMatrix t;
  t.rows = cols;
  t.cols = rows;
  t.row_ptr.assign(cols + 1, 0);
  for (int c : col_idx) ++t.row_ptr[c + 1];
  for (int i = 0; i < cols; ++i) t.row_ptr[i + 1] += t.row_ptr[i];
  t.col_idx.resize(col_idx.size());
  t.values.resize(values.size());
  std::vector<int> next(t.row_ptr.begin(), t.row_ptr.end() - 1);
  for (int i = 0; i < rows; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      const int dst = next[col_idx[p]]++;
      t.col_idx[dst] = i;
      t.values[dst] = values[p];
    }
  }
  return t;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) d(i, col_idx[p]) = values[p];
  }
  return d;
}

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& a, double drop) {
  CsrMatrix m;
  m.rows = static_cast<int>(a.rows());
  m.cols = static_cast<int>(a.cols());
  m.row_ptr.assign(1, 0);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (std::abs(a(i, j)) > drop) {
        m.col_idx.push_back(j);
        m.values.push_back(a(i, j));
      }
    }
    m.row_ptr.push_back(static_cast<int>(m.col_idx.size()));
  }
  return m;
}

bool CsrMatrix::well_formed() const {
  if (static_cast<int>(row_ptr.size()) != rows + 1 || row_ptr.front() != 0) return false;
  if (row_ptr.back() != static_cast<int>(col_idx.size()) || col_idx.size() != values.size()) {
    return false;
  }
  for (int i = 0; i < rows; ++i) {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
      if (col_idx[p] < 0 || col_idx[p] >= cols) return false;
      if (p > row_ptr[i] && col_idx[p] <= col_idx[p - 1]) return false;
      if (!std::isfinite(values[p])) return false;
    }
  }
  return true;
}

void SparsityBuilder::insert_block(std::span<const int> row_dofs, std::span<const int> col_dofs) {
  for (int i : row_dofs) {
    auto& row = entries_[i];
    row.insert(row.end(), col_dofs.begin(), col_dofs.end());
  }
}

CsrMatrix SparsityBuilder::build() {
  CsrMatrix m;
  m.rows = rows_;
  m.cols = cols_;
  m.row_ptr.assign(1, 0);
  m.row_ptr.reserve(rows_ + 1);
  std::size_t total = 0;
  for (auto& row : entries_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    total += row.size();
  }
  m.col_idx.reserve(total);
  for (auto& row : entries_) {
    m.col_idx.insert(m.col_idx.end(), row.begin(), row.end());
    m.row_ptr.push_back(static_cast<int>(m.col_idx.size()));
    std::vector<int>().swap(row);
  }
  m.values.assign(m.col_idx.size(), 0.0);
  return m;
}

void write_triplets(std::ostream& os, const CsrMatrix& a) {
  os << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n' << std::setprecision(17);
  for (int i = 0; i < a.rows; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      os << i << ' ' << a.col_idx[p] << ' ' << a.values[p] << '\n';
    }
  }
}

void write_vector(std::ostream& os, const Eigen::VectorXd& v) {
  os << v.size() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << i << ' ' << v(i) << '\n';
}

}  // namespace smectic
