#include "rational_oracle.hpp"

#include <stdexcept>

namespace oracle {

RationalMatrix rational_zero(int rows, int cols) {
  return RationalMatrix(rows, std::vector<mpq_class>(cols, mpq_class(0)));
}

RationalMatrix rational_identity(int n) {
  RationalMatrix a = rational_zero(n, n);
  for (int i = 0; i < n; ++i) a[i][i] = 1;
  return a;
}

RationalMatrix rational_multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const int m = static_cast<int>(a.size());
  const int k = static_cast<int>(b.size());
  const int n = static_cast<int>(b[0].size());
  if (static_cast<int>(a[0].size()) != k)
    throw std::invalid_argument("rational_multiply: shape mismatch");
  RationalMatrix c = rational_zero(m, n);
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (int j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

RationalMatrix rational_transpose(const RationalMatrix& a) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(a[0].size());
  RationalMatrix t = rational_zero(n, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) t[j][i] = a[i][j];
  return t;
}

RationalMatrix rational_nullspace(RationalMatrix a) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  std::vector<int> pivot_col;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int pivot = -1;
    for (int r = row; r < m; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[row], a[pivot]);
    const mpq_class inv = 1 / a[row][col];
    for (int j = col; j < n; ++j) a[row][j] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const mpq_class factor = a[r][col];
      for (int j = col; j < n; ++j) a[r][j] -= factor * a[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col) is_pivot[c] = true;

  std::vector<int> free_cols;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  RationalMatrix basis = rational_zero(n, static_cast<int>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const int fc = free_cols[k];
    basis[fc][k] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
      basis[pivot_col[r]][k] = -a[r][fc];
  }
  return basis;
}

phasefront::Mat to_double(const RationalMatrix& a) {
  const int m = static_cast<int>(a.size());
  const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
  phasefront::Mat out(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = a[i][j].get_d();
  return out;
}

phasefront::Mat exact_singular_space(const RationalMatrix& q_re,
                                     const RationalMatrix& q_im, int d) {
  const int n = 2 * d;
  // J = [[0, I], [-I, 0]]
  RationalMatrix J = rational_zero(n, n);
  for (int i = 0; i < d; ++i) {
    J[i][d + i] = 1;
    J[d + i][i] = -1;
  }
  const RationalMatrix re_f = rational_multiply(J, q_re);
  const RationalMatrix im_f = rational_multiply(J, q_im);

  RationalMatrix stacked = rational_zero(n * n, n);
  RationalMatrix power = rational_identity(n);
  for (int j = 0; j < n; ++j) {
    const RationalMatrix block = rational_multiply(re_f, power);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) stacked[j * n + r][c] = block[r][c];
    power = rational_multiply(im_f, power);
  }
  return to_double(rational_nullspace(std::move(stacked)));
}

}  // namespace oracle
