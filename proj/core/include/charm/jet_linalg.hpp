#pragma once

#include "charm/jet.hpp"

namespace charm::geom {

/// Dense square matrix with jet entries, row-major, used for the small
/// per-point solves (metric inversion, basis changes, normal complements).
class JetMatrix {
public:
  JetMatrix() = default;
  JetMatrix(int rows, int cols, int nvars, int order);
  static JetMatrix from_flat(int rows, int cols, std::vector<Jet> flat);

  int rows() const { return m_rows; }
  int cols() const { return m_cols; }
  Jet& at(int i, int j) { return m_data[static_cast<size_t>(i * m_cols + j)]; }
  const Jet& at(int i, int j) const { return m_data[static_cast<size_t>(i * m_cols + j)]; }
  const std::vector<Jet>& flat() const { return m_data; }

  Eigen::MatrixXd values() const;

private:
  int m_rows = 0;
  int m_cols = 0;
  std::vector<Jet> m_data;
};

/// Gaussian elimination with partial pivoting on jet values.
JetMatrix jet_solve(JetMatrix a, JetMatrix b);
JetMatrix jet_inverse(const JetMatrix& a);
JetMatrix jet_matmul(const JetMatrix& a, const JetMatrix& b);

/// Determinant by Laplace expansion along the first column. Division-free,
/// so matrices whose values are singular still get exact derivative layers.
Jet jet_det(const JetMatrix& a);

} // namespace charm::geom
