#pragma once

#include <Eigen/Core>

#include <vector>

namespace charm::liealg {

/// Reductive splitting of a skew matrix relative to the model structure
/// pair (phi0, xi0) on R^{2k+1}: an isotropy part commuting with phi0, an
/// anti-commuting part supported on the top block, and the last row/column
/// part.
struct SkewDecomposition {
  Eigen::MatrixXd h;
  Eigen::MatrixXd m1;
  Eigen::MatrixXd m2;
};

inline int structure_dim(int k) { return 2 * k + 1; }
inline int h_dim(int k) { return k * k; }
inline int m1_dim(int k) { return k * k - k; }
inline int m2_dim(int k) { return 2 * k; }

/// Block matrix [[0, -I_k, 0], [I_k, 0, 0], [0, 0, 0]].
Eigen::MatrixXd model_phi(int k);
/// Last coordinate vector e_{2k}.
Eigen::VectorXd model_xi(int k);
/// Rank one projector xi0 xi0^T.
Eigen::MatrixXd reeb_projector(int k);

/// Invariant inner product <a,b> = -tr(ab) on skew matrices.
double trace_form(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

Eigen::MatrixXd bracket(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

bool is_skew(const Eigen::MatrixXd& a, double tol = 1e-12);

/// Split a skew matrix of size 2k+1; the parts sum back to the input.
SkewDecomposition decompose(const Eigen::MatrixXd& a);

/// Upper-left 2k x 2k block.
Eigen::MatrixXd hat(const Eigen::MatrixXd& a);
/// Vector part of a last row/column element: first 2k entries of a xi0.
Eigen::VectorXd hat2(const Eigen::MatrixXd& a2);
/// Inverse of hat2: v xi0^T - xi0 v^T from a length 2k vector.
Eigen::MatrixXd m2_element(const Eigen::VectorXd& v);

/// Distance of a skew matrix from the named component, in the trace norm.
double h_defect(const Eigen::MatrixXd& a);
double m1_defect(const Eigen::MatrixXd& a);
double m2_defect(const Eigen::MatrixXd& a);

/// Component bases (not normalized); sizes match the dimension counts.
std::vector<Eigen::MatrixXd> h_basis(int k);
std::vector<Eigen::MatrixXd> m1_basis(int k);
std::vector<Eigen::MatrixXd> m2_basis(int k);

/// Largest violation of the reductive bracket inclusions
/// [h,m1] in m1, [h,m2] in m2, [m1,m1] in h, [m1,m2] in m2,
/// [m2,m2] in h+m1 over all basis pairs.
double bracket_inclusion_defect(int k);

/// Largest violation of the split identities on a given skew matrix:
/// reassembly, skewness of the parts, component membership, and the
/// commutation characterizations of h and m1.
double decomposition_defect(const Eigen::MatrixXd& a);

} // namespace charm::liealg
