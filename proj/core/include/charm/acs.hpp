#pragma once

#include "charm/geometry.hpp"

namespace charm::acs {

/// Almost contact metric structure on a chart. The three tensors are carried
/// as one joint bundle (phi components, then xi, then eta) so builders can
/// share intermediate work and a point evaluation happens once.
class AlmostContactStructure {
public:
  AlmostContactStructure() = default;
  AlmostContactStructure(geom::ManifoldModel model, geom::FieldBundle joint);

  int dim() const { return m_model.dim(); }
  int n() const { return (dim() - 1) / 2; }
  const geom::ManifoldModel& model() const { return m_model; }
  const geom::FieldBundle& joint() const { return m_joint; }

  geom::TensorField phi() const;
  geom::TensorField xi() const;
  geom::TensorField eta() const;

private:
  geom::ManifoldModel m_model;
  geom::FieldBundle m_joint;
};

/// Structure tensors at a point with their covariant derivatives and the
/// derived data every harmonicity formula draws on.
struct PointData {
  geom::GeometryContext geo;

  geom::JetTensor phi, xi, eta;
  Eigen::MatrixXd phi_v;
  Eigen::VectorXd xi_v, eta_v;
  Eigen::MatrixXd proj;  // I - xi (x) eta

  geom::JetTensor dphi;  // (nabla phi)^i_{jk}, j argument, k direction
  geom::JetTensor dxi;   // (nabla xi)^i_j, j direction
  geom::JetTensor ddxi;  // second derivative, directions j then k
  Eigen::MatrixXd dxi_v;
  geom::MultiArray dphi_v, ddxi_v;

  /// Projected derivative of the distribution's complex structure:
  /// B^i_{jk} = P (nabla phi) P in the argument and image slots.
  geom::JetTensor bbar;
  geom::MultiArray bbar_v;
  geom::MultiArray dbbar_v;  // (nabla B)^i_{jkc}

  Eigen::MatrixXd frame;  // orthonormal, xi in the last column
  double dxi_norm2 = 0.0;
  int n = 0;

  int dim() const { return geo.dim(); }
};

PointData analyze(const AlmostContactStructure& s, const Eigen::VectorXd& x,
                  geom::Backend backend = geom::Backend::jet);

/// Maximum violations of the defining structure equations over a point set.
struct ValidationReport {
  double phi_square = 0.0;     // phi^2 + I - xi (x) eta
  double eta_xi = 0.0;         // eta(xi) - 1
  double phi_xi = 0.0;         // phi xi
  double eta_phi = 0.0;        // eta o phi
  double compatibility = 0.0;  // g(phi X, phi Y) - g(X,Y) + eta(X) eta(Y)
  double xi_unit = 0.0;        // |xi|_g - 1
  double eta_dual = 0.0;       // eta - g(xi, .)
  double max() const;
};

ValidationReport validate(const AlmostContactStructure& s, const Eigen::MatrixXd& points,
                          geom::Backend backend = geom::Backend::jet);

/// Fundamental 2-form, both slots down: Phi(X,Y) = <X, phi Y>.
Eigen::MatrixXd fundamental_form(const PointData& pd);

/// Exterior derivative of eta with the one-half convention:
/// d eta(X,Y) = (X.eta(Y) - Y.eta(X))/2 on coordinate fields.
Eigen::MatrixXd eta_exterior_derivative(const PointData& pd);

/// Least-squares fit of nabla phi against the two curvature-type models
/// r(xi, X)Y and r(xi, phi X)Y; alpha and beta come back as jets so their
/// gradients are available downstream.
struct TransSasakianFit {
  geom::Jet alpha, beta;
  double residual = 0.0;
  double dphi_norm = 0.0;
};

TransSasakianFit fit_trans_sasakian(const PointData& pd);

struct StructureClassification {
  bool cosymplectic = false;
  bool contact_metric = false;
  bool k_contact = false;
  bool sasakian = false;
  bool alpha_sasakian = false;
  bool beta_kenmotsu = false;
  bool trans_sasakian = false;
  bool nearly_cosymplectic = false;
  bool nearly_sasakian = false;
  Eigen::VectorXd alpha, beta, fit_residual;  // one entry per point
  double tol = 1e-6;
};

StructureClassification classify(const AlmostContactStructure& s,
                                 const Eigen::MatrixXd& points, double tol = 1e-6,
                                 geom::Backend backend = geom::Backend::jet);

/// Trans-Sasakian consequences, reported as maximum violations over the
/// points: the gradient, curvature and Ricci closed forms for xi, the two
/// curvature-form identities, the alpha-beta scalar identity, the rough
/// Laplacian trace formula, and in dimension five and up the constancy
/// statements.
struct TransSasakianReport {
  double grad_xi = 0.0;
  double curvature_xi = 0.0;
  double ricci_xi = 0.0;
  double two_form_a = 0.0;
  double two_form_b = 0.0;
  double alpha_xi = 0.0;
  double laplacian_trace = 0.0;
  double alpha_beta = 0.0;   // dim >= 5 only
  double grad_alpha = 0.0;   // dim >= 5 only
  double fit_residual = 0.0;
  double max() const;
};

TransSasakianReport trans_sasakian_identities(const AlmostContactStructure& s,
                                              const Eigen::MatrixXd& points,
                                              geom::Backend backend = geom::Backend::jet);

/// Image of the fundamental form under the curvature operator, as an
/// endomorphism through the first slot: <sharp X, Y> = R(Phi)(X, Y).
Eigen::MatrixXd curvature_form_sharp(const PointData& pd);

/// Star Ricci form Ric*(X,Y) = R(Phi)(X, phi Y), both slots down.
Eigen::MatrixXd star_ricci(const PointData& pd);

} // namespace charm::acs
