#pragma once

#include "charm/acs.hpp"

namespace charm::harmonic {

/// Vertical components of the structure's differential: the projected
/// derivative of the distribution's complex structure scaled by J/2, and the
/// derivative of the Reeb field.
struct PsiComponents {
  geom::MultiArray psi1;  // psi1^i_{jk}, k the direction
  Eigen::MatrixXd psi2;   // (nabla xi)^i_j, j the direction
};

PsiComponents psi_components(const acs::PointData& pd);

/// Rough Laplacian of the Reeb field and its harmonic-section residual
/// against |nabla xi|^2 xi.
Eigen::VectorXd rough_laplacian_xi(const acs::PointData& pd);
Eigen::VectorXd xi_harmonic_residual(const acs::PointData& pd);

/// Rough Laplacian of the complex structure in the projected connection,
/// and the associated tension endomorphism, one quarter of its commutator
/// with J. The tension is skew and anticommutes with J.
Eigen::MatrixXd rough_laplacian_j(const acs::PointData& pd);
Eigen::MatrixXd tau_bar(const acs::PointData& pd);

/// Trace pairing of the projected derivative of J with the derivative of
/// xi; a section of the distribution.
Eigen::VectorXd t_phi(const acs::PointData& pd);

/// Reeb part of the harmonic-section equation: rough Laplacian minus
/// |nabla xi|^2 xi plus J T(phi)/2. Orthogonal to xi.
Eigen::VectorXd section_residual(const acs::PointData& pd);

/// Obstruction 1-forms for the harmonic-map equation, components down.
/// The first pairs curvature with J times the projected derivative of J
/// over a frame of the distribution; the second pairs curvature applied to
/// xi with the derivative of xi.
Eigen::VectorXd form1(const acs::PointData& pd);
Eigen::VectorXd form2(const acs::PointData& pd);

/// Same pairing as form1 but with the curvature of the projected
/// connection, which differs from the projected curvature by the
/// curvature-type operator of (nabla xi, nabla xi).
Eigen::VectorXd twistor_form(const acs::PointData& pd);

/// form1 minus the twistor form minus <J T(phi), nabla_X xi>/2, which
/// vanishes identically; returned as a max-abs residual for assertion.
double twistor_identity_residual(const acs::PointData& pd);

/// Pointwise Kaehler-bundle defect: the largest metric norm of the
/// projected derivative of J along the frame directions.
double kahler_defect(const acs::PointData& pd);

struct HarmonicPointRecord {
  Eigen::VectorXd x;
  double xi_residual_norm = 0.0;
  double tau_bar_norm = 0.0;
  double t_phi_norm = 0.0;
  double section_residual_norm = 0.0;
  double form1_norm = 0.0;
  double form2_norm = 0.0;
  double kahler_defect = 0.0;
  double tol_scale = 1.0;  // 1 + |nabla xi|^2 + |projected nabla J|^2
};

struct HarmonicityReport {
  std::vector<HarmonicPointRecord> points;
  double tol = 1e-6;
  bool forms_evaluated = false;

  bool xi_harmonic = false;
  bool j_harmonic = false;
  bool harmonic_section = false;
  bool harmonic_map = false;

  double max_xi_residual = 0.0;
  double max_tau_bar = 0.0;
  double max_t_phi = 0.0;
  double max_section_residual = 0.0;
  double max_form1 = 0.0;
  double max_form2 = 0.0;
  double max_kahler_defect = 0.0;
};

/// Harmonic-section residuals over a point set; the obstruction forms are
/// left out and the map verdict stays false.
HarmonicityReport harmonic_section_residuals(const acs::AlmostContactStructure& s,
                                             const Eigen::MatrixXd& points,
                                             double tol = 1e-6,
                                             geom::Backend backend = geom::Backend::jet);

/// Complete report: section residuals plus both obstruction forms and the
/// map verdict.
HarmonicityReport harmonic_map_forms(const acs::AlmostContactStructure& s,
                                     const Eigen::MatrixXd& points, double tol = 1e-6,
                                     geom::Backend backend = geom::Backend::jet);

/// Largest Kaehler-bundle defect over the point set.
double kahler_bundle_check(const acs::AlmostContactStructure& s,
                           const Eigen::MatrixXd& points,
                           geom::Backend backend = geom::Backend::jet);

} // namespace charm::harmonic
