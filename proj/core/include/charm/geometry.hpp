#pragma once

#include "charm/jet_linalg.hpp"
#include "charm/manifold.hpp"

#include <optional>

namespace charm::geom {

enum class Backend { jet, fd };

/// Small dense value array for rank three and four tensors.
class MultiArray {
public:
  MultiArray() = default;
  explicit MultiArray(std::vector<int> dims);

  template <class... I>
  double& at(I... idx) {
    return m_data[offset({static_cast<int>(idx)...})];
  }
  template <class... I>
  double at(I... idx) const {
    return m_data[offset({static_cast<int>(idx)...})];
  }

  const std::vector<int>& dims() const { return m_dims; }
  const std::vector<double>& raw() const { return m_data; }
  std::vector<double>& raw() { return m_data; }
  double max_abs() const;

private:
  size_t offset(std::initializer_list<int> idx) const;
  std::vector<int> m_dims;
  std::vector<double> m_data;
};

/// Tensor components as jets at a point, contravariant slots first,
/// row-major.
struct JetTensor {
  TensorValence valence;
  int dim = 0;
  std::vector<Jet> comp;

  const Jet& c(int i) const { return comp[static_cast<size_t>(i)]; }
  const Jet& c(int i, int j) const { return comp[static_cast<size_t>(i * dim + j)]; }
  const Jet& c(int i, int j, int k) const {
    return comp[static_cast<size_t>((i * dim + j) * dim + k)];
  }
  const Jet& c(int i, int j, int k, int l) const {
    return comp[static_cast<size_t>(((i * dim + j) * dim + k) * dim + l)];
  }
  MultiArray values() const;
  Eigen::MatrixXd value_matrix() const;  // rank two only
  Eigen::VectorXd value_vector() const;  // rank one only
};

struct MetricData {
  Eigen::MatrixXd g;
  Eigen::MatrixXd g_inv;
  double sqrt_det = 0.0;
};

/// Per-point geometry of a chart: metric jets, Christoffel jets, curvature
/// values, and tensor calculus on top of them. The finite-difference backend
/// rebuilds the same derivative data from Richardson-extrapolated central
/// differences of component values and is used as an independent
/// cross-check of the series arithmetic.
class GeometryContext {
public:
  GeometryContext(const ManifoldModel& model, const Eigen::VectorXd& x,
                  Backend backend = Backend::jet);
  /// Variant that reuses precomputed metric jets (the pullback chains hand
  /// them over so the work is not repeated).
  GeometryContext(const ManifoldModel& model, const Eigen::VectorXd& x,
                  std::vector<Jet> metric_jets, Backend backend);

  int dim() const { return m_dim; }
  Backend backend() const { return m_backend; }
  const Eigen::VectorXd& point() const { return m_x; }
  const ManifoldModel& model() const { return *m_model; }

  const Eigen::MatrixXd& metric() const { return m_g0; }
  const Eigen::MatrixXd& metric_inverse() const { return m_ginv0; }
  double sqrt_det() const { return m_sqrt_det; }
  const std::vector<Jet>& metric_jets() const { return m_g; }

  double christoffel(int k, int i, int j) const { return m_gamma_v.at(k, i, j); }
  const MultiArray& christoffels() const { return m_gamma_v; }
  const std::vector<Jet>& christoffel_jets() const { return m_gamma; }

  /// R^l_{kij} with R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z
  /// - nabla_[X,Y] Z; coordinate fields make the last term drop.
  double riemann(int l, int k, int i, int j) const { return m_riem.at(l, k, i, j); }
  /// Fully lowered curvature <R(e_i,e_j)e_k, e_l>.
  double riemann_low(int i, int j, int k, int l) const { return m_riem4.at(i, j, k, l); }
  const MultiArray& riemann_tensor() const { return m_riem; }

  Eigen::MatrixXd ricci() const;                // Ric_ij, both slots down
  Eigen::MatrixXd ricci_endomorphism() const;   // indices raised on the left
  double scalar_curvature() const;

  /// Apply R(X,Y) to a vector, all in chart components.
  Eigen::VectorXd curvature_action(const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                                   const Eigen::VectorXd& Z) const;

  JetTensor evaluate(const TensorField& field) const;
  JetTensor evaluate(const FieldBundle& comps, TensorValence valence) const;
  /// Appends the differentiation direction as a trailing covariant slot.
  JetTensor covariant_derivative(const JetTensor& t) const;
  JetTensor second_covariant_derivative(const JetTensor& t) const;

  /// Metric inner product of two component arrays with the same valence.
  double tensor_inner(const MultiArray& a, const MultiArray& b, TensorValence valence) const;
  /// Jet version; all jets must live in the chart's variable space.
  Jet tensor_inner(const std::vector<Jet>& a, const std::vector<Jet>& b,
                   TensorValence valence) const;

  /// Metric norm squared of a component array with the given valence.
  double norm2(const JetTensor& t) const;
  double norm2(const MultiArray& values, TensorValence valence) const;
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    return u.dot(m_g0 * v);
  }

private:
  void build_from_metric_jets();

  const ManifoldModel* m_model = nullptr;
  Eigen::VectorXd m_x;
  Backend m_backend = Backend::jet;
  int m_dim = 0;

  std::vector<Jet> m_g;      // metric component jets
  std::vector<Jet> m_ginv;   // inverse metric jets
  std::vector<Jet> m_gamma;  // [k][i][j] jets
  MultiArray m_gamma_v;      // values
  MultiArray m_riem;         // R^l_{kij}
  MultiArray m_riem4;        // <R(ei,ej)ek, el>
  Eigen::MatrixXd m_g0, m_ginv0;
  double m_sqrt_det = 0.0;
};

MetricData metric_at(const ManifoldModel& model, const Eigen::VectorXd& x,
                     Backend backend = Backend::jet);

/// Curvature-style algebraic operator r(u,v)w = <v,w> u - <u,w> v.
Eigen::VectorXd r_operator(const Eigen::MatrixXd& g, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v, const Eigen::VectorXd& w);

/// Metric-orthonormal frame at a point, columns of the returned matrix.
/// When a distinguished unit vector is supplied it becomes the last column
/// and the remaining columns span its orthogonal complement.
Eigen::MatrixXd orthonormal_frame(const Eigen::MatrixXd& g,
                                  const std::optional<Eigen::VectorXd>& distinguished = {});

/// Two-form <X,Y> -> -1/2 sum_i <R(X,Y)E_i, phi E_i>, returned with both
/// slots down.
Eigen::MatrixXd curvature_two_form_image(const GeometryContext& ctx,
                                         const Eigen::MatrixXd& phi);

/// Finite-difference jets (order two) of a bundle at a point; step is the
/// base grid spacing before Richardson extrapolation.
std::vector<Jet> fd_bundle_jets(const FieldBundle& f, const Eigen::VectorXd& x,
                                double step = 1e-4);

} // namespace charm::geom
