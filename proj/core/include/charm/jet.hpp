#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <vector>

namespace charm::geom {

/// Truncated multivariate Taylor scalar: a value together with symmetric
/// partial derivatives through degree three, in a runtime number of
/// variables. Arithmetic propagates derivatives by the Leibniz and chain
/// rules. `order()` tracks how many derivative layers are trustworthy:
/// binary operations keep the minimum of the two operands and derivative
/// extraction lowers it by one. Layers above `order()` are kept at zero.
class Jet {
public:
  Jet() = default;

  static Jet constant(double value, int nvars, int order = 3);
  /// Coordinate seed: value plus unit first derivative in slot `index`.
  static Jet variable(double value, int index, int nvars, int order = 3);

  int nvars() const { return m_nvars; }
  int order() const { return m_order; }
  double value() const { return m_value; }

  double d1(int i) const { return m_d1[i]; }
  double d2(int i, int j) const;
  double d3(int i, int j, int k) const;

  double& d1ref(int i) { return m_d1[i]; }
  double& d2ref(int i, int j);
  double& d3ref(int i, int j, int k);

  /// Partial derivative with respect to variable `i`; order drops by one.
  /// Throws when no derivative layer is left.
  Jet derivative(int i) const;
  /// Same jet viewed in a larger variable space (new slots appended).
  Jet extended(int nvars_new) const;
  /// Drop trailing variable slots, discarding their derivative entries.
  Jet restricted(int nvars_new) const;
  Jet truncated(int order_new) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double c) { m_value += c; return *this; }
  Jet& operator-=(double c) { m_value -= c; return *this; }
  Jet& operator*=(double c);

  friend Jet operator+(Jet a, const Jet& b) { a += b; return a; }
  friend Jet operator-(Jet a, const Jet& b) { a -= b; return a; }
  friend Jet operator+(Jet a, double c) { a += c; return a; }
  friend Jet operator+(double c, Jet a) { a += c; return a; }
  friend Jet operator-(Jet a, double c) { a -= c; return a; }
  friend Jet operator-(double c, const Jet& a) { Jet r = -a; r += c; return r; }
  friend Jet operator*(Jet a, double c) { a *= c; return a; }
  friend Jet operator*(double c, Jet a) { a *= c; return a; }
  friend Jet operator/(Jet a, double c) { a *= 1.0 / c; return a; }

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double c, const Jet& b);

  /// Composition with a scalar function given its value and first three
  /// derivatives at this jet's value.
  Jet compose(double f0, double f1, double f2, double f3) const;

private:
  void require_same_space(const Jet& o) const;
  static int tri(int n) { return n * (n + 1) / 2; }
  static int tet(int n) { return n * (n + 1) * (n + 2) / 6; }
  static int idx2(int i, int j);        // requires i <= j
  static int idx3(int i, int j, int k); // requires i <= j <= k

  int m_nvars = 0;
  int m_order = 0;
  double m_value = 0.0;
  Eigen::VectorXd m_d1;    // size nvars
  Eigen::VectorXd m_d2;    // packed upper triangle, size tri(nvars)
  Eigen::VectorXd m_d3;    // packed i<=j<=k, size tet(nvars)
};

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, int n);

/// Identity seeding of a chart point: coordinate jets in their own
/// variables, ready for evaluator calls.
std::vector<Jet> seed_point(const Eigen::VectorXd& x, int order = 3);

/// Thrown when a computation would need more derivative layers than a jet
/// carries.
class JetOrderError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace charm::geom
