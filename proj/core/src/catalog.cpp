#include "charm/catalog.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace charm::catalog {

using geom::Box;
using geom::FieldBundle;
using geom::IntrinsicChart;
using geom::Jet;
using geom::ManifoldModel;

namespace {

Jet czero(std::span<const Jet> c) {
  return Jet::constant(0.0, c[0].nvars(), c[0].order());
}

// Rows e_a e_b = e_c of the imaginary octonion multiplication table; the
// remaining products follow by antisymmetry and cyclicity.
constexpr int mult_table[7][3] = {{1, 2, 3}, {1, 4, 5}, {1, 7, 6}, {2, 4, 6},
                                  {2, 5, 7}, {3, 4, 7}, {3, 6, 5}};

template <class V>
void accumulate_cross(const V& a, const V& b, V& out) {
  for (const auto& t : mult_table) {
    int i = t[0] - 1, j = t[1] - 1, k = t[2] - 1;
    out[k] += a[i] * b[j] - a[j] * b[i];
    out[i] += a[j] * b[k] - a[k] * b[j];
    out[j] += a[k] * b[i] - a[i] * b[k];
  }
}

hyper::AmbientHermitian flat_kaehler(int k) {
  const int md = 2 * k;
  Eigen::VectorXd gflat = Eigen::MatrixXd::Identity(md, md).reshaped();
  ManifoldModel base(IntrinsicChart{FieldBundle::constants(md, gflat)},
                     Box::cube(md, -2.0, 2.0));
  Eigen::VectorXd jflat = Eigen::VectorXd::Zero(md * md);
  for (int i = 0; i < k; ++i) {
    jflat[(2 * i + 1) * md + 2 * i] = 1.0;
    jflat[2 * i * md + 2 * i + 1] = -1.0;
  }
  return {std::move(base), FieldBundle::constants(md, jflat)};
}

FieldBundle graph_over_pole(int m, double scale) {
  return FieldBundle(m, m + 1, [scale](std::span<const Jet> c) {
    Jet r2 = czero(c);
    for (const Jet& ci : c) r2 += ci * ci;
    std::vector<Jet> out;
    out.reserve(c.size() + 1);
    out.push_back(scale * sqrt(1.0 - r2));
    out.insert(out.end(), c.begin(), c.end());
    return out;
  });
}

hyper::HypersurfaceModel sasakian_sphere(int n) {
  const int m = 2 * n + 1;
  return {flat_kaehler(n + 1), graph_over_pole(m, 1.0), Box::cube(m, -0.4, 0.4), -1.0};
}

hyper::HypersurfaceModel ellipsoid_c2(double a) {
  return {flat_kaehler(2), graph_over_pole(3, a), Box::cube(3, -0.45, 0.45), -1.0};
}

FieldBundle block_rotation_joint(int n) {
  const int m = 2 * n + 1;
  return FieldBundle(m, m * m + 2 * m, [n, m](std::span<const Jet> c) {
    std::vector<Jet> out(static_cast<size_t>(m * m + 2 * m), czero(c));
    for (int a = 0; a < n; ++a) {
      out[static_cast<size_t>((a + n) * m + a)] += 1.0;
      out[static_cast<size_t>(a * m + (a + n))] -= 1.0;
    }
    out[static_cast<size_t>(m * m + m - 1)] += 1.0;
    out[static_cast<size_t>(m * m + 2 * m - 1)] += 1.0;
    return out;
  });
}

acs::AlmostContactStructure cosymplectic_flat(int n) {
  const int m = 2 * n + 1;
  Eigen::VectorXd gflat = Eigen::MatrixXd::Identity(m, m).reshaped();
  ManifoldModel model(IntrinsicChart{FieldBundle::constants(m, gflat)},
                      Box::cube(m, -1.0, 1.0));
  return {std::move(model), block_rotation_joint(n)};
}

acs::AlmostContactStructure kenmotsu_warped(int n) {
  const int m = 2 * n + 1;
  FieldBundle metric(m, m * m, [m](std::span<const Jet> c) {
    std::vector<Jet> out(static_cast<size_t>(m * m), czero(c));
    Jet f2 = exp(2.0 * c[static_cast<size_t>(m - 1)]);
    for (int i = 0; i + 1 < m; ++i) out[static_cast<size_t>(i * m + i)] = f2;
    out[static_cast<size_t>(m * m - 1)] += 1.0;
    return out;
  });
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(m, -1.0);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(m, 1.0);
  lo[m - 1] = -0.5;
  hi[m - 1] = 0.5;
  ManifoldModel model(IntrinsicChart{metric}, Box{lo, hi});
  return {std::move(model), block_rotation_joint(n)};
}

acs::AlmostContactStructure nil3() {
  FieldBundle metric(3, 9, [](std::span<const Jet> c) {
    std::vector<Jet> out(9, czero(c));
    Jet y = c[1];
    out[0] = y * y + 1.0;
    out[2] = -1.0 * y;
    out[4] = czero(c) + 1.0;
    out[6] = -1.0 * y;
    out[8] = czero(c) + 1.0;
    return out;
  });
  ManifoldModel model(IntrinsicChart{metric}, Box::cube(3, -0.8, 0.8));
  FieldBundle joint(3, 15, [](std::span<const Jet> c) {
    std::vector<Jet> out(15, czero(c));
    out[1] += 1.0;          // phi^x_y
    out[3] -= 1.0;          // phi^y_x
    out[7] = c[1];          // phi^z_y
    out[11] += 1.0;         // xi = d/dz
    out[12] = -1.0 * c[1];  // eta_x
    out[14] += 1.0;         // eta_z
    return out;
  });
  return {std::move(model), std::move(joint)};
}

hyper::HypersurfaceModel sphere_slice(double height, double halfwidth,
                                      double normal_sign) {
  FieldBundle immersion(5, 6, [height](std::span<const Jet> c) {
    std::vector<Jet> out(c.begin(), c.end());
    out.push_back(czero(c) + height);
    return out;
  });
  return {six_sphere(), std::move(immersion), Box::cube(5, -halfwidth, halfwidth),
          normal_sign};
}

} // namespace

Eigen::VectorXd octonion_cross(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != 7 || v.size() != 7)
    throw std::invalid_argument("imaginary octonions have seven components");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(7);
  accumulate_cross(u, v, out);
  return out;
}

hyper::AmbientHermitian six_sphere() {
  const int md = 6;
  FieldBundle metric(md, md * md, [](std::span<const Jet> c) {
    Jet r2 = czero(c);
    for (const Jet& ci : c) r2 += ci * ci;
    Jet s2 = 1.0 - r2;
    std::vector<Jet> out(static_cast<size_t>(md * md), czero(c));
    for (int i = 0; i < md; ++i) {
      for (int j = 0; j < md; ++j) out[static_cast<size_t>(i * md + j)] = c[i] * c[j] / s2;
      out[static_cast<size_t>(i * md + i)] += 1.0;
    }
    return out;
  });
  FieldBundle j(md, md * md, [](std::span<const Jet> c) {
    Jet zero = czero(c);
    Jet r2 = zero;
    for (const Jet& ci : c) r2 += ci * ci;
    Jet s = sqrt(1.0 - r2);
    std::vector<Jet> p(7, zero);
    p[0] = s;
    for (int k = 0; k < md; ++k) p[static_cast<size_t>(k + 1)] = c[k];
    // W(k, j) = <B_k, p x B_j> with B_k the chart frame (-c_k/s, e_k).
    std::vector<Jet> w(static_cast<size_t>(md * md), zero);
    for (int jc = 0; jc < md; ++jc) {
      std::vector<Jet> b(7, zero);
      b[0] = -1.0 * c[jc] / s;
      b[static_cast<size_t>(jc + 1)] = zero + 1.0;
      std::vector<Jet> pxb(7, zero);
      accumulate_cross(p, b, pxb);
      for (int k = 0; k < md; ++k)
        w[static_cast<size_t>(k * md + jc)] =
            pxb[static_cast<size_t>(k + 1)] - c[k] / s * pxb[0];
    }
    // Raise the first slot with the inverse metric I - c c^T.
    std::vector<Jet> out(static_cast<size_t>(md * md), zero);
    for (int jc = 0; jc < md; ++jc) {
      Jet contraction = zero;
      for (int k = 0; k < md; ++k) contraction += c[k] * w[static_cast<size_t>(k * md + jc)];
      for (int i = 0; i < md; ++i)
        out[static_cast<size_t>(i * md + jc)] =
            w[static_cast<size_t>(i * md + jc)] - c[i] * contraction;
    }
    return out;
  });
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(md, -0.3);
  Eigen::VectorXd hi = Eigen::VectorXd::Constant(md, 0.3);
  lo[md - 1] = -0.8;
  hi[md - 1] = 0.8;
  return {ManifoldModel(IntrinsicChart{metric}, Box{lo, hi, 0.05}), std::move(j)};
}

const std::vector<CatalogEntry>& entries() {
  static const std::vector<CatalogEntry> table = {
      {"sasakian-sphere", EntryKind::hypersurface,
       "unit odd sphere in flat Kaehler space with the structure its outward normal induces",
       "n=2",
       {{"sasakian"}, true, true, false}},
      {"kenmotsu-warped", EntryKind::structure,
       "exponentially warped product over the line with the Reeb field along it", "n=1",
       {{"beta_kenmotsu"}, true, false, false}},
      {"cosymplectic-flat", EntryKind::structure,
       "flat space with a parallel block rotation", "n=1",
       {{"cosymplectic"}, true, true, false}},
      {"nil3", EntryKind::structure,
       "Heisenberg group with its homogeneous left-invariant structure", "",
       {{}, true, std::nullopt, true}},
      {"ellipsoid-c2", EntryKind::hypersurface,
       "ellipsoid in flat complex 2-space with the outward normal", "a=1.3",
       {{}, std::nullopt, std::nullopt, true}},
      {"nearly-cosymplectic-s5", EntryKind::hypersurface,
       "equator of the octonionic six-sphere", "",
       {{"nearly_cosymplectic"}, true, true, false}},
      {"nearly-sasakian-s5", EntryKind::hypersurface,
       "six-sphere slice at height 1/sqrt(2) with the normal away from the pole", "",
       {{"nearly_sasakian"}, false, false, false}},
      {"product-line", EntryKind::ambient,
       "Hermitian product of a catalog structure with the line", "base=nil3",
       {{}, std::nullopt, std::nullopt, false}},
  };
  return table;
}

const CatalogEntry& entry(const std::string& id) {
  for (const CatalogEntry& e : entries())
    if (e.id == id) return e;
  throw std::invalid_argument("unknown catalog id: " + id);
}

Built build(const std::string& id, const Params& params) {
  entry(id);
  auto pick_n = [&params](int fallback) {
    int n = params.n == 0 ? fallback : params.n;
    if (n < 1) throw std::invalid_argument("parameter n must be at least 1");
    return n;
  };
  if (id == "sasakian-sphere") return sasakian_sphere(pick_n(2));
  if (id == "kenmotsu-warped") return kenmotsu_warped(pick_n(1));
  if (id == "cosymplectic-flat") return cosymplectic_flat(pick_n(1));
  if (id == "nil3") return nil3();
  if (id == "ellipsoid-c2") {
    double a = params.a == 0.0 ? 1.3 : params.a;
    if (a <= 0.0) throw std::invalid_argument("parameter a must be positive");
    return ellipsoid_c2(a);
  }
  if (id == "nearly-cosymplectic-s5") return sphere_slice(0.0, 0.3, 1.0);
  if (id == "nearly-sasakian-s5") return sphere_slice(1.0 / std::sqrt(2.0), 0.25, -1.0);
  std::string base = params.base.empty() ? "nil3" : params.base;
  if (base == "product-line")
    throw std::invalid_argument("product-line cannot stack on itself");
  return hyper::product_with_line(structure_of(build(base, {})));
}

acs::AlmostContactStructure structure_of(const Built& built) {
  if (const auto* s = std::get_if<acs::AlmostContactStructure>(&built)) return *s;
  if (const auto* h = std::get_if<hyper::HypersurfaceModel>(&built))
    return hyper::induce_structure(*h);
  throw std::invalid_argument("ambient entries carry no almost contact structure");
}

const Box& box_of(const Built& built) {
  if (const auto* s = std::get_if<acs::AlmostContactStructure>(&built))
    return s->model().box();
  if (const auto* h = std::get_if<hyper::HypersurfaceModel>(&built)) return h->box;
  return std::get<hyper::AmbientHermitian>(built).base.box();
}

} // namespace charm::catalog
