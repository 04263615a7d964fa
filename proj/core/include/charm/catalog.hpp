#pragma once

#include "charm/hyper.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace charm::catalog {

/// Cross product of imaginary octonions on R^7.
Eigen::VectorXd octonion_cross(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Unit six-sphere as a graph chart over the hemisphere x0 > 0, carrying the
/// almost complex structure J_p X = p x X of the octonion cross product.
hyper::AmbientHermitian six_sphere();

/// Builder parameters. Zero or empty fields pick the entry's defaults.
struct Params {
  int n = 0;
  double a = 0.0;
  std::string base;
};

/// What the verification commands should find for an entry. The class list
/// names classification flags that must come back true; empty verdicts mean
/// the outcome is evaluated rather than asserted up front.
struct Expectations {
  std::vector<std::string> classes;
  std::optional<bool> harmonic_section;
  std::optional<bool> harmonic_map;
  bool section_iff_xi = false;  // three-dimensional equivalence applies
};

enum class EntryKind { structure, hypersurface, ambient };

struct CatalogEntry {
  std::string id;
  EntryKind kind = EntryKind::structure;
  std::string summary;
  std::string parameters;  // printable defaults, empty when fixed
  Expectations expected;
};

const std::vector<CatalogEntry>& entries();

/// Lookup by id. Unknown ids throw std::invalid_argument.
const CatalogEntry& entry(const std::string& id);

using Built = std::variant<acs::AlmostContactStructure, hyper::HypersurfaceModel,
                           hyper::AmbientHermitian>;

/// Build a catalog model. Unknown ids and out-of-range parameters throw
/// std::invalid_argument.
Built build(const std::string& id, const Params& params = {});

/// Intrinsic structure of a built entry: the structure itself, or the one a
/// hypersurface induces. Ambient entries throw std::invalid_argument.
acs::AlmostContactStructure structure_of(const Built& built);

/// Sample box of the chart the entry's points live on.
const geom::Box& box_of(const Built& built);

} // namespace charm::catalog
