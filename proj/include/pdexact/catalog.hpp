#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdexact/expr.hpp"
#include "pdexact/funcspace.hpp"

namespace pdexact {

struct SchemaError : std::runtime_error {
  std::string entry_id;
  SchemaError(std::string id, const std::string& reason)
      : std::runtime_error(id.empty() ? reason : id + ": " + reason), entry_id(std::move(id)) {}
};

struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamSpec {
  std::string name;
  double value = 0.0;        // default
  std::string constraint;    // e.g. "a != 0", "b^2 - 4*k*a != 0"; empty = none
};

struct SlotSpec {
  std::string name;
  funcspace::SlotConstraint constraint;
};

/// One transcribed subsection: the PDE rewritten as residual = 0, the
/// claimed general solution, parameter defaults with their stated
/// constraints, nondegeneracy guards for the arbitrary-function slots, and
/// the sampling window.
struct CatalogEntry {
  std::string id;            // "S2-03" = 3rd subsection of section 2
  std::string source_label;  // free text, e.g. "2.3"
  ExprPtr residual;
  std::vector<ParamSpec> params;
  std::vector<SlotSpec> slots;
  ExprPtr solution;
  std::array<double, 4> window{0.6, 1.4, 0.3, 1.1};  // t_lo, t_hi, x_lo, x_hi
  char tier = 'A';           // A closed form, B integrals, C roots, D specials
  bool quarantined = false;
  std::string note;
  bool superposition = false;
  std::optional<double> tol_override;  // e.g. nested-integral entries
};

struct Catalog {
  int version = 0;
  std::vector<CatalogEntry> entries;
  std::string raw;  // the exact bytes the catalogue was loaded from
};

/// Parses and validates a catalogue JSON document. All expressions are
/// parsed, binder hygiene and the field-variable rules are enforced, default
/// parameters are checked against their constraints and tier labels are
/// audited against node content. Throws SchemaError.
Catalog load_catalog(const std::string& json_text);

Catalog load_catalog_file(const std::string& path);

/// The catalogue embedded in the binary.
const Catalog& default_catalog();
const std::string& default_catalog_text();

const CatalogEntry& get(const Catalog& c, const std::string& id);

std::map<std::string, double> default_params(const CatalogEntry& e);

/// Evaluates one constraint predicate ("a != 0", "n > 1", ...) under the
/// given parameter values. Unknown text throws SchemaError.
bool constraint_holds(const std::string& predicate, const std::map<std::string, double>& params);

/// First constraint in the entry violated by `params`, if any.
std::optional<std::string> violated_constraint(const CatalogEntry& e,
                                               const std::map<std::string, double>& params);

/// Tier implied by the solution's node content (integral -> B, root -> C,
/// special -> D; the highest wins).
char computed_tier(const CatalogEntry& e);

}  // namespace pdexact
