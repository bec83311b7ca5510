#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ulampc/expr.hpp"
#include "ulampc/map_model.hpp"

namespace ulampc {

// A map definition document is a flat key = value file with # comments.
//
// Family form (class = countable): a partition rule in i giving the
// decreasing partition points a_i, and a branch rule in x and i giving the
// branch on [a_i, a_{i-1}).  Optional derivative and inverse rules; in the
// inverse rule x stands for the image value.
//
//   name = example
//   class = countable
//   partition = 1/(i+1)
//   branch = ...
//   derivative = ...
//   inverse = ...
//
// Explicit form (class = finite): numbered branches, each a triple
// "left, right, expr" with constant endpoint expressions, plus optional
// numbered derivative / inverse entries.
//
//   class = finite
//   branch.1 = 0, 0.5, 2*x
//   derivative.1 = 2
//   inverse.1 = x/2
struct ExplicitBranchDef {
  double left = 0.0;
  double right = 0.0;
  ExprPtr forward;
  ExprPtr derivative;  // optional
  ExprPtr inverse;     // optional
};

struct MapDefinition {
  std::string name;
  ClassTag tag = ClassTag::FiniteBranches;
  ExprPtr partition_rule;   // countable form
  ExprPtr branch_rule;      // countable form
  ExprPtr derivative_rule;  // optional
  ExprPtr inverse_rule;     // optional
  std::vector<ExplicitBranchDef> explicit_branches;  // finite form
};

// Throws Error(SyntaxError) with a line number for malformed documents.
MapDefinition parse_map_definition(std::string_view text);

// Reads the file and parses it; throws Error(Io) when unreadable.
MapDefinition load_map_definition(const std::string& path);

// Materializes branches.  For the countable form, branches 1..n_branches are
// built; for the explicit form n_branches is ignored.
MapSpec compile_map(const MapDefinition& def, long long n_branches);

// Countable form only: materializes branches while their width
// a_{i-1} - a_i stays at or above min_branch_width.
MapSpec compile_map_floor(const MapDefinition& def, double min_branch_width);

}  // namespace ulampc
