#pragma once

#include "biham/sysdef.hpp"

namespace biham {

struct PipelineResult {
    Report report;
    std::string rendered;  // transformed objects, text form
    ZeroTestConfig cfg;    // effective zero-test configuration
};

/// Structural checks for a system definition: metric validity,
/// bihamiltonian consistency, flat pencil, semisimplicity, commuting
/// extra flows, translation Hamiltonians.
PipelineResult run_check(const SystemDefinition& def);

/// run_check plus the full reciprocal-transformation pipeline:
/// new variables, transformed flows, pullback, Pavlov density,
/// candidate potentials, closedness certificates, Theorems 1-3.
/// Requires def.transform.
PipelineResult run_transform(const SystemDefinition& def);

/// Built-in fixtures reproducing the two worked examples.
SystemDefinition kdv_definition(int m, int k);
SystemDefinition toda_definition();

/// Runs the full pipeline on a built-in fixture and additionally checks
/// every computed object against its reference closed form
/// ("expected-*" items). name is "kdv" or "toda"; m, k apply to kdv.
PipelineResult run_example(const std::string& name, int m, int k);

/// Same, but on a caller-supplied copy of the fixture definition (for
/// zero-test overrides). def must come from kdv_definition/toda_definition.
PipelineResult run_example_definition(const SystemDefinition& def, const std::string& name, int m,
                                      int k);

} // namespace biham
