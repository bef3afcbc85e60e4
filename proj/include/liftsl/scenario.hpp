#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "liftsl/hoare.hpp"

namespace liftsl {

/// A module with two implementations, a coupling for its assertion
/// variables, and a client to test (and optionally prove).
///
/// Text format, one `name:` header per section, `#` comments:
///
///   avars: a b
///   vals: -4..4          values for couplings and the assertion domain
///   input-vals: -2..2    values of input heaps
///   locs: 3
///   cells: 3             largest input heap
///   env: y=1
///   context:
///     {1|->_} init {a}
///   impl1:
///     init = [1] := 0
///   impl2:
///     init = [1] := 0
///   coupling:
///     a = { ([1:x],[1:x]) | x }     x ranges over vals
///   client: init; inc
///   pre: 1|->_
///   post: 1|->_
///   proof: {1|->_} init {a} inc {a}
struct Scenario {
  std::string name;
  std::set<std::string> avars;
  VarEnv env;
  std::vector<Val> vals{0, 1};
  std::vector<Val> input_vals{0, 1};
  Loc locs = 3;
  std::size_t cells = 3;
  TripleCtx context;
  std::map<std::string, CommandPtr> impl1, impl2;
  std::map<std::string, GenRel> coupling;
  CommandPtr client;
  Assertion pre, post;
  /// Annotated client for the proof checker, if given.
  std::optional<std::string> proof;
};

/// Throws ParseError with file line numbers.
Scenario parse_scenario(std::string_view text);

/// `{ (h1, h2) | x }` with x over `vals`, or a plain relation literal.
GenRel parse_coupling(std::string_view text, const std::vector<Val>& vals, int first_line = 1);

struct ScenarioReport {
  std::optional<ProofVerdict> proof;
  ValidityReport validity;

  std::string text(const Scenario& s) const;
};

ScenarioReport run_scenario(const Scenario& s, const ProofOptions& opts = {});
/// The proof part alone; throws ShapeError when the scenario has no proof.
ProofVerdict prove_scenario(const Scenario& s, const ProofOptions& opts = {});
/// The validity part alone.
ValidityReport scenario_validity(const Scenario& s);

/// Names of the built-in scenarios, and their source text.
std::vector<std::string> builtin_scenarios();
/// Throws std::out_of_range for an unknown name.
const std::string& builtin_scenario_text(const std::string& name);

/// Runs a named demo ("counter" or "goodbad") and returns its report and
/// whether every step came out as expected.
struct DemoResult {
  std::string report;
  bool ok = false;
};
DemoResult demo(const std::string& name);
std::vector<std::string> demo_names();

}  // namespace liftsl
