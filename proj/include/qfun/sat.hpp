#pragma once

#include "qfun/aig.hpp"
#include "qfun/assignment.hpp"
#include "qfun/budget.hpp"

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace qfun {

/// Tseitin encoding of a conjunction of AIG roots. CNF variables are
/// DIMACS-style positive integers; one per reachable non-constant node.
struct CnfInstance {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::unordered_map<std::uint32_t, int> node_var;  // node index -> CNF var
    std::unordered_map<Var, int> input_var;           // AIG variable -> CNF var
    std::vector<int> roots;                           // asserted root literals

    /// CNF literal of `r`; `r` must be encoded and non-constant.
    int literal(NodeRef r) const;
};

/// Encodes `conjuncts` so that the CNF is satisfiable iff their conjunction
/// is. A FALSE root contributes the empty clause; TRUE roots contribute none.
CnfInstance encode(const Aig& aig, std::span<const NodeRef> conjuncts);

/// UNSAT, or SAT with a model total on the projected variables.
struct SatResult {
    std::optional<Assignment> model;

    bool sat() const { return model.has_value(); }
};

/// Solves `instance` and projects the model onto `project`. Variables the
/// instance does not mention default to 0.
SatResult sat_solve(const CnfInstance& instance, std::span<const Var> project, const Budget& budget = {});

/// DIMACS CNF text (`p cnf V C` header, 0-terminated clauses).
std::string to_dimacs(const CnfInstance& instance);

} // namespace qfun
