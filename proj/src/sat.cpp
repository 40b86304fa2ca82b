#include "qfun/sat.hpp"

#include "qfun/cdcl.hpp"
#include "qfun/error.hpp"

#include <sstream>

namespace qfun {

int CnfInstance::literal(NodeRef r) const {
    const int v = node_var.at(r.index());
    return r.complemented() ? -v : v;
}

CnfInstance encode(const Aig& aig, std::span<const NodeRef> conjuncts) {
    CnfInstance cnf;
    for (auto i : aig.cone(conjuncts)) {
        const int v = ++cnf.num_vars;
        cnf.node_var.emplace(i, v);
        const auto& n = aig.node(i);
        if (n.kind == Aig::Kind::Variable) {
            cnf.input_var.emplace(n.var, v);
            continue;
        }
        // Children of an AND are never constant after simplification.
        const int a = cnf.literal(n.left);
        const int b = cnf.literal(n.right);
        cnf.clauses.push_back({-v, a});
        cnf.clauses.push_back({-v, b});
        cnf.clauses.push_back({v, -a, -b});
    }
    for (NodeRef r : conjuncts) {
        if (r.is_true()) continue;
        if (r.is_false()) {
            cnf.clauses.emplace_back();
            continue;
        }
        const int lit = cnf.literal(r);
        cnf.roots.push_back(lit);
        cnf.clauses.push_back({lit});
    }
    return cnf;
}

SatResult sat_solve(const CnfInstance& instance, std::span<const Var> project, const Budget& budget) {
    sat::CdclSolver solver(static_cast<std::uint32_t>(instance.num_vars));
    // Initial phases hashed from the clauses.
    std::uint64_t seed = 0xcbf29ce484222325ULL;
    for (const auto& clause : instance.clauses) {
        for (int x : clause) seed = (seed ^ static_cast<std::uint32_t>(x)) * 0x100000001b3ULL;
        seed = (seed ^ 0xffu) * 0x100000001b3ULL;
    }
    solver.seed_phases(seed);

    std::vector<sat::Lit> lits;
    bool ok = true;
    for (const auto& clause : instance.clauses) {
        lits.clear();
        for (int x : clause) lits.push_back(sat::Lit::from_dimacs(x));
        if (!solver.add_clause(lits)) {
            ok = false;
            break;
        }
    }
    if (!ok || !solver.solve(budget)) return SatResult{};
    Assignment model;
    for (Var v : project) {
        auto it = instance.input_var.find(v);
        model.set(v, it != instance.input_var.end() && solver.model_value(static_cast<std::uint32_t>(it->second - 1)));
    }
    return SatResult{std::move(model)};
}

std::string to_dimacs(const CnfInstance& instance) {
    std::ostringstream os;
    os << "p cnf " << instance.num_vars << ' ' << instance.clauses.size() << '\n';
    for (const auto& clause : instance.clauses) {
        for (int x : clause) os << x << ' ';
        os << "0\n";
    }
    return os.str();
}

} // namespace qfun
