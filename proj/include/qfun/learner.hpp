#pragma once

#include "qfun/aig.hpp"
#include "qfun/assignment.hpp"

#include <iosfwd>
#include <unordered_map>
#include <vector>

namespace qfun {

/// One play: a move over the feature block and the counter-move over the
/// adjacent opponent block.
struct Sample {
    Assignment tau;
    Assignment mu;
};

/// Training set for the strategies of `targets()` as functions of
/// `features()`.
class SampleBatch {
public:
    SampleBatch() = default;
    SampleBatch(std::vector<Var> features, std::vector<Var> targets);

    /// Throws Error unless tau covers the features and mu the targets.
    void add(Assignment tau, Assignment mu);
    void clear() { samples_.clear(); }

    const std::vector<Var>& features() const { return features_; }
    const std::vector<Var>& targets() const { return targets_; }
    const std::vector<Sample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

private:
    std::vector<Var> features_;
    std::vector<Var> targets_;
    std::vector<Sample> samples_;
};

struct LabeledExample {
    Assignment features;
    bool label;
};

/// features = tau_i, label = mu_i(y), in sample order.
std::vector<LabeledExample> project_training_set(const SampleBatch& batch, Var y);

/// Binary decision tree stored as a node pool; node 0 is the root.
class DecisionTree {
public:
    struct Node {
        bool leaf;
        bool value;      // leaf label
        Var feature;     // split variable
        std::uint32_t on_false, on_true;
    };

    static DecisionTree leaf(bool value);
    static DecisionTree split(Var feature, DecisionTree on_false, DecisionTree on_true);

    bool classify(const Assignment& x) const;
    std::size_t depth() const;
    std::size_t num_leaves() const;
    const Node& node(std::uint32_t i) const { return nodes_.at(i); }
    const Node& root() const { return nodes_.front(); }
    std::size_t size() const { return nodes_.size(); }

    friend bool operator==(const DecisionTree& a, const DecisionTree& b);

private:
    friend class TreeBuilder;
    std::vector<Node> nodes_;
};

/// ID3 with Shannon-entropy information gain. Ties between features go to
/// the lowest variable id; an unsplittable mixed subset (identical feature
/// vectors) becomes a majority leaf, 0 on a tie. Empty input yields Leaf(0).
DecisionTree id3(const std::vector<LabeledExample>& train, std::vector<Var> features);

struct Literal {
    Var var;
    bool positive;

    Literal operator~() const { return {var, !positive}; }
    friend bool operator==(Literal, Literal) = default;
    friend auto operator<=>(Literal, Literal) = default;
};

/// Conjunction of literals, kept sorted; never holds both polarities of a
/// variable.
class Cube {
public:
    Cube() = default;
    Cube(std::initializer_list<Literal> lits);
    explicit Cube(std::vector<Literal> lits);

    const std::vector<Literal>& literals() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool contains(Literal l) const;
    bool subset_of(const Cube& other) const;
    Cube without(Literal l) const;
    bool evaluate(const Assignment& x) const;

    friend bool operator==(const Cube&, const Cube&) = default;
    friend auto operator<=>(const Cube&, const Cube&) = default;

private:
    std::vector<Literal> lits_;
};

using CubeSet = std::vector<Cube>;

/// Path cubes of the 1-leaves (positive) and 0-leaves (negative).
struct TreeCubes {
    CubeSet positive;
    CubeSet negative;
};

TreeCubes tree_to_cubes(const DecisionTree& tree);

/// Subsumption and self-subsuming resolution to a fixed point. The result is
/// sorted and preserves the disjunction.
CubeSet subsume_fixpoint(CubeSet cubes);

/// OR of `positive` when it is strictly smaller, else NOT(OR of `negative`).
NodeRef cubes_to_formula(Aig& aig, const CubeSet& positive, const CubeSet& negative);

NodeRef cube_to_formula(Aig& aig, const Cube& cube);

/// Last learned strategy per opponent variable.
class StrategyStore {
public:
    void set(Var y, NodeRef formula) { strategies_[y] = formula; }
    const NodeRef* find(Var y) const;
    std::size_t size() const { return strategies_.size(); }
    const std::unordered_map<Var, NodeRef>& map() const { return strategies_; }

private:
    std::unordered_map<Var, NodeRef> strategies_;
};

struct LearnResult {
    Substitution strategies;  // one formula per target of the batch
    std::size_t kept = 0;     // strategies retained from the store
};

/// Learned formula for y from a batch: project, id3, extract, minimize.
NodeRef learn_strategy(Aig& aig, const SampleBatch& batch, Var y);

/// Learns a strategy for every target of `batch`. With `accumulate`, a stored
/// strategy that fits every sample is kept instead of relearned. The store is
/// updated with the result.
LearnResult learn_strategies(Aig& aig, const SampleBatch& batch, StrategyStore& store, bool accumulate);

/// True iff `formula` agrees with mu(y) on every sample.
bool fits(const Aig& aig, NodeRef formula, const SampleBatch& batch, Var y);

std::ostream& print_strategies(std::ostream& os, const Aig& aig, const Substitution& strategies);

} // namespace qfun
