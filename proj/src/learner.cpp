#include "qfun/learner.hpp"

#include "qfun/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

namespace qfun {

SampleBatch::SampleBatch(std::vector<Var> features, std::vector<Var> targets)
    : features_(std::move(features)), targets_(std::move(targets)) {}

void SampleBatch::add(Assignment tau, Assignment mu) {
    if (!tau.covers(features_)) throw Error("sample move does not cover the feature block");
    if (!mu.covers(targets_)) throw Error("sample counter-move does not cover the target block");
    samples_.push_back(Sample{std::move(tau), std::move(mu)});
}

std::vector<LabeledExample> project_training_set(const SampleBatch& batch, Var y) {
    std::vector<LabeledExample> out;
    out.reserve(batch.size());
    for (const auto& s : batch.samples()) out.push_back(LabeledExample{s.tau, s.mu.get(y)});
    return out;
}

// ---------------------------------------------------------------------------
// Decision trees

DecisionTree DecisionTree::leaf(bool value) {
    DecisionTree t;
    t.nodes_.push_back(Node{true, value, 0, 0, 0});
    return t;
}

DecisionTree DecisionTree::split(Var feature, DecisionTree on_false, DecisionTree on_true) {
    DecisionTree t;
    t.nodes_.push_back(Node{false, false, feature, 0, 0});
    auto graft = [&](const DecisionTree& sub) {
        const auto offset = static_cast<std::uint32_t>(t.nodes_.size());
        for (Node n : sub.nodes_) {
            if (!n.leaf) {
                n.on_false += offset;
                n.on_true += offset;
            }
            t.nodes_.push_back(n);
        }
        return offset;
    };
    t.nodes_[0].on_false = graft(on_false);
    t.nodes_[0].on_true = graft(on_true);
    return t;
}

bool DecisionTree::classify(const Assignment& x) const {
    std::uint32_t i = 0;
    while (!nodes_[i].leaf) i = x.get(nodes_[i].feature) ? nodes_[i].on_true : nodes_[i].on_false;
    return nodes_[i].value;
}

std::size_t DecisionTree::depth() const {
    std::function<std::size_t(std::uint32_t)> rec = [&](std::uint32_t i) -> std::size_t {
        if (nodes_[i].leaf) return 0;
        return 1 + std::max(rec(nodes_[i].on_false), rec(nodes_[i].on_true));
    };
    return rec(0);
}

std::size_t DecisionTree::num_leaves() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

bool operator==(const DecisionTree& a, const DecisionTree& b) {
    std::function<bool(std::uint32_t, std::uint32_t)> eq = [&](std::uint32_t i, std::uint32_t j) {
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[j];
        if (x.leaf != y.leaf) return false;
        if (x.leaf) return x.value == y.value;
        return x.feature == y.feature && eq(x.on_false, y.on_false) && eq(x.on_true, y.on_true);
    };
    return eq(0, 0);
}

class TreeBuilder {
public:
    TreeBuilder(const std::vector<LabeledExample>& train, std::vector<Var> features)
        : features_(std::move(features)), used_(features_.size(), 0) {
        rows_.reserve(train.size());
        for (const auto& ex : train) {
            std::vector<char> row(features_.size());
            for (std::size_t f = 0; f < features_.size(); ++f) row[f] = ex.features.get(features_[f]) ? 1 : 0;
            rows_.push_back(std::move(row));
            labels_.push_back(ex.label ? 1 : 0);
        }
    }

    DecisionTree build() {
        std::vector<std::uint32_t> all(rows_.size());
        for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = i;
        tree_.nodes_.clear();
        grow(all);
        return std::move(tree_);
    }

private:
    static double entropy(std::size_t ones, std::size_t n) {
        if (n == 0 || ones == 0 || ones == n) return 0.0;
        const double p = static_cast<double>(ones) / static_cast<double>(n);
        return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
    }

    std::uint32_t add_leaf(bool value) {
        tree_.nodes_.push_back(DecisionTree::Node{true, value, 0, 0, 0});
        return static_cast<std::uint32_t>(tree_.nodes_.size() - 1);
    }

    std::uint32_t grow(const std::vector<std::uint32_t>& subset) {
        std::size_t ones = 0;
        for (auto i : subset) ones += labels_[i];
        if (ones == 0) return add_leaf(false);
        if (ones == subset.size()) return add_leaf(true);

        const double base = entropy(ones, subset.size());
        std::size_t best = features_.size();
        double best_gain = -1.0;
        for (std::size_t f = 0; f < features_.size(); ++f) {
            if (used_[f]) continue;
            std::size_t n1 = 0, ones1 = 0;
            for (auto i : subset) {
                if (rows_[i][f]) {
                    ++n1;
                    ones1 += labels_[i];
                }
            }
            const std::size_t n0 = subset.size() - n1;
            if (n1 == 0 || n0 == 0) continue;  // does not split
            const double n = static_cast<double>(subset.size());
            const double gain = base - (static_cast<double>(n0) / n) * entropy(ones - ones1, n0) -
                                (static_cast<double>(n1) / n) * entropy(ones1, n1);
            if (gain > best_gain + 1e-12) {
                best_gain = gain;
                best = f;
            }
        }
        if (best == features_.size()) return add_leaf(2 * ones > subset.size());

        const auto index = static_cast<std::uint32_t>(tree_.nodes_.size());
        tree_.nodes_.push_back(DecisionTree::Node{false, false, features_[best], 0, 0});
        std::vector<std::uint32_t> lo, hi;
        for (auto i : subset) (rows_[i][best] ? hi : lo).push_back(i);
        used_[best] = 1;
        const auto f_node = grow(lo);
        const auto t_node = grow(hi);
        used_[best] = 0;
        tree_.nodes_[index].on_false = f_node;
        tree_.nodes_[index].on_true = t_node;
        return index;
    }

    std::vector<Var> features_;
    std::vector<char> used_;
    std::vector<std::vector<char>> rows_;
    std::vector<char> labels_;
    DecisionTree tree_;
};

DecisionTree id3(const std::vector<LabeledExample>& train, std::vector<Var> features) {
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    if (train.empty()) return DecisionTree::leaf(false);
    return TreeBuilder(train, std::move(features)).build();
}

// ---------------------------------------------------------------------------
// Cubes

Cube::Cube(std::initializer_list<Literal> lits) : Cube(std::vector<Literal>(lits)) {}

Cube::Cube(std::vector<Literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
    for (std::size_t i = 1; i < lits_.size(); ++i) {
        if (lits_[i].var == lits_[i - 1].var) throw Error("cube contains both polarities of a variable");
    }
}

bool Cube::contains(Literal l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool Cube::subset_of(const Cube& other) const {
    return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

Cube Cube::without(Literal l) const {
    Cube c;
    c.lits_.reserve(lits_.size());
    for (Literal x : lits_) {
        if (x != l) c.lits_.push_back(x);
    }
    return c;
}

bool Cube::evaluate(const Assignment& x) const {
    return std::all_of(lits_.begin(), lits_.end(), [&](Literal l) { return x.get(l.var) == l.positive; });
}

TreeCubes tree_to_cubes(const DecisionTree& tree) {
    TreeCubes out;
    std::vector<Literal> path;
    std::function<void(std::uint32_t)> walk = [&](std::uint32_t i) {
        const auto& n = tree.node(i);
        if (n.leaf) {
            (n.value ? out.positive : out.negative).push_back(Cube(path));
            return;
        }
        path.push_back(Literal{n.feature, false});
        walk(n.on_false);
        path.back().positive = true;
        walk(n.on_true);
        path.pop_back();
    };
    walk(0);
    return out;
}

namespace {

/// One self-subsuming strengthening step; false when none applies.
bool strengthen_once(CubeSet& cubes) {
    for (std::size_t i = 0; i < cubes.size(); ++i) {
        for (Literal l : cubes[i].literals()) {
            const Cube rest = cubes[i].without(l);
            for (std::size_t j = 0; j < cubes.size(); ++j) {
                if (j == i || !cubes[j].contains(~l) || !rest.subset_of(cubes[j])) continue;
                cubes[j] = cubes[j].without(~l);
                return true;
            }
        }
    }
    return false;
}

void remove_subsumed(CubeSet& cubes) {
    std::sort(cubes.begin(), cubes.end());
    cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
    CubeSet kept;
    for (std::size_t j = 0; j < cubes.size(); ++j) {
        bool subsumed = false;
        for (std::size_t i = 0; i < cubes.size() && !subsumed; ++i) {
            subsumed = i != j && cubes[i].subset_of(cubes[j]);
        }
        if (!subsumed) kept.push_back(cubes[j]);
    }
    cubes = std::move(kept);
}

} // namespace

CubeSet subsume_fixpoint(CubeSet cubes) {
    do {
        remove_subsumed(cubes);
    } while (strengthen_once(cubes));
    return cubes;
}

NodeRef cube_to_formula(Aig& aig, const Cube& cube) {
    NodeRef acc = kTrue;
    for (Literal l : cube.literals()) {
        const NodeRef v = aig.mk_var(l.var);
        acc = aig.mk_and(acc, l.positive ? v : !v);
    }
    return acc;
}

NodeRef cubes_to_formula(Aig& aig, const CubeSet& positive, const CubeSet& negative) {
    const bool use_positive = positive.size() < negative.size();
    NodeRef acc = kFalse;
    for (const Cube& c : use_positive ? positive : negative) acc = aig.mk_or(acc, cube_to_formula(aig, c));
    return use_positive ? acc : !acc;
}

// ---------------------------------------------------------------------------
// Strategies

const NodeRef* StrategyStore::find(Var y) const {
    auto it = strategies_.find(y);
    return it == strategies_.end() ? nullptr : &it->second;
}

bool fits(const Aig& aig, NodeRef formula, const SampleBatch& batch, Var y) {
    return std::all_of(batch.samples().begin(), batch.samples().end(),
                       [&](const Sample& s) { return aig.evaluate(formula, s.tau) == s.mu.get(y); });
}

NodeRef learn_strategy(Aig& aig, const SampleBatch& batch, Var y) {
    const auto tree = id3(project_training_set(batch, y), batch.features());
    const auto cubes = tree_to_cubes(tree);
    return cubes_to_formula(aig, subsume_fixpoint(cubes.positive), subsume_fixpoint(cubes.negative));
}

LearnResult learn_strategies(Aig& aig, const SampleBatch& batch, StrategyStore& store, bool accumulate) {
    LearnResult result;
    for (Var y : batch.targets()) {
        const NodeRef* previous = store.find(y);
        NodeRef psi;
        if (accumulate && previous != nullptr && fits(aig, *previous, batch, y)) {
            psi = *previous;
            ++result.kept;
        } else {
            psi = learn_strategy(aig, batch, y);
            store.set(y, psi);
        }
        result.strategies.emplace(y, psi);
    }
    return result;
}

namespace {

std::string render(const Aig& aig, NodeRef r) {
    if (r.is_true()) return "1";
    if (r.is_false()) return "0";
    const auto& n = aig.node(r.index());
    std::string body;
    if (n.kind == Aig::Kind::Variable) {
        body = aig.var_name(n.var);
        return r.complemented() ? "-" + body : body;
    }
    body = "(" + render(aig, n.left) + " & " + render(aig, n.right) + ")";
    return r.complemented() ? "-" + body : body;
}

} // namespace

std::ostream& print_strategies(std::ostream& os, const Aig& aig, const Substitution& strategies) {
    std::vector<Var> ys;
    for (const auto& [y, _] : strategies) ys.push_back(y);
    std::sort(ys.begin(), ys.end());
    for (Var y : ys) os << aig.var_name(y) << " := " << render(aig, strategies.at(y)) << '\n';
    return os;
}

} // namespace qfun
