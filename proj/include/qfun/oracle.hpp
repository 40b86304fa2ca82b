#pragma once

#include "qfun/aig.hpp"
#include "qfun/engine.hpp"
#include "qfun/prefix.hpp"

namespace qfun::oracle {

constexpr std::size_t kDefaultCap = 24;

/// Expansion semantics: forall is the conjunction of both cofactors, exists
/// the disjunction. Throws TooLarge above `cap` variables.
bool brute_force_eval(const Aig& aig, const Game& g, std::size_t cap = kDefaultCap);

/// True iff `tau` (over the top block) wins every sub-game of `mg`.
bool is_winning_move(const Aig& aig, const MultiGame& mg, const Assignment& tau, std::size_t cap = kDefaultCap);

/// First winning top-block assignment in lexicographic order (block order,
/// first variable most significant, 0 before 1).
Verdict brute_force_winning_move(const Aig& aig, const MultiGame& mg, std::size_t cap = kDefaultCap);

/// `g` seen as the multi-game Q X1.{rest}.
MultiGame as_multigame(const Game& g);

} // namespace qfun::oracle
