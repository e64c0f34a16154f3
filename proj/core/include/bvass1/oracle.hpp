#pragma once

#include "bvass1/model.hpp"

#include <stdexcept>
#include <vector>

// Brute-force reference answers. Nothing in here shares code with the
// decision engines; tests use it as an independent referee.

namespace bvass1::oracle
{

class BudgetExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Configurations that have a cap-bounded reachability tree.
struct BoundedReachSet
{
    Counter cap = 0;
    /// reachable[q][n] for n in [0, cap]
    std::vector<std::vector<bool>> reachable;

    [[nodiscard]] bool contains( StateId q, Counter n ) const { return n <= cap && reachable[q.index][n]; }
    /// Reachable values of q, ascending.
    [[nodiscard]] std::vector<Counter> values( StateId q ) const;
};

inline constexpr std::size_t default_grid_budget = std::size_t{ 1 } << 28;

/// Least fixpoint of the bottom-up rules restricted to [0, cap], computed by
/// plain repeated sweeps. Throws BudgetExceeded when |Q|·(cap+1) > budget.
BoundedReachSet bounded_reach_set( const Bvass& system, Counter cap, std::size_t budget = default_grid_budget );

/// Some n >= n0 with n ≡ n0 (mod d) and q(n) in the cap-bounded reach set.
/// Sound; complete only up to cap.
bool oracle_residue( const Bvass& system, StateId q, Counter n0, Counter d, Counter cap );
bool oracle_residue( const BoundedReachSet& set, StateId q, Counter n0, Counter d );

enum class UnboundedHint
{
    unbounded_proven,
    no_value_above_threshold,
    inconclusive,
};

const char* to_string( UnboundedHint h );

/// Threshold is 2^|Q|. unbounded_proven if some reachable value of q
/// exceeds it under cap; no_value_above_threshold if cap >= 2^|Q| + |Q| and
/// doubling the cap leaves q's reach set (restricted to [0, cap]) unchanged
/// with still nothing above the threshold; inconclusive otherwise.
UnboundedHint oracle_unbounded_hint( const Bvass& system, StateId q, Counter cap );

} // namespace bvass1::oracle
