#pragma once

#include "bvass1/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bvass1
{

/// Is q(m) reachable for some m >= n?
bool coverable( const Bvass& system, StateId q, Counter n );

/// One step p_{i-1} t_i p_i of a gain-graph walk.
struct GainEdge
{
    StateId source;
    bool branching = false;
    /// index into system.unary() or system.branching()
    std::size_t transition = 0;
    StateId target;
    /// for branching edges: the other child's state
    StateId sibling;
    /// largest coverable value of the sibling, capped at |Q|+1; 0 for unary edges
    Counter sibling_value = 0;
    /// sibling_value - effect
    long long gain = 0;
};

struct GainGraph
{
    std::vector<GainEdge> edges;
    /// max { n <= |Q|+1 : p(n) coverable }, empty if p(0) is not coverable
    std::vector<std::optional<Counter>> max_coverable;
};

GainGraph build_gain_graph( const Bvass& system );

/// p_0 t_1 p_1 ... t_k p_k with p_k = p_j closing a cycle of positive gain.
struct UnboundedWitness
{
    /// p_0 .. p_k
    std::vector<StateId> states;
    /// t_1 .. t_k
    std::vector<GainEdge> steps;
    std::size_t j = 0;
    /// n_{j+1} .. n_k
    std::vector<Counter> values;
};

struct Boundedness
{
    bool unbounded = false;
    /// q(0) is not coverable, so reach(q) is empty.
    bool empty_reach = false;
    std::optional<UnboundedWitness> witness;
};

Boundedness decide_unbounded( const Bvass& system, StateId q0 );
bool unbounded( const Bvass& system, StateId q0 );

/// Checks the sequence conditions one by one with fresh coverability calls.
/// Empty if the witness holds, otherwise the first violated condition.
std::optional<std::string> diagnose_unbounded_witness( const Bvass& system, StateId q0, const UnboundedWitness& w );

std::string format_witness( const Bvass& system, const UnboundedWitness& w );

} // namespace bvass1
