#pragma once

#include "bvass1/model.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Instance families and reductions. Every generator returns an ordinary
// Bvass, so the output can be printed in the system file format.

namespace bvass1::gen
{

/// States q, q_f, q_0..q_n with reach(q_i) = {2^i} and reach(q) = [0, 2^n].
Bvass doubling( unsigned n );

struct ConstantInstance
{
    Bvass system;
    StateId state;
};

/// doubling(bitlength(m) - 1) plus q_m, q_m^0..q_m^n with reach(q_m) = {m}.
/// Throws std::invalid_argument for m = 0.
ConstantInstance binary_constant( Counter m );

struct Gate
{
    enum class Kind
    {
        top,
        bottom,
        conj,
        disj,
    };

    Kind kind = Kind::top;
    /// 1-based inputs, both smaller than the gate's own index
    std::size_t left = 0;
    std::size_t right = 0;
};

struct Circuit
{
    std::vector<Gate> gates;
};

/// One gate per line: `T`, `F`, `AND i j`, `OR i j` (1-based inputs). Throws ParseError.
Circuit parse_circuit( std::string_view text );
std::string print_circuit( const Circuit& c );
/// Value of every gate, in order.
std::vector<bool> evaluate( const Circuit& c );
Circuit random_circuit( std::size_t gates, std::uint64_t seed );

struct CircuitInstance
{
    Bvass system;
    /// state q<k> of gate k (0-based vector index k-1); q<k>(0) is reachable iff gate k is true
    std::vector<StateId> gate_states;
};

CircuitInstance mcvp( const Circuit& c );

struct SubsetSumInstance
{
    Bvass system;
    /// q_c1(t) is reachable iff some sub-multiset of the values sums to t
    StateId start;
};

/// Throws std::invalid_argument on an empty value list.
SubsetSumInstance subset_sum( const std::vector<Counter>& values );

struct RandomParams
{
    std::size_t states = 4;
    std::size_t unary = 6;
    std::size_t branching = 2;
    std::size_t finals = 1;
    std::uint64_t seed = 1;
};

/// States s0, s1, ...; uniform independent choices; deterministic per seed.
Bvass random_system( const RandomParams& params );

} // namespace bvass1::gen
