#pragma once

#include "bvass1/model.hpp"
#include "bvass1/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace bvass1::testing
{

inline const char* const b2_text = R"(state q   state q_f  state q_0  state q_1  state q_2
final q_f
unary q +1 q
unary q 0 q_2
branch q_2 q_1 q_1
branch q_1 q_0 q_0
unary q_0 -1 q_f
)";

inline Bvass b2()
{
    return parse_bvass( b2_text );
}

/// a(n) counts down to a(0) and leaves through (a, 0, f).
inline Bvass loop_gadget()
{
    return parse_bvass( "state a\nstate f\nfinal f\nunary a -1 a\nunary a 0 f\n" );
}

struct Node
{
    const char* address;
    const char* state;
    Counter counter;
};

inline PartialTree make_tree( const Bvass& system, std::initializer_list<Node> nodes )
{
    PartialTree t;
    for ( const auto& n : nodes )
        t.set( NodeAddress::parse( n.address ), { system.state( n.state ), n.counter } );
    return t;
}

/// Trees over anonymous states: `state` is the state index.
inline PartialTree make_raw_tree( std::initializer_list<std::tuple<const char*, std::uint32_t, Counter>> nodes )
{
    PartialTree t;
    for ( const auto& [address, state, counter] : nodes )
        t.set( NodeAddress::parse( address ), { StateId{ state }, counter } );
    return t;
}

/// Grows a valid partial tree top-down from a random root by applying random
/// applicable transitions. Leaves are wherever growth stopped.
inline PartialTree random_partial_tree( const Bvass& system, std::mt19937_64& rng, std::size_t max_depth,
                                        Counter max_root = 6 )
{
    PartialTree t;
    std::uniform_int_distribution<std::uint32_t> state{ 0, static_cast<std::uint32_t>( system.num_states() - 1 ) };
    const Config root{ StateId{ state( rng ) }, std::uniform_int_distribution<Counter>{ 0, max_root }( rng ) };
    t.set( NodeAddress::root(), root );

    std::vector<NodeAddress> frontier{ NodeAddress::root() };
    while ( !frontier.empty() )
    {
        const auto u = frontier.back();
        frontier.pop_back();
        if ( u.depth() >= max_depth || std::uniform_int_distribution<int>{ 0, 9 }( rng ) < 2 )
            continue;
        const auto c = t.at( u );

        std::vector<std::size_t> unary;
        for ( std::size_t i = 0; i < system.unary().size(); ++i )
        {
            const auto& tr = system.unary()[i];
            if ( tr.source == c.state && static_cast<long long>( c.counter ) + tr.delta >= 0 )
                unary.push_back( i );
        }
        std::vector<std::size_t> branching;
        for ( std::size_t i = 0; i < system.branching().size(); ++i )
            if ( system.branching()[i].source == c.state )
                branching.push_back( i );
        const auto options = unary.size() + branching.size();
        if ( options == 0 )
            continue;
        const auto pick = std::uniform_int_distribution<std::size_t>{ 0, options - 1 }( rng );
        if ( pick < unary.size() )
        {
            const auto& tr = system.unary()[unary[pick]];
            t.set( u.child( 0 ), { tr.target, static_cast<Counter>( static_cast<long long>( c.counter ) + tr.delta ) } );
            frontier.push_back( u.child( 0 ) );
        }
        else
        {
            const auto& tr = system.branching()[branching[pick - unary.size()]];
            const auto left = std::uniform_int_distribution<Counter>{ 0, c.counter }( rng );
            t.set( u.child( 0 ), { tr.left, left } );
            t.set( u.child( 1 ), { tr.right, c.counter - left } );
            frontier.push_back( u.child( 0 ) );
            frontier.push_back( u.child( 1 ) );
        }
    }
    return t;
}

/// Systems with increment loops so random trees contain increasing nodes.
inline Bvass pumping_system( std::uint64_t seed )
{
    std::mt19937_64 rng{ seed };
    const std::uint32_t states = std::uniform_int_distribution<std::uint32_t>{ 2, 4 }( rng );
    std::uniform_int_distribution<std::uint32_t> state{ 0, states - 1 };
    std::vector<std::string> names;
    for ( std::uint32_t i = 0; i < states; ++i )
        names.push_back( "p" + std::to_string( i ) );
    std::vector<UnaryTransition> unary;
    for ( std::uint32_t i = 0; i < states; ++i )
        unary.push_back( { StateId{ i }, +1, StateId{ state( rng ) } } );
    for ( int i = 0; i < 3; ++i )
        unary.push_back( { StateId{ state( rng ) }, std::uniform_int_distribution<int>{ -1, 1 }( rng ),
                           StateId{ state( rng ) } } );
    std::vector<BranchTransition> branching;
    for ( int i = 0; i < 2; ++i )
        branching.push_back( { StateId{ state( rng ) }, StateId{ state( rng ) }, StateId{ state( rng ) } } );
    return Bvass{ names, unary, branching, { StateId{ 0 } } };
}

/// Ancestors of u from the parent up to the root.
inline std::vector<NodeAddress> strict_ancestors( const NodeAddress& u )
{
    std::vector<NodeAddress> out;
    for ( auto p = u.path(); !p.empty(); )
    {
        p.pop_back();
        out.push_back( NodeAddress{ p } );
    }
    return out;
}

/// Increasing nodes with their anchors, straight from the definition: the
/// anchor is the deepest strict ancestor with the same state and a smaller counter.
inline std::map<NodeAddress, NodeAddress> naive_anchors( const PartialTree& t )
{
    std::map<NodeAddress, NodeAddress> out;
    for ( const auto& [v, cv] : t.labels() )
        for ( const auto& u : strict_ancestors( v ) )
        {
            const auto& cu = t.at( u );
            if ( cu.state == cv.state && cu.counter < cv.counter )
            {
                out.emplace( v, u );
                break;
            }
        }
    return out;
}

inline bool naive_exclusive( const PartialTree& t )
{
    const auto anchors = naive_anchors( t );
    std::vector<std::pair<std::string, std::string>> leaves;
    for ( const auto& [v, u] : anchors )
        if ( t.is_leaf( v ) )
            leaves.emplace_back( v.path(), u.path() );
    for ( std::size_t i = 0; i < leaves.size(); ++i )
        for ( std::size_t j = i + 1; j < leaves.size(); ++j )
        {
            const auto& a = leaves[i].first;
            const auto& b = leaves[j].first;
            std::size_t k = 0;
            while ( k < a.size() && k < b.size() && a[k] == b[k] )
                ++k;
            const auto common = a.substr( 0, k );
            const auto below = [&]( const std::string& anchor ) {
                return anchor.size() <= common.size() && common.compare( 0, anchor.size(), anchor ) == 0;
            };
            if ( below( leaves[i].second ) && below( leaves[j].second ) )
                return false;
        }
    return true;
}

inline Counter max_counter( const PartialTree& t )
{
    Counter m = 0;
    for ( const auto& [u, c] : t.labels() )
        m = std::max( m, c.counter );
    return m;
}

} // namespace bvass1::testing
