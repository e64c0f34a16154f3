#include "bvass1/cover_bound.hpp"

#include "bvass1/residue.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace bvass1
{

bool coverable( const Bvass& system, StateId q, Counter n )
{
    return residue_reachable( system, { q, n, 1 } ).reachable;
}

GainGraph build_gain_graph( const Bvass& system )
{
    const auto states = system.num_states();
    const Counter top = states + 1;
    GainGraph g;
    g.max_coverable.resize( states );
    for ( std::uint32_t p = 0; p < states; ++p )
        for ( Counter n = 0; n <= top && coverable( system, StateId{ p }, n ); ++n )
            g.max_coverable[p] = n;

    const auto covers_zero = [&]( StateId p ) { return g.max_coverable[p.index].has_value(); };
    for ( std::size_t i = 0; i < system.unary().size(); ++i )
    {
        const auto& t = system.unary()[i];
        if ( covers_zero( t.target ) )
            g.edges.push_back( { t.source, false, i, t.target, t.target, 0, -t.delta } );
    }
    for ( std::size_t i = 0; i < system.branching().size(); ++i )
    {
        const auto& t = system.branching()[i];
        if ( !covers_zero( t.left ) || !covers_zero( t.right ) )
            continue;
        const auto right_value = *g.max_coverable[t.right.index];
        const auto left_value = *g.max_coverable[t.left.index];
        g.edges.push_back( { t.source, true, i, t.left, t.right, right_value, static_cast<long long>( right_value ) } );
        g.edges.push_back( { t.source, true, i, t.right, t.left, left_value, static_cast<long long>( left_value ) } );
    }
    return g;
}

Boundedness decide_unbounded( const Bvass& system, StateId q0 )
{
    Boundedness result;
    if ( !coverable( system, q0, 0 ) )
    {
        result.empty_reach = true;
        return result;
    }

    const auto states = system.num_states();
    const auto g = build_gain_graph( system );
    std::vector<std::vector<std::size_t>> out( states );
    for ( std::size_t e = 0; e < g.edges.size(); ++e )
        out[g.edges[e].source.index].push_back( e );

    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist( states, none ), via( states, none );
    std::deque<std::uint32_t> work{ q0.index };
    dist[q0.index] = 0;
    while ( !work.empty() )
    {
        const auto q = work.front();
        work.pop_front();
        for ( auto e : out[q] )
        {
            const auto p = g.edges[e].target.index;
            if ( dist[p] == none )
            {
                dist[p] = dist[q] + 1;
                via[p] = e;
                work.push_back( p );
            }
        }
    }

    constexpr auto minus_inf = std::numeric_limits<long long>::min();
    for ( std::uint32_t s = 0; s < states; ++s )
    {
        if ( dist[s] == none || dist[s] >= states )
            continue;
        const auto max_len = states - dist[s];
        // best[l][v]: largest gain of an l-edge walk s -> v, pred[l][v] its last edge
        std::vector<std::vector<long long>> best( max_len + 1, std::vector<long long>( states, minus_inf ) );
        std::vector<std::vector<std::size_t>> pred( max_len + 1, std::vector<std::size_t>( states, none ) );
        best[0][s] = 0;
        for ( std::size_t l = 1; l <= max_len; ++l )
        {
            for ( std::size_t e = 0; e < g.edges.size(); ++e )
            {
                const auto& edge = g.edges[e];
                const auto from = best[l - 1][edge.source.index];
                if ( from == minus_inf )
                    continue;
                auto& to = best[l][edge.target.index];
                if ( from + edge.gain > to )
                {
                    to = from + edge.gain;
                    pred[l][edge.target.index] = e;
                }
            }
            if ( best[l][s] <= 0 )
                continue;

            UnboundedWitness w;
            std::vector<GainEdge> prefix;
            for ( auto v = s; v != q0.index; v = g.edges[via[v]].source.index )
                prefix.push_back( g.edges[via[v]] );
            std::vector<GainEdge> cycle;
            for ( std::size_t k = l, v = s; k > 0; --k )
            {
                const auto& edge = g.edges[pred[k][v]];
                cycle.push_back( edge );
                v = edge.source.index;
            }
            w.states.push_back( q0 );
            for ( auto it = prefix.rbegin(); it != prefix.rend(); ++it )
            {
                w.steps.push_back( *it );
                w.states.push_back( it->target );
            }
            w.j = w.steps.size();
            for ( auto it = cycle.rbegin(); it != cycle.rend(); ++it )
            {
                w.steps.push_back( *it );
                w.states.push_back( it->target );
                w.values.push_back( it->sibling_value );
            }
            result.unbounded = true;
            result.witness = std::move( w );
            return result;
        }
    }
    return result;
}

bool unbounded( const Bvass& system, StateId q0 )
{
    return decide_unbounded( system, q0 ).unbounded;
}

namespace
{

struct StepView
{
    StateId source;
    std::vector<StateId> targets;
    int effect = 0;
};

std::optional<StepView> view( const Bvass& system, const GainEdge& e )
{
    if ( e.branching )
    {
        if ( e.transition >= system.branching().size() )
            return std::nullopt;
        const auto& t = system.branching()[e.transition];
        return StepView{ t.source, { t.left, t.right }, 0 };
    }
    if ( e.transition >= system.unary().size() )
        return std::nullopt;
    const auto& t = system.unary()[e.transition];
    return StepView{ t.source, { t.target }, t.delta };
}

} // namespace

std::optional<std::string> diagnose_unbounded_witness( const Bvass& system, StateId q0, const UnboundedWitness& w )
{
    const auto k = w.steps.size();
    const auto states = system.num_states();
    if ( w.states.size() != k + 1 || w.states.empty() || w.states.front() != q0 )
        return "sequence must be p_0 = q0 followed by one state per transition";
    if ( k > states )
        return "k = " + std::to_string( k ) + " exceeds |Q|";
    if ( w.j >= k )
        return "j must be < k";
    if ( w.values.size() != k - w.j )
        return "need one value n_i per j < i <= k";

    std::vector<StepView> steps;
    for ( std::size_t i = 1; i <= k; ++i )
    {
        auto s = view( system, w.steps[i - 1] );
        if ( !s )
            return "t_" + std::to_string( i ) + " is not a transition";
        // (i)
        if ( s->source != w.states[i - 1] )
            return "(i): p_" + std::to_string( i - 1 ) + " is not the source of t_" + std::to_string( i );
        if ( std::find( s->targets.begin(), s->targets.end(), w.states[i] ) == s->targets.end() )
            return "(i): p_" + std::to_string( i ) + " is not a target of t_" + std::to_string( i );
        steps.push_back( std::move( *s ) );
    }

    // (ii)
    if ( w.states[k] != w.states[w.j] )
        return "(ii): p_k differs from p_j";
    for ( std::size_t i = 0; i < w.j; ++i )
        if ( w.states[i] == w.states[w.j] )
            return "(ii): p_" + std::to_string( i ) + " equals p_j before index j";

    // (iii)
    for ( std::size_t i = 0; i < k; ++i )
        for ( auto p : steps[i].targets )
            if ( !coverable( system, p, 0 ) )
                return "(iii): " + system.name( p ) + "(0) is not coverable";

    // (iv)
    long long values = 0;
    long long effects = 0;
    for ( std::size_t i = w.j + 1; i <= k; ++i )
    {
        const auto n = w.values[i - w.j - 1];
        const auto& s = steps[i - 1];
        if ( n > states + 1 )
            return "(iv): n_" + std::to_string( i ) + " exceeds |Q|+1";
        if ( s.targets.size() == 2 )
        {
            // t_i = (p_{i-1}, p_i, p') or (p_{i-1}, p', p_i)
            bool ok = false;
            if ( s.targets[0] == w.states[i] && coverable( system, s.targets[1], n ) )
                ok = true;
            if ( s.targets[1] == w.states[i] && coverable( system, s.targets[0], n ) )
                ok = true;
            if ( !ok )
                return "(iv)(a): sibling of p_" + std::to_string( i ) + " does not cover " + std::to_string( n );
        }
        else if ( n != 0 )
            return "(iv)(a): n_" + std::to_string( i ) + " must be 0 for a unary transition";
        values += static_cast<long long>( n );
        effects += s.effect;
    }
    if ( values <= effects )
        return "(iv)(b): sum of n_i is not above the sum of effects";
    return std::nullopt;
}

std::string format_witness( const Bvass& system, const UnboundedWitness& w )
{
    std::ostringstream out;
    out << system.name( w.states[0] );
    for ( std::size_t i = 0; i < w.steps.size(); ++i )
    {
        const auto& e = w.steps[i];
        out << " -[";
        if ( e.branching )
        {
            const auto& t = system.branching()[e.transition];
            out << "branch " << system.name( t.source ) << ' ' << system.name( t.left ) << ' ' << system.name( t.right );
        }
        else
        {
            const auto& t = system.unary()[e.transition];
            out << "unary " << system.name( t.source ) << ' ' << ( t.delta > 0 ? "+1" : std::to_string( t.delta ) )
                << ' ' << system.name( t.target );
        }
        if ( i >= w.j )
            out << "; n=" << w.values[i - w.j];
        out << "]-> " << system.name( w.states[i + 1] );
    }
    out << "\nj = " << w.j << ", k = " << w.steps.size();
    return out.str();
}

} // namespace bvass1
