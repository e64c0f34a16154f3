#include "bvass1/oracle.hpp"

namespace bvass1::oracle
{

std::vector<Counter> BoundedReachSet::values( StateId q ) const
{
    std::vector<Counter> out;
    for ( Counter n = 0; n <= cap; ++n )
        if ( reachable[q.index][n] )
            out.push_back( n );
    return out;
}

BoundedReachSet bounded_reach_set( const Bvass& system, Counter cap, std::size_t budget )
{
    const auto states = system.num_states();
    if ( states != 0 && cap + 1 > budget / states )
        throw BudgetExceeded( "oracle grid " + std::to_string( states ) + "x" + std::to_string( cap + 1 ) +
                              " exceeds budget " + std::to_string( budget ) );

    BoundedReachSet set{ cap, std::vector<std::vector<bool>>( states, std::vector<bool>( cap + 1, false ) ) };
    auto& r = set.reachable;
    for ( auto f : system.finals() )
        r[f.index][0] = true;

    bool changed = true;
    while ( changed )
    {
        changed = false;
        for ( std::size_t q = 0; q < states; ++q )
        {
            for ( Counter n = 0; n <= cap; ++n )
            {
                if ( r[q][n] )
                    continue;
                bool hit = false;
                for ( const auto& t : system.unary() )
                {
                    if ( t.source.index != q )
                        continue;
                    const auto m = static_cast<long long>( n ) + t.delta;
                    if ( m >= 0 && m <= static_cast<long long>( cap ) && r[t.target.index][static_cast<Counter>( m )] )
                    {
                        hit = true;
                        break;
                    }
                }
                for ( const auto& t : system.branching() )
                {
                    if ( hit )
                        break;
                    if ( t.source.index != q )
                        continue;
                    for ( Counter m0 = 0; m0 <= n; ++m0 )
                        if ( r[t.left.index][m0] && r[t.right.index][n - m0] )
                        {
                            hit = true;
                            break;
                        }
                }
                if ( hit )
                {
                    r[q][n] = true;
                    changed = true;
                }
            }
        }
    }
    return set;
}

bool oracle_residue( const BoundedReachSet& set, StateId q, Counter n0, Counter d )
{
    if ( d == 0 )
        throw std::invalid_argument( "modulus must be >= 1" );
    for ( Counter n = n0; n <= set.cap; n += d )
        if ( set.reachable[q.index][n] )
            return true;
    return false;
}

bool oracle_residue( const Bvass& system, StateId q, Counter n0, Counter d, Counter cap )
{
    return oracle_residue( bounded_reach_set( system, cap ), q, n0, d );
}

const char* to_string( UnboundedHint h )
{
    switch ( h )
    {
    case UnboundedHint::unbounded_proven:
        return "unbounded-proven";
    case UnboundedHint::no_value_above_threshold:
        return "no-value-above-threshold";
    case UnboundedHint::inconclusive:
        return "inconclusive";
    }
    return "?";
}

UnboundedHint oracle_unbounded_hint( const Bvass& system, StateId q, Counter cap )
{
    const auto states = system.num_states();
    // 2^|Q| beyond 62 bits is out of reach for any enumerable cap.
    if ( states >= 62 )
        return UnboundedHint::inconclusive;
    const Counter threshold = Counter{ 1 } << states;

    const auto small = bounded_reach_set( system, cap );
    for ( Counter n = threshold + 1; n <= cap; ++n )
        if ( small.reachable[q.index][n] )
            return UnboundedHint::unbounded_proven;
    if ( cap < threshold + states )
        return UnboundedHint::inconclusive;

    const auto large = bounded_reach_set( system, 2 * cap );
    for ( Counter n = threshold + 1; n <= 2 * cap; ++n )
        if ( large.reachable[q.index][n] )
            return UnboundedHint::unbounded_proven;
    for ( Counter n = 0; n <= cap; ++n )
        if ( large.reachable[q.index][n] != small.reachable[q.index][n] )
            return UnboundedHint::inconclusive;
    return UnboundedHint::no_value_above_threshold;
}

} // namespace bvass1::oracle
