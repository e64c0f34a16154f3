#include "bvass1/residue.hpp"

#include <cassert>
#include <deque>
#include <stdexcept>

namespace bvass1
{

CounterSet::CounterSet( std::size_t states, Counter cap )
        : _cap{ cap }, _member( states, std::vector<bool>( cap + 1, false ) ), _values( states )
{}

bool CounterSet::insert( StateId q, Counter m )
{
    if ( m > _cap )
        throw std::out_of_range( "counter above cap" );
    auto&& bit = _member[q.index][m];
    if ( bit )
        return false;
    bit = true;
    _values[q.index].push_back( m );
    return true;
}

std::size_t CounterSet::size() const
{
    std::size_t n = 0;
    for ( const auto& v : _values )
        n += v.size();
    return n;
}

ResidueSet::ResidueSet( std::size_t states, Counter d ) : _d{ d }, _member( states, std::vector<bool>( d, false ) )
{
    if ( d == 0 )
        throw std::invalid_argument( "modulus must be >= 1" );
}

bool ResidueSet::insert( StateId q, Counter r )
{
    assert( r < _d );
    auto&& bit = _member[q.index][r];
    if ( bit )
        return false;
    bit = true;
    ++_size;
    return true;
}

std::vector<Counter> ResidueSet::residues( StateId q ) const
{
    std::vector<Counter> out;
    const auto& row = _member[q.index];
    for ( Counter r = 0; r < _d; ++r )
        if ( row[r] )
            out.push_back( r );
    return out;
}

std::vector<std::pair<StateId, Counter>> ResidueSet::elements() const
{
    std::vector<std::pair<StateId, Counter>> out;
    for ( std::uint32_t q = 0; q < _member.size(); ++q )
        for ( Counter r = 0; r < _d; ++r )
            if ( _member[q][r] )
                out.emplace_back( StateId{ q }, r );
    return out;
}

bool ResidueSet::is_subset_of( const ResidueSet& other ) const
{
    for ( auto [q, r] : elements() )
        if ( !other.contains( q, r ) )
            return false;
    return true;
}

void ResidueSet::merge( const ResidueSet& other )
{
    for ( auto [q, r] : other.elements() )
        insert( q, r );
}

Counter residue_cap( const Bvass& system, const ResidueQuery& query )
{
    return query.n0 + static_cast<Counter>( system.num_states() ) * query.d;
}

namespace
{

void check_query( const Bvass& system, const ResidueQuery& query )
{
    if ( query.d == 0 )
        throw std::invalid_argument( "residue modulus d must be >= 1" );
    if ( query.start.index >= system.num_states() )
        throw std::invalid_argument( "start state out of range" );
}

struct Incoming
{
    std::vector<std::vector<std::size_t>> unary_into;
    std::vector<std::vector<std::size_t>> branch_left_into;
    std::vector<std::vector<std::size_t>> branch_right_into;

    explicit Incoming( const Bvass& system )
            : unary_into( system.num_states() ), branch_left_into( system.num_states() ),
              branch_right_into( system.num_states() )
    {
        for ( std::size_t i = 0; i < system.unary().size(); ++i )
            unary_into[system.unary()[i].target.index].push_back( i );
        for ( std::size_t i = 0; i < system.branching().size(); ++i )
        {
            branch_left_into[system.branching()[i].left.index].push_back( i );
            branch_right_into[system.branching()[i].right.index].push_back( i );
        }
    }
};

std::vector<std::vector<Counter>> residue_lists( const ResidueSet& V )
{
    std::vector<std::vector<Counter>> out( V.num_states() );
    for ( std::uint32_t q = 0; q < V.num_states(); ++q )
        out[q] = V.residues( StateId{ q } );
    return out;
}

/// Semi-naive round evaluation: R_{i+1} \ R_i needs a premise in R_i \ R_{i-1}.
ResidueSet residue_fixpoint( const Bvass& system, const ResidueSet& R0, const ResidueSet& s_mod_d, Counter d,
                             std::size_t& iterations, std::vector<ResidueSet>* history )
{
    ResidueSet R = R0;
    ResidueSet delta = R0;
    iterations = 0;
    if ( history )
        history->push_back( R );

    while ( true )
    {
        ++iterations;
        ResidueSet fresh( system.num_states(), d );
        const auto collect = [&]( const ResidueSet& candidates ) {
            for ( auto [q, r] : candidates.elements() )
                if ( !R.contains( q, r ) )
                    fresh.insert( q, r );
        };
        collect( delta_unary( system, delta, d ) );
        collect( delta_branch( system, delta, s_mod_d, d ) );
        collect( delta_branch( system, s_mod_d, delta, d ) );
        collect( delta_branch( system, delta, R, d ) );
        collect( delta_branch( system, R, delta, d ) );
        if ( fresh.empty() )
            break;
        R.merge( fresh );
        delta = std::move( fresh );
        if ( history )
            history->push_back( R );
    }
    return R;
}

} // namespace

CounterSet bounded_tree_set( const Bvass& system, Counter cap )
{
    const Incoming in{ system };
    CounterSet S( system.num_states(), cap );
    std::deque<std::pair<StateId, Counter>> work;
    const auto add = [&]( StateId q, Counter m ) {
        if ( S.insert( q, m ) )
            work.emplace_back( q, m );
    };

    for ( auto f : system.finals() )
        add( f, 0 );

    while ( !work.empty() )
    {
        auto [p, m] = work.front();
        work.pop_front();

        // (q, z, p): q(m - z) has child p(m).
        for ( auto i : in.unary_into[p.index] )
        {
            const auto& t = system.unary()[i];
            const auto n = static_cast<long long>( m ) - t.delta;
            if ( n >= 0 && static_cast<Counter>( n ) <= cap )
                add( t.source, static_cast<Counter>( n ) );
        }
        // (q, p, p'): join against the partner's current members. Iterating by
        // index keeps this correct while `add` appends to the same vectors.
        for ( auto i : in.branch_left_into[p.index] )
        {
            const auto& t = system.branching()[i];
            const auto& partner = S.values( t.right );
            for ( std::size_t k = 0; k < partner.size(); ++k )
                if ( m + partner[k] <= cap )
                    add( t.source, m + partner[k] );
        }
        for ( auto i : in.branch_right_into[p.index] )
        {
            const auto& t = system.branching()[i];
            const auto& partner = S.values( t.left );
            for ( std::size_t k = 0; k < partner.size(); ++k )
                if ( partner[k] + m <= cap )
                    add( t.source, partner[k] + m );
        }
    }
    return S;
}

CounterSet compute_S( const Bvass& system, const ResidueQuery& query )
{
    check_query( system, query );
    return bounded_tree_set( system, residue_cap( system, query ) );
}

std::vector<std::vector<bool>> almost_bounded_roots( const Bvass& system, const CounterSet& S )
{
    const Counter cap = S.cap();
    std::vector<std::vector<bool>> roots( system.num_states(), std::vector<bool>( cap + 2, false ) );

    // Unary root (q, z, p) with child p(m), m <= cap: n = m - z >= cap.
    for ( const auto& t : system.unary() )
        for ( Counter m : S.values( t.target ) )
        {
            const auto n = static_cast<long long>( m ) - t.delta;
            if ( n >= static_cast<long long>( cap ) )
                roots[t.source.index][static_cast<Counter>( n ) - cap] = true;
        }

    // Branching root: n = m0 + m1 >= cap with both children in S.
    for ( const auto& t : system.branching() )
    {
        auto& row = roots[t.source.index];
        const auto& right = S.values( t.right );
        for ( Counter m0 : S.values( t.left ) )
            for ( Counter m1 : right )
                if ( m0 + m1 >= cap )
                    row[m0 + m1 - cap] = true;
    }
    return roots;
}

namespace
{

ResidueSet reduce_roots( const std::vector<std::vector<bool>>& roots, Counter cap, Counter d )
{
    ResidueSet out( roots.size(), d );
    for ( std::uint32_t q = 0; q < roots.size(); ++q )
        for ( Counter k = 0; k < roots[q].size(); ++k )
            if ( roots[q][k] )
                out.insert( StateId{ q }, ( cap + k ) % d );
    return out;
}

} // namespace

ResidueSet compute_R0( const Bvass& system, const ResidueQuery& query, const CounterSet& S )
{
    check_query( system, query );
    return reduce_roots( almost_bounded_roots( system, S ), S.cap(), query.d );
}

ResidueSet delta_unary( const Bvass& system, const ResidueSet& V, Counter d )
{
    ResidueSet out( system.num_states(), d );
    const auto lists = residue_lists( V );
    for ( const auto& t : system.unary() )
        for ( Counter r : lists[t.target.index] )
        {
            // (r - z) mod d with a non-negative remainder
            const auto shifted = static_cast<long long>( r + d ) - t.delta;
            out.insert( t.source, static_cast<Counter>( shifted ) % d );
        }
    return out;
}

ResidueSet delta_branch( const Bvass& system, const ResidueSet& V, const ResidueSet& W, Counter d )
{
    ResidueSet out( system.num_states(), d );
    if ( V.empty() || W.empty() )
        return out;
    const auto left = residue_lists( V );
    const auto right = residue_lists( W );
    for ( const auto& t : system.branching() )
        for ( Counter r0 : left[t.left.index] )
            for ( Counter r1 : right[t.right.index] )
                out.insert( t.source, ( r0 + r1 ) % d );
    return out;
}

ResidueSet residue_of( const CounterSet& S, Counter lo, Counter hi, Counter d )
{
    ResidueSet out( S.num_states(), d );
    for ( std::uint32_t q = 0; q < S.num_states(); ++q )
        for ( Counter m : S.values( StateId{ q } ) )
            if ( m >= lo && m <= hi )
                out.insert( StateId{ q }, m % d );
    return out;
}

ResidueTable compute_R( const Bvass& system, const ResidueQuery& query )
{
    check_query( system, query );
    ResidueTable table;
    table.query = query;
    table.big_n = static_cast<Counter>( system.num_states() ) * query.d;
    table.S = compute_S( system, query );
    table.R0 = compute_R0( system, query, table.S );
    const auto s_mod_d = residue_of( table.S, 0, table.S.cap(), query.d );
    table.R = residue_fixpoint( system, table.R0, s_mod_d, query.d, table.iterations, &table.history );
    assert( table.iterations <= std::max<Counter>( table.big_n, 1 ) );
    table.X = ResidueSet( system.num_states(), query.d );
    return table;
}

ResidueAnswer residue_reachable( const Bvass& system, const ResidueQuery& query )
{
    ResidueAnswer answer{ false, compute_R( system, query ) };
    auto& t = answer.table;
    t.X = t.R;
    t.X.merge( residue_of( t.S, query.n0, query.n0 + t.big_n, query.d ) );
    answer.reachable = t.X.contains( query.start, query.n0 % query.d );
    return answer;
}

ResidueIndex::ResidueIndex( const Bvass& system, Counter cap )
        : _system{ &system }, _S{ bounded_tree_set( system, cap ) }
{
    const auto roots = almost_bounded_roots( system, _S );
    for ( std::uint32_t q = 0; q < roots.size(); ++q )
        for ( Counter k = 0; k < roots[q].size(); ++k )
            if ( roots[q][k] )
                _roots.emplace_back( StateId{ q }, cap + k );
}

ResidueIndex::PerModulus& ResidueIndex::modulus( Counter d )
{
    if ( d == 0 )
        throw std::invalid_argument( "residue modulus d must be >= 1" );
    if ( auto it = _by_modulus.find( d ); it != _by_modulus.end() )
        return *it->second;

    if ( _lru.size() >= cached_moduli )
    {
        _by_modulus.erase( _lru.front() );
        _lru.pop_front();
    }

    auto pm = std::make_unique<PerModulus>();
    const auto states = _system->num_states();
    ResidueSet R0( states, d );
    for ( auto [q, n] : _roots )
        R0.insert( q, n % d );
    const auto s_mod_d = residue_of( _S, 0, _S.cap(), d );
    std::size_t iterations = 0;
    pm->R = residue_fixpoint( *_system, R0, s_mod_d, d, iterations, nullptr );
    assert( iterations <= std::max<Counter>( states * d, 1 ) );
    pm->best.resize( states );

    auto& slot = _by_modulus[d];
    slot = std::move( pm );
    _lru.push_back( d );
    return *slot;
}

const ResidueSet& ResidueIndex::fixpoint( Counter d )
{
    return modulus( d ).R;
}

bool ResidueIndex::reachable( StateId q, Counter n0, Counter d )
{
    if ( d == 0 || n0 + static_cast<Counter>( _system->num_states() ) * d > _S.cap() )
        throw std::invalid_argument( "residue query outside the index cap" );
    auto& pm = modulus( d );
    const auto r = n0 % d;
    if ( pm.R.contains( q, r ) )
        return true;
    auto& best = pm.best[q.index];
    if ( best.empty() )
    {
        best.assign( d, 0 );
        for ( Counter m : _S.values( q ) )
            best[m % d] = std::max( best[m % d], m + 1 );
    }
    return best[r] > n0;
}

} // namespace bvass1
