#include "bvass1/reach.hpp"

#include <limits>
#include <string>

namespace bvass1
{

using Rule = Justification::Rule;

FixpointTables::FixpointTables( const Bvass& system, Counter bound, std::shared_ptr<ResidueIndex> residues,
                                std::size_t budget )
        : _system{ &system }, _bound{ bound }, _residues{ std::move( residues ) }, _states{ system.num_states() }
{
    _unary_into.resize( _states );
    _left_into.resize( _states );
    _right_into.resize( _states );
    std::vector<std::vector<std::uint32_t>> sources_of( _states );
    for ( std::uint32_t i = 0; i < system.unary().size(); ++i )
    {
        const auto& t = system.unary()[i];
        _unary_into[t.target.index].push_back( i );
        sources_of[t.target.index].push_back( t.source.index );
    }
    for ( std::uint32_t i = 0; i < system.branching().size(); ++i )
    {
        const auto& t = system.branching()[i];
        _left_into[t.left.index].push_back( i );
        _right_into[t.right.index].push_back( i );
        sources_of[t.left.index].push_back( t.source.index );
        sources_of[t.right.index].push_back( t.source.index );
    }

    // States that reach q in one or more steps; q is cyclic if it is among them.
    _cyclic.assign( _states, false );
    _slot.assign( _states, {} );
    _row_states.assign( _states, 0 );
    for ( std::uint32_t q = 0; q < _states; ++q )
    {
        std::vector<bool> seen( _states, false );
        std::vector<std::uint32_t> work = sources_of[q];
        while ( !work.empty() )
        {
            const auto p = work.back();
            work.pop_back();
            if ( seen[p] )
                continue;
            seen[p] = true;
            for ( auto s : sources_of[p] )
                work.push_back( s );
        }
        if ( !seen[q] )
            continue;
        _cyclic[q] = true;
        _slot[q].assign( _states, -1 );
        for ( std::uint32_t p = 0; p < _states; ++p )
            if ( seen[p] )
                _slot[q][p] = static_cast<std::int32_t>( _row_states[q]++ );
        _table_entries += static_cast<long double>( _row_states[q] ) * ( bound + 1 ) * ( bound + 1 );
    }

    if ( _table_entries > static_cast<long double>( budget ) || bound >= std::numeric_limits<std::uint32_t>::max() / 2 )
        throw TableBudgetExceeded( "anchor table needs " +
                                   std::to_string( static_cast<unsigned long long>( _table_entries ) ) +
                                   " entries (|Q|=" + std::to_string( _states ) + ", B=" + std::to_string( bound ) +
                                   "), budget is " + std::to_string( budget ) );
    if ( !_residues || _residues->cap() < _states * bound )
        throw std::invalid_argument( "residue index cap below |Q|*B" );

    const auto cells = _states * ( bound + 1 );
    _reach.assign( cells, 0 );
    _reach_list.resize( _states );
    _anchor.resize( cells );
    _anchors_at.resize( cells );
    _anchored_at_state.assign( _states, 0 );
}

bool FixpointTables::reach( StateId q, Counter n ) const
{
    return n <= _bound && q.index < _states && _reach[cell( q.index, n )] != 0;
}

std::uint32_t FixpointTables::lookup_anchor( std::uint32_t a, std::uint32_t p, Counter m ) const
{
    const auto& row = _anchor[a];
    if ( row.empty() )
        return 0;
    const auto slot = _slot[anchor_state( a )][p];
    return slot < 0 ? 0 : row[slot * ( _bound + 1 ) + m];
}

bool FixpointTables::anchor_reach( const Config& anchor, StateId p, Counter m ) const
{
    if ( anchor.counter > _bound || m > _bound )
        return false;
    return lookup_anchor( static_cast<std::uint32_t>( cell( anchor.state.index, anchor.counter ) ), p.index, m ) != 0;
}

const Justification& FixpointTables::why_reach( StateId q, Counter n ) const
{
    if ( !reach( q, n ) )
        throw std::logic_error( "no justification for a false Reach entry" );
    return _justifications[_reach[cell( q.index, n )] - 1];
}

const Justification& FixpointTables::why_anchor_reach( const Config& anchor, StateId p, Counter m ) const
{
    if ( !anchor_reach( anchor, p, m ) )
        throw std::logic_error( "no justification for a false AnchorReach entry" );
    return _justifications
            [lookup_anchor( static_cast<std::uint32_t>( cell( anchor.state.index, anchor.counter ) ), p.index, m ) - 1];
}

bool FixpointTables::set_reach( std::uint32_t q, Counter n, Justification why )
{
    auto& slot = _reach[cell( q, n )];
    if ( slot )
        return false;
    _justifications.push_back( why );
    slot = static_cast<std::uint32_t>( _justifications.size() );
    _reach_list[q].push_back( n );
    _queue.push_back( { false, 0, q, static_cast<std::uint32_t>( n ) } );
    return true;
}

bool FixpointTables::set_anchor( std::uint32_t a, std::uint32_t p, Counter m, Justification why )
{
    const auto qa = anchor_state( a );
    const auto pos = _slot[qa][p];
    if ( pos < 0 )
        throw std::logic_error( "anchor obligation at a state that cannot reach the anchor state" );
    auto& row = _anchor[a];
    if ( row.empty() )
    {
        row.assign( _row_states[qa] * ( _bound + 1 ), 0 );
        ++_rows_allocated;
    }
    auto& slot = row[pos * ( _bound + 1 ) + m];
    if ( slot )
        return false;
    _justifications.push_back( why );
    slot = static_cast<std::uint32_t>( _justifications.size() );
    _anchors_at[cell( p, m )].push_back( a );
    ++_anchored_at_state[p];
    _queue.push_back( { true, a, p, static_cast<std::uint32_t>( m ) } );
    return true;
}

void FixpointTables::seed()
{
    if ( _seeded )
        return;
    _seeded = true;
    for ( auto f : _system->finals() )
        set_reach( f.index, 0, { Rule::accepting, 0, 0 } );
    // By modulus first, so the residue index works on one d at a time.
    for ( Counter d = 1; d <= _bound; ++d )
        for ( std::uint32_t q = 0; q < _states; ++q )
            if ( _cyclic[q] )
                for ( Counter n = 0; n + d <= _bound; ++n )
                    if ( _residues->reachable( StateId{ q }, n, d ) )
                        set_anchor( static_cast<std::uint32_t>( cell( q, n ) ), q, n + d, { Rule::residue_seed, 0, 0 } );
}

void FixpointTables::on_reach( std::uint32_t p, Counter m )
{
    const auto& unary = _system->unary();
    const auto& branching = _system->branching();

    for ( auto i : _unary_into[p] )
    {
        const auto& t = unary[i];
        const auto n = static_cast<long long>( m ) - t.delta;
        if ( n >= 0 && static_cast<Counter>( n ) <= _bound )
            set_reach( t.source.index, static_cast<Counter>( n ), { Rule::unary, i, 0 } );
    }

    // p(m) as the left child
    for ( auto i : _left_into[p] )
    {
        const auto& t = branching[i];
        const auto q = t.source.index;
        const auto s = static_cast<std::uint32_t>( m );
        const auto& partner = _reach_list[t.right.index];
        for ( std::size_t k = 0; k < partner.size(); ++k )
            if ( m + partner[k] <= _bound )
                set_reach( q, m + partner[k], { Rule::branch, i, s } );
        if ( _anchored_at_state[t.right.index] == 0 )
            continue;
        if ( _cyclic[q] )
            for ( Counter m2 = 0; m + m2 <= _bound; ++m2 )
            {
                // right child carries the anchor obligation of q(m + m2)
                const auto a = static_cast<std::uint32_t>( cell( q, m + m2 ) );
                if ( lookup_anchor( a, t.right.index, m2 ) )
                    set_reach( q, m + m2, { Rule::branch_anchor_right, i, s } );
            }
        for ( Counter m2 = 0; m + m2 <= _bound; ++m2 )
        {
            const auto& anchors = _anchors_at[cell( t.right.index, m2 )];
            for ( std::size_t k = 0; k < anchors.size(); ++k )
                if ( anchor_state( anchors[k] ) != q )
                    set_anchor( anchors[k], q, m + m2, { Rule::anchor_branch_right, i, s } );
        }
    }

    // p(m) as the right child
    for ( auto i : _right_into[p] )
    {
        const auto& t = branching[i];
        const auto q = t.source.index;
        const auto& partner = _reach_list[t.left.index];
        for ( std::size_t k = 0; k < partner.size(); ++k )
            if ( partner[k] + m <= _bound )
                set_reach( q, partner[k] + m, { Rule::branch, i, static_cast<std::uint32_t>( partner[k] ) } );
        if ( _anchored_at_state[t.left.index] == 0 )
            continue;
        if ( _cyclic[q] )
            for ( Counter m1 = 0; m1 + m <= _bound; ++m1 )
            {
                const auto a = static_cast<std::uint32_t>( cell( q, m1 + m ) );
                if ( lookup_anchor( a, t.left.index, m1 ) )
                    set_reach( q, m1 + m, { Rule::branch_anchor_left, i, static_cast<std::uint32_t>( m1 ) } );
            }
        for ( Counter m1 = 0; m1 + m <= _bound; ++m1 )
        {
            const auto& anchors = _anchors_at[cell( t.left.index, m1 )];
            for ( std::size_t k = 0; k < anchors.size(); ++k )
                if ( anchor_state( anchors[k] ) != q )
                    set_anchor( anchors[k], q, m1 + m,
                                { Rule::anchor_branch_left, i, static_cast<std::uint32_t>( m1 ) } );
        }
    }
}

void FixpointTables::on_anchor( std::uint32_t a, std::uint32_t p, Counter m )
{
    const auto& unary = _system->unary();
    const auto& branching = _system->branching();
    const auto qa = anchor_state( a );
    const Counter na = a % ( _bound + 1 );

    for ( auto i : _unary_into[p] )
    {
        const auto& t = unary[i];
        const auto n = static_cast<long long>( m ) - t.delta;
        if ( n < 0 || static_cast<Counter>( n ) > _bound )
            continue;
        if ( t.source.index == qa )
        {
            if ( static_cast<Counter>( n ) == na )
                set_reach( qa, na, { Rule::unary_anchor, i, 0 } );
        }
        else
            set_anchor( a, t.source.index, static_cast<Counter>( n ), { Rule::anchor_unary, i, 0 } );
    }

    for ( auto i : _left_into[p] )
    {
        const auto& t = branching[i];
        const auto s = static_cast<std::uint32_t>( m );
        if ( t.source.index == qa )
        {
            if ( m <= na && reach( t.right, na - m ) )
                set_reach( qa, na, { Rule::branch_anchor_left, i, s } );
            continue;
        }
        const auto& partner = _reach_list[t.right.index];
        for ( std::size_t k = 0; k < partner.size(); ++k )
            if ( m + partner[k] <= _bound )
                set_anchor( a, t.source.index, m + partner[k], { Rule::anchor_branch_left, i, s } );
    }

    for ( auto i : _right_into[p] )
    {
        const auto& t = branching[i];
        if ( t.source.index == qa )
        {
            if ( m <= na && reach( t.left, na - m ) )
                set_reach( qa, na, { Rule::branch_anchor_right, i, static_cast<std::uint32_t>( na - m ) } );
            continue;
        }
        const auto& partner = _reach_list[t.left.index];
        for ( std::size_t k = 0; k < partner.size(); ++k )
            if ( partner[k] + m <= _bound )
                set_anchor( a, t.source.index, partner[k] + m,
                            { Rule::anchor_branch_right, i, static_cast<std::uint32_t>( partner[k] ) } );
    }
}

void FixpointTables::run( const Config* goal )
{
    seed();
    const auto done = [&] { return goal && reach( goal->state, goal->counter ); };
    while ( !_queue.empty() && !done() )
    {
        const auto e = _queue.front();
        _queue.pop_front();
        if ( e.anchored )
            on_anchor( e.anchor, e.state, e.counter );
        else
            on_reach( e.state, e.counter );
    }
    _complete = _queue.empty();
}

void FixpointTables::solve()
{
    run( nullptr );
}

bool FixpointTables::solve_for( const Config& goal )
{
    if ( goal.counter > _bound )
        return false;
    run( &goal );
    return reach( goal.state, goal.counter );
}

ReachSolver::ReachSolver( const Bvass& system, std::size_t budget ) : _system{ &system }, _budget{ budget } {}

std::shared_ptr<ResidueIndex> ReachSolver::residues_for( Counter bound )
{
    const Counter need = std::max<Counter>( _system->num_states() * bound, 1 );
    if ( !_residues || _residues->cap() < need )
        _residues = std::make_shared<ResidueIndex>( *_system, _residues ? std::max( need, 2 * _residues->cap() ) : need );
    return _residues;
}

void ReachSolver::prepare( Counter max_n )
{
    const auto bound = ReachQuery{ StateId{}, max_n }.bound( *_system );
    if ( _prepared && _prepared->bound() >= bound )
        return;
    _prepared = std::make_unique<FixpointTables>( *_system, bound, residues_for( bound ), _budget );
    _prepared->solve();
}

std::unique_ptr<FixpointTables> ReachSolver::tables_for( StateId q, Counter n )
{
    const auto bound = ReachQuery{ q, n }.bound( *_system );
    auto tables = std::make_unique<FixpointTables>( *_system, bound, residues_for( bound ), _budget );
    tables->solve_for( { q, n } );
    return tables;
}

bool ReachSolver::decide( StateId q, Counter n )
{
    if ( q.index >= _system->num_states() )
        throw std::invalid_argument( "state out of range" );
    if ( _prepared && ReachQuery{ q, n }.bound( *_system ) <= _prepared->bound() )
        return _prepared->reach( q, n );
    return tables_for( q, n )->reach( q, n );
}

Certificate ReachSolver::certificate( StateId q, Counter n )
{
    const auto tables = tables_for( q, n );
    return extract_certificate( *_system, *tables, { q, n } );
}

bool decide_reach( const Bvass& system, const ReachQuery& query, std::size_t budget )
{
    return ReachSolver{ system, budget }.decide( query.state, query.n );
}

Certificate extract_certificate( const Bvass& system, const FixpointTables& tables, const ReachQuery& query )
{
    if ( !tables.reach( query.state, query.n ) )
        throw std::logic_error( "extract_certificate: " + format_config( system, { query.state, query.n } ) +
                                " is not reachable in these tables" );

    struct Item
    {
        NodeAddress at;
        Config label;
        bool anchored;
        Config anchor;
        NodeAddress anchor_at;
    };

    Certificate cert;
    PartialTree::Labels labels;
    std::vector<Item> stack{ { NodeAddress::root(), { query.state, query.n }, false, {}, {} } };
    while ( !stack.empty() )
    {
        auto item = std::move( stack.back() );
        stack.pop_back();
        labels.emplace( item.at, item.label );
        const auto n = item.label.counter;

        if ( !item.anchored )
        {
            const auto& why = tables.why_reach( item.label.state, n );
            const auto anchored_child = [&]( const NodeAddress& at, StateId p, Counter m ) {
                stack.push_back( { at, { p, m }, true, item.label, item.at } );
            };
            const auto plain_child = [&]( const NodeAddress& at, StateId p, Counter m ) {
                stack.push_back( { at, { p, m }, false, {}, {} } );
            };
            switch ( why.rule )
            {
            case Rule::accepting:
                break;
            case Rule::unary:
            case Rule::unary_anchor: {
                const auto& t = system.unary()[why.transition];
                const Counter m = static_cast<Counter>( static_cast<long long>( n ) + t.delta );
                if ( why.rule == Rule::unary )
                    plain_child( item.at.child( 0 ), t.target, m );
                else
                    anchored_child( item.at.child( 0 ), t.target, m );
                break;
            }
            case Rule::branch:
            case Rule::branch_anchor_left:
            case Rule::branch_anchor_right: {
                const auto& t = system.branching()[why.transition];
                const Counter m1 = why.split;
                const Counter m2 = n - m1;
                if ( why.rule == Rule::branch_anchor_left )
                    anchored_child( item.at.child( 0 ), t.left, m1 );
                else
                    plain_child( item.at.child( 0 ), t.left, m1 );
                if ( why.rule == Rule::branch_anchor_right )
                    anchored_child( item.at.child( 1 ), t.right, m2 );
                else
                    plain_child( item.at.child( 1 ), t.right, m2 );
                break;
            }
            default:
                throw std::logic_error( "extract_certificate: anchor rule on a Reach entry" );
            }
            continue;
        }

        const auto& why = tables.why_anchor_reach( item.anchor, item.label.state, n );
        const auto follow = [&]( const NodeAddress& at, StateId p, Counter m ) {
            stack.push_back( { at, { p, m }, true, item.anchor, item.anchor_at } );
        };
        const auto plain_child = [&]( const NodeAddress& at, StateId p, Counter m ) {
            stack.push_back( { at, { p, m }, false, {}, {} } );
        };
        switch ( why.rule )
        {
        case Rule::residue_seed: {
            const Counter d = n - item.anchor.counter;
            auto answer = residue_reachable( system, { item.anchor.state, item.anchor.counter, d } );
            if ( !answer.reachable )
                throw std::logic_error( "extract_certificate: seeded residue query is negative" );
            cert.pumps.emplace( item.at, Certificate::Pump{ item.anchor_at, d, std::move( answer.table ) } );
            break;
        }
        case Rule::anchor_unary: {
            const auto& t = system.unary()[why.transition];
            follow( item.at.child( 0 ), t.target, static_cast<Counter>( static_cast<long long>( n ) + t.delta ) );
            break;
        }
        case Rule::anchor_branch_left:
        case Rule::anchor_branch_right: {
            const auto& t = system.branching()[why.transition];
            const Counter m1 = why.split;
            const Counter m2 = n - m1;
            if ( why.rule == Rule::anchor_branch_left )
            {
                follow( item.at.child( 0 ), t.left, m1 );
                plain_child( item.at.child( 1 ), t.right, m2 );
            }
            else
            {
                plain_child( item.at.child( 0 ), t.left, m1 );
                follow( item.at.child( 1 ), t.right, m2 );
            }
            break;
        }
        default:
            throw std::logic_error( "extract_certificate: Reach rule on an AnchorReach entry" );
        }
    }
    cert.tree = PartialTree{ std::move( labels ) };
    return cert;
}

} // namespace bvass1
