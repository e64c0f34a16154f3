#include "bvass1/gen.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <sstream>
#include <unordered_map>

namespace bvass1::gen
{

namespace
{

class Builder
{
public:
    StateId add( const std::string& name )
    {
        auto [it, fresh] = _ids.emplace( name, StateId{ static_cast<std::uint32_t>( _names.size() ) } );
        if ( fresh )
            _names.push_back( name );
        return it->second;
    }

    StateId operator[]( const std::string& name ) const { return _ids.at( name ); }

    void unary( StateId q, int z, StateId p ) { _unary.push_back( { q, z, p } ); }
    void branch( StateId q, StateId l, StateId r ) { _branching.push_back( { q, l, r } ); }
    void final( StateId q ) { _finals.push_back( q ); }

    Bvass build() const { return Bvass{ _names, _unary, _branching, _finals }; }

private:
    std::vector<std::string> _names;
    std::unordered_map<std::string, StateId> _ids;
    std::vector<UnaryTransition> _unary;
    std::vector<BranchTransition> _branching;
    std::vector<StateId> _finals;
};

std::string level( unsigned i )
{
    return "q_" + std::to_string( i );
}

void add_doubling( Builder& b, unsigned n )
{
    const auto q = b.add( "q" );
    const auto qf = b.add( "q_f" );
    for ( unsigned i = 0; i <= n; ++i )
        b.add( level( i ) );
    b.final( qf );
    b.unary( q, +1, q );
    b.unary( q, 0, b[level( n )] );
    for ( unsigned i = n; i >= 1; --i )
        b.branch( b[level( i )], b[level( i - 1 )], b[level( i - 1 )] );
    b.unary( b[level( 0 )], -1, qf );
}

unsigned top_bit( Counter m )
{
    return static_cast<unsigned>( std::bit_width( m ) ) - 1;
}

/// Adds `prefix` and `prefix^0..prefix^n` for m > 0 on top of a doubling
/// gadget with at least top_bit(m) levels.
StateId add_constant( Builder& b, Counter m, const std::string& prefix )
{
    const auto n = top_bit( m );
    const auto head = b.add( prefix );
    const auto part = [&]( unsigned i ) { return prefix + "^" + std::to_string( i ); };
    for ( unsigned i = 0; i <= n; ++i )
        b.add( part( i ) );

    b.unary( head, 0, b[part( n )] );
    for ( unsigned i = n; i >= 1; --i )
    {
        if ( ( m >> i ) & 1 )
            b.branch( b[part( i )], b[level( i )], b[part( i - 1 )] );
        else
            b.unary( b[part( i )], 0, b[part( i - 1 )] );
    }
    if ( m & 1 )
        b.branch( b[part( 0 )], b[level( 0 )], b["q_f"] );
    else
        b.unary( b[part( 0 )], 0, b["q_f"] );
    return head;
}

} // namespace

Bvass doubling( unsigned n )
{
    Builder b;
    add_doubling( b, n );
    return b.build();
}

ConstantInstance binary_constant( Counter m )
{
    if ( m == 0 )
        throw std::invalid_argument( "binary_constant: m must be >= 1 (use a final state for 0)" );
    Builder b;
    add_doubling( b, top_bit( m ) );
    const auto q = add_constant( b, m, "q_m" );
    return { b.build(), q };
}

Circuit parse_circuit( std::string_view text )
{
    Circuit c;
    std::istringstream in{ std::string{ text } };
    std::size_t lineno = 0;
    for ( std::string raw; std::getline( in, raw ); )
    {
        ++lineno;
        if ( auto hash = raw.find( '#' ); hash != std::string::npos )
            raw.resize( hash );
        std::istringstream ls{ raw };
        std::vector<std::string> tok;
        for ( std::string t; ls >> t; )
            tok.push_back( std::move( t ) );
        if ( tok.empty() )
            continue;

        Gate g;
        const auto self = c.gates.size() + 1;
        if ( tok.size() == 1 && tok[0] == "T" )
            g.kind = Gate::Kind::top;
        else if ( tok.size() == 1 && tok[0] == "F" )
            g.kind = Gate::Kind::bottom;
        else if ( tok.size() == 3 && ( tok[0] == "AND" || tok[0] == "OR" ) )
        {
            g.kind = tok[0] == "AND" ? Gate::Kind::conj : Gate::Kind::disj;
            const auto input = [&]( const std::string& s ) -> std::size_t {
                std::size_t pos = 0;
                unsigned long v = 0;
                try
                {
                    v = std::stoul( s, &pos );
                }
                catch ( const std::exception& )
                {
                    pos = 0;
                }
                if ( pos != s.size() || v == 0 || v >= self )
                    throw ParseError( lineno, "gate input '" + s + "' must be in [1, " + std::to_string( self - 1 ) + "]" );
                return v;
            };
            g.left = input( tok[1] );
            g.right = input( tok[2] );
        }
        else
            throw ParseError( lineno, "expected T, F, AND i j or OR i j" );
        c.gates.push_back( g );
    }
    if ( c.gates.empty() )
        throw ParseError( lineno, "circuit has no gates" );
    return c;
}

std::string print_circuit( const Circuit& c )
{
    std::ostringstream out;
    for ( const auto& g : c.gates )
    {
        switch ( g.kind )
        {
        case Gate::Kind::top:
            out << "T\n";
            break;
        case Gate::Kind::bottom:
            out << "F\n";
            break;
        case Gate::Kind::conj:
            out << "AND " << g.left << ' ' << g.right << '\n';
            break;
        case Gate::Kind::disj:
            out << "OR " << g.left << ' ' << g.right << '\n';
            break;
        }
    }
    return out.str();
}

std::vector<bool> evaluate( const Circuit& c )
{
    std::vector<bool> value;
    value.reserve( c.gates.size() );
    for ( const auto& g : c.gates )
    {
        switch ( g.kind )
        {
        case Gate::Kind::top:
            value.push_back( true );
            break;
        case Gate::Kind::bottom:
            value.push_back( false );
            break;
        case Gate::Kind::conj:
            value.push_back( value.at( g.left - 1 ) && value.at( g.right - 1 ) );
            break;
        case Gate::Kind::disj:
            value.push_back( value.at( g.left - 1 ) || value.at( g.right - 1 ) );
            break;
        }
    }
    return value;
}

Circuit random_circuit( std::size_t gates, std::uint64_t seed )
{
    std::mt19937_64 rng{ seed };
    Circuit c;
    for ( std::size_t k = 1; k <= gates; ++k )
    {
        Gate g;
        const auto roll = std::uniform_int_distribution<int>{ 0, 9 }( rng );
        if ( k == 1 || roll < 2 )
            g.kind = std::uniform_int_distribution<int>{ 0, 1 }( rng ) ? Gate::Kind::top : Gate::Kind::bottom;
        else
        {
            g.kind = roll < 6 ? Gate::Kind::conj : Gate::Kind::disj;
            std::uniform_int_distribution<std::size_t> input{ 1, k - 1 };
            g.left = input( rng );
            g.right = input( rng );
        }
        c.gates.push_back( g );
    }
    return c;
}

CircuitInstance mcvp( const Circuit& c )
{
    Builder b;
    CircuitInstance out;
    for ( std::size_t k = 1; k <= c.gates.size(); ++k )
        out.gate_states.push_back( b.add( "q" + std::to_string( k ) ) );
    for ( std::size_t k = 1; k <= c.gates.size(); ++k )
    {
        const auto& g = c.gates[k - 1];
        const auto q = out.gate_states[k - 1];
        if ( ( g.kind == Gate::Kind::conj || g.kind == Gate::Kind::disj ) &&
             ( g.left == 0 || g.right == 0 || g.left >= k || g.right >= k ) )
            throw std::invalid_argument( "gate " + std::to_string( k ) + " has an input that is not an earlier gate" );
        switch ( g.kind )
        {
        case Gate::Kind::top:
            b.final( q );
            break;
        case Gate::Kind::bottom:
            break;
        case Gate::Kind::conj:
            b.branch( q, out.gate_states[g.left - 1], out.gate_states[g.right - 1] );
            break;
        case Gate::Kind::disj:
            b.unary( q, 0, out.gate_states[g.left - 1] );
            b.unary( q, 0, out.gate_states[g.right - 1] );
            break;
        }
    }
    out.system = b.build();
    return out;
}

SubsetSumInstance subset_sum( const std::vector<Counter>& values )
{
    if ( values.empty() )
        throw std::invalid_argument( "subset_sum: empty value list" );
    const auto largest = *std::max_element( values.begin(), values.end() );
    Builder b;
    add_doubling( b, largest == 0 ? 0 : top_bit( largest ) );

    std::vector<StateId> gadget;
    for ( std::size_t i = 0; i < values.size(); ++i )
        gadget.push_back( values[i] == 0 ? b["q_f"]
                                         : add_constant( b, values[i], "q_m" + std::to_string( i + 1 ) ) );

    const auto choice = [&]( std::size_t i ) { return b.add( "q_c" + std::to_string( i ) ); };
    for ( std::size_t i = 1; i <= values.size(); ++i )
    {
        const auto here = choice( i );
        const auto next = choice( i + 1 );
        b.unary( here, 0, next );
        b.branch( here, gadget[i - 1], next );
    }
    b.final( choice( values.size() + 1 ) );
    return { b.build(), b["q_c1"] };
}

Bvass random_system( const RandomParams& params )
{
    if ( params.states == 0 )
        throw std::invalid_argument( "random_system: need at least one state" );
    if ( params.finals > params.states )
        throw std::invalid_argument( "random_system: more finals than states" );

    std::mt19937_64 rng{ params.seed };
    std::uniform_int_distribution<std::uint32_t> state{ 0, static_cast<std::uint32_t>( params.states - 1 ) };
    std::uniform_int_distribution<int> delta{ -1, 1 };

    std::vector<std::string> names;
    for ( std::size_t i = 0; i < params.states; ++i )
        names.push_back( "s" + std::to_string( i ) );

    std::vector<UnaryTransition> unary;
    for ( std::size_t i = 0; i < params.unary; ++i )
    {
        const StateId q{ state( rng ) };
        const int z = delta( rng );
        const StateId p{ state( rng ) };
        unary.push_back( { q, z, p } );
    }
    std::vector<BranchTransition> branching;
    for ( std::size_t i = 0; i < params.branching; ++i )
    {
        const StateId q{ state( rng ) };
        const StateId l{ state( rng ) };
        const StateId r{ state( rng ) };
        branching.push_back( { q, l, r } );
    }

    std::vector<std::uint32_t> order( params.states );
    for ( std::uint32_t i = 0; i < order.size(); ++i )
        order[i] = i;
    for ( std::size_t i = 0; i < params.finals; ++i )
        std::swap( order[i], order[i + std::uniform_int_distribution<std::size_t>{ 0, order.size() - 1 - i }( rng )] );
    std::vector<StateId> finals;
    for ( std::size_t i = 0; i < params.finals; ++i )
        finals.push_back( StateId{ order[i] } );
    std::sort( finals.begin(), finals.end() );

    return Bvass{ std::move( names ), std::move( unary ), std::move( branching ), std::move( finals ) };
}

} // namespace bvass1::gen
