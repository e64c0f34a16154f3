#include "bvass1/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bvass1
{

Bvass::Bvass( std::vector<std::string> state_names, std::vector<UnaryTransition> unary,
              std::vector<BranchTransition> branching, std::vector<StateId> finals )
        : _names{ std::move( state_names ) }, _unary{ std::move( unary ) }, _branching{ std::move( branching ) },
          _finals{ std::move( finals ) }, _is_final( _names.size(), false )
{
    for ( std::size_t i = 0; i < _names.size(); ++i )
    {
        if ( _names[i].empty() )
            throw std::invalid_argument( "empty state name" );
        auto [it, fresh] = _by_name.emplace( _names[i], StateId{ static_cast<std::uint32_t>( i ) } );
        if ( !fresh )
            throw std::invalid_argument( "duplicate state '" + _names[i] + "'" );
    }

    const auto check = [this]( StateId q ) {
        if ( q.index >= _names.size() )
            throw std::invalid_argument( "state id " + std::to_string( q.index ) + " out of range" );
    };
    for ( const auto& t : _unary )
    {
        check( t.source );
        check( t.target );
        if ( t.delta < -1 || t.delta > 1 )
            throw std::invalid_argument( "delta " + std::to_string( t.delta ) + " outside {-1,0,+1}" );
    }
    for ( const auto& t : _branching )
    {
        check( t.source );
        check( t.left );
        check( t.right );
    }
    for ( auto f : _finals )
    {
        check( f );
        _is_final[f.index] = true;
    }
}

std::optional<StateId> Bvass::find_state( std::string_view name ) const
{
    auto it = _by_name.find( std::string{ name } );
    if ( it == _by_name.end() )
        return std::nullopt;
    return it->second;
}

StateId Bvass::state( std::string_view name ) const
{
    if ( auto q = find_state( name ) )
        return *q;
    throw std::invalid_argument( "unknown state '" + std::string{ name } + "'" );
}

bool Bvass::operator==( const Bvass& other ) const
{
    return _names == other._names && _unary == other._unary && _branching == other._branching &&
           _is_final == other._is_final;
}

namespace
{

std::vector<std::string> tokenize( std::string_view line )
{
    if ( auto hash = line.find( '#' ); hash != std::string_view::npos )
        line = line.substr( 0, hash );
    std::vector<std::string> tokens;
    std::istringstream in{ std::string{ line } };
    for ( std::string tok; in >> tok; )
        tokens.push_back( std::move( tok ) );
    return tokens;
}

int parse_delta( const std::string& tok, std::size_t line )
{
    if ( tok == "+1" || tok == "1" )
        return 1;
    if ( tok == "0" || tok == "+0" || tok == "-0" )
        return 0;
    if ( tok == "-1" )
        return -1;
    throw ParseError( line, "delta '" + tok + "' outside {-1,0,+1}" );
}

} // namespace

Bvass parse_bvass( std::string_view text )
{
    struct PendingUnary
    {
        std::string src, tgt;
        int delta;
        std::size_t line;
    };
    struct PendingBranch
    {
        std::string src, left, right;
        std::size_t line;
    };

    std::vector<std::string> names;
    std::unordered_map<std::string, StateId> ids;
    std::vector<std::pair<std::string, std::size_t>> final_names;
    std::vector<PendingUnary> unary;
    std::vector<PendingBranch> branch;

    std::size_t lineno = 0;
    std::size_t pos = 0;
    while ( pos <= text.size() )
    {
        auto end = text.find( '\n', pos );
        if ( end == std::string_view::npos )
            end = text.size();
        auto line = text.substr( pos, end - pos );
        pos = end + 1;
        ++lineno;

        auto tok = tokenize( line );
        if ( tok.empty() )
            continue;
        const auto& kw = tok[0];
        if ( kw == "state" )
        {
            if ( tok.size() < 2 )
                throw ParseError( lineno, "'state' needs a name" );
            for ( std::size_t i = 1; i < tok.size(); ++i )
            {
                if ( tok[i] == "state" )
                    continue;
                if ( ids.contains( tok[i] ) )
                    throw ParseError( lineno, "duplicate state '" + tok[i] + "'" );
                ids.emplace( tok[i], StateId{ static_cast<std::uint32_t>( names.size() ) } );
                names.push_back( tok[i] );
            }
        }
        else if ( kw == "final" )
        {
            if ( tok.size() < 2 )
                throw ParseError( lineno, "'final' needs a name" );
            for ( std::size_t i = 1; i < tok.size(); ++i )
                if ( tok[i] != "final" )
                    final_names.emplace_back( tok[i], lineno );
        }
        else if ( kw == "unary" )
        {
            if ( tok.size() != 4 )
                throw ParseError( lineno, "expected 'unary <src> <z> <tgt>'" );
            unary.push_back( { tok[1], tok[3], parse_delta( tok[2], lineno ), lineno } );
        }
        else if ( kw == "branch" )
        {
            if ( tok.size() != 4 )
                throw ParseError( lineno, "expected 'branch <src> <left> <right>'" );
            branch.push_back( { tok[1], tok[2], tok[3], lineno } );
        }
        else
        {
            throw ParseError( lineno, "unknown keyword '" + kw + "'" );
        }
    }

    const auto resolve = [&ids]( const std::string& name, std::size_t line ) {
        auto it = ids.find( name );
        if ( it == ids.end() )
            throw ParseError( line, "undeclared state '" + name + "'" );
        return it->second;
    };

    std::vector<UnaryTransition> u;
    for ( const auto& p : unary )
        u.push_back( { resolve( p.src, p.line ), p.delta, resolve( p.tgt, p.line ) } );
    std::vector<BranchTransition> b;
    for ( const auto& p : branch )
        b.push_back( { resolve( p.src, p.line ), resolve( p.left, p.line ), resolve( p.right, p.line ) } );
    std::vector<StateId> finals;
    for ( const auto& [name, line] : final_names )
    {
        auto f = resolve( name, line );
        if ( std::find( finals.begin(), finals.end(), f ) == finals.end() )
            finals.push_back( f );
    }
    return Bvass{ std::move( names ), std::move( u ), std::move( b ), std::move( finals ) };
}

std::string print_bvass( const Bvass& system )
{
    std::ostringstream out;
    for ( const auto& name : system.state_names() )
        out << "state " << name << '\n';
    for ( auto f : system.finals() )
        out << "final " << system.name( f ) << '\n';
    for ( const auto& t : system.unary() )
        out << "unary " << system.name( t.source ) << ' ' << ( t.delta > 0 ? "+1" : std::to_string( t.delta ) ) << ' '
            << system.name( t.target ) << '\n';
    for ( const auto& t : system.branching() )
        out << "branch " << system.name( t.source ) << ' ' << system.name( t.left ) << ' ' << system.name( t.right )
            << '\n';
    return out.str();
}

std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        throw std::runtime_error( "cannot open '" + path + "'" );
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_config( const Bvass& system, const Config& c )
{
    return system.name( c.state ) + "(" + std::to_string( c.counter ) + ")";
}

} // namespace bvass1
