#include "bvass1/tree.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace bvass1
{

NodeAddress::NodeAddress( std::string path ) : _path{ std::move( path ) }
{
    for ( char c : _path )
        if ( c != '0' && c != '1' )
            throw std::invalid_argument( "node address '" + _path + "' is not a word over {0,1}" );
}

NodeAddress NodeAddress::child( int bit ) const
{
    NodeAddress a;
    a._path.reserve( _path.size() + 1 );
    a._path = _path;
    a._path.push_back( bit ? '1' : '0' );
    return a;
}

NodeAddress NodeAddress::parent() const
{
    NodeAddress a;
    a._path = _path.substr( 0, _path.size() - 1 );
    return a;
}

NodeAddress NodeAddress::concat( const NodeAddress& suffix ) const
{
    NodeAddress a;
    a._path = _path + suffix._path;
    return a;
}

bool NodeAddress::is_prefix_of( const NodeAddress& other ) const
{
    return other._path.size() >= _path.size() && other._path.compare( 0, _path.size(), _path ) == 0;
}

bool NodeAddress::is_strict_prefix_of( const NodeAddress& other ) const
{
    return _path.size() < other._path.size() && is_prefix_of( other );
}

std::string NodeAddress::to_string() const
{
    return _path.empty() ? std::string{ "e" } : _path;
}

NodeAddress NodeAddress::parse( std::string_view text )
{
    if ( text == "e" )
        return root();
    return NodeAddress{ std::string{ text } };
}

NodeAddress lca( const NodeAddress& a, const NodeAddress& b )
{
    const auto& x = a.path();
    const auto& y = b.path();
    auto [ix, iy] = std::mismatch( x.begin(), x.begin() + static_cast<std::ptrdiff_t>( std::min( x.size(), y.size() ) ),
                                   y.begin() );
    return NodeAddress{ std::string( x.begin(), ix ) };
}

bool PartialTree::is_leaf( const NodeAddress& u ) const
{
    return !_labels.contains( u.child( 0 ) ) && !_labels.contains( u.child( 1 ) );
}

std::vector<NodeAddress> PartialTree::leaves() const
{
    std::vector<NodeAddress> out;
    for ( const auto& [u, c] : _labels )
        if ( is_leaf( u ) )
            out.push_back( u );
    return out;
}

PartialTree PartialTree::subtree( const NodeAddress& u ) const
{
    Labels out;
    for ( auto it = _labels.lower_bound( u ); it != _labels.end() && u.is_prefix_of( it->first ); ++it )
        out.emplace( NodeAddress{ it->first.path().substr( u.depth() ) }, it->second );
    return PartialTree{ std::move( out ) };
}

bool PartialTree::is_bounded( Counter bound ) const
{
    return std::all_of( _labels.begin(), _labels.end(), [bound]( const auto& kv ) { return kv.second.counter <= bound; } );
}

std::optional<std::string> diagnose_partial_tree( const Bvass& system, const PartialTree& tree )
{
    if ( tree.empty() )
        return "tree has no nodes";

    for ( const auto& [u, c] : tree.labels() )
    {
        const auto where = "node " + u.to_string() + ": ";
        if ( c.state.index >= system.num_states() )
            return where + "unknown state id";
        if ( !u.is_root() && !tree.contains( u.parent() ) )
            return where + "parent missing (domain not prefix-closed)";

        const auto left = u.child( 0 );
        const auto right = u.child( 1 );
        const bool has_left = tree.contains( left );
        const bool has_right = tree.contains( right );

        if ( !has_left && has_right )
            return where + "right child without left child";
        if ( has_left && has_right )
        {
            const auto& l = tree.at( left );
            const auto& r = tree.at( right );
            if ( l.counter + r.counter != c.counter )
                return where + "children counters " + std::to_string( l.counter ) + "+" + std::to_string( r.counter ) +
                       " do not sum to " + std::to_string( c.counter );
            const bool matched = std::any_of( system.branching().begin(), system.branching().end(), [&]( const auto& t ) {
                return t.source == c.state && t.left == l.state && t.right == r.state;
            } );
            if ( !matched )
                return where + "no branching transition " + system.name( c.state ) + " -> " + system.name( l.state ) +
                       ", " + system.name( r.state );
        }
        else if ( has_left )
        {
            const auto& l = tree.at( left );
            const auto diff = static_cast<long long>( l.counter ) - static_cast<long long>( c.counter );
            const bool matched = std::any_of( system.unary().begin(), system.unary().end(), [&]( const auto& t ) {
                return t.source == c.state && t.target == l.state && t.delta == diff;
            } );
            if ( !matched )
                return where + "no unary transition " + system.name( c.state ) + " -(" + std::to_string( diff ) + ")-> " +
                       system.name( l.state );
        }
    }
    return std::nullopt;
}

bool validate_partial_tree( const Bvass& system, const PartialTree& tree )
{
    return !diagnose_partial_tree( system, tree ).has_value();
}

bool is_reachability_tree( const Bvass& system, const PartialTree& tree )
{
    for ( const auto& [u, c] : tree.labels() )
        if ( tree.is_leaf( u ) && !system.is_accepting( c ) )
            return false;
    return !tree.empty();
}

NodeClassification classify_nodes( const PartialTree& tree )
{
    NodeClassification out;
    if ( tree.empty() )
        return out;

    // Iterative DFS keeping, per state, the stack of ancestors on the current path.
    struct Frame
    {
        NodeAddress node;
        bool leaving;
    };
    std::unordered_map<std::uint32_t, std::vector<std::pair<Counter, NodeAddress>>> on_path;
    std::vector<Frame> stack{ { NodeAddress::root(), false } };
    while ( !stack.empty() )
    {
        auto [u, leaving] = std::move( stack.back() );
        stack.pop_back();
        const auto& c = tree.at( u );
        auto& same = on_path[c.state.index];
        if ( leaving )
        {
            same.pop_back();
            continue;
        }

        bool found_anchor = false;
        bool found_larger = false;
        for ( auto it = same.rbegin(); it != same.rend() && !( found_anchor && found_larger ); ++it )
        {
            if ( !found_anchor && it->first < c.counter )
            {
                out.increasing.insert( u );
                out.anchor_of.emplace( u, it->second );
                found_anchor = true;
            }
            if ( it->first > c.counter )
                found_larger = true;
        }
        if ( found_larger )
            out.decreasing.insert( u );

        same.emplace_back( c.counter, u );
        stack.push_back( { u, true } );
        for ( int bit : { 1, 0 } )
            if ( auto v = u.child( bit ); tree.contains( v ) )
                stack.push_back( { std::move( v ), false } );
    }
    return out;
}

bool is_exclusive( const PartialTree& tree, const NodeClassification& classes )
{
    std::vector<std::pair<NodeAddress, NodeAddress>> leaves;
    for ( const auto& v : classes.increasing )
        if ( tree.is_leaf( v ) )
            leaves.emplace_back( v, classes.anchor_of.at( v ) );

    for ( std::size_t i = 0; i < leaves.size(); ++i )
        for ( std::size_t j = i + 1; j < leaves.size(); ++j )
        {
            const auto w = lca( leaves[i].first, leaves[j].first );
            if ( leaves[i].second.is_prefix_of( w ) && leaves[j].second.is_prefix_of( w ) )
                return false;
        }
    return true;
}

bool is_exclusive( const PartialTree& tree )
{
    return is_exclusive( tree, classify_nodes( tree ) );
}

namespace
{

Counter parse_counter( const std::string& tok, std::size_t line )
{
    if ( tok.empty() || !std::all_of( tok.begin(), tok.end(), []( char c ) { return c >= '0' && c <= '9'; } ) )
        throw ParseError( line, "counter '" + tok + "' is not a natural number" );
    try
    {
        return std::stoull( tok );
    }
    catch ( const std::out_of_range& )
    {
        throw ParseError( line, "counter '" + tok + "' out of range" );
    }
}

NodeAddress parse_address( const std::string& tok, std::size_t line )
{
    try
    {
        return NodeAddress::parse( tok );
    }
    catch ( const std::invalid_argument& e )
    {
        throw ParseError( line, e.what() );
    }
}

} // namespace

TreeDocument parse_tree_document( std::string_view text, const Bvass* system )
{
    TreeDocument doc;
    std::unordered_map<std::string, StateId> interned;
    if ( system )
        doc.state_names = system->state_names();

    const auto resolve = [&]( const std::string& name, std::size_t line ) -> StateId {
        if ( system )
        {
            if ( auto q = system->find_state( name ) )
                return *q;
            throw ParseError( line, "unknown state '" + name + "'" );
        }
        auto [it, fresh] = interned.emplace( name, StateId{ static_cast<std::uint32_t>( doc.state_names.size() ) } );
        if ( fresh )
            doc.state_names.push_back( name );
        return it->second;
    };

    PartialTree::Labels labels;
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
        if ( tok.size() != ( tok[0] == "pump" ? 4u : 3u ) )
            throw ParseError( lineno, "expected '<address> <state> <counter>' or 'pump <leaf> <anchor> <d>'" );

        if ( tok[0] == "pump" )
        {
            doc.pumps.push_back(
                    { parse_address( tok[1], lineno ), parse_address( tok[2], lineno ), parse_counter( tok[3], lineno ) } );
            continue;
        }
        auto u = parse_address( tok[0], lineno );
        Config c{ resolve( tok[1], lineno ), parse_counter( tok[2], lineno ) };
        if ( !labels.emplace( std::move( u ), c ).second )
            throw ParseError( lineno, "duplicate node " + tok[0] );
    }
    if ( labels.empty() )
        throw ParseError( lineno, "tree has no nodes" );
    doc.tree = PartialTree{ std::move( labels ) };
    return doc;
}

std::string print_tree( const std::vector<std::string>& state_names, const PartialTree& tree )
{
    std::ostringstream out;
    for ( const auto& [u, c] : tree.labels() )
        out << u.to_string() << ' ' << state_names.at( c.state.index ) << ' ' << c.counter << '\n';
    return out.str();
}

std::string print_tree( const Bvass& system, const PartialTree& tree )
{
    return print_tree( system.state_names(), tree );
}

} // namespace bvass1
