#include "bvass1/certificate.hpp"

#include <deque>
#include <sstream>

namespace bvass1
{

std::optional<std::string> diagnose_certificate( const Bvass& system, const Certificate& c, const Config& claimed )
{
    const auto& tree = c.tree;
    if ( tree.empty() || !tree.contains( NodeAddress::root() ) )
        return "certificate tree has no root";
    if ( claimed.state.index >= system.num_states() )
        return "claimed state is not a state of the system";
    if ( tree.root() != claimed )
        return "root is " + format_config( system, tree.root() ) + ", claimed " + format_config( system, claimed );
    if ( auto bad = diagnose_partial_tree( system, tree ) )
        return "invalid partial tree: " + *bad;

    const Counter bound = 2 * system.num_states() + claimed.counter;
    for ( const auto& [u, label] : tree.labels() )
        if ( label.counter > bound )
            return "node " + u.to_string() + " has counter " + std::to_string( label.counter ) + " above B = " +
                   std::to_string( bound );

    const auto classes = classify_nodes( tree );
    for ( const auto& [leaf, pump] : c.pumps )
    {
        const auto where = "pump leaf " + leaf.to_string() + ": ";
        if ( !tree.contains( leaf ) || !tree.is_leaf( leaf ) )
            return where + "not a leaf of the tree";
        auto it = classes.anchor_of.find( leaf );
        if ( it == classes.anchor_of.end() )
            return where + "not an increasing node";
        if ( it->second != pump.anchor )
            return where + "recorded anchor " + pump.anchor.to_string() + " but the anchor is " + it->second.to_string();
        const auto d = tree.at( leaf ).counter - tree.at( pump.anchor ).counter;
        if ( d != pump.modulus )
            return where + "recorded d = " + std::to_string( pump.modulus ) + " but the counters differ by " +
                   std::to_string( d );
    }

    for ( const auto& leaf : tree.leaves() )
        if ( !system.is_accepting( tree.at( leaf ) ) && !c.pumps.contains( leaf ) )
            return "leaf " + leaf.to_string() + " is neither accepting nor a pump leaf";

    if ( !is_exclusive( tree, classes ) )
        return "tree is not exclusive";

    for ( const auto& [leaf, pump] : c.pumps )
    {
        const auto& a = tree.at( pump.anchor );
        if ( !residue_reachable( system, { a.state, a.counter, pump.modulus } ).reachable )
            return "pump leaf " + leaf.to_string() + ": residue query (" + system.name( a.state ) + ", " +
                   std::to_string( a.counter ) + ", " + std::to_string( pump.modulus ) + ") is negative";
    }
    return std::nullopt;
}

bool check_certificate( const Bvass& system, const Certificate& c, const Config& claimed )
{
    return !diagnose_certificate( system, c, claimed ).has_value();
}

namespace
{

/// Bottom-up least fixpoint over Q x [0, cap] that remembers the first rule
/// deriving each configuration, so trees can be rebuilt without cycles.
class WitnessFixpoint
{
public:
    WitnessFixpoint( const Bvass& system, Counter cap )
            : _system{ &system }, _cap{ cap }, _why( system.num_states() * ( cap + 1 ) ), _values( system.num_states() )
    {
        const auto states = system.num_states();
        std::vector<std::vector<std::size_t>> unary_into( states ), left_into( states ), right_into( states );
        for ( std::size_t i = 0; i < system.unary().size(); ++i )
            unary_into[system.unary()[i].target.index].push_back( i );
        for ( std::size_t i = 0; i < system.branching().size(); ++i )
        {
            left_into[system.branching()[i].left.index].push_back( i );
            right_into[system.branching()[i].right.index].push_back( i );
        }

        std::deque<Config> work;
        const auto add = [&]( StateId q, Counter n, Why why ) {
            auto& slot = _why[cell( q, n )];
            if ( slot.kind != Why::none )
                return;
            slot = why;
            _values[q.index].push_back( n );
            work.push_back( { q, n } );
        };

        for ( auto f : system.finals() )
            add( f, 0, { Why::leaf, 0, 0 } );
        while ( !work.empty() )
        {
            const auto [p, m] = work.front();
            work.pop_front();
            for ( auto i : unary_into[p.index] )
            {
                const auto& t = system.unary()[i];
                const auto n = static_cast<long long>( m ) - t.delta;
                if ( n >= 0 && static_cast<Counter>( n ) <= cap )
                    add( t.source, static_cast<Counter>( n ), { Why::unary, i, 0 } );
            }
            for ( auto i : left_into[p.index] )
            {
                const auto& t = system.branching()[i];
                const auto& partner = _values[t.right.index];
                for ( std::size_t k = 0; k < partner.size(); ++k )
                    if ( m + partner[k] <= cap )
                        add( t.source, m + partner[k], { Why::branch, i, m } );
            }
            for ( auto i : right_into[p.index] )
            {
                const auto& t = system.branching()[i];
                const auto& partner = _values[t.left.index];
                for ( std::size_t k = 0; k < partner.size(); ++k )
                    if ( partner[k] + m <= cap )
                        add( t.source, partner[k] + m, { Why::branch, i, partner[k] } );
            }
        }
    }

    [[nodiscard]] Counter cap() const { return _cap; }

    [[nodiscard]] bool contains( StateId q, Counter n ) const
    {
        return n <= _cap && _why[cell( q, n )].kind != Why::none;
    }

    /// Smallest l >= n with l ≡ n (mod d) present under the cap.
    [[nodiscard]] std::optional<Counter> smallest( StateId q, Counter n, Counter d ) const
    {
        for ( Counter l = n; l <= _cap; l += d )
            if ( contains( q, l ) )
                return l;
        return std::nullopt;
    }

    [[nodiscard]] PartialTree tree( const Config& target ) const
    {
        PartialTree::Labels labels;
        std::vector<std::pair<NodeAddress, Config>> stack{ { NodeAddress::root(), target } };
        while ( !stack.empty() )
        {
            auto [u, c] = std::move( stack.back() );
            stack.pop_back();
            labels.emplace( u, c );
            const auto& why = _why[cell( c.state, c.counter )];
            if ( why.kind == Why::unary )
            {
                const auto& t = _system->unary()[why.transition];
                stack.emplace_back( u.child( 0 ),
                                    Config{ t.target, static_cast<Counter>( static_cast<long long>( c.counter ) + t.delta ) } );
            }
            else if ( why.kind == Why::branch )
            {
                const auto& t = _system->branching()[why.transition];
                stack.emplace_back( u.child( 0 ), Config{ t.left, why.split } );
                stack.emplace_back( u.child( 1 ), Config{ t.right, c.counter - why.split } );
            }
        }
        return PartialTree{ std::move( labels ) };
    }

private:
    struct Why
    {
        enum Kind : std::uint8_t
        {
            none,
            leaf,
            unary,
            branch,
        };
        Kind kind = none;
        std::size_t transition = 0;
        Counter split = 0;
    };

    [[nodiscard]] std::size_t cell( StateId q, Counter n ) const { return q.index * ( _cap + 1 ) + n; }

    const Bvass* _system;
    Counter _cap;
    std::vector<Why> _why;
    std::vector<std::vector<Counter>> _values;
};

class Expander
{
public:
    Expander( const Bvass& system, const Certificate& c, const ExpansionLimits& limits )
            : _system{ system }, _cert{ c }, _limits{ limits }
    {
        for ( const auto& [leaf, pump] : c.pumps )
            _leaf_of_anchor.emplace( pump.anchor, leaf );
    }

    PartialTree::Labels build( const NodeAddress& x )
    {
        const auto& label = _cert.tree.at( x );
        if ( auto it = _leaf_of_anchor.find( x ); it != _leaf_of_anchor.end() )
            return pump( x, it->second );
        if ( _cert.tree.is_leaf( x ) )
        {
            if ( _cert.pumps.contains( x ) )
                throw std::logic_error( "expand_certificate: pump leaf outside its anchor's subtree" );
            return { { NodeAddress::root(), label } };
        }

        PartialTree::Labels out{ { NodeAddress::root(), label } };
        for ( int bit : { 0, 1 } )
            if ( auto y = x.child( bit ); _cert.tree.contains( y ) )
                graft( out, NodeAddress::root().child( bit ), build( y ) );
        return out;
    }

private:
    void graft( PartialTree::Labels& out, const NodeAddress& at, const PartialTree::Labels& piece )
    {
        if ( out.size() + piece.size() > _limits.max_nodes )
            overflow();
        for ( const auto& [u, c] : piece )
        {
            _address_chars += at.depth() + u.depth();
            if ( _address_chars > max_address_chars )
                overflow();
            out.emplace( at.concat( u ), c );
        }
    }

    [[noreturn]] void overflow() const
    {
        throw ExpansionOverflow( "expanded tree exceeds " + std::to_string( _limits.max_nodes ) + " nodes" );
    }

    /// Smallest concrete target l >= n, l ≡ n (mod d), with its tree.
    std::pair<Counter, PartialTree> target( StateId q, Counter n, Counter d )
    {
        // A tree whose largest counter is c has more than c nodes, so no cap
        // beyond max_nodes can produce a tree that fits.
        const Counter limit = std::min<Counter>( _limits.max_search_cap, _limits.max_nodes );
        Counter cap = std::min( std::max<Counter>( 64, n + d ), limit );
        while ( true )
        {
            if ( !_fixpoint || _fixpoint->cap() < cap )
                _fixpoint.emplace( _system, cap );
            if ( auto l = _fixpoint->smallest( q, n, d ) )
                return { *l, _fixpoint->tree( { q, *l } ) };
            if ( cap >= limit )
                break;
            cap = std::min( 2 * cap, limit );
        }
        const auto what = _system.name( q ) + "(l) with l >= " + std::to_string( n ) + ", l = " + std::to_string( n ) +
                          " mod " + std::to_string( d );
        if ( limit >= _limits.max_nodes )
            throw ExpansionOverflow( "no tree for " + what + " fits in " + std::to_string( _limits.max_nodes ) +
                                     " nodes" );
        throw ExpansionSearchFailure( "no concrete " + what + " found up to cap " + std::to_string( limit ) );
    }

    PartialTree::Labels pump( const NodeAddress& x, const NodeAddress& v )
    {
        const auto& top = _cert.tree.at( x );
        const Counter d = _cert.tree.at( v ).counter - top.counter;
        auto [l, concrete] = target( top.state, top.counter, d );
        if ( l == top.counter )
        {
            if ( concrete.size() > _limits.max_nodes )
                overflow();
            return concrete.labels();
        }
        const Counter reps = ( l - top.counter ) / d;

        // The anchor-to-leaf path w and the subtrees hanging off it.
        const auto w = v.path().substr( x.depth() );
        std::vector<std::pair<NodeAddress, PartialTree::Labels>> hanging;
        std::size_t per_copy = w.size();
        for ( std::size_t j = 0; j < w.size(); ++j )
        {
            const NodeAddress on_path{ w.substr( 0, j ) };
            const auto off = on_path.child( w[j] == '0' ? 1 : 0 );
            if ( _cert.tree.contains( x.concat( off ) ) )
            {
                hanging.emplace_back( off, build( x.concat( off ) ) );
                per_copy += hanging.back().second.size();
            }
        }
        if ( static_cast<long double>( per_copy ) * reps + concrete.size() > _limits.max_nodes )
            overflow();

        PartialTree::Labels out;
        std::string prefix;
        for ( Counter i = 0; i < reps; ++i )
        {
            for ( std::size_t j = 0; j < w.size(); ++j )
            {
                auto c = _cert.tree.at( x.concat( NodeAddress{ w.substr( 0, j ) } ) );
                c.counter += i * d;
                graft( out, NodeAddress{ prefix + w.substr( 0, j ) }, { { NodeAddress::root(), c } } );
            }
            for ( const auto& [off, piece] : hanging )
                graft( out, NodeAddress{ prefix }.concat( off ), piece );
            prefix += w;
        }
        graft( out, NodeAddress{ prefix }, concrete.labels() );
        return out;
    }

    static constexpr std::size_t max_address_chars = std::size_t{ 1 } << 26;

    const Bvass& _system;
    const Certificate& _cert;
    ExpansionLimits _limits;
    std::map<NodeAddress, NodeAddress> _leaf_of_anchor;
    std::optional<WitnessFixpoint> _fixpoint;
    std::size_t _address_chars = 0;
};

} // namespace

std::optional<PartialTree> bounded_witness_tree( const Bvass& system, const Config& target, Counter cap )
{
    WitnessFixpoint fixpoint{ system, cap };
    if ( !fixpoint.contains( target.state, target.counter ) )
        return std::nullopt;
    return fixpoint.tree( target );
}

PartialTree expand_certificate( const Bvass& system, const Certificate& c, const ExpansionLimits& limits )
{
    if ( c.tree.empty() )
        throw std::invalid_argument( "expand_certificate: empty tree" );
    if ( c.pumps.empty() )
    {
        if ( c.tree.size() > limits.max_nodes )
            throw ExpansionOverflow( "expanded tree exceeds " + std::to_string( limits.max_nodes ) + " nodes" );
        return c.tree;
    }
    PartialTree out{ Expander{ system, c, limits }.build( NodeAddress::root() ) };
    if ( auto bad = diagnose_partial_tree( system, out ); bad || !is_reachability_tree( system, out ) )
        throw std::logic_error( "expand_certificate produced an invalid tree: " + bad.value_or( "open leaf" ) );
    return out;
}

std::string print_certificate( const Bvass& system, const Certificate& c )
{
    std::ostringstream out;
    out << print_tree( system, c.tree );
    for ( const auto& [leaf, pump] : c.pumps )
        out << "pump " << leaf.to_string() << ' ' << pump.anchor.to_string() << ' ' << pump.modulus << '\n';
    return out.str();
}

Certificate parse_certificate( const Bvass& system, std::string_view text )
{
    auto doc = parse_tree_document( text, &system );
    Certificate c;
    c.tree = std::move( doc.tree );
    for ( auto& p : doc.pumps )
        if ( !c.pumps.emplace( p.leaf, Certificate::Pump{ p.anchor, p.modulus, std::nullopt } ).second )
            throw ParseError( 0, "duplicate pump line for leaf " + p.leaf.to_string() );
    return c;
}

} // namespace bvass1
