#include "bvass1/gen.hpp"
#include "bvass1/model.hpp"
#include "bvass1/tree.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

using namespace bvass1;
using namespace bvass1::testing;

TEST( Parse, DoublingFileFromTheFormatExample )
{
    const auto b = b2();
    EXPECT_EQ( b.num_states(), 5u );
    EXPECT_EQ( b.num_transitions(), 5u );
    EXPECT_EQ( b.size(), 10u );
    ASSERT_EQ( b.finals().size(), 1u );
    EXPECT_EQ( b.name( b.finals()[0] ), "q_f" );
    EXPECT_EQ( b.state( "q" ).index, 0u );
    EXPECT_EQ( b.state( "q_2" ).index, 4u );
    EXPECT_EQ( b, gen::doubling( 2 ) );
}

TEST( Parse, SingleFinalStateNoTransitions )
{
    const auto b = parse_bvass( "state f\nfinal f\n" );
    EXPECT_EQ( b.num_states(), 1u );
    EXPECT_EQ( b.num_transitions(), 0u );
    EXPECT_TRUE( b.is_accepting( { b.state( "f" ), 0 } ) );
    EXPECT_FALSE( b.is_accepting( { b.state( "f" ), 1 } ) );
}

TEST( Parse, Rejections )
{
    EXPECT_THROW( parse_bvass( "state a\nunary a 0 x\n" ), ParseError );
    EXPECT_THROW( parse_bvass( "state a\nstate a\n" ), ParseError );
    EXPECT_THROW( parse_bvass( "state a\nunary a 2 a\n" ), ParseError );
    EXPECT_THROW( parse_bvass( "state a\nbranch a a\n" ), ParseError );
    EXPECT_THROW( parse_bvass( "state a\nfinal b\n" ), ParseError );
    EXPECT_THROW( parse_bvass( "stat a\n" ), ParseError );
    try
    {
        parse_bvass( "state a\n# comment\nunary a 0 x\n" );
        FAIL();
    }
    catch ( const ParseError& e )
    {
        EXPECT_EQ( e.line(), 3u );
        EXPECT_NE( std::string{ e.what() }.find( "'x'" ), std::string::npos );
    }
}

TEST( Parse, ConstructorValidates )
{
    EXPECT_THROW( ( Bvass{ { "a" }, { { StateId{ 0 }, 0, StateId{ 1 } } }, {}, {} } ), std::invalid_argument );
    EXPECT_THROW( ( Bvass{ { "a" }, { { StateId{ 0 }, -2, StateId{ 0 } } }, {}, {} } ), std::invalid_argument );
    EXPECT_THROW( ( Bvass{ { "a", "a" }, {}, {}, {} } ), std::invalid_argument );
    EXPECT_THROW( ( Bvass{ { "a" }, {}, {}, { StateId{ 3 } } } ), std::invalid_argument );
}

TEST( Parse, RoundTripRandomSystems )
{
    for ( std::uint64_t seed = 1; seed <= 200; ++seed )
    {
        gen::RandomParams p;
        p.states = 1 + seed % 5;
        p.unary = seed % 9;
        p.branching = seed % 4;
        p.finals = 1 + seed % std::min<std::size_t>( p.states, 2 );
        p.seed = seed;
        const auto b = gen::random_system( p );
        const auto text = print_bvass( b );
        EXPECT_EQ( parse_bvass( text ), b ) << text;
        EXPECT_EQ( print_bvass( parse_bvass( text ) ), text );
    }
}

TEST( Address, PrefixOrderAndLca )
{
    const auto u = NodeAddress::parse( "01" );
    const auto v = NodeAddress::parse( "0110" );
    EXPECT_TRUE( u.is_prefix_of( v ) );
    EXPECT_TRUE( u.is_strict_prefix_of( v ) );
    EXPECT_TRUE( u.is_prefix_of( u ) );
    EXPECT_FALSE( u.is_strict_prefix_of( u ) );
    EXPECT_TRUE( NodeAddress::root().is_prefix_of( u ) );
    EXPECT_EQ( lca( v, NodeAddress::parse( "0111" ) ).path(), "011" );
    EXPECT_EQ( lca( v, NodeAddress::parse( "1" ) ), NodeAddress::root() );
    EXPECT_EQ( NodeAddress::root().to_string(), "e" );
    EXPECT_EQ( NodeAddress::parse( "e" ), NodeAddress::root() );
    EXPECT_EQ( v.parent(), NodeAddress::parse( "011" ) );
    EXPECT_EQ( u.concat( NodeAddress::parse( "10" ) ), v );
    EXPECT_THROW( NodeAddress{ "012" }, std::invalid_argument );
}

TEST( Validate, Examples )
{
    const auto b = b2();
    EXPECT_TRUE( validate_partial_tree( b, make_tree( b, { { "e", "q_0", 1 }, { "0", "q_f", 0 } } ) ) );
    EXPECT_TRUE( validate_partial_tree( b, make_tree( b, { { "e", "q", 7 } } ) ) );
    const auto bad = make_tree( b, { { "e", "q_2", 4 }, { "0", "q_1", 2 }, { "1", "q_1", 1 } } );
    EXPECT_FALSE( validate_partial_tree( b, bad ) );
    const auto why = diagnose_partial_tree( b, bad );
    ASSERT_TRUE( why );
    EXPECT_NE( why->find( "e" ), std::string::npos );
}

TEST( Validate, StructuralFailures )
{
    const auto b = b2();
    // not prefix-closed
    EXPECT_FALSE( validate_partial_tree( b, make_tree( b, { { "e", "q", 1 }, { "00", "q", 2 } } ) ) );
    // only a right child
    EXPECT_FALSE( validate_partial_tree( b, make_tree( b, { { "e", "q", 1 }, { "1", "q", 2 } } ) ) );
    // no matching unary transition
    EXPECT_FALSE( validate_partial_tree( b, make_tree( b, { { "e", "q", 1 }, { "0", "q", 0 } } ) ) );
    // matching branching transition with the right sum
    EXPECT_TRUE( validate_partial_tree( b, make_tree( b, { { "e", "q_2", 4 }, { "0", "q_1", 2 }, { "1", "q_1", 2 } } ) ) );
    // children swapped to a non-existent transition
    EXPECT_FALSE( validate_partial_tree( b, make_tree( b, { { "e", "q_2", 4 }, { "0", "q_0", 2 }, { "1", "q_1", 2 } } ) ) );
    EXPECT_FALSE( validate_partial_tree( b, PartialTree{} ) );
}

TEST( Reachability, Examples )
{
    const auto b = b2();
    EXPECT_TRUE( is_reachability_tree( b, make_tree( b, { { "e", "q_0", 1 }, { "0", "q_f", 0 } } ) ) );
    EXPECT_TRUE( is_reachability_tree( b, make_tree( b, { { "e", "q_f", 0 } } ) ) );
    EXPECT_FALSE( is_reachability_tree( b, make_tree( b, { { "e", "q", 3 }, { "0", "q", 4 } } ) ) );
}

TEST( Classify, Examples )
{
    const auto up = make_raw_tree( { { "e", 0, 0 }, { "0", 0, 1 } } );
    const auto c1 = classify_nodes( up );
    EXPECT_EQ( c1.increasing, ( std::set<NodeAddress>{ NodeAddress::parse( "0" ) } ) );
    EXPECT_EQ( c1.anchor_of.at( NodeAddress::parse( "0" ) ), NodeAddress::root() );
    EXPECT_TRUE( c1.decreasing.empty() );

    const auto down = make_raw_tree( { { "e", 0, 2 }, { "0", 0, 1 } } );
    const auto c2 = classify_nodes( down );
    EXPECT_TRUE( c2.increasing.empty() );
    EXPECT_EQ( c2.decreasing, ( std::set<NodeAddress>{ NodeAddress::parse( "0" ) } ) );

    const auto single = classify_nodes( make_raw_tree( { { "e", 0, 5 } } ) );
    EXPECT_TRUE( single.increasing.empty() && single.anchor_of.empty() && single.decreasing.empty() );
}

TEST( Classify, AnchorIsDeepestSameStateAncestor )
{
    // a(0) -> a(1) -> a(2): the anchor of "00" is "0", not the root
    const auto t = make_raw_tree( { { "e", 0, 0 }, { "0", 0, 1 }, { "00", 0, 2 } } );
    const auto c = classify_nodes( t );
    EXPECT_EQ( c.anchor_of.at( NodeAddress::parse( "00" ) ), NodeAddress::parse( "0" ) );
    // a(0) -> a(3) -> a(2): "00" skips the larger parent, anchors at the root and is also decreasing
    const auto t2 = make_raw_tree( { { "e", 0, 0 }, { "0", 0, 3 }, { "00", 0, 2 } } );
    const auto c2 = classify_nodes( t2 );
    EXPECT_EQ( c2.anchor_of.at( NodeAddress::parse( "00" ) ), NodeAddress::root() );
    EXPECT_TRUE( c2.decreasing.contains( NodeAddress::parse( "00" ) ) );
    EXPECT_EQ( c2.anchor_of, naive_anchors( t2 ) );
}

TEST( Exclusive, AnchorsBelowTheLca )
{
    // X(2) splits into A(1), A(1); each grows to A(2) with its own anchor under the root
    const auto t = make_raw_tree( { { "e", 1, 2 }, { "0", 0, 1 }, { "1", 0, 1 }, { "00", 0, 2 }, { "10", 0, 2 } } );
    EXPECT_TRUE( is_exclusive( t ) );
    EXPECT_TRUE( naive_exclusive( t ) );
}

TEST( Exclusive, SharedAnchorAboveTheLca )
{
    const auto t = make_raw_tree( { { "e", 0, 0 }, { "0", 1, 2 }, { "00", 0, 1 }, { "01", 0, 1 } } );
    EXPECT_FALSE( is_exclusive( t ) );
    EXPECT_FALSE( naive_exclusive( t ) );
}

TEST( Exclusive, OneAnchorBelowTheLca )
{
    const auto t =
            make_raw_tree( { { "e", 0, 0 }, { "0", 1, 2 }, { "00", 0, 1 }, { "01", 0, 1 }, { "010", 0, 2 } } );
    // "01" is inner now, so the increasing leaves are "00" (anchor e) and "010" (anchor 01)
    EXPECT_TRUE( is_exclusive( t ) );
    EXPECT_TRUE( naive_exclusive( t ) );
}

TEST( Exclusive, TrivialCases )
{
    EXPECT_TRUE( is_exclusive( make_raw_tree( { { "e", 0, 3 } } ) ) );
    EXPECT_TRUE( is_exclusive( make_raw_tree( { { "e", 0, 0 }, { "0", 0, 1 } } ) ) );
}

TEST( Exclusive, SevenNodeTreeAgainstDefinition )
{
    // root anchor shared by two leaves whose lca is below another increasing node
    const auto t = make_raw_tree( { { "e", 0, 0 },
                                    { "0", 1, 3 },
                                    { "00", 0, 1 },
                                    { "01", 1, 2 },
                                    { "000", 0, 2 },
                                    { "010", 0, 1 },
                                    { "011", 0, 1 } } );
    EXPECT_EQ( is_exclusive( t ), naive_exclusive( t ) );
    EXPECT_FALSE( is_exclusive( t ) );
}

TEST( TreeFormat, RoundTrip )
{
    const auto b = b2();
    const auto t = make_tree( b, { { "e", "q_2", 4 }, { "0", "q_1", 2 }, { "1", "q_1", 2 } } );
    const auto text = print_tree( b, t );
    const auto doc = parse_tree_document( text, &b );
    EXPECT_EQ( doc.tree, t );
    EXPECT_TRUE( doc.pumps.empty() );
    const auto loose = parse_tree_document( text );
    EXPECT_EQ( loose.state_names, ( std::vector<std::string>{ "q_2", "q_1" } ) );
    EXPECT_EQ( print_tree( loose.state_names, loose.tree ), text );
}

TEST( TreeFormat, Rejections )
{
    const auto b = b2();
    EXPECT_THROW( parse_tree_document( "", &b ), ParseError );
    EXPECT_THROW( parse_tree_document( "e q 1\ne q 2\n", &b ), ParseError );
    EXPECT_THROW( parse_tree_document( "e nope 1\n", &b ), ParseError );
    EXPECT_THROW( parse_tree_document( "e q -1\n", &b ), ParseError );
    EXPECT_THROW( parse_tree_document( "x q 1\n", &b ), ParseError );
    EXPECT_THROW( parse_tree_document( "e q\n", &b ), ParseError );
}
