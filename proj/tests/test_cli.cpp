#include "bvass1/certificate.hpp"
#include "bvass1/model.hpp"
#include "bvass1_cli/cli.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bvass1;
using namespace bvass1::testing;
namespace fs = std::filesystem;

namespace
{

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run invoke( std::vector<std::string> args )
{
    args.insert( args.begin(), "bvass1" );
    std::vector<const char*> argv;
    for ( const auto& a : args )
        argv.push_back( a.c_str() );
    std::ostringstream out, err;
    const int code = cli::run( static_cast<int>( argv.size() ), argv.data(), out, err );
    return { code, out.str(), err.str() };
}

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ( "bvass1_cli_" + std::to_string( ::testing::UnitTest::GetInstance()->random_seed() ) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name() );
        fs::create_directories( dir );
        b2_path = write( "b2.bvass", b2_text );
        loop_path = write( "loop.bvass", print_bvass( loop_gadget() ) );
    }

    void TearDown() override { fs::remove_all( dir ); }

    std::string write( const std::string& name, const std::string& text )
    {
        const auto p = ( dir / name ).string();
        std::ofstream{ p } << text;
        return p;
    }

    std::string path( const std::string& name ) const { return ( dir / name ).string(); }

    static std::string slurp( const std::string& p ) { return read_file( p ); }

    fs::path dir;
    std::string b2_path;
    std::string loop_path;
};

std::size_t count( const std::string& text, const std::string& needle )
{
    std::size_t n = 0;
    for ( auto pos = text.find( needle ); pos != std::string::npos; pos = text.find( needle, pos + 1 ) )
        ++n;
    return n;
}

} // namespace

TEST_F( Cli, DecideReachVerdicts )
{
    auto r = invoke( { "decide", "reach", "--system", b2_path, "--state", "q_2", "--n", "4" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( r.out, "YES\n" );
    r = invoke( { "decide", "reach", "--system", b2_path, "--state", "q_2", "--n", "3" } );
    EXPECT_EQ( r.code, 1 );
    EXPECT_EQ( r.out, "NO\n" );
}

TEST_F( Cli, UsageErrorsExitTwo )
{
    const auto missing_n = invoke( { "decide", "reach", "--system", b2_path, "--state", "q_2" } );
    EXPECT_EQ( missing_n.code, 2 );
    EXPECT_NE( missing_n.err.find( "--n" ), std::string::npos );
    EXPECT_EQ( invoke( {} ).code, 2 );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", path( "missing" ), "--state", "q", "--n", "0" } ).code, 2 );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", b2_path, "--state", "nope", "--n", "0" } ).code, 2 );
    EXPECT_EQ( invoke( { "decide", "residue", "--system", b2_path, "--state", "q", "--n", "0", "--d", "0" } ).code, 2 );
    EXPECT_EQ( invoke( { "decide", "cover", "--system", b2_path, "--state", "q", "--n", "0", "--certificate", "x" } ).code,
               2 );
    EXPECT_EQ( invoke( { "frobnicate" } ).code, 2 );
    EXPECT_EQ( invoke( { "--help" } ).code, 0 );
    const auto bad_system = write( "bad.bvass", "state a\nunary a 5 a\n" );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", bad_system, "--state", "a", "--n", "0" } ).code, 2 );
}

TEST_F( Cli, BudgetFlag )
{
    const auto r = invoke( { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "0", "--budget", "5" } );
    EXPECT_EQ( r.code, 2 );
    EXPECT_NE( r.err.find( "budget" ), std::string::npos );
}

TEST_F( Cli, JsonReport )
{
    const auto r = invoke( { "decide", "reach", "--system", b2_path, "--state", "q_2", "--n", "4", "--json" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( count( r.out, "\n" ), 1u );
    EXPECT_EQ( r.out.rfind( "{\"problem\":\"reach\",\"verdict\":\"YES\"", 0 ), 0u ) << r.out;
    EXPECT_NE( r.out.find( "\"timings_ms\"" ), std::string::npos );
}

TEST_F( Cli, CertificateRoundTrip )
{
    const auto b4 = write( "b4.bvass", print_bvass( parse_bvass( b2_text ) ) );
    const auto cert = path( "c.txt" );
    auto r = invoke( { "decide", "reach", "--system", b4, "--state", "q", "--n", "0", "--certificate", cert, "--expand",
                    "100000" } );
    ASSERT_EQ( r.code, 0 ) << r.err;
    ASSERT_TRUE( fs::exists( cert ) );
    ASSERT_TRUE( fs::exists( cert + ".expanded" ) );
    const auto expanded = parse_tree_document( slurp( cert + ".expanded" ), nullptr );
    const auto system = parse_bvass( b2_text );
    const auto full = parse_tree_document( slurp( cert + ".expanded" ), &system );
    EXPECT_TRUE( is_reachability_tree( system, full.tree ) && validate_partial_tree( system, full.tree ) );
    EXPECT_GT( expanded.tree.size(), 1u );

    r = invoke( { "check", "--system", b4, "--certificate", cert, "--state", "q", "--n", "0" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( r.out, "VALID\n" );
    r = invoke( { "check", "--system", b4, "--certificate", cert, "--state", "q", "--n", "1" } );
    EXPECT_EQ( r.code, 1 );
    EXPECT_EQ( r.out, "INVALID\n" );
}

TEST_F( Cli, TamperedAndEmptyCertificates )
{
    const auto cert = path( "c.txt" );
    ASSERT_EQ( invoke( { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "0", "--certificate", cert } ).code,
               0 );
    auto text = slurp( cert );
    const auto pos = text.find( "0 q 1" );
    ASSERT_NE( pos, std::string::npos ) << text;
    text.replace( pos, 5, "0 q 2" );
    const auto tampered = write( "tampered.txt", text );
    const auto r = invoke( { "check", "--system", b2_path, "--certificate", tampered, "--state", "q", "--n", "0" } );
    EXPECT_EQ( r.code, 1 );
    EXPECT_FALSE( r.err.empty() );
    const auto empty = write( "empty.txt", "" );
    EXPECT_EQ( invoke( { "check", "--system", b2_path, "--certificate", empty, "--state", "q", "--n", "0" } ).code, 2 );
}

TEST_F( Cli, ExpandOverflowIsReported )
{
    const auto cert = path( "c.txt" );
    const auto r = invoke(
            { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "0", "--certificate", cert, "--expand", "1" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_NE( r.err.find( "overflow" ), std::string::npos );
}

TEST_F( Cli, CoverBoundedResidue )
{
    EXPECT_EQ( invoke( { "decide", "cover", "--system", b2_path, "--state", "q_2", "--n", "4" } ).code, 0 );
    EXPECT_EQ( invoke( { "decide", "cover", "--system", b2_path, "--state", "q_2", "--n", "5" } ).code, 1 );
    EXPECT_EQ( invoke( { "decide", "cover", "--system", loop_path, "--state", "a", "--n", "100" } ).code, 0 );
    EXPECT_EQ( invoke( { "decide", "residue", "--system", b2_path, "--state", "q", "--n", "1", "--d", "2" } ).code, 0 );
    EXPECT_EQ( invoke( { "decide", "residue", "--system", b2_path, "--state", "q_2", "--n", "5", "--d", "1" } ).code, 1 );

    auto r = invoke( { "decide", "bounded", "--system", b2_path, "--state", "q" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( r.out, "YES\n" );
    r = invoke( { "decide", "bounded", "--system", loop_path, "--state", "a", "--witness" } );
    EXPECT_EQ( r.code, 1 );
    EXPECT_EQ( r.out.rfind( "NO\n", 0 ), 0u );
    EXPECT_NE( r.out.find( "j = " ), std::string::npos );
}

TEST_F( Cli, ExportDot )
{
    const auto single = write( "single.tree", "e q 7\n" );
    auto r = invoke( { "export-dot", "--tree", single } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( count( r.out, "[label=" ), 1u );
    EXPECT_EQ( count( r.out, "->" ), 0u );

    const auto chain = write( "chain.tree", "e a 3\n0 a 2\n00 a 1\n000 a 0\n0000 f 0\n" );
    r = invoke( { "export-dot", "--tree", chain } );
    EXPECT_EQ( count( r.out, "[label=" ), 5u );
    EXPECT_EQ( count( r.out, "->" ), 4u );
    EXPECT_EQ( count( r.out, "dashed" ), 0u );

    const auto cert = path( "c.txt" );
    ASSERT_EQ( invoke( { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "0", "--certificate", cert } ).code,
               0 );
    const auto pumps = count( slurp( cert ), "pump " );
    ASSERT_EQ( pumps, 1u );
    r = invoke( { "export-dot", "--tree", cert, "--mark-anchors" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( count( r.out, "dashed" ), 1u );

    EXPECT_EQ( invoke( { "export-dot", "--tree", write( "broken.tree", "e a\n" ) } ).code, 2 );
    EXPECT_EQ( invoke( { "export-dot", "--tree", write( "gap.tree", "e a 1\n00 a 1\n" ) } ).code, 2 );
}

TEST_F( Cli, Oracle )
{
    auto r = invoke( { "oracle", "reach", "--system", b2_path, "--state", "q", "--n", "4", "--cap", "10" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( r.out, "YES (up to cap 10)\n" );
    EXPECT_EQ( invoke( { "oracle", "residue", "--system", b2_path, "--state", "q_2", "--n", "5", "--d", "1", "--cap", "40" } )
                       .code,
               1 );
    EXPECT_EQ( invoke( { "oracle", "cover", "--system", loop_path, "--state", "a", "--n", "20", "--cap", "40" } ).code, 0 );
    r = invoke( { "oracle", "unbounded-hint", "--system", loop_path, "--state", "a", "--cap", "10" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( r.out.rfind( "unbounded-proven", 0 ), 0u );
    r = invoke( { "oracle", "unbounded-hint", "--system", b2_path, "--state", "q", "--cap", "3" } );
    EXPECT_EQ( r.code, 1 );
    EXPECT_EQ( r.out.rfind( "inconclusive", 0 ), 0u );
}

TEST_F( Cli, Gen )
{
    auto r = invoke( { "gen", "doubling", "--n", "2" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_EQ( parse_bvass( r.out ), parse_bvass( b2_text ) );

    const auto out = path( "ss.bvass" );
    EXPECT_EQ( invoke( { "gen", "subsetsum", "--values", "2,5,9", "--out", out } ).code, 0 );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", out, "--state", "q_c1", "--n", "11" } ).code, 0 );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", out, "--state", "q_c1", "--n", "12" } ).code, 1 );

    r = invoke( { "gen", "const", "--m", "6" } );
    const auto c6 = write( "c6.bvass", r.out );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", c6, "--state", "q_m", "--n", "6" } ).code, 0 );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", c6, "--state", "q_m", "--n", "5" } ).code, 1 );
    EXPECT_EQ( invoke( { "gen", "const", "--m", "0" } ).code, 2 );

    const auto circuit = write( "c.circ", "T\nF\nOR 1 2\nAND 3 1\n" );
    r = invoke( { "gen", "mcvp", "--circuit", circuit } );
    const auto mc = write( "mc.bvass", r.out );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", mc, "--state", "q4", "--n", "0" } ).code, 0 );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", mc, "--state", "q2", "--n", "0" } ).code, 1 );

    const auto a = invoke( { "gen", "random", "--states", "4", "--seed", "3" } );
    const auto b = invoke( { "gen", "random", "--states", "4", "--seed", "3" } );
    EXPECT_EQ( a.out, b.out );
    EXPECT_NO_THROW( parse_bvass( a.out ) );
}

TEST_F( Cli, EnvironmentBudget )
{
    ::setenv( "BVASS1_BUDGET", "5", 1 );
    const auto r = invoke( { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "0" } );
    ::unsetenv( "BVASS1_BUDGET" );
    EXPECT_EQ( r.code, 2 );
    EXPECT_EQ( invoke( { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "0" } ).code, 0 );
}

TEST_F( Cli, Deterministic )
{
    const auto c1 = path( "c1.txt" );
    const auto c2 = path( "c2.txt" );
    invoke( { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "3", "--certificate", c1 } );
    invoke( { "decide", "reach", "--system", b2_path, "--state", "q", "--n", "3", "--certificate", c2 } );
    EXPECT_EQ( slurp( c1 ), slurp( c2 ) );
}
