#include "bvass1_cli/cli.hpp"

#include "bvass1/certificate.hpp"
#include "bvass1/cover_bound.hpp"
#include "bvass1/gen.hpp"
#include "bvass1/oracle.hpp"
#include "bvass1/reach.hpp"
#include "bvass1/residue.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace bvass1::cli
{

namespace
{

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class Stopwatch
{
public:
    double lap()
    {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>( now - _last ).count();
        _last = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point _last = std::chrono::steady_clock::now();
};

void write_file( const std::string& path, const std::string& text )
{
    std::ofstream f{ path, std::ios::binary };
    if ( !f )
        throw std::runtime_error( "cannot write " + path );
    f << text;
}

std::size_t budget_from_env()
{
    const char* env = std::getenv( "BVASS1_BUDGET" );
    if ( !env || !*env )
        return default_table_budget;
    char* end = nullptr;
    const auto v = std::strtoull( env, &end, 10 );
    if ( *end != '\0' || v == 0 )
        throw UsageError( std::string{ "BVASS1_BUDGET must be a positive integer, got '" } + env + "'" );
    return v;
}

struct DecideOptions
{
    std::string system;
    std::string state;
    std::optional<Counter> n;
    std::optional<Counter> d;
    std::string certificate;
    std::optional<std::size_t> expand;
    std::string expand_out;
    std::optional<std::size_t> budget;
    bool json = false;
    bool witness = false;
};

struct CheckOptions
{
    std::string system;
    std::string certificate;
    std::string state;
    Counter n = 0;
};

struct DotOptions
{
    std::string tree;
    bool mark_anchors = false;
};

struct OracleOptions
{
    std::string system;
    std::string state;
    Counter n = 0;
    Counter d = 1;
    Counter cap = 0;
};

struct GenOptions
{
    unsigned n = 0;
    Counter m = 0;
    std::string circuit;
    std::vector<Counter> values;
    gen::RandomParams random;
    std::string out;
};

void emit( std::ostream& out, const std::string& text, const std::string& path )
{
    if ( path.empty() )
        out << text;
    else
        write_file( path, text );
}

int decide( const std::string& problem, const DecideOptions& o, std::ostream& out, std::ostream& err )
{
    Stopwatch clock;
    json report;
    report["problem"] = problem;
    json timings;

    const auto system = parse_bvass( read_file( o.system ) );
    const auto q = system.state( o.state );
    timings["parse"] = clock.lap();

    json query{ { "system", o.system }, { "state", o.state } };
    if ( o.n )
        query["n"] = *o.n;
    if ( o.d )
        query["d"] = *o.d;

    const auto need = [&]( const std::optional<Counter>& v, const char* flag ) {
        if ( !v )
            throw UsageError( "decide " + problem + " requires " + flag );
        return *v;
    };
    if ( problem != "reach" && ( !o.certificate.empty() || o.expand ) )
        throw UsageError( "--certificate and --expand are only valid for decide reach" );
    if ( problem != "bounded" && o.witness )
        throw UsageError( "--witness is only valid for decide bounded" );

    bool yes = false;
    std::optional<std::string> certificate_path;
    std::string witness_text;

    if ( problem == "reach" )
    {
        const auto n = need( o.n, "--n" );
        if ( o.expand && o.certificate.empty() && o.expand_out.empty() )
            throw UsageError( "--expand needs --certificate or --expand-out" );
        ReachSolver solver{ system, o.budget ? *o.budget : budget_from_env() };
        auto tables = solver.tables_for( q, n );
        yes = tables->reach( q, n );
        timings["decide"] = clock.lap();
        report["table_entries"] = tables->true_entries();

        if ( yes && ( !o.certificate.empty() || o.expand ) )
        {
            const auto cert = extract_certificate( system, *tables, { q, n } );
            timings["extract"] = clock.lap();
            report["certificate_nodes"] = cert.tree.size();
            report["pump_leaves"] = cert.pumps.size();
            if ( !o.certificate.empty() )
            {
                write_file( o.certificate, print_certificate( system, cert ) );
                certificate_path = o.certificate;
            }
            if ( o.expand )
            {
                const auto path = o.expand_out.empty() ? o.certificate + ".expanded" : o.expand_out;
                try
                {
                    const auto full = expand_certificate( system, cert, { *o.expand, ExpansionLimits{}.max_search_cap } );
                    write_file( path, print_tree( system, full ) );
                    report["expanded"] = { { "path", path }, { "nodes", full.size() } };
                }
                catch ( const ExpansionOverflow& e )
                {
                    err << "expand: overflow: " << e.what() << '\n';
                    report["expanded"] = { { "overflow", e.what() } };
                }
                catch ( const ExpansionSearchFailure& e )
                {
                    err << "expand: search failure: " << e.what() << '\n';
                    report["expanded"] = { { "search_failure", e.what() } };
                }
                timings["expand"] = clock.lap();
            }
        }
        else if ( !yes && !o.certificate.empty() )
            err << "no certificate written: " << format_config( system, { q, n } ) << " is not reachable\n";
    }
    else if ( problem == "cover" )
    {
        yes = coverable( system, q, need( o.n, "--n" ) );
        timings["decide"] = clock.lap();
    }
    else if ( problem == "residue" )
    {
        const auto n = need( o.n, "--n" );
        const auto d = need( o.d, "--d" );
        if ( d == 0 )
            throw UsageError( "--d must be >= 1" );
        const auto answer = residue_reachable( system, { q, n, d } );
        yes = answer.reachable;
        timings["decide"] = clock.lap();
        report["iterations"] = answer.table.iterations;
        report["N"] = answer.table.big_n;
    }
    else
    {
        const auto result = decide_unbounded( system, q );
        timings["decide"] = clock.lap();
        yes = !result.unbounded;
        report["empty_reach"] = result.empty_reach;
        if ( result.empty_reach )
            err << o.state << "(0) is not coverable: reach(" << o.state << ") is empty\n";
        if ( result.witness )
        {
            if ( auto bad = diagnose_unbounded_witness( system, q, *result.witness ) )
                throw std::logic_error( "unboundedness witness failed its own check: " + *bad );
            witness_text = format_witness( system, *result.witness );
            report["witness"] = witness_text;
        }
    }

    if ( o.json )
    {
        json head{ { "problem", problem }, { "verdict", yes ? "YES" : "NO" }, { "query", query } };
        for ( const auto& [key, value] : report.items() )
            if ( key != "problem" )
                head[key] = value;
        head["certificate"] = certificate_path ? json( *certificate_path ) : json( nullptr );
        head["timings_ms"] = timings;
        out << head.dump() << '\n';
    }
    else
    {
        out << ( yes ? "YES" : "NO" ) << '\n';
        if ( o.witness && !witness_text.empty() )
            out << witness_text << '\n';
    }
    return yes ? 0 : 1;
}

int check( const CheckOptions& o, std::ostream& out, std::ostream& err )
{
    const auto system = parse_bvass( read_file( o.system ) );
    const auto cert = parse_certificate( system, read_file( o.certificate ) );
    const Config claimed{ system.state( o.state ), o.n };
    if ( auto bad = diagnose_certificate( system, cert, claimed ) )
    {
        out << "INVALID\n";
        err << *bad << '\n';
        return 1;
    }
    out << "VALID\n";
    return 0;
}

int oracle_command( const std::string& problem, const OracleOptions& o, std::ostream& out )
{
    const auto system = parse_bvass( read_file( o.system ) );
    const auto q = system.state( o.state );
    const auto cap_note = " (up to cap " + std::to_string( o.cap ) + ")";
    if ( problem == "unbounded-hint" )
    {
        const auto hint = oracle::oracle_unbounded_hint( system, q, o.cap );
        out << oracle::to_string( hint ) << cap_note << '\n';
        return hint == oracle::UnboundedHint::unbounded_proven ? 0 : 1;
    }
    const auto set = oracle::bounded_reach_set( system, o.cap );
    bool yes = false;
    if ( problem == "reach" )
        yes = set.contains( q, o.n );
    else if ( problem == "cover" )
        yes = oracle::oracle_residue( set, q, o.n, 1 );
    else
    {
        if ( o.d == 0 )
            throw UsageError( "--d must be >= 1" );
        yes = oracle::oracle_residue( set, q, o.n, o.d );
    }
    out << ( yes ? "YES" : "NO" ) << cap_note << '\n';
    return yes ? 0 : 1;
}

int gen_command( const std::string& family, const GenOptions& o, std::ostream& out )
{
    std::string header;
    Bvass system;
    if ( family == "doubling" )
    {
        system = gen::doubling( o.n );
        header = "# doubling family, n = " + std::to_string( o.n ) + "\n";
    }
    else if ( family == "const" )
    {
        if ( o.m == 0 )
            throw UsageError( "gen const: --m must be >= 1" );
        auto inst = gen::binary_constant( o.m );
        header = "# reach(" + inst.system.name( inst.state ) + ") = {" + std::to_string( o.m ) + "}\n";
        system = std::move( inst.system );
    }
    else if ( family == "mcvp" )
    {
        const auto circuit = gen::parse_circuit( read_file( o.circuit ) );
        auto inst = gen::mcvp( circuit );
        header = "# gate k is true iff q<k>(0) is reachable; output gate " +
                 inst.system.name( inst.gate_states.back() ) + "\n";
        system = std::move( inst.system );
    }
    else if ( family == "subsetsum" )
    {
        if ( o.values.empty() )
            throw UsageError( "gen subsetsum: --values needs at least one value" );
        auto inst = gen::subset_sum( o.values );
        header = "# " + inst.system.name( inst.start ) + "(t) is reachable iff some subset sums to t\n";
        system = std::move( inst.system );
    }
    else
    {
        system = gen::random_system( o.random );
        header = "# random system, seed " + std::to_string( o.random.seed ) + "\n";
    }
    emit( out, header + print_bvass( system ), o.out );
    return 0;
}

int export_dot( const DotOptions& o, std::ostream& out )
{
    const auto doc = parse_tree_document( read_file( o.tree ) );
    if ( auto bad = std::find_if( doc.tree.labels().begin(), doc.tree.labels().end(),
                                  [&]( const auto& kv ) {
                                      return !kv.first.is_root() && !doc.tree.contains( kv.first.parent() );
                                  } );
         bad != doc.tree.labels().end() )
        throw UsageError( "tree is not prefix-closed at " + bad->first.to_string() );
    out << tree_to_dot( doc, o.mark_anchors );
    return 0;
}

} // namespace

std::string tree_to_dot( const TreeDocument& doc, bool mark_anchors )
{
    const auto id = []( const NodeAddress& u ) { return "n_" + ( u.is_root() ? std::string{ "e" } : u.path() ); };
    std::ostringstream dot;
    dot << "digraph tree {\n  node [shape=box];\n";
    for ( const auto& [u, c] : doc.tree.labels() )
        dot << "  " << id( u ) << " [label=\"" << doc.state_names.at( c.state.index ) << '(' << c.counter << ")\"];\n";
    for ( const auto& [u, c] : doc.tree.labels() )
        if ( !u.is_root() )
            dot << "  " << id( u.parent() ) << " -> " << id( u ) << ";\n";

    if ( mark_anchors )
    {
        std::vector<std::pair<NodeAddress, NodeAddress>> links;
        if ( !doc.pumps.empty() )
        {
            for ( const auto& p : doc.pumps )
                links.emplace_back( p.anchor, p.leaf );
        }
        else
        {
            const auto classes = classify_nodes( doc.tree );
            for ( const auto& [v, u] : classes.anchor_of )
                if ( doc.tree.is_leaf( v ) )
                    links.emplace_back( u, v );
        }
        for ( const auto& [u, v] : links )
            dot << "  " << id( u ) << " -> " << id( v ) << " [style=dashed, constraint=false];\n";
    }
    dot << "}\n";
    return dot.str();
}

int run( int argc, const char* const* argv, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "Decision procedures for one-dimensional branching VASS", "bvass1" };
    app.require_subcommand( 1 );

    DecideOptions decide_opts;
    auto* decide_cmd = app.add_subcommand( "decide", "Decide reach, cover, bounded or residue" );
    decide_cmd->require_subcommand( 1 );
    std::map<std::string, CLI::App*> problems;
    for ( const char* name : { "reach", "cover", "bounded", "residue" } )
    {
        auto* sub = decide_cmd->add_subcommand( name );
        sub->add_option( "--system", decide_opts.system, "System file" )->required();
        sub->add_option( "--state", decide_opts.state, "Control state name" )->required();
        sub->add_option( "--n", decide_opts.n, "Counter value" );
        sub->add_option( "--d", decide_opts.d, "Modulus (residue)" );
        sub->add_option( "--certificate", decide_opts.certificate, "Write the certificate here (reach)" );
        sub->add_option( "--expand", decide_opts.expand, "Also write an expanded tree of at most this many nodes" );
        sub->add_option( "--expand-out", decide_opts.expand_out, "Expanded tree path (default <certificate>.expanded)" );
        sub->add_option( "--budget", decide_opts.budget, "Anchor-table entry budget (env BVASS1_BUDGET)" );
        sub->add_flag( "--json", decide_opts.json, "One-line JSON report instead of YES/NO" );
        sub->add_flag( "--witness", decide_opts.witness, "Print the unboundedness sequence (bounded)" );
        problems[name] = sub;
    }

    CheckOptions check_opts;
    auto* check_cmd = app.add_subcommand( "check", "Check a reachability certificate" );
    check_cmd->add_option( "--system", check_opts.system )->required();
    check_cmd->add_option( "--certificate", check_opts.certificate )->required();
    check_cmd->add_option( "--state", check_opts.state )->required();
    check_cmd->add_option( "--n", check_opts.n )->required();

    DotOptions dot_opts;
    auto* dot_cmd = app.add_subcommand( "export-dot", "Render a tree or certificate as Graphviz DOT" );
    dot_cmd->add_option( "--tree", dot_opts.tree )->required();
    dot_cmd->add_flag( "--mark-anchors", dot_opts.mark_anchors, "Dashed anchor-to-leaf edges" );

    OracleOptions oracle_opts;
    auto* oracle_cmd = app.add_subcommand( "oracle", "Brute-force reference answers under a cap" );
    oracle_cmd->require_subcommand( 1 );
    std::map<std::string, CLI::App*> oracles;
    for ( const char* name : { "reach", "residue", "cover", "unbounded-hint" } )
    {
        auto* sub = oracle_cmd->add_subcommand( name );
        sub->add_option( "--system", oracle_opts.system )->required();
        sub->add_option( "--state", oracle_opts.state )->required();
        sub->add_option( "--cap", oracle_opts.cap )->required();
        if ( std::string{ name } != "unbounded-hint" )
            sub->add_option( "--n", oracle_opts.n )->required();
        if ( std::string{ name } == "residue" )
            sub->add_option( "--d", oracle_opts.d )->required();
        oracles[name] = sub;
    }

    GenOptions gen_opts;
    auto* gen_cmd = app.add_subcommand( "gen", "Generate instance families" );
    gen_cmd->require_subcommand( 1 );
    std::map<std::string, CLI::App*> families;
    families["doubling"] = gen_cmd->add_subcommand( "doubling" );
    families["doubling"]->add_option( "--n", gen_opts.n )->required();
    families["const"] = gen_cmd->add_subcommand( "const" );
    families["const"]->add_option( "--m", gen_opts.m )->required();
    families["mcvp"] = gen_cmd->add_subcommand( "mcvp" );
    families["mcvp"]->add_option( "--circuit", gen_opts.circuit )->required();
    families["subsetsum"] = gen_cmd->add_subcommand( "subsetsum" );
    families["subsetsum"]->add_option( "--values", gen_opts.values )->required()->delimiter( ',' );
    families["random"] = gen_cmd->add_subcommand( "random" );
    families["random"]->add_option( "--states", gen_opts.random.states );
    families["random"]->add_option( "--unary", gen_opts.random.unary );
    families["random"]->add_option( "--branching", gen_opts.random.branching );
    families["random"]->add_option( "--finals", gen_opts.random.finals );
    families["random"]->add_option( "--seed", gen_opts.random.seed );
    for ( auto& [name, sub] : families )
        sub->add_option( "--out", gen_opts.out, "Output file (default stdout)" );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::Success& e )
    {
        return app.exit( e, out, err );
    }
    catch ( const CLI::ParseError& e )
    {
        app.exit( e, out, err );
        return 2;
    }

    try
    {
        for ( auto& [name, sub] : problems )
            if ( sub->parsed() )
                return decide( name, decide_opts, out, err );
        if ( check_cmd->parsed() )
            return check( check_opts, out, err );
        if ( dot_cmd->parsed() )
            return export_dot( dot_opts, out );
        for ( auto& [name, sub] : oracles )
            if ( sub->parsed() )
                return oracle_command( name, oracle_opts, out );
        for ( auto& [name, sub] : families )
            if ( sub->parsed() )
                return gen_command( name, gen_opts, out );
    }
    catch ( const std::exception& e )
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "error: no command\n";
    return 2;
}

} // namespace bvass1::cli
