#include "bvass1/cover_bound.hpp"
#include "bvass1/gen.hpp"
#include "bvass1/oracle.hpp"
#include "bvass1/reach.hpp"
#include "bvass1/residue.hpp"

#include <benchmark/benchmark.h>

using namespace bvass1;

namespace
{

void decide_doubling( benchmark::State& state )
{
    const auto b = gen::doubling( static_cast<unsigned>( state.range( 0 ) ) );
    const auto q = b.state( "q" );
    for ( auto _ : state )
        benchmark::DoNotOptimize( decide_reach( b, { q, 0 } ) );
}
BENCHMARK( decide_doubling )->DenseRange( 4, 20, 4 )->Unit( benchmark::kMillisecond );

void prepare_doubling( benchmark::State& state )
{
    const auto b = gen::doubling( static_cast<unsigned>( state.range( 0 ) ) );
    for ( auto _ : state )
    {
        ReachSolver solver{ b };
        solver.prepare( ( Counter{ 1 } << state.range( 0 ) ) + 1 );
        benchmark::DoNotOptimize( solver.decide( b.state( "q" ), 1 ) );
    }
}
BENCHMARK( prepare_doubling )->DenseRange( 2, 8, 2 )->Unit( benchmark::kMillisecond );

void certificate_doubling( benchmark::State& state )
{
    const auto b = gen::doubling( static_cast<unsigned>( state.range( 0 ) ) );
    for ( auto _ : state )
    {
        ReachSolver solver{ b };
        benchmark::DoNotOptimize( solver.certificate( b.state( "q" ), 0 ) );
    }
}
BENCHMARK( certificate_doubling )->DenseRange( 4, 12, 4 )->Unit( benchmark::kMillisecond );

void residue_query( benchmark::State& state )
{
    const auto b = gen::doubling( 6 );
    const auto d = static_cast<Counter>( state.range( 0 ) );
    for ( auto _ : state )
        benchmark::DoNotOptimize( residue_reachable( b, { b.state( "q" ), 3, d } ) );
}
BENCHMARK( residue_query )->RangeMultiplier( 4 )->Range( 1, 64 );

void mcvp_circuit( benchmark::State& state )
{
    const auto c = gen::random_circuit( static_cast<std::size_t>( state.range( 0 ) ), 7 );
    const auto inst = gen::mcvp( c );
    for ( auto _ : state )
        benchmark::DoNotOptimize( decide_reach( inst.system, { inst.gate_states.back(), 0 } ) );
}
BENCHMARK( mcvp_circuit )->RangeMultiplier( 2 )->Range( 8, 128 )->Unit( benchmark::kMillisecond );

void subset_sum( benchmark::State& state )
{
    std::vector<Counter> values;
    for ( std::int64_t i = 0; i < state.range( 0 ); ++i )
        values.push_back( static_cast<Counter>( 37 * i % 251 + 3 ) );
    const auto inst = gen::subset_sum( values );
    for ( auto _ : state )
        benchmark::DoNotOptimize( decide_reach( inst.system, { inst.start, 2 } ) );
}
BENCHMARK( subset_sum )->DenseRange( 2, 8, 2 )->Unit( benchmark::kMillisecond );

void oracle_grid( benchmark::State& state )
{
    const auto b = gen::doubling( 4 );
    for ( auto _ : state )
        benchmark::DoNotOptimize( oracle::bounded_reach_set( b, static_cast<Counter>( state.range( 0 ) ) ) );
}
BENCHMARK( oracle_grid )->RangeMultiplier( 4 )->Range( 16, 1024 );

void boundedness( benchmark::State& state )
{
    gen::RandomParams p;
    p.states = static_cast<std::size_t>( state.range( 0 ) );
    p.unary = 2 * p.states;
    p.branching = p.states / 2;
    p.seed = 11;
    const auto b = gen::random_system( p );
    for ( auto _ : state )
        benchmark::DoNotOptimize( decide_unbounded( b, StateId{ 0 } ) );
}
BENCHMARK( boundedness )->DenseRange( 2, 10, 4 );

} // namespace

BENCHMARK_MAIN();
