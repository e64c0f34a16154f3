#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bvass1
{

/// Dense, 0-based index of a control state inside its owning system.
struct StateId
{
    std::uint32_t index = 0;

    auto operator<=>( const StateId& ) const = default;
};

using Counter = std::uint64_t;

/// (source, delta, target): the child of a `source(n)` node is `target(n + delta)`.
struct UnaryTransition
{
    StateId source;
    int delta = 0;
    StateId target;

    auto operator<=>( const UnaryTransition& ) const = default;
};

/// (source, left, right): `source(n)` splits into `left(m0)` and `right(m1)` with n = m0 + m1.
struct BranchTransition
{
    StateId source;
    StateId left;
    StateId right;

    auto operator<=>( const BranchTransition& ) const = default;
};

struct Config
{
    StateId state;
    Counter counter = 0;

    auto operator<=>( const Config& ) const = default;
};

class ParseError : public std::runtime_error
{
public:
    ParseError( std::size_t line, const std::string& message )
            : std::runtime_error( "line " + std::to_string( line ) + ": " + message ), _line{ line }
    {}

    [[nodiscard]] std::size_t line() const { return _line; }

private:
    std::size_t _line;
};

/// One-dimensional branching vector addition system with states.
///
/// Immutable after construction. Transitions keep declaration order, which
/// every engine uses as its deterministic iteration order.
class Bvass
{
public:
    Bvass() = default;

    /// Throws std::invalid_argument on duplicate names, out-of-range state
    /// ids or deltas outside {-1, 0, +1}.
    Bvass( std::vector<std::string> state_names, std::vector<UnaryTransition> unary,
           std::vector<BranchTransition> branching, std::vector<StateId> finals );

    [[nodiscard]] std::size_t num_states() const { return _names.size(); }
    [[nodiscard]] std::size_t num_transitions() const { return _unary.size() + _branching.size(); }
    /// |Q| + |Delta| (dimension one).
    [[nodiscard]] std::size_t size() const { return num_states() + num_transitions(); }

    [[nodiscard]] const std::vector<std::string>& state_names() const { return _names; }
    [[nodiscard]] const std::string& name( StateId q ) const { return _names.at( q.index ); }
    [[nodiscard]] std::optional<StateId> find_state( std::string_view name ) const;
    /// Like find_state but throws std::invalid_argument naming the state.
    [[nodiscard]] StateId state( std::string_view name ) const;

    [[nodiscard]] const std::vector<UnaryTransition>& unary() const { return _unary; }
    [[nodiscard]] const std::vector<BranchTransition>& branching() const { return _branching; }
    [[nodiscard]] const std::vector<StateId>& finals() const { return _finals; }
    [[nodiscard]] bool is_final( StateId q ) const { return _is_final.at( q.index ); }
    [[nodiscard]] bool is_accepting( const Config& c ) const { return c.counter == 0 && is_final( c.state ); }

    bool operator==( const Bvass& other ) const;

private:
    std::vector<std::string> _names;
    std::vector<UnaryTransition> _unary;
    std::vector<BranchTransition> _branching;
    std::vector<StateId> _finals;
    std::vector<bool> _is_final;
    std::unordered_map<std::string, StateId> _by_name;
};

/// Parses the line-oriented system format:
///
///     state <name>...
///     final <name>...
///     unary <src> <z> <tgt>
///     branch <src> <left> <right>
///
/// `#` starts a comment. Throws ParseError.
Bvass parse_bvass( std::string_view text );

/// Canonical text form; parse_bvass(print_bvass(b)) == b.
std::string print_bvass( const Bvass& system );

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file( const std::string& path );

std::string format_config( const Bvass& system, const Config& c );

} // namespace bvass1
