#pragma once

#include "bvass1/model.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bvass1
{

/// Node of a binary tree, a word over {0, 1}; the root is the empty word.
class NodeAddress
{
public:
    NodeAddress() = default;
    /// Throws std::invalid_argument if `path` has a character other than 0/1.
    explicit NodeAddress( std::string path );

    static NodeAddress root() { return NodeAddress{}; }

    [[nodiscard]] const std::string& path() const { return _path; }
    [[nodiscard]] std::size_t depth() const { return _path.size(); }
    [[nodiscard]] bool is_root() const { return _path.empty(); }

    [[nodiscard]] NodeAddress child( int bit ) const;
    /// Requires !is_root().
    [[nodiscard]] NodeAddress parent() const;
    [[nodiscard]] NodeAddress concat( const NodeAddress& suffix ) const;

    /// u.is_prefix_of(v) is u ⪯ v.
    [[nodiscard]] bool is_prefix_of( const NodeAddress& other ) const;
    [[nodiscard]] bool is_strict_prefix_of( const NodeAddress& other ) const;

    /// `e` for the root, the bit string otherwise.
    [[nodiscard]] std::string to_string() const;
    /// Inverse of to_string.
    static NodeAddress parse( std::string_view text );

    auto operator<=>( const NodeAddress& ) const = default;

private:
    std::string _path;
};

NodeAddress lca( const NodeAddress& a, const NodeAddress& b );

/// A {0,1}-addressed tree of configurations. Structural validity against a
/// system is checked by validate_partial_tree, not assumed.
class PartialTree
{
public:
    using Labels = std::map<NodeAddress, Config>;

    PartialTree() = default;
    explicit PartialTree( Labels labels ) : _labels{ std::move( labels ) } {}

    [[nodiscard]] const Labels& labels() const { return _labels; }
    [[nodiscard]] std::size_t size() const { return _labels.size(); }
    [[nodiscard]] bool empty() const { return _labels.empty(); }
    [[nodiscard]] bool contains( const NodeAddress& u ) const { return _labels.contains( u ); }
    [[nodiscard]] const Config& at( const NodeAddress& u ) const { return _labels.at( u ); }
    [[nodiscard]] const Config& root() const { return _labels.at( NodeAddress::root() ); }
    [[nodiscard]] bool is_leaf( const NodeAddress& u ) const;
    [[nodiscard]] std::vector<NodeAddress> leaves() const;

    void set( const NodeAddress& u, const Config& c ) { _labels[u] = c; }

    /// T↓u, re-rooted at the empty address.
    [[nodiscard]] PartialTree subtree( const NodeAddress& u ) const;

    /// True iff every counter is <= bound.
    [[nodiscard]] bool is_bounded( Counter bound ) const;

    bool operator==( const PartialTree& ) const = default;

private:
    Labels _labels;
};

/// Returns the first violating address with a reason, or nullopt when `tree`
/// is a partial reachability tree of `system`.
std::optional<std::string> diagnose_partial_tree( const Bvass& system, const PartialTree& tree );
bool validate_partial_tree( const Bvass& system, const PartialTree& tree );

/// Every leaf is accepting. Assumes validate_partial_tree.
bool is_reachability_tree( const Bvass& system, const PartialTree& tree );

struct NodeClassification
{
    std::set<NodeAddress> increasing;
    /// increasing node -> its anchor (deepest strict ancestor with the same
    /// state and a strictly smaller counter)
    std::map<NodeAddress, NodeAddress> anchor_of;
    std::set<NodeAddress> decreasing;
};

NodeClassification classify_nodes( const PartialTree& tree );

/// For all distinct increasing leaves v, v' with anchors u, u': not both
/// u ⪯ lca(v, v') and u' ⪯ lca(v, v').
bool is_exclusive( const PartialTree& tree );
bool is_exclusive( const PartialTree& tree, const NodeClassification& classes );

/// One pumping record of a certificate: an increasing leaf and its anchor.
struct PumpLine
{
    NodeAddress leaf;
    NodeAddress anchor;
    Counter modulus = 0;
};

/// Parsed tree interchange file: `<address> <state> <counter>` lines plus
/// optional `pump <leaf> <anchor> <d>` lines.
struct TreeDocument
{
    PartialTree tree;
    /// Display names by state id; equal to the system's names when parsed
    /// against a system, interned in order of first use otherwise.
    std::vector<std::string> state_names;
    std::vector<PumpLine> pumps;
};

/// Throws ParseError. With `system` set, state names resolve against it.
TreeDocument parse_tree_document( std::string_view text, const Bvass* system = nullptr );

std::string print_tree( const Bvass& system, const PartialTree& tree );
std::string print_tree( const std::vector<std::string>& state_names, const PartialTree& tree );

} // namespace bvass1
