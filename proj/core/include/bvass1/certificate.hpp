#pragma once

#include "bvass1/model.hpp"
#include "bvass1/residue.hpp"
#include "bvass1/tree.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace bvass1
{

/// A B-bounded expandable partial reachability tree. Every leaf is accepting
/// or a pump leaf: an increasing leaf whose anchor state can reach some
/// counter >= counter(anchor) congruent to it modulo d.
struct Certificate
{
    struct Pump
    {
        NodeAddress anchor;
        /// counter(leaf) - counter(anchor)
        Counter modulus = 0;
        /// Residue table of the discharging query; absent for parsed certificates.
        std::optional<ResidueTable> witness;
    };

    PartialTree tree;
    std::map<NodeAddress, Pump> pumps;
};

/// Empty when `c` proves `claimed` reachable, otherwise the first failed clause.
std::optional<std::string> diagnose_certificate( const Bvass& system, const Certificate& c, const Config& claimed );
bool check_certificate( const Bvass& system, const Certificate& c, const Config& claimed );

class ExpansionOverflow : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// No concrete witness counter was found below the search limit. This says
/// the limit is too small, not that the configuration is unreachable.
class ExpansionSearchFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct ExpansionLimits
{
    std::size_t max_nodes = 100000;
    /// Largest cap tried when searching for a concrete pump target.
    Counter max_search_cap = Counter{ 1 } << 17;
};

/// Unrolls every pump into a full reachability tree of the certificate's root.
/// Requires check_certificate. Throws ExpansionOverflow or ExpansionSearchFailure.
PartialTree expand_certificate( const Bvass& system, const Certificate& c, const ExpansionLimits& limits = {} );

/// A cap-bounded reachability tree for `target`, if one exists. Built from the
/// first justification of a bottom-up worklist fixpoint.
std::optional<PartialTree> bounded_witness_tree( const Bvass& system, const Config& target, Counter cap );

/// Tree lines followed by one `pump <leaf> <anchor> <d>` line per pump leaf.
std::string print_certificate( const Bvass& system, const Certificate& c );
/// Throws ParseError. Witness tables are left empty.
Certificate parse_certificate( const Bvass& system, std::string_view text );

} // namespace bvass1
