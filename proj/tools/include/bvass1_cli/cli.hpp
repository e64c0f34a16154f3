#pragma once

#include "bvass1/tree.hpp"

#include <iosfwd>
#include <string>

namespace bvass1::cli
{

/// Runs one command line. Returns 0 (yes / success), 1 (no / invalid) or
/// 2 (usage, parse or resource error).
int run( int argc, const char* const* argv, std::ostream& out, std::ostream& err );

/// Graphviz rendering; `state(counter)` per node. With `mark_anchors`, one
/// dashed edge per increasing leaf, taken from the pump lines when present.
std::string tree_to_dot( const TreeDocument& doc, bool mark_anchors );

} // namespace bvass1::cli
