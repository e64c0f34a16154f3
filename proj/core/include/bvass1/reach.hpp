#pragma once

#include "bvass1/certificate.hpp"
#include "bvass1/model.hpp"
#include "bvass1/residue.hpp"

#include <cstdint>
#include <deque>
#include <memory>
#include <stdexcept>
#include <vector>

namespace bvass1
{

class TableBudgetExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Maximum number of anchor-table entries. Only states on a cycle of the
/// transition graph can be anchors, and only states that can reach the anchor
/// state can carry its obligation, so the table has
/// sum over cyclic q of |{p : p reaches q}| · (B+1)^2 entries (at most |Q|^2 · (B+1)^2).
inline constexpr std::size_t default_table_budget = std::size_t{ 1 } << 30;

struct ReachQuery
{
    StateId state;
    Counter n = 0;

    /// 2·|Q| + n
    [[nodiscard]] Counter bound( const Bvass& system ) const { return 2 * system.num_states() + n; }
};

/// The rule that first set a table entry.
struct Justification
{
    enum class Rule : std::uint8_t
    {
        accepting,
        unary,
        unary_anchor,
        branch,
        branch_anchor_left,
        branch_anchor_right,
        residue_seed,
        anchor_unary,
        anchor_branch_left,
        anchor_branch_right,
    };

    Rule rule = Rule::accepting;
    std::uint32_t transition = 0;
    /// counter of the left child for branching rules
    std::uint32_t split = 0;
};

/// Least fixpoint of the AND-OR system over
///
///     Reach(q, n)             q(n) has an expandable B-bounded tree
///     AnchorReach(a, p, m)    p(m) has a B-bounded tree whose one open leaf
///                             is an increasing leaf with anchor a
///
/// for states q, p and counters in [0, B]. Entries start false and only ever
/// become true, so cycles through zero-effect transitions resolve to false.
///
/// AnchorReach(a, q_a, m) holds only through the residue seed: a path from an
/// anchor never passes through its own state before the pump leaf.
class FixpointTables
{
public:
    /// `residues` must have cap() >= |Q|·bound. Throws TableBudgetExceeded.
    FixpointTables( const Bvass& system, Counter bound, std::shared_ptr<ResidueIndex> residues,
                    std::size_t budget = default_table_budget );

    /// Runs to the least fixpoint.
    void solve();
    /// Runs until Reach(goal) is set or the fixpoint is reached.
    bool solve_for( const Config& goal );

    [[nodiscard]] Counter bound() const { return _bound; }
    /// Whether the last run reached the fixpoint (rather than stopping early).
    [[nodiscard]] bool complete() const { return _complete; }

    [[nodiscard]] bool reach( StateId q, Counter n ) const;
    [[nodiscard]] bool anchor_reach( const Config& anchor, StateId p, Counter m ) const;
    /// Requires the entry to be true.
    [[nodiscard]] const Justification& why_reach( StateId q, Counter n ) const;
    [[nodiscard]] const Justification& why_anchor_reach( const Config& anchor, StateId p, Counter m ) const;

    [[nodiscard]] std::size_t true_entries() const { return _justifications.size(); }
    /// Size of the anchor table checked against the budget.
    [[nodiscard]] long double table_entries() const { return _table_entries; }
    [[nodiscard]] std::size_t anchor_rows() const { return _rows_allocated; }

private:
    struct Event
    {
        bool anchored;
        std::uint32_t anchor;
        std::uint32_t state;
        std::uint32_t counter;
    };

    [[nodiscard]] std::size_t cell( std::uint32_t q, Counter n ) const { return q * ( _bound + 1 ) + n; }
    [[nodiscard]] std::uint32_t lookup_anchor( std::uint32_t a, std::uint32_t p, Counter m ) const;
    [[nodiscard]] std::uint32_t anchor_state( std::uint32_t a ) const { return static_cast<std::uint32_t>( a / ( _bound + 1 ) ); }

    void seed();
    void run( const Config* goal );
    bool set_reach( std::uint32_t q, Counter n, Justification why );
    bool set_anchor( std::uint32_t a, std::uint32_t p, Counter m, Justification why );
    void on_reach( std::uint32_t p, Counter m );
    void on_anchor( std::uint32_t a, std::uint32_t p, Counter m );

    const Bvass* _system;
    Counter _bound;
    std::shared_ptr<ResidueIndex> _residues;
    std::size_t _states;
    bool _seeded = false;
    bool _complete = false;

    std::vector<std::vector<std::uint32_t>> _unary_into;
    std::vector<std::vector<std::uint32_t>> _left_into;
    std::vector<std::vector<std::uint32_t>> _right_into;

    /// q lies on a cycle of the transition graph
    std::vector<bool> _cyclic;
    /// _slot[q][p]: row position of p in anchor rows of state q, -1 if p cannot reach q
    std::vector<std::vector<std::int32_t>> _slot;
    std::vector<std::size_t> _row_states;
    /// number of true AnchorReach entries whose configuration has state p
    std::vector<std::size_t> _anchored_at_state;
    long double _table_entries = 0;

    /// 0 = false, otherwise 1 + index into _justifications
    std::vector<std::uint32_t> _reach;
    std::vector<std::vector<Counter>> _reach_list;
    /// rows indexed by anchor cell, each lazily sized |Q|·(B+1)
    std::vector<std::vector<std::uint32_t>> _anchor;
    std::size_t _rows_allocated = 0;
    /// anchors a with AnchorReach(a, p, m), by cell(p, m)
    std::vector<std::vector<std::uint32_t>> _anchors_at;

    std::vector<Justification> _justifications;
    std::deque<Event> _queue;
};

/// Reachability queries against one system, sharing one residue index.
///
/// A complete table for bound B' also answers every query with
/// 2·|Q| + n <= B': an expandable tree of any bound proves reachability, and a
/// reachable q(n) always has one bounded by 2·|Q| + n.
class ReachSolver
{
public:
    explicit ReachSolver( const Bvass& system, std::size_t budget = default_table_budget );

    bool decide( StateId q, Counter n );
    /// Solves a complete table for every n <= max_n at once.
    void prepare( Counter max_n );
    /// Tables for exactly B = 2·|Q| + n, run until the answer is known.
    std::unique_ptr<FixpointTables> tables_for( StateId q, Counter n );
    /// Throws std::logic_error if q(n) is not reachable.
    Certificate certificate( StateId q, Counter n );

    [[nodiscard]] const Bvass& system() const { return *_system; }

private:
    std::shared_ptr<ResidueIndex> residues_for( Counter bound );

    const Bvass* _system;
    std::size_t _budget;
    std::shared_ptr<ResidueIndex> _residues;
    std::unique_ptr<FixpointTables> _prepared;
};

bool decide_reach( const Bvass& system, const ReachQuery& query, std::size_t budget = default_table_budget );

/// Replays first justifications from Reach(query). Throws std::logic_error if
/// the entry is false or the replay meets an unjustified entry.
Certificate extract_certificate( const Bvass& system, const FixpointTables& tables, const ReachQuery& query );

} // namespace bvass1
