#pragma once

#include "bvass1/model.hpp"

#include <deque>
#include <map>
#include <memory>
#include <vector>

namespace bvass1
{

/// Is start(n) reachable for some n >= n0 with n ≡ n0 (mod d)?
struct ResidueQuery
{
    StateId start;
    Counter n0 = 0;
    Counter d = 1;
};

/// Configurations (q, m) with m in [0, cap].
class CounterSet
{
public:
    CounterSet() = default;
    CounterSet( std::size_t states, Counter cap );

    [[nodiscard]] Counter cap() const { return _cap; }
    [[nodiscard]] std::size_t num_states() const { return _member.size(); }
    [[nodiscard]] bool contains( StateId q, Counter m ) const { return m <= _cap && _member[q.index][m]; }
    /// True if (q, m) was not present before.
    bool insert( StateId q, Counter m );
    /// Members for q in insertion order.
    [[nodiscard]] const std::vector<Counter>& values( StateId q ) const { return _values[q.index]; }
    [[nodiscard]] std::size_t size() const;

    bool operator==( const CounterSet& other ) const { return _cap == other._cap && _member == other._member; }

private:
    Counter _cap = 0;
    std::vector<std::vector<bool>> _member;
    std::vector<std::vector<Counter>> _values;
};

/// Residue configurations (q, r) with r in Z_d = [0, d-1].
class ResidueSet
{
public:
    ResidueSet() = default;
    ResidueSet( std::size_t states, Counter d );

    [[nodiscard]] Counter modulus() const { return _d; }
    [[nodiscard]] std::size_t num_states() const { return _member.size(); }
    [[nodiscard]] bool contains( StateId q, Counter r ) const { return _member[q.index][r]; }
    bool insert( StateId q, Counter r );
    [[nodiscard]] std::vector<Counter> residues( StateId q ) const;
    [[nodiscard]] std::vector<std::pair<StateId, Counter>> elements() const;
    [[nodiscard]] std::size_t size() const { return _size; }
    [[nodiscard]] bool empty() const { return _size == 0; }
    [[nodiscard]] bool is_subset_of( const ResidueSet& other ) const;
    void merge( const ResidueSet& other );

    bool operator==( const ResidueSet& other ) const { return _d == other._d && _member == other._member; }

private:
    Counter _d = 1;
    std::vector<std::vector<bool>> _member;
    std::size_t _size = 0;
};

struct ResidueTable
{
    ResidueQuery query;
    /// |Q| · d
    Counter big_n = 0;
    /// configurations with an (n0 + N)-bounded reachability tree
    CounterSet S;
    /// residues of roots >= n0 + N with an almost (n0 + N)-bounded tree
    ResidueSet R0;
    /// least fixpoint of R_{i+1} = R_i ∪ Δ(R_i) ∪ Δ(R_i, S/Z_d) ∪ Δ(S/Z_d, R_i) ∪ Δ(R_i, R_i)
    ResidueSet R;
    /// R ∪ S[n0, n0 + N]/Z_d
    ResidueSet X;
    /// rounds evaluated, including the final one that added nothing
    std::size_t iterations = 0;
    /// R_0, R_1, ..., R_k = R
    std::vector<ResidueSet> history;
};

struct ResidueAnswer
{
    bool reachable = false;
    ResidueTable table;
};

/// n0 + |Q|·d
Counter residue_cap( const Bvass& system, const ResidueQuery& query );

/// Configurations with a cap-bounded reachability tree (worklist least fixpoint).
CounterSet bounded_tree_set( const Bvass& system, Counter cap );
CounterSet compute_S( const Bvass& system, const ResidueQuery& query );

/// Root counters n >= S.cap() whose configuration has a reachability tree in
/// which every non-root node is in S; indexed [q][n - S.cap()], n <= 2·cap + 1.
std::vector<std::vector<bool>> almost_bounded_roots( const Bvass& system, const CounterSet& S );
ResidueSet compute_R0( const Bvass& system, const ResidueQuery& query, const CounterSet& S );

/// {(q, r - z mod d) | (q, z, p) ∈ Δ, (p, r) ∈ V}
ResidueSet delta_unary( const Bvass& system, const ResidueSet& V, Counter d );
/// {(q, r0 + r1 mod d) | (q, p0, p1) ∈ Δ, (p0, r0) ∈ V, (p1, r1) ∈ W}
ResidueSet delta_branch( const Bvass& system, const ResidueSet& V, const ResidueSet& W, Counter d );

/// S[lo, hi]/Z_d
ResidueSet residue_of( const CounterSet& S, Counter lo, Counter hi, Counter d );

/// Fills S, R0, R, iterations and history (X is left empty).
ResidueTable compute_R( const Bvass& system, const ResidueQuery& query );

ResidueAnswer residue_reachable( const Bvass& system, const ResidueQuery& query );

/// Answers residue queries for every (q, n0, d) with n0 + |Q|·d <= cap from
/// one shared bounded set. S and R depend only on (cap, d), so the fixpoint
/// is computed once per modulus; the most recent moduli stay cached.
class ResidueIndex
{
public:
    ResidueIndex( const Bvass& system, Counter cap );

    [[nodiscard]] Counter cap() const { return _S.cap(); }
    /// Throws std::invalid_argument if n0 + |Q|·d > cap().
    bool reachable( StateId q, Counter n0, Counter d );
    /// The residue fixpoint R for modulus d under this index's cap.
    const ResidueSet& fixpoint( Counter d );

private:
    struct PerModulus
    {
        ResidueSet R;
        /// best[q][r] = 1 + largest m in S(q) with m ≡ r (mod d), 0 if none;
        /// filled per state on first use
        std::vector<std::vector<Counter>> best;
    };

    static constexpr std::size_t cached_moduli = 64;

    PerModulus& modulus( Counter d );

    const Bvass* _system;
    CounterSet _S;
    /// almost cap-bounded roots (q, n), n >= cap
    std::vector<std::pair<StateId, Counter>> _roots;
    std::map<Counter, std::unique_ptr<PerModulus>> _by_modulus;
    std::deque<Counter> _lru;
};

} // namespace bvass1
