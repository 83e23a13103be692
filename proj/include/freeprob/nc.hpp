#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace freeprob {

/// A non-crossing partition of an ordered set of distinct integer labels.
/// Blocks are kept canonical: elements ascending within a block, blocks
/// sorted by their minimum. Immutable after construction; the constructor
/// rejects crossings, overlaps and labels outside the ground set.
class NCPartition {
public:
    NCPartition(std::vector<int> ground, std::vector<std::vector<int>> blocks);

    static bool blocks_non_crossing(const std::vector<std::vector<int>>& blocks);

    const std::vector<int>& ground() const { return ground_; }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    size_t block_count() const { return blocks_.size(); }
    size_t size() const { return ground_.size(); }
    bool is_pairing() const;

    /// Canonical text form, e.g. "{1,5}{3}". Empty partition prints "{}".
    std::string str() const;
    /// Parses the canonical text form; the ground set is the label union.
    static NCPartition parse(const std::string& text);

    /// Structure-preserving move onto a new ground set of the same size.
    NCPartition relabeled(const std::vector<int>& new_ground) const;

    friend bool operator==(const NCPartition& l, const NCPartition& r) {
        return l.ground_ == r.ground_ && l.blocks_ == r.blocks_;
    }
    friend bool operator<(const NCPartition& l, const NCPartition& r) {
        return l.blocks_ < r.blocks_;
    }

private:
    std::vector<int> ground_;
    std::vector<std::vector<int>> blocks_;
};

/// All non-crossing partitions of the ground set, sorted by canonical
/// block list; |result| = Catalan(n). Duplicate labels are an error.
std::vector<NCPartition> enumerate_nc(const std::vector<int>& ground);

/// All non-crossing pair partitions; empty for odd ground size
/// (odd moment sums contribute nothing). |result| = Catalan(n/2).
std::vector<NCPartition> enumerate_nc_pairings(const std::vector<int>& ground);

/// Kreweras complement of a partition of {2,4,...,2n}, living on the
/// interleaved odd labels {1,3,...,2n+1}: the unique coarsest partition
/// sigma of the odds such that pi and sigma together are non-crossing
/// on {1,...,2n+1}.
NCPartition kreweras_complement(const NCPartition& pi);

/// True when every block of pi is contained in a block of sigma.
bool refines(const NCPartition& pi, const NCPartition& sigma);

/// True when the blocks of both partitions, merged, are non-crossing on
/// the union of the two (disjoint) ground sets.
bool union_non_crossing(const NCPartition& pi, const NCPartition& sigma);

/// Moebius function of the interval [pi, sigma] in the non-crossing
/// partition lattice. Requires pi <= sigma in refinement order.
long long nc_mobius(const NCPartition& pi, const NCPartition& sigma);

std::uint64_t catalan(unsigned n);

}  // namespace freeprob
