#pragma once

#include <cstdint>
#include <vector>

#include "finfree/scalar.hpp"

namespace finfree {

constexpr int max_partition_order = 14;

using Block = std::vector<int>;
// Blocks of a set partition of {1..j}, each sorted, ordered by smallest element.
using Partition = std::vector<Block>;

// Restartable stream over all set partitions of {1..j} (restricted growth strings).
class PartitionStream {
public:
    explicit PartitionStream(int j);
    // Fills `out` with the next partition; false once exhausted.
    bool next(Partition& out);
    void restart();
    int order() const { return j_; }

private:
    int j_;
    bool started_ = false;
    bool done_ = false;
    std::vector<int> a_;    // block label of each element
    std::vector<int> max_;  // prefix maxima of the labels
};

std::vector<Partition> partitions(int j);
std::uint64_t bell_number(int j);

// Block-size profile of set partitions of {1..j}: sizes sorted descending and the number
// of set partitions having exactly that profile.
struct PartitionType {
    std::vector<int> sizes;
    std::uint64_t count;
};

// All profiles for P(j), computed from integer partitions without enumerating P(j).
const std::vector<PartitionType>& partition_types(int j);

// Moebius-type weight sum over the partitions sigma coarser than a partition with block
// sizes `sizes`:  sum_{sigma >= pi} (-1)^{|sigma|} (|sigma|-1)! / prod_{W in sigma} (d)_{|W|}.
// Memoized per (sizes, d).
const Rational& coarsening_weight(const std::vector<int>& sizes, int d);

} // namespace finfree
