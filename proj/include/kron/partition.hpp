#pragma once

#include <vector>

namespace kron {

// A partition is a weakly decreasing list of positive parts; the empty
// partition is allowed.
using Partition = std::vector<int>;

// All partitions of n, in descending lexicographic order ([n] first,
// [1,...,1] last).  This order refines dominance downward.
std::vector<Partition> partitions_of(int n);

int partition_weight(const Partition& p);

Partition conjugate_partition(const Partition& p);

// a <= b in the dominance order (prefix sums of a never exceed those of b).
// Only meaningful when both have the same weight.
bool dominance_leq(const Partition& a, const Partition& b);

// Number of semistandard Young tableaux of the given shape and content.
long long kostka_number(const Partition& shape, const Partition& content);

// The Kostka matrix on partitions of n, K[i][j] = kostka(lambda_i, lambda_j)
// with both indices running over partitions_of(n); upper unitriangular in
// that order.  And its exact integer inverse.
std::vector<std::vector<long long>> kostka_matrix(int n);
std::vector<std::vector<long long>> kostka_inverse(int n);

}  // namespace kron
