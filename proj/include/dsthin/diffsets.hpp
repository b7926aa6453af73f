#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dsthin/sequences.hpp"

namespace dsthin {

/// A (P x Q, H, gamma) difference set: H index pairs whose binary indicator
/// grid has the two-level circular autocorrelation H at lag (0,0) and gamma
/// elsewhere.
struct DifferenceSet {
    int P, Q, H;
    long long gamma;
    std::vector<std::pair<int, int>> indices;
};

/// A cyclic (N, H, gamma) difference set on Z_N.
struct CyclicDifferenceSet {
    int N, H;
    long long gamma;
    std::vector<int> indices;
};

struct ValidateResult {
    int H;
    long long gamma;
};

/// Checks the two-level autocorrelation exactly (integer arithmetic).
/// Throws NotADifferenceSet naming the first offending lag.
ValidateResult validate(int P, int Q, const std::vector<std::pair<int, int>>& indices);

/// Validates and packages a set.
DifferenceSet make_difference_set(int P, int Q, std::vector<std::pair<int, int>> indices);

/// Quadratic-residue twin-prime construction on the p x q grid; descriptors
/// (pq, (pq-1)/2, (pq-3)/4).
DifferenceSet twin_prime(int p, int q);

/// Zero positions of the length-(2^m - 1) m-sequence generated by a primitive
/// polynomial (bitmask, x^m term included; 0 picks the built-in default).
/// Descriptors (2^m - 1, 2^(m-1) - 1, 2^(m-2) - 1).
CyclicDifferenceSet singer_lfsr(int m, std::uint32_t primitivePoly = 0);

std::uint32_t default_primitive_poly(int m);

/// CRT fold n -> (n mod P, n mod Q); requires P*Q = N and gcd(P, Q) = 1.
DifferenceSet crt_fold(const CyclicDifferenceSet& cyclic, int P, int Q);

/// View a cyclic set as an N x 1 grid set.
DifferenceSet as_grid(const CyclicDifferenceSet& cyclic);

/// All index sets of size H on the P x Q grid that validate, in lexicographic
/// order, up to `limit` results. Guarded to PQ <= 25 unless overridden.
std::vector<DifferenceSet> brute_force_search(int P, int Q, int H, int limit,
                                              bool overrideGuard = false);

/// Binary grid with 1 at (p, q) iff ([p+sx]_P, [q+sy]_Q) is in the set.
ExcitationGrid to_excitations(const DifferenceSet& ds, int sx, int sy);

DifferenceSet complement(const DifferenceSet& ds);

double thinning_factor(const DifferenceSet& ds);

/// Text format: line 1 "P Q H gamma", then H lines "p q"; '#' starts a
/// comment line. load_ds validates; save_ds is its exact inverse.
DifferenceSet load_ds(const std::string& path);
void save_ds(const DifferenceSet& ds, const std::string& path);

} // namespace dsthin
