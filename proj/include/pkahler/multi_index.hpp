#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace pkahler {

// Multi-index as a bitmask: bit i-1 set means index i is present.
using Mask = std::uint32_t;

constexpr int kMaxDim = 24;

inline int degree(Mask m) { return std::popcount(m); }
inline Mask full_mask(int n) { return n == 0 ? 0u : (n >= 32 ? ~0u : ((1u << n) - 1u)); }
inline Mask bit(int i) { return 1u << (i - 1); }
inline bool contains(Mask m, int i) { return (m >> (i - 1)) & 1u; }
inline Mask complement(Mask m, int n) { return full_mask(n) & ~m; }

// Sign of e_A ^ e_B relative to e_{A|B}; 0 when A and B overlap.
inline int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  while (b) {
    int lo = std::countr_zero(b);
    b &= b - 1;
    // elements of a greater than lo
    Mask above = (lo >= 31) ? 0u : (a & ~((2u << lo) - 1u));
    inversions += std::popcount(above);
  }
  return (inversions & 1) ? -1 : 1;
}

// Number of elements of m strictly smaller than i.
inline int rank_below(Mask m, int i) { return std::popcount(m & (bit(i) - 1u)); }

std::vector<int> indices(Mask m);
Mask from_indices(const std::vector<int>& idx);

// All k-subsets of {1..n}, ordered lexicographically as increasing index lists.
const std::vector<Mask>& subsets(int n, int k);

// Position of m within subsets(n, degree(m)).
int subset_position(int n, Mask m);

// Lexicographic comparison of two masks as increasing index lists.
bool lex_less(Mask a, Mask b);

// "123" for n <= 9, otherwise "1,2,10".
std::string index_string(Mask m);

long binomial(int n, int k);

}  // namespace pkahler
