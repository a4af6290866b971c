#include "pkahler/multi_index.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace pkahler {

std::vector<int> indices(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m) + 1);
    m &= m - 1;
  }
  return out;
}

Mask from_indices(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) {
    if (i < 1 || i > kMaxDim) throw std::out_of_range("multi-index entry out of range");
    m |= bit(i);
  }
  return m;
}

namespace {

void gen(int start, int n, int k, Mask cur, std::vector<Mask>& out) {
  if (k == 0) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i <= n - k + 1; ++i) gen(i + 1, n, k - 1, cur | bit(i), out);
}

struct SubsetCache {
  std::mutex mu;
  std::map<std::pair<int, int>, std::vector<Mask>> lists;
};

SubsetCache& cache() {
  static SubsetCache c;
  return c;
}

}  // namespace

const std::vector<Mask>& subsets(int n, int k) {
  if (n < 0 || n > kMaxDim) throw std::out_of_range("frame dimension out of range");
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto key = std::make_pair(n, k);
  auto it = c.lists.find(key);
  if (it != c.lists.end()) return it->second;
  std::vector<Mask> out;
  if (k >= 0 && k <= n) gen(1, n, k, 0, out);
  // std::map nodes are stable, so the reference survives later insertions
  return c.lists.emplace(key, std::move(out)).first->second;
}

int subset_position(int n, Mask m) {
  const auto& list = subsets(n, degree(m));
  auto it = std::lower_bound(list.begin(), list.end(), m, lex_less);
  if (it == list.end() || *it != m) throw std::out_of_range("multi-index not in frame");
  return static_cast<int>(it - list.begin());
}

bool lex_less(Mask a, Mask b) {
  while (a && b) {
    int x = std::countr_zero(a), y = std::countr_zero(b);
    if (x != y) return x < y;
    a &= a - 1;
    b &= b - 1;
  }
  return !a && b;
}

std::string index_string(Mask m) {
  auto idx = indices(m);
  bool wide = !idx.empty() && idx.back() > 9;
  std::string s;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (wide && r) s += ',';
    s += std::to_string(idx[r]);
  }
  return s;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace pkahler
