#include "homalg/forms.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace homalg {

namespace {

void choose(int n, int p, int start, Tuple& cur, std::vector<Tuple>& out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    choose(n, p, i + 1, cur, out);
    cur.pop_back();
  }
}

std::mutex& cache_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

const std::vector<Tuple>& tuples(int n, int p) {
  static std::map<std::pair<int, int>, std::vector<Tuple>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto key = std::make_pair(n, p);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Tuple> out;
  if (p >= 0 && p <= n) {
    Tuple cur;
    choose(n, p, 0, cur, out);
  }
  return cache.emplace(key, std::move(out)).first->second;
}

int tuple_index(int n, const Tuple& sorted) {
  const auto& ts = tuples(n, static_cast<int>(sorted.size()));
  auto it = std::lower_bound(ts.begin(), ts.end(), sorted);
  if (it == ts.end() || *it != sorted) throw ShapeError("not a sorted basis tuple");
  return static_cast<int>(it - ts.begin());
}

int sort_sign(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j - 1] > idx[j]; --j) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

const std::vector<std::pair<std::vector<int>, int>>& permutations(int k) {
  static std::map<int, std::vector<std::pair<std::vector<int>, int>>> cache;
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  do {
    std::vector<int> tmp = perm;
    out.emplace_back(perm, sort_sign(tmp));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cache.emplace(k, std::move(out)).first->second;
}

long factorial(int k) {
  long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace homalg
