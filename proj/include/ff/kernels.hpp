#pragma once

// Sparse Cauchy-product kernels. multiply_serial is the reference;
// multiply_parallel gathers each output coefficient independently under
// OpenMP. Both return terms sorted by Exp2Order with zeros removed.

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ff/series.hpp"

namespace ff::kernels {

template <CoefficientRing R>
struct Term2 {
  int i;
  int j;
  R c;
};

// Work estimate (|a| * |b|) above which multiply() switches to OpenMP.
inline constexpr std::size_t kParallelThreshold = 4096;

inline std::uint64_t exp_key(int i, int j) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

template <CoefficientRing R, class Keep>
std::vector<Term2<R>> multiply_serial(const std::vector<Term2<R>>& a,
                                      const std::vector<Term2<R>>& b, Keep keep) {
  std::map<Exp2, R, Exp2Order> acc;
  for (const auto& ta : a) {
    for (const auto& tb : b) {
      int i = ta.i + tb.i, j = ta.j + tb.j;
      if (!keep(i, j)) continue;
      auto [it, inserted] = acc.try_emplace(Exp2{i, j}, ta.c * tb.c);
      if (!inserted) it->second += ta.c * tb.c;
    }
  }
  std::vector<Term2<R>> out;
  out.reserve(acc.size());
  for (auto& [e, c] : acc)
    if (!is_zero(c)) out.push_back({e.i, e.j, std::move(c)});
  return out;
}

template <CoefficientRing R, class Keep>
std::vector<Term2<R>> multiply_parallel(const std::vector<Term2<R>>& a,
                                        const std::vector<Term2<R>>& b, Keep keep) {
  std::unordered_map<std::uint64_t, std::size_t> index_b;
  index_b.reserve(b.size() * 2);
  for (std::size_t k = 0; k < b.size(); ++k) index_b.emplace(exp_key(b[k].i, b[k].j), k);

  // Output support first (cheap integer work), then one coefficient per task.
  std::vector<Exp2> support;
  {
    std::vector<std::uint64_t> keys;
    keys.reserve(a.size() * b.size());
    for (const auto& ta : a)
      for (const auto& tb : b) {
        int i = ta.i + tb.i, j = ta.j + tb.j;
        if (keep(i, j)) keys.push_back(exp_key(i, j));
      }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    support.reserve(keys.size());
    for (auto k : keys)
      support.push_back(Exp2{static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu)});
  }

  std::vector<R> coeffs(support.size(), RingTraits<R>::zero());
  const auto n = static_cast<std::int64_t>(support.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < n; ++k) {
    const Exp2 e = support[static_cast<std::size_t>(k)];
    R sum = RingTraits<R>::zero();
    for (const auto& ta : a) {
      if (ta.i > e.i || ta.j > e.j) continue;
      auto it = index_b.find(exp_key(e.i - ta.i, e.j - ta.j));
      if (it == index_b.end()) continue;
      sum += ta.c * b[it->second].c;
    }
    coeffs[static_cast<std::size_t>(k)] = std::move(sum);
  }

  std::vector<Term2<R>> out;
  out.reserve(support.size());
  for (std::size_t k = 0; k < support.size(); ++k)
    if (!is_zero(coeffs[k])) out.push_back({support[k].i, support[k].j, std::move(coeffs[k])});
  std::sort(out.begin(), out.end(), [](const Term2<R>& x, const Term2<R>& y) {
    return Exp2Order{}(Exp2{x.i, x.j}, Exp2{y.i, y.j});
  });
  return out;
}

template <CoefficientRing R, class Keep>
std::vector<Term2<R>> multiply(const std::vector<Term2<R>>& a, const std::vector<Term2<R>>& b,
                               Keep keep) {
  if (a.size() * b.size() >= kParallelThreshold && omp_get_max_threads() > 1)
    return multiply_parallel(a, b, keep);
  return multiply_serial(a, b, keep);
}

}  // namespace ff::kernels
