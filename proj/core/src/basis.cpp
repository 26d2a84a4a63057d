#include "pdolab/basis.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <string>

#include "pdolab/errors.hpp"

namespace pdolab {

FrequencyBasis::FrequencyBasis(int d, int K, std::vector<int> flat_freqs)
    : d_(d), K_(K), freqs_(std::move(flat_freqs)) {
  if (d_ < 1 || freqs_.size() % static_cast<std::size_t>(d_) != 0)
    throw InvalidArgument("FrequencyBasis: frequency list does not match dimension");
}

long FrequencyBasis::norm_squared(std::size_t j) const {
  long s = 0;
  for (int c : freq(j)) s += static_cast<long>(c) * c;
  return s;
}

std::size_t matrix_size_budget() {
  if (const char* env = std::getenv("PDOLAB_MAX_MATRIX_N")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    throw InvalidArgument(std::string("PDOLAB_MAX_MATRIX_N is not a positive integer: ") + env);
  }
  return 6000;
}

FrequencyBasis enumerate_frequencies(int d, int K, std::optional<std::size_t> budget) {
  if (d < 1 || d > 3) throw InvalidArgument("enumerate_frequencies: d must be 1, 2 or 3");
  if (K < 1) throw InvalidArgument("enumerate_frequencies: K must be >= 1");
  const std::size_t side = 2 * static_cast<std::size_t>(K) + 1;
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= side;
  const std::size_t cap = budget.value_or(matrix_size_budget());
  if (n > cap)
    throw BudgetExceeded("frequency basis of size " + std::to_string(n) + " (d=" + std::to_string(d) +
                         ", K=" + std::to_string(K) + ") exceeds the matrix-size budget " + std::to_string(cap) +
                         "; raise PDOLAB_MAX_MATRIX_N to at least " + std::to_string(n));

  std::vector<int> flat(n * static_cast<std::size_t>(d));
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t rest = j;
    for (int i = d - 1; i >= 0; --i) {
      flat[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)] = static_cast<int>(rest % side) - K;
      rest /= side;
    }
  }
  // Sort indices by (|m|^2, m lexicographic); the raw order above is already
  // lexicographic, so a stable sort on |m|^2 suffices.
  std::vector<long> norms(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) {
      const long c = flat[j * static_cast<std::size_t>(d) + static_cast<std::size_t>(i)];
      norms[j] += c * c;
    }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });

  std::vector<int> sorted(flat.size());
  for (std::size_t j = 0; j < n; ++j)
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(order[j] * static_cast<std::size_t>(d)), d,
                sorted.begin() + static_cast<std::ptrdiff_t>(j * static_cast<std::size_t>(d)));
  return FrequencyBasis(d, K, std::move(sorted));
}

}  // namespace pdolab
