#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "specwalk/numeric.hpp"

namespace specwalk {

// Witness of an M-ND violation: two different index multisets (values into
// the energy list) whose M-fold sums coincide within tolerance.
struct NonDegWitness {
  std::vector<int> lhs;
  std::vector<int> rhs;
};

struct NonDegResult {
  bool holds = false;
  std::optional<NonDegWitness> witness;
};

// Order-M non-degeneracy: every coincidence of M-fold energy sums must come
// from the same index multiset. Enumerates all C(D+M-1, M) multisets,
// sorts by sum, and scans adjacent entries; distinct multisets within tol of
// each other are exactly the violations.
inline NonDegResult check_nondegeneracy_order(std::span<const double> energies, int M,
                                              double tol = 1e-9) {
  const int D = static_cast<int>(energies.size());
  if (D < 1) throw std::invalid_argument("check_nondegeneracy_order: empty energy list");
  if (M < 1) throw std::invalid_argument("check_nondegeneracy_order: M must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("check_nondegeneracy_order: tol must be > 0");
  for (int i = 1; i < D; ++i)
    if (energies[i] == energies[i - 1])
      throw std::invalid_argument("check_nondegeneracy_order: energies must be distinct");

  // Budget: pairwise comparison count C(D+M-1, M)^2 capped at 1e8.
  const double n_multisets = binomial(D + M - 1, M);
  if (n_multisets * n_multisets > 1e8)
    throw std::invalid_argument("check_nondegeneracy_order: enumeration budget exceeded");

  struct Entry {
    double sum;
    std::vector<int> idx; // nondecreasing index multiset
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(n_multisets));

  std::vector<int> idx(M, 0);
  for (;;) {
    KahanSum s;
    for (int i : idx) s.add(energies[static_cast<std::size_t>(i)]);
    entries.push_back({s.value(), idx});
    int pos = M - 1;
    while (pos >= 0 && idx[pos] == D - 1) --pos;
    if (pos < 0) break;
    const int v = idx[pos] + 1;
    for (int i = pos; i < M; ++i) idx[i] = v;
  }

  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.sum < b.sum; });

  // Every multiset appears exactly once, so any two entries within tol are
  // automatically distinct multisets; adjacency suffices after sorting.
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].sum - entries[i - 1].sum <= tol) {
      NonDegResult r;
      r.holds = false;
      r.witness = NonDegWitness{entries[i - 1].idx, entries[i].idx};
      return r;
    }
  }
  return {true, std::nullopt};
}

} // namespace specwalk
