#pragma once

#include <cstddef>
#include <vector>

namespace secreg {

template <typename T>
struct LpResult {
  bool feasible = false;
  std::vector<T> x;  // a feasible point when feasible
};

// Phase-1 simplex feasibility for {A x = b, x >= 0}, dense tableau with
// Bland's rule (terminates without cycling). Instantiated with exact
// rationals (eps = 0) for certificates and with double (small eps) as a
// fast prefilter. Conservative callers treat "infeasible" from the double
// instantiation as advisory only.
template <typename T>
LpResult<T> lp_feasible(std::vector<std::vector<T>> A, std::vector<T> b,
                        const T& eps = T(0)) {
  const std::size_t m = A.size();
  const std::size_t n = m == 0 ? 0 : A[0].size();
  LpResult<T> result;
  if (m == 0) {
    result.feasible = true;
    result.x.assign(n, T(0));
    return result;
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (b[i] < T(0)) {
      b[i] = -b[i];
      for (auto& a : A[i]) a = -a;
    }
  }

  // Approximate instantiations (eps > 0) perturb the right-hand side to
  // break the heavy degeneracy these feasibility systems have; Dantzig's
  // rule then converges in few pivots where Bland's stalls. The exact
  // instantiation (eps == 0) keeps Bland's rule and exact data.
  const bool approximate = eps > T(0);
  T perturb_mass(0);
  if (approximate) {
    for (std::size_t i = 0; i < m; ++i) {
      const T bump = T(1e-10) * T(static_cast<double>(i + 1));
      b[i] += bump;
      perturb_mass += bump;
    }
  }

  // Tableau columns: n structural + m artificial + rhs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<T>> tab(m + 1, std::vector<T>(cols, T(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = A[i][j];
    tab[i][n + i] = T(1);
    tab[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  // Objective row: minimize sum of artificials, expressed in reduced form.
  for (std::size_t j = 0; j < cols; ++j) {
    T s(0);
    for (std::size_t i = 0; i < m; ++i) s += tab[i][j];
    tab[m][j] = -s;
  }
  for (std::size_t i = 0; i < m; ++i) tab[m][n + i] = T(0);

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const T piv = tab[pr][pc];
    for (auto& v : tab[pr]) v /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == pr) continue;
      const T f = tab[i][pc];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < cols; ++j) tab[i][j] -= f * tab[pr][j];
    }
    basis[pr] = pc;
  };

  std::size_t iterations = 0;
  const std::size_t iteration_cap = approximate ? 20000 : 0;
  while (true) {
    if (approximate && iterations++ > iteration_cap) return result;
    // The phase-1 objective is monotone; once it reaches zero the system
    // is feasible and remaining reduced-cost work is moot.
    {
      T obj = -tab[m][cols - 1];
      if (obj < T(0)) obj = -obj;
      if (obj <= eps + perturb_mass) break;
    }
    std::size_t pc = cols;
    if (approximate) {
      // Dantzig: entering column = most negative reduced cost.
      T best = -eps;
      for (std::size_t j = 0; j + 1 < cols; ++j) {
        if (tab[m][j] < best) {
          best = tab[m][j];
          pc = j;
        }
      }
    } else {
      // Bland: entering column = lowest index with negative reduced cost.
      for (std::size_t j = 0; j + 1 < cols; ++j) {
        if (tab[m][j] < -eps) {
          pc = j;
          break;
        }
      }
    }
    if (pc == cols) break;
    // Leaving row = min ratio, ties by lowest basis index (Bland).
    std::size_t pr = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][pc] <= eps) continue;
      if (pr == m) {
        pr = i;
        continue;
      }
      const T lhs = tab[i][cols - 1] * tab[pr][pc];
      const T rhs = tab[pr][cols - 1] * tab[i][pc];
      if (lhs < rhs || (lhs == rhs && basis[i] < basis[pr])) pr = i;
    }
    if (pr == m) break;  // unbounded below: cannot happen for phase 1
    pivot(pr, pc);
  }

  // Feasible iff the artificial objective reached zero (up to the
  // deliberate perturbation in the approximate instantiation).
  T obj = -tab[m][cols - 1];
  if (obj < T(0)) obj = -obj;
  if (obj > eps + perturb_mass) return result;

  result.feasible = true;
  result.x.assign(n, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] = tab[i][cols - 1];
  }
  return result;
}

}  // namespace secreg
