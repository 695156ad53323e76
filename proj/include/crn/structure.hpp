#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "crn/exact_linalg.hpp"
#include "crn/model.hpp"

namespace crn {

// ---------------------------------------------------------------------------
// Complex digraph

struct ComplexGraph {
  std::vector<Complex> nodes;
  // edges[r] = (source node, product node) of reaction r
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::vector<std::size_t>> out;  // node -> outgoing reactions

  explicit ComplexGraph(const ReactionSystem& sys) {
    nodes = sys.complexes();
    out.resize(nodes.size());
    auto id = [&](const Complex& c) {
      return static_cast<std::size_t>(
          std::find(nodes.begin(), nodes.end(), c) - nodes.begin());
    };
    for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
      std::size_t s = id(sys.reactions[r].source);
      std::size_t p = id(sys.reactions[r].product);
      edges.emplace_back(s, p);
      out[s].push_back(r);
    }
  }
};

// Weakly connected components of the complex digraph; each class lists
// node indices into ComplexGraph::nodes.
inline std::vector<std::vector<std::size_t>> linkage_classes_indexed(
    const ComplexGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> comp(n, SIZE_MAX);
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [s, p] : g.edges) {
    adj[s].push_back(p);
    adj[p].push_back(s);
  }
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t v = 0; v < n; ++v) {
    if (comp[v] != SIZE_MAX) continue;
    std::size_t c = classes.size();
    classes.emplace_back();
    std::vector<std::size_t> stack{v};
    comp[v] = c;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      classes[c].push_back(u);
      for (auto w : adj[u])
        if (comp[w] == SIZE_MAX) {
          comp[w] = c;
          stack.push_back(w);
        }
    }
  }
  for (auto& cls : classes) std::sort(cls.begin(), cls.end());
  return classes;
}

inline std::vector<std::vector<Complex>> linkage_classes(
    const ReactionSystem& sys) {
  ComplexGraph g(sys);
  std::vector<std::vector<Complex>> out;
  for (const auto& cls : linkage_classes_indexed(g)) {
    std::vector<Complex> c;
    for (auto v : cls) c.push_back(g.nodes[v]);
    out.push_back(std::move(c));
  }
  return out;
}

// Every linkage class strongly connected <=> every edge lies on a
// directed cycle back to its source.
inline bool is_weakly_reversible(const ReactionSystem& sys) {
  ComplexGraph g(sys);
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::size_t>> succ(n);
  for (auto [s, p] : g.edges) succ[s].push_back(p);
  auto reaches = [&](std::size_t from, std::size_t to) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (auto w : succ[u])
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
    }
    return false;
  };
  for (auto [s, p] : g.edges)
    if (!reaches(p, s)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Deficiency

struct DeficiencyReport {
  std::size_t complex_count = 0;       // n
  std::size_t linkage_class_count = 0; // l
  std::size_t stoich_dimension = 0;    // s, exact rational rank
  std::int64_t deficiency = 0;         // n - l - s
};

inline DeficiencyReport deficiency(const ReactionSystem& sys) {
  DeficiencyReport rep;
  ComplexGraph g(sys);
  rep.complex_count = g.nodes.size();
  rep.linkage_class_count = linkage_classes_indexed(g).size();
  std::vector<std::vector<std::int64_t>> mat;
  for (const auto& r : sys.reactions) mat.push_back(r.net_change());
  rep.stoich_dimension = rational_rank(mat);
  rep.deficiency = static_cast<std::int64_t>(rep.complex_count) -
                   static_cast<std::int64_t>(rep.linkage_class_count) -
                   static_cast<std::int64_t>(rep.stoich_dimension);
  return rep;
}

// ---------------------------------------------------------------------------
// Small dense numerics (witness computations only; never structural)

namespace numeric {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
inline void jacobi_eigen(Mat a, Vec& eigvals, Mat& eigvecs) {
  const std::size_t n = a.size();
  eigvecs.assign(n, Vec(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) eigvecs[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = eigvecs[k][p], vkq = eigvecs[k][q];
          eigvecs[k][p] = c * vkp - s * vkq;
          eigvecs[k][q] = s * vkp + c * vkq;
        }
      }
  }
  eigvals.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigvals[i] = a[i][i];
}

// Minimum-norm least-squares solution of A x = b via the normal equations
// and an eigendecomposition; rank_out reports the numerical rank.
inline Vec min_norm_least_squares(const Mat& a, const Vec& b,
                                  std::size_t* rank_out = nullptr) {
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  Mat ata(n, Vec(n, 0.0));
  Vec atb(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      atb[j] += a[i][j] * b[i];
      for (std::size_t k = 0; k < n; ++k) ata[j][k] += a[i][j] * a[i][k];
    }
  }
  Vec eigvals;
  Mat eigvecs;
  jacobi_eigen(ata, eigvals, eigvecs);
  double lmax = 0.0;
  for (double l : eigvals) lmax = std::max(lmax, std::abs(l));
  double tol = lmax * 1e-12;
  std::size_t rank = 0;
  Vec x(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (eigvals[k] <= tol) continue;
    ++rank;
    double proj = 0.0;
    for (std::size_t j = 0; j < n; ++j) proj += eigvecs[j][k] * atb[j];
    proj /= eigvals[k];
    for (std::size_t j = 0; j < n; ++j) x[j] += proj * eigvecs[j][k];
  }
  if (rank_out) *rank_out = rank;
  return x;
}

}  // namespace numeric

// ---------------------------------------------------------------------------
// Balance witnesses

struct BalanceWitness {
  enum class Kind { detailed, complex };
  Kind kind = Kind::detailed;
  std::vector<double> concentrations;  // c > 0
  double residual = 0.0;
  bool family = false;  // solution set is a positive-dimensional family
};

// Reversible systems only: solve <y'-y, log c> = log(k_fwd/k_bwd) per
// reversible pair by least squares. Witness accepted when the max
// residual is below 1e-10; minimum-norm log solution on families.
inline std::optional<BalanceWitness> solve_detailed_balance(
    const ReactionSystem& sys) {
  const std::size_t d = sys.dim();
  numeric::Mat rows;
  numeric::Vec rhs;
  for (std::size_t i = 0; i < sys.reactions.size(); ++i) {
    const Reaction& r = sys.reactions[i];
    std::optional<std::size_t> rev;
    for (std::size_t j = 0; j < sys.reactions.size(); ++j)
      if (sys.reactions[j].source == r.product &&
          sys.reactions[j].product == r.source)
        rev = j;
    if (!rev) return std::nullopt;  // not reversible
    if (*rev < i) continue;         // one equation per unordered pair
    numeric::Vec row(d);
    auto delta = r.net_change();
    for (std::size_t k = 0; k < d; ++k) row[k] = static_cast<double>(delta[k]);
    rows.push_back(row);
    rhs.push_back(std::log(r.rate / sys.reactions[*rev].rate));
  }
  if (rows.empty()) return std::nullopt;

  std::size_t rank = 0;
  numeric::Vec logc = numeric::min_norm_least_squares(rows, rhs, &rank);
  double resid = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < d; ++k) dot += rows[i][k] * logc[k];
    resid = std::max(resid, std::abs(dot - rhs[i]));
  }
  if (resid >= 1e-10) return std::nullopt;

  BalanceWitness w;
  w.kind = BalanceWitness::Kind::detailed;
  w.concentrations.resize(d);
  for (std::size_t k = 0; k < d; ++k) w.concentrations[k] = std::exp(logc[k]);
  w.residual = resid;
  w.family = rank < d;
  return w;
}

// Weakly reversible systems: damped Gauss-Newton on log c for the
// per-complex flux balance equations. Witness accepted when the max
// residual is below 1e-8. Zero deficiency guarantees existence.
inline std::optional<BalanceWitness> solve_complex_balance(
    const ReactionSystem& sys) {
  if (!is_weakly_reversible(sys)) return std::nullopt;
  const std::size_t d = sys.dim();
  ComplexGraph g(sys);
  const std::size_t n = g.nodes.size();

  numeric::Vec logc(d, 0.0);
  if (auto det = solve_detailed_balance(sys)) {
    for (std::size_t k = 0; k < d; ++k)
      logc[k] = std::log(det->concentrations[k]);
  }

  auto flux = [&](const Complex& y, const numeric::Vec& lc) {
    double e = 0.0;
    for (std::size_t k = 0; k < d; ++k) e += lc[k] * y.coeffs[k];
    return std::exp(e);
  };
  auto residuals = [&](const numeric::Vec& lc) {
    numeric::Vec gvec(n, 0.0);
    for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
      auto [s, p] = g.edges[r];
      double f = sys.reactions[r].rate * flux(g.nodes[s], lc);
      gvec[s] += f;
      gvec[p] -= f;
    }
    return gvec;
  };
  auto max_abs = [](const numeric::Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  numeric::Vec gvec = residuals(logc);
  double damping = 1e-8;
  for (int iter = 0; iter < 200 && max_abs(gvec) > 1e-12; ++iter) {
    numeric::Mat jac(n, numeric::Vec(d, 0.0));
    for (std::size_t r = 0; r < sys.reactions.size(); ++r) {
      auto [s, p] = g.edges[r];
      double f = sys.reactions[r].rate * flux(g.nodes[s], logc);
      for (std::size_t k = 0; k < d; ++k) {
        double dk = f * static_cast<double>(g.nodes[s].coeffs[k]);
        jac[s][k] += dk;
        jac[p][k] -= dk;
      }
    }
    // Levenberg step: (J^T J + damping I) dx = -J^T g via the min-norm
    // solver on the augmented system.
    numeric::Mat aug = jac;
    numeric::Vec rhs(n + d, 0.0);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -gvec[i];
    for (std::size_t k = 0; k < d; ++k) {
      numeric::Vec row(d, 0.0);
      row[k] = std::sqrt(damping);
      aug.push_back(row);
    }
    numeric::Vec dx = numeric::min_norm_least_squares(aug, rhs);
    numeric::Vec trial = logc;
    for (std::size_t k = 0; k < d; ++k) trial[k] += dx[k];
    numeric::Vec gtrial = residuals(trial);
    if (max_abs(gtrial) < max_abs(gvec)) {
      logc = trial;
      gvec = gtrial;
      damping = std::max(damping * 0.3, 1e-12);
    } else {
      damping *= 10.0;
      if (damping > 1e8) break;
    }
  }
  if (max_abs(gvec) >= 1e-8) return std::nullopt;

  BalanceWitness w;
  w.kind = BalanceWitness::Kind::complex;
  w.concentrations.resize(d);
  for (std::size_t k = 0; k < d; ++k) w.concentrations[k] = std::exp(logc[k]);
  w.residual = max_abs(gvec);
  std::vector<std::vector<std::int64_t>> mat;
  for (const auto& r : sys.reactions) mat.push_back(r.net_change());
  w.family = rational_rank(mat) < d;
  return w;
}

}  // namespace crn
