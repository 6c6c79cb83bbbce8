#include "rdpc/region.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "rdpc/rng.hpp"

namespace rdpc::region {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct Problem {
  const Distribution& source;
  const DistortionMeasure& d;
  std::size_t aux;
  double delta;
  double common_rate;
};

struct Evaluation {
  double objective = kInf;  ///< max(I(X;U), I(Y;U) - R_c)
  double info_xu = 0.0;
  double info_yu = 0.0;
  double distortion = 0.0;
  double realism_l1 = 0.0;

  double violation(double delta) const {
    return realism_l1 + std::max(0.0, distortion - delta);
  }
};

// Evaluates row-major tables P(u|x) (|X| x m) and P(y|u) (m x |Y|).
Evaluation evaluate_tables(const Problem& prob, std::span<const double> pux,
                           std::span<const double> pyu) {
  const std::size_t nx = prob.source.size();
  const std::size_t ny = prob.d.reconstruction_size();
  const std::size_t m = prob.aux;
  Evaluation ev;

  std::vector<double> pu(m, 0.0), py(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < m; ++u) pu[u] += prob.source[x] * pux[x * m + u];
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t y = 0; y < ny; ++y) py[y] += pu[u] * pyu[u * ny + y];
  }

  double ixu = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const double px = prob.source[x];
    if (px <= 0.0) continue;
    for (std::size_t u = 0; u < m; ++u) {
      const double c = pux[x * m + u];
      if (c <= 0.0) continue;
      ixu += px * c * std::log2(c / pu[u]);
    }
  }
  double iyu = 0.0;
  for (std::size_t u = 0; u < m; ++u) {
    if (pu[u] <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      const double c = pyu[u * ny + y];
      if (c <= 0.0 || py[y] <= 0.0) continue;
      iyu += pu[u] * c * std::log2(c / py[y]);
    }
  }
  ev.info_xu = std::max(0.0, ixu);
  ev.info_yu = std::max(0.0, iyu);

  double ed = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    const double px = prob.source[x];
    if (px <= 0.0) continue;
    for (std::size_t y = 0; y < ny; ++y) {
      double pyx = 0.0;
      for (std::size_t u = 0; u < m; ++u) pyx += pux[x * m + u] * pyu[u * ny + y];
      ed += px * pyx * prob.d.at(x, y);
    }
  }
  ev.distortion = ed;

  double l1 = 0.0;
  for (std::size_t y = 0; y < ny; ++y) l1 += std::abs(py[y] - prob.source[y]);
  ev.realism_l1 = l1;

  ev.objective = std::isinf(prob.common_rate)
                     ? ev.info_xu
                     : std::max(ev.info_xu, ev.info_yu - prob.common_rate);
  return ev;
}

void softmax_rows(std::span<const double> logits, std::size_t rows, std::size_t cols,
                  std::vector<double>& table) {
  table.resize(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double top = -kInf;
    for (std::size_t c = 0; c < cols; ++c) top = std::max(top, logits[r * cols + c]);
    double z = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      table[r * cols + c] = std::exp(logits[r * cols + c] - top);
      z += table[r * cols + c];
    }
    for (std::size_t c = 0; c < cols; ++c) table[r * cols + c] /= z;
  }
}

struct Candidate {
  std::vector<double> pux;
  std::vector<double> pyu;
  Evaluation eval;
};

// Deterministic Nelder-Mead minimization; returns the best vertex.
template <typename F>
std::vector<double> nelder_mead(const F& f, std::vector<double> start, double step,
                                int max_iterations) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> point(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) point[i + 1][i] += step;
  std::vector<double> value(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) value[i] = f(point[i]);
  std::vector<std::size_t> order(dim + 1);

  std::vector<double> centroid(dim), trial(dim);
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });
    const std::size_t best = order.front(), worst = order.back();
    const std::size_t second_worst = order[dim - 1];
    if (value[worst] - value[best] < 1e-13) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < dim; ++k) centroid[k] += point[i][k];
    }
    for (std::size_t k = 0; k < dim; ++k) centroid[k] /= static_cast<double>(dim);

    for (std::size_t k = 0; k < dim; ++k) trial[k] = 2.0 * centroid[k] - point[worst][k];
    const double reflected = f(trial);
    if (reflected < value[best]) {
      std::vector<double> expanded(dim);
      for (std::size_t k = 0; k < dim; ++k) expanded[k] = 3.0 * centroid[k] - 2.0 * point[worst][k];
      const double fe = f(expanded);
      if (fe < reflected) {
        point[worst] = std::move(expanded);
        value[worst] = fe;
      } else {
        point[worst] = trial;
        value[worst] = reflected;
      }
      continue;
    }
    if (reflected < value[second_worst]) {
      point[worst] = trial;
      value[worst] = reflected;
      continue;
    }
    std::vector<double> contracted(dim);
    if (reflected < value[worst]) {
      for (std::size_t k = 0; k < dim; ++k) contracted[k] = 0.5 * (centroid[k] + trial[k]);
      const double fc = f(contracted);
      if (fc <= reflected) {
        point[worst] = std::move(contracted);
        value[worst] = fc;
        continue;
      }
    } else {
      for (std::size_t k = 0; k < dim; ++k) contracted[k] = 0.5 * (centroid[k] + point[worst][k]);
      const double fc = f(contracted);
      if (fc < value[worst]) {
        point[worst] = std::move(contracted);
        value[worst] = fc;
        continue;
      }
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < dim; ++k) {
        point[i][k] = point[best][k] + 0.5 * (point[i][k] - point[best][k]);
      }
      value[i] = f(point[i]);
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i) {
    if (value[i] < value[best]) best = i;
  }
  return point[best];
}

std::vector<double> tables_to_logits(std::span<const double> pux, std::span<const double> pyu) {
  std::vector<double> logits;
  logits.reserve(pux.size() + pyu.size());
  for (double v : pux) logits.push_back(std::log(std::max(v, 1e-9)));
  for (double v : pyu) logits.push_back(std::log(std::max(v, 1e-9)));
  return logits;
}

// Local search from one start, escalating the exact-penalty coefficient
// until the constraints hold.
Candidate refine(const Problem& prob, std::vector<double> logits, const SearchOptions& opts) {
  const std::size_t nx = prob.source.size();
  const std::size_t ny = prob.d.reconstruction_size();
  const std::size_t m = prob.aux;
  std::vector<double> pux, pyu;
  const auto penalized = [&](const std::vector<double>& l, double mu) {
    softmax_rows({l.data(), nx * m}, nx, m, pux);
    softmax_rows({l.data() + nx * m, m * ny}, m, ny, pyu);
    const Evaluation ev = evaluate_tables(prob, pux, pyu);
    return ev.objective + mu * ev.violation(prob.delta);
  };
  double mu = 1e2;
  for (int round = 0; round < 11; ++round) {
    logits = nelder_mead([&](const std::vector<double>& l) { return penalized(l, mu); },
                         std::move(logits), 0.25, opts.max_iterations);
    softmax_rows({logits.data(), nx * m}, nx, m, pux);
    softmax_rows({logits.data() + nx * m, m * ny}, m, ny, pyu);
    if (evaluate_tables(prob, pux, pyu).violation(prob.delta) < opts.constraint_tol) break;
    mu *= 10.0;
  }
  Candidate out;
  softmax_rows({logits.data(), nx * m}, nx, m, out.pux);
  softmax_rows({logits.data() + nx * m, m * ny}, m, ny, out.pyu);
  out.eval = evaluate_tables(prob, out.pux, out.pyu);
  return out;
}

// Adds the same correction to every synthesis row; this keeps row sums
// and restores law(Y) = source exactly. Fails when an entry would go
// negative.
bool additive_repair(const Problem& prob, Candidate& cand) {
  const std::size_t nx = prob.source.size();
  const std::size_t ny = prob.d.reconstruction_size();
  const std::size_t m = prob.aux;
  std::vector<double> pu(m, 0.0), py(ny, 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t u = 0; u < m; ++u) pu[u] += prob.source[x] * cand.pux[x * m + u];
  }
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t y = 0; y < ny; ++y) py[y] += pu[u] * cand.pyu[u * ny + y];
  }
  std::vector<double> repaired = cand.pyu;
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t y = 0; y < ny; ++y) {
      repaired[u * ny + y] += prob.source[y] - py[y];
      if (repaired[u * ny + y] < 0.0) return false;
    }
  }
  cand.pyu = std::move(repaired);
  cand.eval = evaluate_tables(prob, cand.pux, cand.pyu);
  return true;
}

bool is_feasible(const Problem& prob, const Evaluation& ev, double tol) {
  return 0.5 * ev.realism_l1 <= tol && ev.distortion <= prob.delta + tol;
}

bool lexicographically_before(const Candidate& a, const Candidate& b) {
  if (a.pux != b.pux) {
    return std::lexicographical_compare(a.pux.begin(), a.pux.end(), b.pux.begin(), b.pux.end());
  }
  return std::lexicographical_compare(a.pyu.begin(), a.pyu.end(), b.pyu.begin(), b.pyu.end());
}

struct OracleEntry {
  double value = kInf;
  std::vector<double> pux;
  std::vector<double> pyu;
};

// One sweep of the aux_size = 2 grid at resolution 1/n. Entries already in
// `best` act as incumbents, so a coarse pre-pass makes the pruning below
// effective from the first fine-grid row. Grid values i/n coincide
// bitwise across passes whose n divide each other.
void oracle_pass_aux2(const Distribution& source, const DistortionMeasure& d, long n,
                      std::span<const OracleQuery> queries, std::vector<OracleEntry>& best) {
  const double p0 = source[0], p1 = source[1];
  const double d00 = d.at(0, 0), d01 = d.at(0, 1), d10 = d.at(1, 0), d11 = d.at(1, 1);
  const double h2p0 = binary_entropy(p0);
  std::vector<double> grid(static_cast<std::size_t>(n) + 1), h2tab(grid.size());
  for (long i = 0; i <= n; ++i) {
    grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(n);
    h2tab[static_cast<std::size_t>(i)] = binary_entropy(grid[static_cast<std::size_t>(i)]);
  }
  const std::size_t nq = queries.size();
  std::vector<double> best_value(nq);
  for (std::size_t q = 0; q < nq; ++q) best_value[q] = best[q].value;

  for (long ia = 0; ia <= n; ++ia) {
    const double a = grid[static_cast<std::size_t>(ia)];
    const double h2a = h2tab[static_cast<std::size_t>(ia)];
    for (long ib = 0; ib <= n; ++ib) {
      const double b = grid[static_cast<std::size_t>(ib)];
      const double w = p0 * a + p1 * b;
      const double ixu = std::max(0.0, binary_entropy(w) - (p0 * h2a + p1 * h2tab[static_cast<std::size_t>(ib)]));
      double roof = 0.0;
      for (std::size_t q = 0; q < nq; ++q) roof = std::max(roof, best_value[q]);
      if (ixu >= roof) continue;  // objective >= I(X;U) for every query
      const double omw = 1.0 - w;
      for (long ic = 0; ic <= n; ++ic) {
        const double c = grid[static_cast<std::size_t>(ic)];
        double e;
        if (omw <= 1e-12) {
          if (std::abs(p0 - w * c) > 1e-9) continue;
          e = p0;  // u = 1 carries no mass; any row works
        } else {
          e = (p0 - w * c) / omw;
          if (e < -1e-12 || e > 1.0 + 1e-12) continue;
          e = std::clamp(e, 0.0, 1.0);
        }
        const double py0_x0 = a * c + (1.0 - a) * e;
        const double py0_x1 = b * c + (1.0 - b) * e;
        const double ed = p0 * (py0_x0 * d00 + (1.0 - py0_x0) * d01) +
                          p1 * (py0_x1 * d10 + (1.0 - py0_x1) * d11);
        double iyu = -1.0;
        for (std::size_t q = 0; q < nq; ++q) {
          if (ed > queries[q].distortion + 1e-12) continue;
          double objective;
          if (std::isinf(queries[q].common_rate)) {
            objective = ixu;
            if (objective >= best_value[q]) continue;
          } else {
            if (ixu >= best_value[q]) continue;
            if (iyu < 0.0) {
              iyu = std::max(0.0, h2p0 - (w * h2tab[static_cast<std::size_t>(ic)] +
                                          omw * binary_entropy(e)));
            }
            objective = std::max(ixu, iyu - queries[q].common_rate);
            if (objective >= best_value[q]) continue;
          }
          best_value[q] = objective;
          best[q].value = objective;
          best[q].pux = {a, 1.0 - a, b, 1.0 - b};
          best[q].pyu = {c, 1.0 - c, e, 1.0 - e};
        }
      }
    }
  }
}

// Compositions of n into `parts` nonnegative integers, lexicographic.
void enumerate_compositions(long n, std::size_t parts, std::vector<std::vector<double>>& out) {
  std::vector<long> cell(parts, 0);
  const auto emit = [&]() {
    std::vector<double> row(parts);
    for (std::size_t i = 0; i < parts; ++i) {
      row[i] = static_cast<double>(cell[i]) / static_cast<double>(n);
    }
    out.push_back(std::move(row));
  };
  const std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i + 1 == parts) {
      cell[i] = left;
      emit();
      return;
    }
    for (long v = 0; v <= left; ++v) {
      cell[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, n);
}

// Generic binary-alphabet grid sweep for aux_size 1 or 3 (aux_size 2 has
// the pruned fast path above). The last synthesis row is eliminated by
// the realism constraint.
void oracle_pass_generic(const Distribution& source, const DistortionMeasure& d, long n,
                         std::size_t m, std::span<const OracleQuery> queries,
                         std::vector<OracleEntry>& best) {
  const double p0 = source[0], p1 = source[1];
  const double h2p0 = binary_entropy(p0);
  std::vector<std::vector<double>> aux_rows;
  enumerate_compositions(n, m, aux_rows);
  const std::size_t free_rows = m - 1;
  const long grid_points = n + 1;

  std::vector<double> pu(m), c_full(m);
  std::vector<long> free_idx(free_rows, 0);
  for (const auto& row0 : aux_rows) {
    for (const auto& row1 : aux_rows) {
      for (std::size_t u = 0; u < m; ++u) pu[u] = p0 * row0[u] + p1 * row1[u];
      double ixu = 0.0;
      for (std::size_t u = 0; u < m; ++u) {
        if (row0[u] > 0.0) ixu += p0 * row0[u] * std::log2(row0[u] / pu[u]);
        if (row1[u] > 0.0) ixu += p1 * row1[u] * std::log2(row1[u] / pu[u]);
      }
      ixu = std::max(0.0, ixu);

      std::fill(free_idx.begin(), free_idx.end(), 0);
      while (true) {
        double partial = 0.0;
        for (std::size_t u = 0; u < free_rows; ++u) {
          c_full[u] = static_cast<double>(free_idx[u]) / static_cast<double>(n);
          partial += pu[u] * c_full[u];
        }
        bool ok = true;
        if (pu[m - 1] <= 1e-12) {
          if (std::abs(p0 - partial) > 1e-9) ok = false;
          c_full[m - 1] = p0;
        } else {
          const double e = (p0 - partial) / pu[m - 1];
          if (e < -1e-12 || e > 1.0 + 1e-12) ok = false;
          c_full[m - 1] = std::clamp(e, 0.0, 1.0);
        }
        if (ok) {
          double ed = 0.0;
          double py0_x0 = 0.0, py0_x1 = 0.0;
          for (std::size_t u = 0; u < m; ++u) {
            py0_x0 += row0[u] * c_full[u];
            py0_x1 += row1[u] * c_full[u];
          }
          ed = p0 * (py0_x0 * d.at(0, 0) + (1.0 - py0_x0) * d.at(0, 1)) +
               p1 * (py0_x1 * d.at(1, 0) + (1.0 - py0_x1) * d.at(1, 1));
          double iyu = h2p0;
          for (std::size_t u = 0; u < m; ++u) iyu -= pu[u] * binary_entropy(c_full[u]);
          iyu = std::max(0.0, iyu);
          for (std::size_t q = 0; q < queries.size(); ++q) {
            if (ed > queries[q].distortion + 1e-12) continue;
            const double objective = std::isinf(queries[q].common_rate)
                                         ? ixu
                                         : std::max(ixu, iyu - queries[q].common_rate);
            if (objective >= best[q].value) continue;
            best[q].value = objective;
            best[q].pux.resize(2 * m);
            for (std::size_t u = 0; u < m; ++u) {
              best[q].pux[u] = row0[u];
              best[q].pux[m + u] = row1[u];
            }
            best[q].pyu.resize(2 * m);
            for (std::size_t u = 0; u < m; ++u) {
              best[q].pyu[2 * u] = c_full[u];
              best[q].pyu[2 * u + 1] = 1.0 - c_full[u];
            }
          }
        }
        std::size_t pos = 0;
        while (pos < free_rows && free_idx[pos] == grid_points - 1) {
          free_idx[pos] = 0;
          ++pos;
        }
        if (pos == free_rows) break;
        ++free_idx[pos];
      }
    }
  }
}

std::vector<OracleEntry> oracle_search(const Distribution& source, const DistortionMeasure& d,
                                       std::size_t aux_size, double step,
                                       std::span<const OracleQuery> queries) {
  if (source.size() != 2 || d.source_size() != 2 || d.reconstruction_size() != 2) {
    throw std::invalid_argument("brute_force_oracle: binary alphabets only");
  }
  if (aux_size < 1 || aux_size > 3) {
    throw std::invalid_argument("brute_force_oracle: aux_size must be 1, 2 or 3");
  }
  if (!(step > 0.0 && step <= 1.0)) {
    throw std::invalid_argument("brute_force_oracle: step must lie in (0, 1]");
  }
  const long n = std::lround(1.0 / step);
  if (std::abs(n * step - 1.0) > 1e-9) {
    throw std::invalid_argument("brute_force_oracle: step must divide 1");
  }
  for (const OracleQuery& q : queries) {
    if (!(q.distortion >= 0.0) || std::isnan(q.common_rate) || q.common_rate < 0.0) {
      throw std::invalid_argument("brute_force_oracle: invalid query");
    }
  }
  const double points = static_cast<double>(n) + 1.0;
  double combos = 1.0;
  if (aux_size == 2) {
    combos = points * points * points;
  } else {
    double simplex = 1.0;
    for (std::size_t i = 1; i < aux_size; ++i) simplex = simplex * (points + i - 1) / i;
    combos = simplex * simplex * std::pow(points, static_cast<double>(aux_size - 1));
  }
  if (combos > 4e9) throw CapacityError("brute_force_oracle: grid too large");

  std::vector<OracleEntry> best(queries.size());
  if (aux_size == 2) {
    if (n >= 100 && n % 10 == 0) oracle_pass_aux2(source, d, n / 10, queries, best);
    oracle_pass_aux2(source, d, n, queries, best);
  } else {
    oracle_pass_generic(source, d, n, aux_size, queries, best);
  }
  return best;
}

void check_region_shapes(const Distribution& source, const DistortionMeasure& d,
                         std::size_t aux_size) {
  if (d.source_size() != source.size()) {
    throw std::invalid_argument("region: distortion rows must match the source alphabet");
  }
  if (d.reconstruction_size() != source.size()) {
    throw std::invalid_argument("region: realism needs matching source and output alphabets");
  }
  if (aux_size < 1) throw std::invalid_argument("region: aux_size must be positive");
}

}  // namespace

MinRateResult min_rate(double delta, double common_rate, const Distribution& source,
                       const DistortionMeasure& d, std::size_t aux_size,
                       const SearchOptions& options) {
  check_region_shapes(source, d, aux_size);
  if (!(delta >= 0.0)) throw std::invalid_argument("min_rate: delta must be nonnegative");
  if (std::isnan(common_rate) || common_rate < 0.0) {
    throw std::invalid_argument("min_rate: common_rate must be nonnegative or infinite");
  }
  const std::size_t nx = source.size();
  const std::size_t ny = d.reconstruction_size();
  const std::size_t m = aux_size;
  const Problem prob{source, d, m, delta, common_rate};

  std::vector<Candidate> candidates;
  std::vector<std::vector<double>> seeds;

  // Independence: constant-row tables are exact regardless of rounding.
  {
    Candidate c;
    c.pux.assign(nx * m, 1.0 / static_cast<double>(m));
    c.pyu.reserve(m * ny);
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t y = 0; y < ny; ++y) c.pyu.push_back(source[y]);
    }
    c.eval = evaluate_tables(prob, c.pux, c.pyu);
    seeds.push_back(tables_to_logits(c.pux, c.pyu));
    candidates.push_back(std::move(c));
  }
  // Identity: U = X = Y, available once the auxiliary alphabet is large
  // enough; spare auxiliary symbols get zero mass.
  if (m >= nx) {
    Candidate c;
    c.pux.assign(nx * m, 0.0);
    for (std::size_t x = 0; x < nx; ++x) c.pux[x * m + x] = 1.0;
    c.pyu.assign(m * ny, 0.0);
    for (std::size_t u = 0; u < m; ++u) {
      if (u < ny) {
        c.pyu[u * ny + u] = 1.0;
      } else {
        for (std::size_t y = 0; y < ny; ++y) c.pyu[u * ny + y] = source[y];
      }
    }
    c.eval = evaluate_tables(prob, c.pux, c.pyu);
    seeds.push_back(tables_to_logits(c.pux, c.pyu));
    candidates.push_back(std::move(c));
  }
  // Grid-oracle seed where the exhaustive sweep is cheap. The seed is
  // optional, so an over-budget sweep is skipped rather than fatal.
  if (nx == 2 && ny == 2 && m <= 3) {
    try {
      const OracleQuery q{delta, common_rate};
      const auto entries = oracle_search(source, d, m, options.coarse_step, {&q, 1});
      if (std::isfinite(entries[0].value)) {
        Candidate c;
        c.pux = entries[0].pux;
        c.pyu = entries[0].pyu;
        c.eval = evaluate_tables(prob, c.pux, c.pyu);
        seeds.push_back(tables_to_logits(c.pux, c.pyu));
        candidates.push_back(std::move(c));
      }
    } catch (const CapacityError&) {
    }
  }
  // Zero-weight padding embeds the best smaller-cardinality solution, so
  // the reported rate is nonincreasing in aux_size by construction.
  if (m > 1) {
    const auto sub = min_rate(delta, common_rate, source, d, m - 1, options);
    if (sub.feasible && sub.witness.has_value()) {
      const Channel& fwd = sub.witness->triple.forward();
      const Channel& syn = sub.witness->triple.synthesis();
      Candidate c;
      c.pux.assign(nx * m, 0.0);
      for (std::size_t x = 0; x < nx; ++x) {
        for (std::size_t u = 0; u + 1 < m; ++u) c.pux[x * m + u] = fwd.at(x, u);
      }
      c.pyu.assign(m * ny, 0.0);
      for (std::size_t u = 0; u + 1 < m; ++u) {
        for (std::size_t y = 0; y < ny; ++y) c.pyu[u * ny + y] = syn.at(u, y);
      }
      for (std::size_t y = 0; y < ny; ++y) c.pyu[(m - 1) * ny + y] = source[y];
      c.eval = evaluate_tables(prob, c.pux, c.pyu);
      seeds.push_back(tables_to_logits(c.pux, c.pyu));
      candidates.push_back(std::move(c));
    }
  }
  for (int s = 0; s < options.starts; ++s) {
    RngStream stream(options.seed, StreamPurpose::kSearch, static_cast<std::uint64_t>(s));
    std::vector<double> logits(nx * m + m * ny);
    for (double& v : logits) v = stream.next_double() * 4.0 - 2.0;
    seeds.push_back(std::move(logits));
  }

  for (auto& seed : seeds) {
    Candidate refined = refine(prob, std::move(seed), options);
    Candidate repaired = refined;
    if (additive_repair(prob, repaired)) candidates.push_back(std::move(repaired));
    candidates.push_back(std::move(refined));
  }

  const Candidate* winner = nullptr;
  for (const Candidate& c : candidates) {
    if (!is_feasible(prob, c.eval, options.constraint_tol)) continue;
    if (winner == nullptr || c.eval.objective < winner->eval.objective - options.objective_tol) {
      winner = &c;
    } else if (c.eval.objective < winner->eval.objective + options.objective_tol &&
               lexicographically_before(c, *winner)) {
      winner = &c;
    }
  }

  MinRateResult result;
  result.aux_size = m;
  if (winner == nullptr) return result;

  TripleJoint triple(source, Channel(nx, m, winner->pux), Channel(m, ny, winner->pyu));
  AchievedPoint achieved;
  achieved.info_xu = mutual_information(triple.joint_xu());
  achieved.info_yu = mutual_information(triple.joint_uy());
  achieved.distortion = expected_distortion(triple.joint_xy(), d);
  achieved.realism_gap = tv_distance(triple.y_marginal(), source);
  result.feasible = true;
  result.min_rate = std::isinf(common_rate)
                        ? achieved.info_xu
                        : std::max(achieved.info_xu, achieved.info_yu - common_rate);
  result.witness = RegionWitness{std::move(triple), achieved};
  return result;
}

std::optional<RegionWitness> check_membership(const RegionQuery& query,
                                              const SearchOptions& options) {
  if (!(query.rate >= 0.0)) throw std::invalid_argument("check_membership: rate must be >= 0");
  MinRateResult result =
      min_rate(query.distortion, query.common_rate, query.source, query.d, query.aux_size,
               options);
  if (!result.feasible || result.min_rate > query.rate + options.membership_tol) {
    return std::nullopt;
  }
  return std::move(result.witness);
}

std::vector<double> brute_force_oracle(const Distribution& source, const DistortionMeasure& d,
                                       std::size_t aux_size, double step,
                                       std::span<const OracleQuery> queries) {
  const auto entries = oracle_search(source, d, aux_size, step, queries);
  std::vector<double> values;
  values.reserve(entries.size());
  for (const auto& entry : entries) values.push_back(entry.value);
  return values;
}

double brute_force_oracle(double delta, double common_rate, const Distribution& source,
                          const DistortionMeasure& d, std::size_t aux_size, double step) {
  const OracleQuery q{delta, common_rate};
  return brute_force_oracle(source, d, aux_size, step, {&q, 1})[0];
}

double min_rate_direct(double delta, const Distribution& source, const DistortionMeasure& d,
                       const SearchOptions& options) {
  check_region_shapes(source, d, 1);
  if (!(delta >= 0.0)) throw std::invalid_argument("min_rate_direct: delta must be >= 0");
  const std::size_t nx = source.size();
  const std::size_t ny = d.reconstruction_size();

  // I(X;Y) over P(y|x) with the same constraints: reuse the triple
  // machinery with U = Y, i.e. P(u|x) free and P(y|u) pinned at identity.
  const Problem prob{source, d, ny, delta, kInf};
  std::vector<double> identity(ny * ny, 0.0);
  for (std::size_t y = 0; y < ny; ++y) identity[y * ny + y] = 1.0;

  const auto evaluate_rows = [&](const std::vector<double>& pyx) {
    return evaluate_tables(prob, pyx, identity);
  };

  std::vector<double> scratch;
  const auto penalized = [&](const std::vector<double>& logits, double mu) {
    softmax_rows({logits.data(), logits.size()}, nx, ny, scratch);
    const Evaluation ev = evaluate_rows(scratch);
    return ev.objective + mu * ev.violation(delta);
  };

  std::vector<std::vector<double>> seeds;
  std::vector<std::pair<std::vector<double>, Evaluation>> candidates;
  {
    std::vector<double> rows;
    rows.reserve(nx * ny);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) rows.push_back(source[y]);
    }
    candidates.emplace_back(rows, evaluate_rows(rows));
    std::vector<double> logits;
    for (double v : rows) logits.push_back(std::log(std::max(v, 1e-9)));
    seeds.push_back(std::move(logits));
  }
  if (nx == ny) {
    std::vector<double> rows(nx * ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x) rows[x * ny + x] = 1.0;
    candidates.emplace_back(rows, evaluate_rows(rows));
    std::vector<double> logits;
    for (double v : rows) logits.push_back(std::log(std::max(v, 1e-9)));
    seeds.push_back(std::move(logits));
  }
  for (int s = 0; s < options.starts; ++s) {
    RngStream stream(options.seed, StreamPurpose::kSearch, 1000u + static_cast<std::uint64_t>(s));
    std::vector<double> logits(nx * ny);
    for (double& v : logits) v = stream.next_double() * 4.0 - 2.0;
    seeds.push_back(std::move(logits));
  }

  for (auto& seed : seeds) {
    std::vector<double> logits = std::move(seed);
    double mu = 1e2;
    for (int round = 0; round < 11; ++round) {
      logits = nelder_mead([&](const std::vector<double>& l) { return penalized(l, mu); },
                           std::move(logits), 0.25, options.max_iterations);
      softmax_rows({logits.data(), logits.size()}, nx, ny, scratch);
      if (evaluate_rows(scratch).violation(delta) < options.constraint_tol) break;
      mu *= 10.0;
    }
    softmax_rows({logits.data(), logits.size()}, nx, ny, scratch);
    candidates.emplace_back(scratch, evaluate_rows(scratch));
    // Additive repair, as in the auxiliary search.
    std::vector<double> py(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) py[y] += source[x] * scratch[x * ny + y];
    }
    std::vector<double> repaired = scratch;
    bool valid = true;
    for (std::size_t x = 0; x < nx && valid; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        repaired[x * ny + y] += source[y] - py[y];
        if (repaired[x * ny + y] < 0.0) {
          valid = false;
          break;
        }
      }
    }
    if (valid) candidates.emplace_back(repaired, evaluate_rows(repaired));
  }

  double best = kInf;
  for (const auto& [rows, ev] : candidates) {
    if (0.5 * ev.realism_l1 <= options.constraint_tol &&
        ev.distortion <= delta + options.constraint_tol) {
      best = std::min(best, ev.info_xu);
    }
  }
  return best;
}

double classical_rd(const Distribution& source, const DistortionMeasure& d, double delta) {
  if (d.source_size() != source.size()) {
    throw std::invalid_argument("classical_rd: distortion rows must match the source");
  }
  if (!(delta >= 0.0)) throw std::invalid_argument("classical_rd: delta must be >= 0");
  const std::size_t nx = source.size();
  const std::size_t ny = d.reconstruction_size();

  double d_min = 0.0, d_max = kInf;
  for (std::size_t x = 0; x < nx; ++x) {
    double row_min = kInf;
    for (std::size_t y = 0; y < ny; ++y) row_min = std::min(row_min, d.at(x, y));
    d_min += source[x] * row_min;
  }
  for (std::size_t y = 0; y < ny; ++y) {
    double column = 0.0;
    for (std::size_t x = 0; x < nx; ++x) column += source[x] * d.at(x, y);
    d_max = std::min(d_max, column);
  }
  if (delta >= d_max - 1e-12) return 0.0;
  if (delta < d_min - 1e-12) return kInf;

  const auto fixed_slope = [&](double beta) {
    std::vector<double> r(ny, 1.0 / static_cast<double>(ny));
    std::vector<double> q(nx * ny, 0.0);
    for (int iter = 0; iter < 4000; ++iter) {
      for (std::size_t x = 0; x < nx; ++x) {
        double row_min = kInf;
        for (std::size_t y = 0; y < ny; ++y) row_min = std::min(row_min, d.at(x, y));
        double z = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
          q[x * ny + y] = r[y] * std::exp(-beta * (d.at(x, y) - row_min));
          z += q[x * ny + y];
        }
        for (std::size_t y = 0; y < ny; ++y) q[x * ny + y] /= z;
      }
      double drift = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        double ry = 0.0;
        for (std::size_t x = 0; x < nx; ++x) ry += source[x] * q[x * ny + y];
        drift = std::max(drift, std::abs(ry - r[y]));
        r[y] = ry;
      }
      if (drift < 1e-15) break;
    }
    double distortion = 0.0, rate = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) {
        const double mass = source[x] * q[x * ny + y];
        if (mass <= 0.0) continue;
        distortion += mass * d.at(x, y);
        rate += mass * std::log2(q[x * ny + y] / r[y]);
      }
    }
    return std::pair<double, double>(distortion, std::max(0.0, rate));
  };

  double lo = 0.0, hi = 1.0;
  while (fixed_slope(hi).first > delta && hi < 1e7) hi *= 2.0;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (fixed_slope(mid).first > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return fixed_slope(hi).second;
}

}  // namespace rdpc::region
