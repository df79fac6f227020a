// detect.cpp
#include "afdm/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace afdm {

cmat SparseSystem::to_dense() const {
  cmat h = cmat::Zero(rows, unknowns());
  for (int k = 0; k < unknowns(); ++k)
    for (const auto& [r, v] : cols[k]) h(r, k) = v;
  return h;
}

SparseSystem SparseSystem::from_dense(const cmat& h) {
  SparseSystem sys;
  sys.rows = static_cast<int>(h.rows());
  sys.cols.resize(h.cols());
  for (Eigen::Index k = 0; k < h.cols(); ++k)
    for (Eigen::Index r = 0; r < h.rows(); ++r)
      if (h(r, k) != cplx(0.0, 0.0))
        sys.cols[k].emplace_back(static_cast<int>(r), h(r, k));
  return sys;
}

cvec SparseSystem::apply(const cvec& x) const {
  if (x.size() != unknowns())
    throw std::invalid_argument("SparseSystem::apply: length mismatch");
  cvec y = cvec::Zero(rows);
  for (int k = 0; k < unknowns(); ++k)
    for (const auto& [r, v] : cols[k]) y[r] += v * x[k];
  return y;
}

int SparseSystem::max_row_degree() const {
  std::vector<int> degree(rows, 0);
  for (const auto& col : cols)
    for (const auto& [r, v] : col) ++degree[r];
  return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

MlResult detect_ml(const cmat& h, const cvec& y, const Constellation& cons) {
  const int k_count = static_cast<int>(h.cols());
  const int m = cons.size();
  if (k_count <= 0) throw std::invalid_argument("detect_ml: empty system");
  if (h.rows() != y.size())
    throw std::invalid_argument("detect_ml: row count mismatch");
  if (k_count * std::log2(static_cast<double>(m)) > 20.0 + 1e-9)
    throw std::invalid_argument(
        "detect_ml: search space exceeds 2^20 candidates");

  const auto& pts = cons.points();
  // Reflected mixed-radix Gray enumeration (loopless): consecutive
  // candidates differ in exactly one digit, by one level.
  std::vector<int> digit(k_count, 0);
  std::vector<int> focus(k_count + 1);
  std::vector<int> dir(k_count, 1);
  for (int j = 0; j <= k_count; ++j) focus[j] = j;

  cvec residual = y;
  for (int k = 0; k < k_count; ++k) residual -= h.col(k) * pts[0];

  MlResult best;
  best.metric = residual.squaredNorm();
  best.symbols = cvec::Constant(k_count, pts[0]);
  best.visited = 1;

  std::vector<int> best_digits = digit;
  double metric = best.metric;
  for (;;) {
    const int j = focus[0];
    focus[0] = 0;
    if (j == k_count) break;
    const int old_level = digit[j];
    digit[j] += dir[j];
    if (digit[j] == 0 || digit[j] == m - 1) {
      dir[j] = -dir[j];
      focus[j] = focus[j + 1];
      focus[j + 1] = j + 1;
    }
    const cplx delta = pts[digit[j]] - pts[old_level];
    // Fused residual update and metric recomputation.
    metric = 0.0;
    for (Eigen::Index r = 0; r < residual.size(); ++r) {
      residual[r] -= h(r, j) * delta;
      metric += std::norm(residual[r]);
    }
    ++best.visited;
    if (metric < best.metric) {
      best.metric = metric;
      best_digits = digit;
    }
  }
  for (int k = 0; k < k_count; ++k) best.symbols[k] = pts[best_digits[k]];
  return best;
}

namespace {

struct MpEdge {
  int obs = 0;       // observation row
  int var = 0;       // unknown index
  cplx coeff;        // H[obs, var]
  double mean_re = 0, mean_im = 0, var_sym = 0;  // moments of prob below
  std::vector<double> prob;                      // message var -> obs
};

}  // namespace

MpResult detect_mp(const SparseSystem& sys, const cvec& y,
                   const Constellation& cons, const MpConfig& cfg) {
  if (cfg.noise_var <= 0.0)
    throw std::invalid_argument("detect_mp: noise_var must be > 0");
  if (cfg.damping <= 0.0 || cfg.damping > 1.0)
    throw std::invalid_argument("detect_mp: damping must be in (0, 1]");
  if (y.size() != sys.rows)
    throw std::invalid_argument("detect_mp: observation length mismatch");

  const int n_var = sys.unknowns();
  const int m = cons.size();
  const auto& pts = cons.points();
  const double uniform = 1.0 / m;

  std::vector<MpEdge> edges;
  std::vector<std::vector<int>> var_edges(n_var);   // edge ids per unknown
  for (int k = 0; k < n_var; ++k) {
    for (const auto& [r, v] : sys.cols[k]) {
      MpEdge e;
      e.obs = r;
      e.var = k;
      e.coeff = v;
      e.prob.assign(m, uniform);
      var_edges[k].push_back(static_cast<int>(edges.size()));
      edges.push_back(std::move(e));
    }
  }
  std::vector<std::vector<int>> obs_edges(sys.rows);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    obs_edges[edges[e].obs].push_back(e);

  std::vector<double> posterior(static_cast<size_t>(n_var) * m, uniform);
  std::vector<double> loglik(m), fresh(m);

  MpResult out;
  out.symbols = cvec(n_var);
  // Gaussian means/variances of the interference each observation sees,
  // computed totals-first so per-edge exclusion is O(1).
  std::vector<cplx> obs_mean(sys.rows);
  std::vector<double> obs_var(sys.rows);

  for (int it = 0; it < cfg.n_iter; ++it) {
    // Observation side: moments of every incoming message, then totals.
    for (auto& e : edges) {
      double er = 0, ei = 0, e2 = 0;
      for (int a = 0; a < m; ++a) {
        er += e.prob[a] * pts[a].real();
        ei += e.prob[a] * pts[a].imag();
        e2 += e.prob[a] * std::norm(pts[a]);
        ++out.ops;
      }
      e.mean_re = er;
      e.mean_im = ei;
      e.var_sym = e2 - (er * er + ei * ei);
    }
    std::fill(obs_mean.begin(), obs_mean.end(), cplx(0.0, 0.0));
    std::fill(obs_var.begin(), obs_var.end(), cfg.noise_var);
    for (const auto& e : edges) {
      obs_mean[e.obs] += e.coeff * cplx(e.mean_re, e.mean_im);
      obs_var[e.obs] += std::norm(e.coeff) * e.var_sym;
      ++out.ops;
    }

    // Variable side: per-edge log-likelihoods, totals, leave-one-out
    // messages, damped posteriors.
    double max_change = 0.0;
    for (int k = 0; k < n_var; ++k) {
      std::fill(loglik.begin(), loglik.end(), 0.0);
      // ll[edge][a] kept implicitly: recompute per edge below (cheap, m small)
      for (int eid : var_edges[k]) {
        const MpEdge& e = edges[eid];
        const cplx excl_mean = obs_mean[e.obs] -
                               e.coeff * cplx(e.mean_re, e.mean_im);
        const double excl_var =
            std::max(obs_var[e.obs] - std::norm(e.coeff) * e.var_sym,
                     cfg.noise_var);
        const cplx base = y[e.obs] - excl_mean;
        for (int a = 0; a < m; ++a) {
          loglik[a] -= std::norm(base - e.coeff * pts[a]) / excl_var;
          ++out.ops;
        }
      }
      // Posterior from the total, damped against the previous iteration.
      double* q = posterior.data() + static_cast<size_t>(k) * m;
      double peak = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < m; ++a) peak = std::max(peak, loglik[a]);
      double norm_sum = 0.0;
      for (int a = 0; a < m; ++a) {
        fresh[a] = std::exp(loglik[a] - peak);
        norm_sum += fresh[a];
      }
      for (int a = 0; a < m; ++a) {
        const double next = cfg.damping * (fresh[a] / norm_sum) +
                            (1.0 - cfg.damping) * q[a];
        max_change = std::max(max_change, std::abs(next - q[a]));
        q[a] = next;
        ++out.ops;
      }
      // Outgoing messages: divide the edge's own likelihood back out.
      for (int eid : var_edges[k]) {
        MpEdge& e = edges[eid];
        const cplx excl_mean = obs_mean[e.obs] -
                               e.coeff * cplx(e.mean_re, e.mean_im);
        const double excl_var =
            std::max(obs_var[e.obs] - std::norm(e.coeff) * e.var_sym,
                     cfg.noise_var);
        const cplx base = y[e.obs] - excl_mean;
        double msg_peak = -std::numeric_limits<double>::infinity();
        for (int a = 0; a < m; ++a) {
          fresh[a] = loglik[a] +
                     std::norm(base - e.coeff * pts[a]) / excl_var;
          msg_peak = std::max(msg_peak, fresh[a]);
          ++out.ops;
        }
        double msg_sum = 0.0;
        for (int a = 0; a < m; ++a) {
          fresh[a] = std::exp(fresh[a] - msg_peak);
          msg_sum += fresh[a];
        }
        for (int a = 0; a < m; ++a) {
          e.prob[a] = cfg.damping * (fresh[a] / msg_sum) +
                      (1.0 - cfg.damping) * e.prob[a];
          ++out.ops;
        }
      }
    }
    out.iterations = it + 1;
    if (max_change < cfg.tol) {
      out.converged = true;
      break;
    }
  }

  for (int k = 0; k < n_var; ++k) {
    const double* q = posterior.data() + static_cast<size_t>(k) * m;
    int best = 0;
    for (int a = 1; a < m; ++a)
      if (q[a] > q[best]) best = a;
    out.symbols[k] = pts[best];
  }
  return out;
}

cvec detect_lmmse(const cmat& h, const cvec& y, double noise_var,
                  const Constellation& cons) {
  if (noise_var <= 0.0)
    throw std::invalid_argument("detect_lmmse: noise_var must be > 0");
  if (h.rows() != y.size())
    throw std::invalid_argument("detect_lmmse: row count mismatch");
  cmat gram = h * h.adjoint();
  gram.diagonal().array() += noise_var;
  const cvec soft = h.adjoint() * gram.llt().solve(y);
  cvec hard(soft.size());
  for (Eigen::Index k = 0; k < soft.size(); ++k) hard[k] = cons.slice(soft[k]);
  return hard;
}

}  // namespace afdm
