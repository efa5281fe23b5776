#include "spr/refinement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "spr/errors.hpp"
#include "spr/fri.hpp"

namespace spr {
namespace {

constexpr int kMaxEvaluations = 2000;

// A_m = sum_k c_k^2 + 2 sum_{k<l} c_k c_l cos(m w (x_k - x_l)) for m = 0..M.
// Parameters are x_2..x_K (x_1 = 0) followed by c_1..c_K. Row m carries
// weight sqrt(2) for m > 0 since it stands for both m and -m.
struct SpectrumFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  int k;
  double step;
  Eigen::VectorXd data;
  Eigen::VectorXd weight;

  int inputs() const { return 2 * k - 1; }
  int values() const { return static_cast<int>(data.size()); }

  double x(const Eigen::VectorXd& p, int i) const { return i == 0 ? 0.0 : p(i - 1); }
  double c(const Eigen::VectorXd& p, int i) const { return p(k - 1 + i); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& f) const {
    for (int m = 0; m < values(); ++m) {
      double a = 0.0;
      for (int i = 0; i < k; ++i) {
        a += c(p, i) * c(p, i);
        for (int j = i + 1; j < k; ++j)
          a += 2.0 * c(p, i) * c(p, j) * std::cos(m * step * (x(p, i) - x(p, j)));
      }
      f(m) = weight(m) * (a - data(m));
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& jac) const {
    jac.setZero();
    for (int m = 0; m < values(); ++m) {
      for (int i = 0; i < k; ++i) {
        double dc = 2.0 * c(p, i);
        double dx = 0.0;
        for (int j = 0; j < k; ++j) {
          if (j == i) continue;
          const double phase = m * step * (x(p, i) - x(p, j));
          dc += 2.0 * c(p, j) * std::cos(phase);
          dx -= 2.0 * c(p, i) * c(p, j) * m * step * std::sin(phase);
        }
        jac(m, k - 1 + i) = weight(m) * dc;
        if (i > 0) jac(m, i - 1) = weight(m) * dx;
      }
    }
    return 0;
  }
};

SpectrumFunctor make_functor(const FourierSamples& samples, int k) {
  const int half = samples.in_band_max_index();
  if (half < 2 * k)
    throw InvalidArgument("fit_signal_model: too few in-band samples for the model order");
  SpectrumFunctor fn{k, samples.sampling_step, Eigen::VectorXd(half + 1),
                     Eigen::VectorXd(half + 1)};
  for (int m = 0; m <= half; ++m) {
    fn.data(m) = samples.at(m).real();
    fn.weight(m) = m == 0 ? 1.0 : std::sqrt(2.0);
  }
  return fn;
}

Support anchored(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double origin = x.front();
  for (double& v : x) v -= origin;
  return Support(PointSet::FromScalars(x));
}

std::vector<double> scalars(const Support& s) {
  std::vector<double> x(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) x[i] = s[i][0];
  return x;
}

// Moves two points at a time to every pair of positions on a grid fine
// enough that each basin of the misfit is visited, and returns the `keep`
// configurations of smallest misfit. Amplitudes stay fixed. Per pair the
// spectrum splits into the untouched points, each moved point against the
// untouched ones, and the moved pair, so a candidate costs one pass over m.
std::vector<std::vector<double>> pair_grid_moves(const SpectrumFunctor& fn,
                                                 const std::vector<double>& x,
                                                 const std::vector<double>& c,
                                                 double half_period, std::size_t keep) {
  const int k = fn.k;
  if (k < 3) return {};
  const int rows = fn.values();
  const double h = std::numbers::pi / (2.0 * fn.step * (rows - 1));
  const double lo = *std::max_element(x.begin(), x.end()) - half_period;
  const int cells = static_cast<int>(std::ceil(3.0 * half_period / h));

  Eigen::ArrayXd w = fn.weight.array();
  Eigen::ArrayXd mw(rows);
  for (int m = 0; m < rows; ++m) mw(m) = m * fn.step;

  using Entry = std::pair<double, std::vector<double>>;
  const auto worse = [](const Entry& a, const Entry& b) { return a.first < b.first; };
  std::vector<Entry> heap;

  Eigen::ArrayXXd gi(rows, cells), gj(rows, cells), pair(rows, 2 * cells - 1);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
      Eigen::ArrayXd rest = Eigen::ArrayXd::Constant(rows, 0.0);
      for (int l = 0; l < k; ++l) {
        rest += c[l] * c[l];
        if (l == i || l == j) continue;
        xmin = std::min(xmin, x[l]);
        xmax = std::max(xmax, x[l]);
        for (int n = l + 1; n < k; ++n)
          if (n != i && n != j) rest += 2.0 * c[l] * c[n] * (mw * (x[l] - x[n])).cos();
      }
      rest = w * (rest - fn.data.array());
      // Untouched points keep the span below half a period.
      const int qlo = std::max(0, static_cast<int>(std::ceil((xmax - half_period - lo) / h)));
      const int qhi = std::min(cells - 1, static_cast<int>(std::floor((xmin + half_period - lo) / h)));
      if (qlo > qhi) continue;

      for (int q = qlo; q <= qhi; ++q) {
        gi.col(q).setZero();
        gj.col(q).setZero();
        for (int l = 0; l < k; ++l) {
          if (l == i || l == j) continue;
          const Eigen::ArrayXd cosine = (mw * (lo + q * h - x[l])).cos();
          gi.col(q) += 2.0 * c[i] * c[l] * cosine;
          gj.col(q) += 2.0 * c[j] * c[l] * cosine;
        }
        gi.col(q) *= w;
        gj.col(q) *= w;
      }
      for (int d = -(qhi - qlo); d <= qhi - qlo; ++d)
        pair.col(d + cells - 1) = w * 2.0 * c[i] * c[j] * (mw * (d * h)).cos();

      for (int a = qlo; a <= qhi; ++a) {
        const Eigen::ArrayXd base = rest + gi.col(a);
        for (int b = qlo; b <= qhi; ++b) {
          if (std::abs((a - b) * h) > half_period) continue;
          const double r = (base + gj.col(b) + pair.col(a - b + cells - 1)).matrix().squaredNorm();
          if (heap.size() == keep && r >= heap.front().first) continue;
          std::vector<double> moved = x;
          moved[i] = lo + a * h;
          moved[j] = lo + b * h;
          if (heap.size() == keep) {
            std::pop_heap(heap.begin(), heap.end(), worse);
            heap.pop_back();
          }
          heap.emplace_back(r, std::move(moved));
          std::push_heap(heap.begin(), heap.end(), worse);
        }
      }
    }
  }
  std::sort_heap(heap.begin(), heap.end(), worse);
  std::vector<std::vector<double>> out;
  for (Entry& e : heap) out.push_back(std::move(e.second));
  return out;
}

}  // namespace

SignalFit fit_signal_model(const FourierSamples& samples, const Support& support,
                           const std::vector<double>& amplitudes) {
  if (support.dimension() != 1) throw InvalidArgument("fit_signal_model: 1D supports only");
  const int k = static_cast<int>(support.size());
  if (amplitudes.size() != support.size())
    throw InvalidArgument("fit_signal_model: one amplitude per point is required");

  SpectrumFunctor fn = make_functor(samples, k);
  Eigen::VectorXd p(2 * k - 1);
  for (int i = 1; i < k; ++i) p(i - 1) = support[i][0] - support[0][0];
  for (int i = 0; i < k; ++i) p(k - 1 + i) = amplitudes[i];

  Eigen::LevenbergMarquardt<SpectrumFunctor> lm(fn);
  lm.parameters.maxfev = kMaxEvaluations;
  lm.minimize(p);

  Eigen::VectorXd f(fn.values());
  fn(p, f);

  // Sort points and carry the amplitudes along. The sign of c is not
  // identifiable from the spectrum of a real positive signal.
  // Locations are only determined modulo the sampling period, and the fit
  // may drift a point by whole periods. Fold onto the circle and open it at
  // the widest gap, which is the representative of smallest span.
  const double period = 2.0 * std::numbers::pi / samples.sampling_step;
  std::vector<std::pair<double, double>> pts(k);
  for (int i = 0; i < k; ++i) {
    const double folded = fn.x(p, i) - period * std::floor(fn.x(p, i) / period);
    pts[i] = {folded, std::abs(fn.c(p, i))};
  }
  std::sort(pts.begin(), pts.end());
  int start = 0;
  double widest = pts[0].first + period - pts[k - 1].first;
  for (int i = 1; i < k; ++i) {
    if (pts[i].first - pts[i - 1].first > widest) {
      widest = pts[i].first - pts[i - 1].first;
      start = i;
    }
  }
  std::rotate(pts.begin(), pts.begin() + start, pts.end());
  std::vector<double> x(k), c(k);
  for (int i = 0; i < k; ++i) {
    x[i] = pts[i].first - pts[0].first;
    if (x[i] < 0.0) x[i] += period;
    c[i] = pts[i].second;
  }
  return {Support(PointSet::FromScalars(x)), std::move(c), f.norm()};
}

SignalFit refine_reconstruction(const FourierSamples& samples, int k, const RefineConfig& config) {
  if (k < 2) throw InvalidArgument("refine_reconstruction: K must be at least 2");
  if (!(config.split > 0.0) || config.swap_sweeps < 0 || config.pair_candidates < 0 ||
      !(config.min_improvement >= 0.0))
    throw InvalidArgument("refine_reconstruction: invalid configuration");

  // Equal amplitudes with the measured total mass: A_0 = (sum c)^2.
  const double c0 = std::sqrt(std::max(samples.at(0).real(), 0.0)) / k;
  const std::vector<double> flat(k, c0 > 0.0 ? c0 : 1.0);

  SignalFit best{Support(PointSet::FromScalars(std::vector<double>(k, 0.0))), flat,
                 std::numeric_limits<double>::infinity()};
  const auto consider = [&](const Support& start) {
    SignalFit fit = fit_signal_model(samples, start, flat);
    if (fit.residual < best.residual) best = std::move(fit);
  };

  const RecoveryConfig configs[] = {RecoveryConfig{}, RecoveryConfig::AllImprovements()};

  std::optional<AcfAtoms> atoms;
  try {
    atoms = superresolve_acf(samples, k);
    const DifferenceSet diffs = difference_set(*atoms);
    for (const RecoveryConfig& rc : configs) {
      try {
        consider(recover_support(diffs, k, rc, 1));
      } catch (const Error&) {
      }
    }
  } catch (const Error&) {
  }

  // Two points closer than the resolution limit look like one to the
  // subspace step. Seed with every way of splitting a K-1 point solution.
  if (k > 2) {
    try {
      const DifferenceSet diffs = difference_set(superresolve_acf(samples, k - 1));
      for (const RecoveryConfig& rc : configs) {
        std::vector<double> base;
        try {
          base = scalars(recover_support(diffs, k - 1, rc, 1));
        } catch (const Error&) {
          continue;
        }
        for (int j = 0; j < k - 1; ++j)
          for (double sign : {-1.0, 1.0}) {
            std::vector<double> x = base;
            x.push_back(base[j] + sign * config.split);
            consider(anchored(std::move(x)));
          }
      }
    } catch (const Error&) {
    }
  }

  if (!std::isfinite(best.residual))
    throw DegenerateOutputError("refine_reconstruction: no starting hypothesis could be formed");

  // Replace one point at a time by a super-resolved atom location. When no
  // single replacement helps, move pairs over a grid and fit the best few.
  if (atoms) {
    const SpectrumFunctor fn = make_functor(samples, k);
    const auto& loc = atoms->locations;
    const auto accept = [&](std::vector<double> x) {
      SignalFit fit = fit_signal_model(samples, anchored(std::move(x)), flat);
      if (fit.residual >= best.residual * (1.0 - config.min_improvement)) return false;
      best = std::move(fit);
      return true;
    };
    for (int sweep = 0; sweep < config.swap_sweeps; ++sweep) {
      bool improved = false;
      for (int i = 0; i < k; ++i)
        for (std::size_t n = 0; n < loc.size(); ++n) {
          std::vector<double> x = scalars(best.support);
          x[i] = loc[n][0];
          improved = accept(std::move(x)) || improved;
        }
      if (!improved && config.pair_candidates > 0) {
        const double half_period = std::numbers::pi / samples.sampling_step;
        for (std::vector<double>& x :
             pair_grid_moves(fn, scalars(best.support), best.amplitudes, half_period,
                             static_cast<std::size_t>(config.pair_candidates)))
          improved = accept(std::move(x)) || improved;
      }
      if (!improved) break;
    }
  }
  return best;
}

}  // namespace spr
