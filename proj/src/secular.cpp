#include "qgraph/secular.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qgraph/errors.hpp"

namespace qgraph {

namespace {

constexpr double kPi = std::numbers::pi;

bool has_negative_coupling(const MetricGraph& g) {
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.condition(v);
    if (!c.is_dirichlet() && c.coupling() < 0.0) return true;
  }
  return false;
}


double bisect(const std::function<double(double)>& f, double a, double fa, double b, double tol) {
  for (int it = 0; it < 300 && b - a > tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Minimizer of f on [a, b]; f is assumed unimodal there.
double golden_min(const std::function<double(double)>& f, double a, double b, double tol) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 300 && b - a > tol; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

// Real-valued secular function for methods with a sign change at simple roots.
// Returns NaN at points where the method cannot be evaluated.
double method_value(const MetricGraph& g, double k, SecularMethod method) {
  switch (method) {
    case SecularMethod::Real:
      return secular_real(g, k);
    case SecularMethod::Vertex:
      return secular_vertex(g, k);
    case SecularMethod::Star:
      try {
        return secular_star_cot(g, k);
      } catch (const NumericalError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    case SecularMethod::Det:
      return std::abs(secular_det(g, k));
  }
  return 0.0;
}

constexpr double kRootSigma = 1e-8;

// Roots in (k_lo, k_max]; k_lo = 0 starts just above zero.
std::vector<double> scan(const MetricGraph& g, double k_lo, double k_max, double tol,
                         SecularMethod method, double h) {
  std::vector<double> ks;
  // |det| has no sign to bracket with, so adjacent minima need a denser grid to stay apart.
  if (method == SecularMethod::Det) h /= 4.0;
  for (double k = k_lo > 0.0 ? k_lo : h * 1e-3; k < k_max; k += h) ks.push_back(k);
  ks.push_back(k_max);
  // The cotangent form changes sign at its poles; a root and a pole can share a grid cell,
  // so the grid is split at every pole and the cells straddling a pole are skipped.
  std::vector<std::pair<double, double>> skip;
  if (method == SecularMethod::Star) {
    for (const auto& e : g.edges()) {
      const double delta = 1e-9 * std::max(1.0, k_max);
      for (int m = 1; m * kPi / e.length < k_max; ++m) {
        const double p = m * kPi / e.length;
        if (p - delta <= ks.front()) continue;
        ks.push_back(p - delta);
        ks.push_back(p + delta);
        skip.emplace_back(p - delta, p + delta);
      }
    }
    std::sort(ks.begin(), ks.end());
  }
  auto skipped = [&](double a, double b) {
    for (const auto& [lo, hi] : skip) {
      if (a < hi && b > lo) return true;
    }
    return false;
  };
  std::vector<double> fs(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) fs[i] = method_value(g, ks[i], method);

  auto smin = [&](double k) { return sigma_min(g, k); };
  auto f = [&](double k) { return method_value(g, k, method); };
  const bool signed_method = method != SecularMethod::Det;
  const double golden_tol = std::max(tol, 1e-15 * k_max);

  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const double fa = fs[i];
    const double fb = fs[i + 1];
    if (!signed_method || std::isnan(fa) || std::isnan(fb)) continue;
    if (skipped(ks[i], ks[i + 1])) continue;
    if (fa == 0.0) {
      if (i > 0) roots.push_back(ks[i]);
      continue;
    }
    if ((fa < 0.0) == (fb < 0.0)) continue;
    if (fb == 0.0) continue;  // picked up as the next left endpoint
    const double r = bisect(f, ks[i], fa, ks[i + 1], tol);
    if (method == SecularMethod::Star) {
      // A cotangent pole also changes sign; the function blows up there instead of vanishing.
      const double lo = std::max(ks[i], r - tol);
      const double hi = std::min(ks[i + 1], r + tol);
      const double v = std::min(std::abs(f(lo)), std::abs(f(hi)));
      if (!(v < 1e-2)) continue;
    }
    roots.push_back(r);
  }

  // A local minimum of |f| hides either a tangential zero or a close pair of simple zeros
  // inside one cell. Resample the cell before settling on a single minimizer.
  auto refine_cell = [&](double a, double b) {
    constexpr int kSub = 64;
    std::vector<double> xs(kSub + 1), vs(kSub + 1);
    for (int j = 0; j <= kSub; ++j) {
      xs[j] = a + (b - a) * j / kSub;
      vs[j] = signed_method ? f(xs[j]) : smin(xs[j]);
    }
    for (int j = 0; j < kSub; ++j) {
      if (!signed_method || std::isnan(vs[j]) || std::isnan(vs[j + 1])) continue;
      if (vs[j] != 0.0 && vs[j + 1] != 0.0 && (vs[j] < 0.0) != (vs[j + 1] < 0.0)) {
        roots.push_back(bisect(f, xs[j], vs[j], xs[j + 1], tol));
      }
    }
    for (int j = 0; j <= kSub; ++j) {
      const double vm = std::abs(vs[j]);
      const double vl = j > 0 ? std::abs(vs[j - 1]) : std::numeric_limits<double>::infinity();
      const double vr = j < kSub ? std::abs(vs[j + 1]) : std::numeric_limits<double>::infinity();
      if (std::isnan(vm) || !(vm <= vl && vm <= vr)) continue;
      const double lo = xs[std::max(j - 1, 0)];
      const double hi = xs[std::min(j + 1, kSub)];
      const double km = golden_min(smin, lo, hi, golden_tol);
      if (smin(km) < kRootSigma) roots.push_back(km);
    }
  };

  // Zeros without a sign change: local minima of |f| confirmed by the kernel of I - U.
  const std::size_t n = ks.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double fm = std::abs(fs[i]);
    const double fl = std::abs(fs[i - 1]);
    const bool last = i + 1 == n;
    const double fr = last ? std::numeric_limits<double>::infinity() : std::abs(fs[i + 1]);
    if (std::isnan(fm) || std::isnan(fl) || std::isnan(fr)) continue;
    if (!(fm <= fl && fm <= fr)) continue;
    if (signed_method) {
      const bool same_left = (fs[i - 1] < 0.0) == (fs[i] < 0.0);
      const bool same_right = last || (fs[i + 1] < 0.0) == (fs[i] < 0.0);
      if (!same_left || !same_right || fs[i] == 0.0) continue;
    }
    refine_cell(ks[i - 1], last ? ks[i] : ks[i + 1]);
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && r - merged.back() < 1e-8) continue;
    merged.push_back(r);
  }
  return merged;
}

struct ScanResult {
  std::vector<SpectralPoint> points;
  bool weyl_ok = true;
  double bad_k = 0.0;
};

// Continuous phase of det U(k) over 2 pi, minus (1/pi) sum arg(1 - lambda_j(U(k + i eps))).
// Differences between two non-eigenvalues count the eigenvalues between them.
double phase_count(const MetricGraph& g, double k, double eps) {
  double phi = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.condition(v);
    if (c.is_dirichlet() || c.coupling() == 0.0) continue;
    const double a = c.coupling();
    phi += -2.0 * std::atan(a / (k * g.degree(v))) + kPi * (a > 0.0 ? 1.0 : -1.0);
  }
  Eigen::ComplexEigenSolver<CMatrix> es(quantum_evolution(g, cplx(k, eps)), false);
  double osc = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) osc += std::arg(1.0 - es.eigenvalues()(i));
  return g.total_length() * k / kPi + phi / (2.0 * kPi) - osc / kPi;
}

std::vector<SpectralPoint> with_multiplicity(const MetricGraph& g, const std::vector<double>& roots) {
  std::vector<SpectralPoint> points;
  for (double r : roots) {
    const CMatrix a = CMatrix::Identity(g.directed_count(), g.directed_count()) -
                      quantum_evolution(g, r);
    points.push_back({r, std::max(1, kernel_dim(a)), r * r});
  }
  return points;
}

// Checks the root count between midpoints of consecutive roots against phase_count and
// rescans windows that disagree on successively finer grids.
std::vector<SpectralPoint> audit_roots(const MetricGraph& g, std::vector<SpectralPoint> points,
                                       double k_max, double tol, SecularMethod method, double h) {
  auto count_at = [&](double k) {
    double d = k;
    for (const auto& p : points) d = std::min(d, std::abs(p.k - k));
    return phase_count(g, k, std::clamp(1e-2 * d, 1e-12, 1e-6));
  };
  std::vector<double> marks{std::min(h * 1e-3, points.empty() ? h * 1e-3 : 0.5 * points[0].k)};
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    marks.push_back(0.5 * (points[i].k + points[i + 1].k));
  }
  if (points.empty() || k_max - points.back().k > 1e-6 * h) marks.push_back(k_max);
  std::vector<double> extra;
  std::vector<std::pair<double, double>> redone;
  double prev = count_at(marks[0]);
  for (std::size_t j = 1; j < marks.size(); ++j) {
    const double next = count_at(marks[j]);
    const double a = marks[j - 1];
    const double b = marks[j];
    auto found = [&](const std::vector<SpectralPoint>& ps) {
      int n = 0;
      for (const auto& p : ps) n += (p.k > a && p.k <= b) ? p.multiplicity : 0;
      return n;
    };
    const long expected = std::lround(next - prev);
    prev = next;
    if (found(points) == expected) continue;
    bool fixed = false;
    for (double fine : {h / 64.0, h / 512.0}) {
      const auto ps = with_multiplicity(g, scan(g, a, b, tol, method, fine));
      std::vector<SpectralPoint> inside;
      for (const auto& p : ps) {
        if (p.k > a && p.k <= b) inside.push_back(p);
      }
      if (found(inside) == expected) {
        for (const auto& p : inside) extra.push_back(p.k);
        redone.emplace_back(a, b);
        fixed = true;
        break;
      }
    }
    if (!fixed) {
      throw NumericalError("root count in [" + std::to_string(a) + ", " + std::to_string(b) +
                           "] disagrees with the argument principle");
    }
  }
  if (redone.empty()) return points;
  std::vector<double> roots = extra;
  for (const auto& p : points) {
    bool replaced = false;
    for (const auto& [a, b] : redone) replaced = replaced || (p.k > a && p.k <= b);
    if (!replaced) roots.push_back(p.k);
  }
  std::sort(roots.begin(), roots.end());
  return with_multiplicity(g, roots);
}

ScanResult scan_points(const MetricGraph& g, double k_max, double tol, SecularMethod method,
                       double h, int zero_modes) {
  ScanResult res;
  res.points = with_multiplicity(g, scan(g, 0.0, k_max, tol, method, h));
  // The cotangent form misses eigenvalues at its poles, so only the other forms are audited.
  if (method != SecularMethod::Star) res.points = audit_roots(g, res.points, k_max, tol, method, h);
  const double bound = 2.0 * g.edge_count() + 2.0;
  const double len = g.total_length();
  int count = zero_modes;
  auto check = [&](double k) {
    if (std::abs(count - len * k / kPi) > bound) {
      res.weyl_ok = false;
      res.bad_k = k;
    }
  };
  for (const auto& p : res.points) {
    check(p.k);
    count += p.multiplicity;
    check(p.k);
  }
  check(k_max);
  return res;
}

}  // namespace

int zero_mode_count(const MetricGraph& g) {
  const auto labels = g.component_labels();
  const int comps = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<bool> neumann(comps, true);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!g.condition(v).is_neumann_like()) neumann[labels[v]] = false;
  }
  return static_cast<int>(std::count(neumann.begin(), neumann.end(), true));
}

cplx secular_det(const MetricGraph& g, cplx k) {
  const int n = g.directed_count();
  const CMatrix a = CMatrix::Identity(n, n) - quantum_evolution(g, k);
  return a.partialPivLu().determinant();
}

double secular_real(const MetricGraph& g, double k) {
  if (!(k > 0.0)) throw GraphError("secular_real needs k > 0");
  const cplx det = secular_det(g, k);
  // det(S*) = s * prod (w / conj w) with a constant sign s; sqrt(w / conj w) = w / |w|.
  int parity = g.edge_count();
  cplx factor = std::exp(cplx(0.0, -k * g.total_length()));
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.condition(v);
    const int d = g.degree(v);
    parity += c.is_dirichlet() ? d : d - 1;
    if (!c.is_dirichlet() && c.coupling() != 0.0) {
      const cplx w(static_cast<double>(d), c.coupling() / k);
      factor *= w / std::abs(w);
    }
  }
  if (parity % 2 != 0) factor *= cplx(0.0, 1.0);
  const cplx z = factor * det;
  if (std::abs(z.imag()) > 1e-6 * std::max(std::abs(z), 1.0)) {
    throw NumericalError("secular_real: imaginary residue " + std::to_string(z.imag()) +
                         " at k = " + std::to_string(k));
  }
  return z.real();
}

double secular_star_cot(const MetricGraph& star, double k) {
  const int c = star_centre(star);
  if (star.condition(c).is_dirichlet()) throw GraphError("star centre must not be Dirichlet");
  for (int v = 0; v < star.vertex_count(); ++v) {
    if (v != c && !star.condition(v).is_dirichlet()) {
      throw GraphError("cotangent form needs Dirichlet leaves");
    }
  }
  if (!(k > 0.0)) throw GraphError("secular_star_cot needs k > 0");
  double sum = star.condition(c).coupling() / k;
  for (const auto& e : star.edges()) {
    const double s = std::sin(k * e.length);
    if (std::abs(s) < 1e-12) {
      throw NumericalError("secular_star_cot: pole at k = " + std::to_string(k));
    }
    sum += std::cos(k * e.length) / s;
  }
  return sum;
}

double secular_vertex(const MetricGraph& g, double k) {
  if (g.has_loops()) throw GraphError("vertex secular function does not support loops");
  if (!(k > 0.0)) throw GraphError("secular_vertex needs k > 0");
  // Pole-free form: unknowns are the outgoing derivatives g_e at endpoint a and the vertex
  // values; eliminating g_e gives -M (rows of non-Dirichlet vertices) times prod sin(kl)/k.
  const int ne = g.edge_count();
  const int nv = g.vertex_count();
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(ne + nv, ne + nv);
  int free_rows = 0;
  for (int e = 0; e < ne; ++e) {
    const auto& ed = g.edge(e);
    const double s = std::sin(k * ed.length);
    const double c = std::cos(k * ed.length);
    // f_a cos + g s / k - f_b = 0
    big(e, e) = s / k;
    big(e, ne + ed.a) += c;
    big(e, ne + ed.b) -= 1.0;
    if (!g.condition(ed.a).is_dirichlet()) big(ne + ed.a, e) += 1.0;
    if (!g.condition(ed.b).is_dirichlet()) {
      // outgoing derivative at b: f_a k sin - g cos
      big(ne + ed.b, ne + ed.a) += k * s;
      big(ne + ed.b, e) -= c;
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (g.condition(v).is_dirichlet()) {
      big(ne + v, ne + v) = 1.0;
    } else {
      big(ne + v, ne + v) -= g.condition(v).coupling();
      ++free_rows;
    }
  }
  double det = big.partialPivLu().determinant() * std::pow(k, ne);
  if (free_rows % 2 != 0) det = -det;
  return det;
}

int kernel_dim(const CMatrix& a, double rel) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double cut = rel * std::max(1.0, s(0));
  int n = 0;
  for (int i = 0; i < s.size(); ++i) n += s(i) < cut ? 1 : 0;
  return n;
}

double sigma_min(const MetricGraph& g, double k) {
  const int n = g.directed_count();
  const CMatrix a = CMatrix::Identity(n, n) - quantum_evolution(g, k);
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(n - 1);
}

std::vector<double> Spectrum::eigenvalue_list() const {
  std::vector<double> out;
  for (auto it = negative.rbegin(); it != negative.rend(); ++it) out.push_back(-(*it) * (*it));
  for (int i = 0; i < zero_multiplicity; ++i) out.push_back(0.0);
  for (const auto& p : points) {
    for (int i = 0; i < p.multiplicity; ++i) out.push_back(p.eigenvalue);
  }
  return out;
}

int Spectrum::count_below(double k) const {
  int n = static_cast<int>(negative.size());
  if (k > 0.0) n += zero_multiplicity;
  for (const auto& p : points) {
    if (p.k < k) n += p.multiplicity;
  }
  return n;
}

std::vector<double> secular_roots(const MetricGraph& g, double k_max, double tol,
                                  SecularMethod method) {
  const auto s = eigenvalues(g, k_max, tol, method);
  std::vector<double> out;
  for (const auto& p : s.points) {
    for (int i = 0; i < p.multiplicity; ++i) out.push_back(p.k);
  }
  return out;
}

Spectrum eigenvalues(const MetricGraph& g, double k_max, double tol, SecularMethod method) {
  if (!(k_max > 0.0)) throw GraphError("k_max must be positive");
  if (!(tol >= 1e-13)) throw GraphError("tolerance must be at least 1e-13");
  if (g.edge_count() == 0) throw GraphError("graph has no edges");
  Spectrum s;
  s.k_max = k_max;
  s.zero_multiplicity = zero_mode_count(g);
  const double h = kPi / (8.0 * g.total_length());
  auto res = scan_points(g, k_max, tol, method, h, s.zero_multiplicity);
  if (!res.weyl_ok) {
    res = scan_points(g, k_max, tol, method, h / 8.0, s.zero_multiplicity);
    if (!res.weyl_ok) {
      throw NumericalError("eigenvalue count leaves the Weyl envelope near k = " +
                           std::to_string(res.bad_k) + " (interval [" +
                           std::to_string(res.bad_k - h) + ", " + std::to_string(res.bad_k + h) +
                           "])");
    }
  }
  s.points = std::move(res.points);
  if (has_negative_coupling(g)) s.negative = negative_eigenvalues(g);
  return s;
}

int count_below_negative(const MetricGraph& g, double kappa) {
  std::vector<int> index(g.vertex_count(), -1);
  int n = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!g.condition(v).is_dirichlet()) index[v] = n++;
  }
  if (n == 0) return 0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (index[v] >= 0) m(index[v], index[v]) += g.condition(v).coupling();
  }
  for (const auto& e : g.edges()) {
    const double x = kappa * e.length;
    const int ia = index[e.a];
    const int ib = index[e.b];
    if (e.is_loop()) {
      if (ia >= 0) m(ia, ia) += 2.0 * kappa * std::tanh(0.5 * x);
      continue;
    }
    const double coth = 1.0 / std::tanh(x);
    const double csch = 1.0 / std::sinh(x);
    if (ia >= 0) m(ia, ia) += kappa * coth;
    if (ib >= 0) m(ib, ib) += kappa * coth;
    if (ia >= 0 && ib >= 0) {
      m(ia, ib) -= kappa * csch;
      m(ib, ia) -= kappa * csch;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  int neg = 0;
  for (int i = 0; i < n; ++i) neg += es.eigenvalues()(i) < 0.0 ? 1 : 0;
  return neg;
}

std::vector<double> negative_eigenvalues(const MetricGraph& g) {
  std::vector<double> out;
  if (!has_negative_coupling(g)) return out;
  double max_alpha = 0.0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    max_alpha = std::max(max_alpha, std::abs(g.condition(v).coupling()));
  }
  double hi = std::max(10.0, 2.0 * max_alpha * g.max_degree());
  while (count_below_negative(g, hi) > 0) hi *= 2.0;
  const double lo = 1e-8;
  const int c_lo = count_below_negative(g, lo);
  std::function<void(double, int, double, int)> split = [&](double a, int ca, double b, int cb) {
    if (ca == cb) return;
    if (b - a < 1e-13 * std::max(1.0, b)) {
      for (int i = 0; i < ca - cb; ++i) out.push_back(0.5 * (a + b));
      return;
    }
    const double m = 0.5 * (a + b);
    const int cm = count_below_negative(g, m);
    split(a, ca, m, cm);
    split(m, cm, b, cb);
  };
  split(lo, c_lo, hi, 0);
  std::sort(out.begin(), out.end());
  return out;
}

double refine_root(const MetricGraph& g, double a, double b, double tol) {
  auto f = [&](double k) { return secular_real(g, k); };
  const double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa < 0.0) == (fb < 0.0)) throw NumericalError("refine_root: no sign change in bracket");
  return bisect(f, a, fa, b, tol);
}

}  // namespace qgraph
