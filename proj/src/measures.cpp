#include "graphon/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "graphon/errors.hpp"
#include "graphon/lp.hpp"

namespace graphon {

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms, std::vector<double> masses) {
  if (atoms.size() != masses.size()) throw Error(ErrorKind::DimensionMismatch, "atoms and masses differ in length");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!(atoms[i] >= 0.0 && atoms[i] <= 1.0)) {
      throw Error(ErrorKind::ValueOutOfRange, "atom " + std::to_string(i) + " lies outside [0, 1]");
    }
    if (!(masses[i] > 0.0) || !std::isfinite(masses[i])) {
      throw Error(ErrorKind::InvalidArgument, "mass " + std::to_string(i) + " must be positive");
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  for (std::size_t i : order) {
    if (!atoms_.empty() && atoms[i] - atoms_.back() <= kAtomMergeTolerance) {
      masses_.back() += masses[i];
    } else {
      atoms_.push_back(atoms[i]);
      masses_.push_back(masses[i]);
    }
  }
  total_ = std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

DiscreteMeasure DiscreteMeasure::dirac(double x, double mass) { return DiscreteMeasure({x}, {mass}); }

double DiscreteMeasure::integral(const std::function<double(double)>& f) const {
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) total += masses_[i] * f(atoms_[i]);
  return total;
}

bool DiscreteMeasure::approx_equal(const DiscreteMeasure& other, double tol) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (std::abs(atoms_[i] - other.atoms_[i]) > tol || std::abs(masses_[i] - other.masses_[i]) > tol) return false;
  }
  return true;
}

DiscreteMeasure range_frequencies(const StepGraphon& w) {
  std::vector<double> atoms, masses;
  for (std::size_t i = 0; i < w.blocks(); ++i) {
    if (w.weight(i) <= 0.0) continue;
    for (std::size_t j = 0; j < w.blocks(); ++j) {
      if (w.weight(j) <= 0.0) continue;
      atoms.push_back(w.value(i, j));
      masses.push_back(w.weight(i) * w.weight(j));
    }
  }
  return DiscreteMeasure(std::move(atoms), std::move(masses));
}

DiscreteMeasure degree_frequencies(const StepGraphon& w) {
  const StepFunction1D deg = degree_function(w);
  std::vector<double> masses;
  for (std::size_t i = 0; i + 1 < deg.breakpoints().size(); ++i)
    masses.push_back(deg.breakpoints()[i + 1] - deg.breakpoints()[i]);
  return DiscreteMeasure(deg.values(), std::move(masses));
}

DiscreteMeasure add_measures(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<double> atoms = a.atoms();
  std::vector<double> masses = a.masses();
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  masses.insert(masses.end(), b.masses().begin(), b.masses().end());
  return DiscreteMeasure(std::move(atoms), std::move(masses));
}

double flatness_residual(const DiscreteMeasure& l1, const DiscreteMeasure& l2, const Matrix& psi) {
  const std::size_t m = l1.size();
  const std::size_t n = l2.size();
  if (psi.rows() != m || psi.cols() != n) throw Error(ErrorKind::DimensionMismatch, "witness shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0.0, bary = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += psi(i, j);
      bary += psi(i, j) * l2.atoms()[j];
      worst = std::max(worst, -psi(i, j));
    }
    worst = std::max(worst, std::abs(row - l1.masses()[i]));
    worst = std::max(worst, std::abs(bary - l1.masses()[i] * l1.atoms()[i]));
  }
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < m; ++i) col += psi(i, j);
    worst = std::max(worst, std::abs(col - l2.masses()[j]));
  }
  return worst;
}

namespace {

template <class T>
T absolute(const T& v) {
  return v < T(0) ? T(-v) : v;
}

// Variables psi(i, j) at i * n + j; rows, columns, then barycenters.
template <class T>
lp::Result<T> solve_flatness(const std::vector<T>& x, const std::vector<T>& p, const std::vector<T>& y,
                             const std::vector<T>& q, const lp::Tolerances<T>& tol) {
  const std::size_t m = x.size();
  const std::size_t n = y.size();
  const std::size_t vars = m * n;
  std::vector<std::vector<T>> a(2 * m + n, std::vector<T>(vars, T(0)));
  std::vector<T> b(2 * m + n, T(0));
  std::vector<T> c(vars, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t v = i * n + j;
      a[i][v] = T(1);
      a[m + j][v] = T(1);
      a[m + n + i][v] = T(y[j] - x[i]);
      c[v] = absolute(T(x[i] - y[j]));
    }
    b[i] = p[i];
    b[m + n + i] = T(0);
  }
  for (std::size_t j = 0; j < n; ++j) b[m + j] = q[j];
  return lp::solve(a, b, c, tol);
}

// Largest excess of t -> int (x - t)_+ dL1 over the same for L2, checked at
// every atom; both sides are piecewise linear with kinks only there.
template <class T>
T call_excess(const std::vector<T>& x, const std::vector<T>& p, const std::vector<T>& y, const std::vector<T>& q) {
  auto call = [](const std::vector<T>& atoms, const std::vector<T>& masses, const T& t) {
    T total(0);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (atoms[i] > t) total += masses[i] * (atoms[i] - t);
    return total;
  };
  T worst(0);
  for (const auto* atoms : {&x, &y})
    for (const T& t : *atoms) {
      const T gap = call(x, p, t) - call(y, q, t);
      if (gap > worst) worst = gap;
    }
  return worst;
}

FlatnessWitness infeasible(std::string reason, double residual = 0.0) {
  FlatnessWitness w;
  w.feasible = false;
  w.reason = std::move(reason);
  w.residual = residual;
  return w;
}

Matrix to_matrix(const std::vector<double>& x, std::size_t m, std::size_t n) {
  Matrix psi(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) psi(i, j) = std::max(0.0, x[i * n + j]);
  return psi;
}

FlatnessWitness feasible_witness(const DiscreteMeasure& l1, const DiscreteMeasure& l2, Matrix psi) {
  FlatnessWitness w;
  w.feasible = true;
  w.residual = flatness_residual(l1, l2, psi);
  w.reason = "feasible";
  w.coupling = Coupling(std::move(psi), l1.masses(), l2.masses());
  return w;
}

std::vector<double> to_doubles(const std::vector<mpq_class>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.get_d());
  return out;
}

}  // namespace

RationalMeasure to_rational(const DiscreteMeasure& m) {
  RationalMeasure r;
  for (double a : m.atoms()) r.atoms.emplace_back(a);
  for (double x : m.masses()) r.masses.emplace_back(x);
  return r;
}

FlatnessWitness check_flatter(const DiscreteMeasure& l1, const DiscreteMeasure& l2, double tol, bool exact_rational) {
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be nonnegative");
  if (std::abs(l1.total() - l2.total()) > tol) return infeasible("total masses differ");
  const double mean1 = l1.integral([](double x) { return x; });
  const double mean2 = l2.integral([](double x) { return x; });
  if (std::abs(mean1 - mean2) > tol) return infeasible("first moments differ");
  if (exact_rational) return check_flatter_exact(to_rational(l1), to_rational(l2));
  const double excess = call_excess(l1.atoms(), l1.masses(), l2.atoms(), l2.masses());
  if (excess > tol) return infeasible("convex order violated by " + std::to_string(excess), excess);

  Matrix psi;
  double residual = INFINITY;
  for (double pivot_tol : {1e-9, 1e-11, 1e-7}) {
    const lp::Tolerances<double> lp_tol{pivot_tol, 1e-9, tol};
    const auto result = solve_flatness(l1.atoms(), l1.masses(), l2.atoms(), l2.masses(), lp_tol);
    if (result.status == lp::Status::IterationLimit) throw Error(ErrorKind::SolverFailure, "pivot limit reached");
    if (result.status == lp::Status::Infeasible) {
      return infeasible("no coupling satisfies the barycenter constraints", result.infeasibility);
    }
    if (result.status != lp::Status::Optimal) throw Error(ErrorKind::SolverFailure, "unexpected LP status");
    psi = to_matrix(result.x, l1.size(), l2.size());
    residual = flatness_residual(l1, l2, psi);
    if (residual <= 1e-9) return feasible_witness(l1, l2, std::move(psi));
  }

  // Polish in exact arithmetic when rounding left the witness too loose.
  const FlatnessWitness exact = check_flatter_exact(to_rational(l1), to_rational(l2));
  if (exact.feasible) return feasible_witness(l1, l2, exact.coupling.matrix());
  throw Error(ErrorKind::SolverFailure,
              "floating LP feasible but witness residual " + std::to_string(residual));
}

FlatnessWitness check_flatter_exact(const RationalMeasure& l1, const RationalMeasure& l2) {
  auto normalize = [](const RationalMeasure& m) {
    if (m.atoms.size() != m.masses.size()) throw Error(ErrorKind::DimensionMismatch, "atoms and masses differ");
    std::map<mpq_class, mpq_class> merged;
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
      mpq_class atom = m.atoms[i], mass = m.masses[i];
      atom.canonicalize();
      mass.canonicalize();
      if (atom < 0 || atom > 1) throw Error(ErrorKind::ValueOutOfRange, "atom outside [0, 1]");
      if (mass <= 0) throw Error(ErrorKind::InvalidArgument, "mass must be positive");
      merged[atom] += mass;
    }
    RationalMeasure out;
    for (auto& [a, x] : merged) {
      out.atoms.push_back(a);
      out.masses.push_back(x);
    }
    return out;
  };
  const RationalMeasure a = normalize(l1);
  const RationalMeasure b = normalize(l2);
  mpq_class ta = 0, tb = 0, ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    ta += a.masses[i];
    ma += a.masses[i] * a.atoms[i];
  }
  for (std::size_t j = 0; j < b.atoms.size(); ++j) {
    tb += b.masses[j];
    mb += b.masses[j] * b.atoms[j];
  }
  if (ta != tb) return infeasible("total masses differ");
  if (ma != mb) return infeasible("first moments differ");
  const mpq_class excess = call_excess(a.atoms, a.masses, b.atoms, b.masses);
  if (excess > 0) return infeasible("convex order violated by " + std::to_string(excess.get_d()), excess.get_d());

  const lp::Tolerances<mpq_class> tol{mpq_class(0), mpq_class(0), mpq_class(0)};
  const auto result = solve_flatness(a.atoms, a.masses, b.atoms, b.masses, tol);
  if (result.status == lp::Status::IterationLimit) throw Error(ErrorKind::SolverFailure, "pivot limit reached");
  if (result.status == lp::Status::Infeasible) {
    return infeasible("no coupling satisfies the barycenter constraints", result.infeasibility.get_d());
  }
  if (result.status != lp::Status::Optimal) throw Error(ErrorKind::SolverFailure, "unexpected LP status");
  const DiscreteMeasure da(to_doubles(a.atoms), to_doubles(a.masses));
  const DiscreteMeasure db(to_doubles(b.atoms), to_doubles(b.masses));
  if (da.size() != a.atoms.size() || db.size() != b.atoms.size()) {
    throw Error(ErrorKind::SolverFailure, "rational atoms collapse in double precision");
  }
  Matrix psi(a.atoms.size(), b.atoms.size());
  for (std::size_t i = 0; i < psi.rows(); ++i)
    for (std::size_t j = 0; j < psi.cols(); ++j) psi(i, j) = result.x[i * psi.cols() + j].get_d();
  FlatnessWitness w;
  w.feasible = true;
  w.reason = "feasible (exact)";
  w.residual = flatness_residual(da, db, psi);
  w.coupling = Coupling::from_matrix(std::move(psi));
  return w;
}

Coupling compose_couplings(const Coupling& p1, const Coupling& p2, const DiscreteMeasure& mid) {
  const std::size_t n = mid.size();
  if (p1.matrix().cols() != n || p2.matrix().rows() != n) {
    throw Error(ErrorKind::MarginalMismatch, "couplings do not share the middle measure");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::abs(p1.col_marginal()[j] - mid.masses()[j]) > kMarginalTolerance ||
        std::abs(p2.row_marginal()[j] - mid.masses()[j]) > kMarginalTolerance) {
      throw Error(ErrorKind::MarginalMismatch, "middle marginal " + std::to_string(j) + " does not match");
    }
  }
  const Matrix& a = p1.matrix();
  const Matrix& b = p2.matrix();
  Matrix xi(a.rows(), b.cols());
  for (std::size_t j = 0; j < n; ++j) {
    const double q = mid.masses()[j];
    if (q <= 0.0) continue;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (a(i, j) == 0.0) continue;
      const double f = a(i, j) / q;
      for (std::size_t l = 0; l < b.cols(); ++l) xi(i, l) += f * b(j, l);
    }
  }
  return Coupling(std::move(xi), p1.row_marginal(), p2.col_marginal());
}

std::vector<ConvexFunction> default_convex_family() {
  return {
      {"x^2", [](double x) { return x * x; }},
      {"|x-1/4|", [](double x) { return std::abs(x - 0.25); }},
      {"|x-1/2|", [](double x) { return std::abs(x - 0.5); }},
      {"|x-3/4|", [](double x) { return std::abs(x - 0.75); }},
      {"exp", [](double x) { return std::exp(x); }},
  };
}

ConvexOrderReport convex_order_test(const DiscreteMeasure& l1, const DiscreteMeasure& l2,
                                    const std::vector<ConvexFunction>& family) {
  if (family.empty()) throw Error(ErrorKind::InvalidArgument, "empty function family");
  ConvexOrderReport report;
  for (const auto& fn : family) {
    ConvexOrderEntry e{fn.name, l1.integral(fn.f), l2.integral(fn.f), true};
    e.holds = e.lhs <= e.rhs + 1e-10;
    if (!e.holds) ++report.violations;
    report.entries.push_back(std::move(e));
  }
  return report;
}

}  // namespace graphon
