#include "mta/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "mta/multi_index.hpp"

namespace mta {

namespace {

constexpr std::uint64_t kMaxOracleDim = 2'000'000;

Scalar sc(ScalarMode mode, long v) {
  return mode == ScalarMode::kExact ? Scalar::exact(v)
                                    : Scalar::floating(static_cast<double>(v));
}

CMatrix transposition_matrix(int n, int a, int b, ScalarMode mode) {
  std::vector<int> image(n);
  for (int i = 0; i < n; ++i) image[i] = i + 1;
  std::swap(image[a - 1], image[b - 1]);
  return CMatrix::permutation(image, mode);
}

CMatrix full_cycle_matrix(int n, ScalarMode mode) {
  std::vector<int> image(n);
  for (int i = 1; i < n; ++i) image[i - 1] = i + 1;
  image[n - 1] = 1;
  return CMatrix::permutation(image, mode);
}

// The 3-cycle sending 1 -> 2 -> i -> 1.
CMatrix three_cycle_matrix(int n, int i, ScalarMode mode) {
  std::vector<int> image(n);
  for (int j = 0; j < n; ++j) image[j] = j + 1;
  image[0] = 2;
  image[1] = i;
  image[i - 1] = 1;
  return CMatrix::permutation(image, mode);
}

CMatrix sign_flip_matrix(int n, int flips, ScalarMode mode) {
  std::vector<Scalar> d(n, sc(mode, 1));
  for (int i = 0; i < flips; ++i) d[i] = sc(mode, -1);
  return CMatrix::diagonal(d);
}

std::vector<CMatrix> symmetric_group_generators(int n, ScalarMode mode) {
  std::vector<CMatrix> out;
  if (n >= 2) {
    out.push_back(transposition_matrix(n, 1, 2, mode));
    out.push_back(full_cycle_matrix(n, mode));
  }
  return out;
}

std::vector<CMatrix> alternating_group_generators(int n, ScalarMode mode) {
  std::vector<CMatrix> out;
  for (int i = 3; i <= n; ++i) out.push_back(three_cycle_matrix(n, i, mode));
  return out;
}

std::vector<CMatrix> general_linear_lie_basis(int n, ScalarMode mode) {
  std::vector<CMatrix> out;
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) out.push_back(CMatrix::unit(n, a, b, mode));
  }
  return out;
}

std::vector<CMatrix> special_linear_lie_basis(int n, ScalarMode mode) {
  std::vector<CMatrix> out;
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      if (a != b) out.push_back(CMatrix::unit(n, a, b, mode));
    }
  }
  for (int a = 1; a < n; ++a) {
    out.push_back(CMatrix::unit(n, a, a, mode) - CMatrix::unit(n, n, n, mode));
  }
  return out;
}

std::vector<CMatrix> orthogonal_lie_basis(int n, ScalarMode mode) {
  std::vector<CMatrix> out;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      out.push_back(CMatrix::unit(n, a, b, mode) - CMatrix::unit(n, b, a, mode));
    }
  }
  return out;
}

// Basis of matrices X with X S + S X^T = 0 for the standard antisymmetric
// form S = [[0, I], [-I, 0]]: block shape [[A, B], [C, -A^T]] with B and C
// symmetric.
std::vector<CMatrix> symplectic_lie_basis(int n, ScalarMode mode) {
  int m = n / 2;
  std::vector<CMatrix> out;
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      out.push_back(CMatrix::unit(n, a, b, mode) -
                    CMatrix::unit(n, m + b, m + a, mode));
    }
  }
  for (int a = 1; a <= m; ++a) {
    for (int b = a; b <= m; ++b) {
      CMatrix top = CMatrix::unit(n, a, m + b, mode);
      if (a != b) top = top + CMatrix::unit(n, b, m + a, mode);
      out.push_back(top);
      CMatrix bottom = CMatrix::unit(n, m + a, b, mode);
      if (a != b) bottom = bottom + CMatrix::unit(n, m + b, a, mode);
      out.push_back(bottom);
    }
  }
  return out;
}

CMatrix root_of_unity_component_rep(int n, int k, ScalarMode mode) {
  std::vector<Scalar> d(n, sc(mode, 1));
  if (mode == ScalarMode::kExact) {
    switch (k) {
      case 1: break;
      case 2: d[0] = Scalar::exact(-1); break;
      case 4: d[0] = Scalar::exact(0, 1); break;
      default:
        throw std::invalid_argument(
            "exact presentation for slk:" + std::to_string(k) +
            " needs a k-th root of unity with Gaussian-rational entries; "
            "only k in {1, 2, 4} qualifies (use float mode)");
    }
  } else {
    double angle = 2.0 * std::acos(-1.0) / k;
    d[0] = Scalar::floating(std::cos(angle), std::sin(angle));
  }
  return CMatrix::diagonal(d);
}

}  // namespace

GroupPresentation group_presentation(const GroupSpec& g, ScalarMode mode) {
  g.validate();
  const int n = g.n;
  GroupPresentation p;
  switch (g.tag) {
    case GroupTag::kGL:
    case GroupTag::kU:
      p.lie_basis = general_linear_lie_basis(n, mode);
      break;
    case GroupTag::kSL:
      p.lie_basis = special_linear_lie_basis(n, mode);
      break;
    case GroupTag::kSLk:
      p.lie_basis = special_linear_lie_basis(n, mode);
      if (g.k_param >= 2) {
        p.finite_generators.push_back(root_of_unity_component_rep(n, g.k_param, mode));
      }
      break;
    case GroupTag::kMonomial:
      p.finite_generators = symmetric_group_generators(n, mode);
      for (int a = 1; a <= n; ++a) {
        p.lie_basis.push_back(CMatrix::unit(n, a, a, mode));
      }
      break;
    case GroupTag::kO:
      p.lie_basis = orthogonal_lie_basis(n, mode);
      p.finite_generators.push_back(sign_flip_matrix(n, 1, mode));
      break;
    case GroupTag::kSO:
      p.lie_basis = orthogonal_lie_basis(n, mode);
      break;
    case GroupTag::kSymmetric:
      p.finite_generators = symmetric_group_generators(n, mode);
      break;
    case GroupTag::kAlternating:
      p.finite_generators = alternating_group_generators(n, mode);
      break;
    case GroupTag::kSigned:
      p.finite_generators = symmetric_group_generators(n, mode);
      p.finite_generators.push_back(sign_flip_matrix(n, 1, mode));
      break;
    case GroupTag::kSignedAlternating:
      p.finite_generators = alternating_group_generators(n, mode);
      if (n >= 2) {
        p.finite_generators.push_back(sign_flip_matrix(n, 2, mode));
        p.finite_generators.push_back(transposition_matrix(n, 1, 2, mode) *
                                      sign_flip_matrix(n, 1, mode));
      }
      break;
    case GroupTag::kSp:
      p.lie_basis = symplectic_lie_basis(n, mode);
      break;
  }
  return p;
}

MixedTensor derivation_action(const CMatrix& x, const MixedTensor& z) {
  if (x.rows() != z.n || x.cols() != z.n) {
    throw std::invalid_argument("derivation_action: matrix size must match n");
  }
  if (x.mode() != z.mode) {
    throw std::invalid_argument("derivation_action: scalar mode mismatch");
  }
  MixedTensor out = make_zero_tensor(z.n, z.k, z.l, z.mode);
  for (const auto& [mi, c] : z.entries) {
    for (int p = 0; p < z.k; ++p) {
      int a = mi.up[p];
      for (int b = 1; b <= z.n; ++b) {
        const Scalar& xe = x.at(b - 1, a - 1);
        if (xe.negligible()) continue;
        MultiIndex m2 = mi;
        m2.up[p] = b;
        out.accumulate(m2, xe * c);
      }
    }
    for (int q = 0; q < z.l; ++q) {
      int a = mi.down[q];
      for (int b = 1; b <= z.n; ++b) {
        const Scalar& xe = x.at(a - 1, b - 1);
        if (xe.negligible()) continue;
        MultiIndex m2 = mi;
        m2.down[q] = b;
        out.accumulate(m2, -(xe * c));
      }
    }
  }
  return out;
}

namespace {

int checked_grade_dim(int n, int k, int l) {
  std::uint64_t dim = grade_dimension(n, k, l);
  if (dim > kMaxOracleDim) {
    throw std::invalid_argument("invariant_space: grade dimension too large");
  }
  return static_cast<int>(dim);
}

SubspaceBasis exact_invariant_space(const GroupPresentation& pres, int n, int k,
                                    int l, double tol) {
  const int dim = checked_grade_dim(n, k, l);
  SpanBuilder rows(n, k, l, ScalarMode::kExact, tol);

  // Constraints are built column by column (image of each basis tensor) and
  // transposed into equation rows on the coefficients.
  auto add_constraint = [&](auto&& column_image) {
    std::vector<ExactRow> transposed(dim);
    for (int c = 0; c < dim; ++c) {
      MultiIndex mi = unflatten_index(c, n, k, l);
      MixedTensor img = column_image(make_basis_tensor(n, mi.up, mi.down));
      for (const auto& [omi, v] : img.entries) {
        auto r = static_cast<std::uint32_t>(flatten_index(omi, n));
        transposed[r].push_back({static_cast<std::uint32_t>(c), v.exact_value()});
      }
    }
    for (auto& row : transposed) {
      if (!row.empty()) rows.add_exact_row(row);
    }
  };

  for (const CMatrix& u : pres.finite_generators) {
    GroupElement ge = GroupElement::from_matrix(u);
    add_constraint([&](const MixedTensor& e) {
      return subtract(apply_group_element(e, ge), e);
    });
  }
  for (const CMatrix& x : pres.lie_basis) {
    add_constraint([&](const MixedTensor& e) { return derivation_action(x, e); });
  }

  SubspaceBasis rref = rows.finalize();
  std::vector<char> is_pivot(dim, 0);
  for (const auto& row : rref.exact_rows) is_pivot[row.front().first] = 1;

  SpanBuilder out(n, k, l, ScalarMode::kExact, tol);
  for (int f = 0; f < dim; ++f) {
    if (is_pivot[f]) continue;
    ExactRow v;
    for (const auto& row : rref.exact_rows) {
      auto it = std::lower_bound(
          row.begin(), row.end(), static_cast<std::uint32_t>(f),
          [](const auto& e, std::uint32_t val) { return e.first < val; });
      if (it != row.end() && it->first == static_cast<std::uint32_t>(f)) {
        v.push_back({row.front().first, -it->second});
      }
    }
    v.push_back({static_cast<std::uint32_t>(f), GaussianRational(1, 0)});
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.add_exact_row(v);
  }
  return out.finalize();
}

Eigen::MatrixXcd dense_constraint(int n, int k, int l, int dim,
                                  const std::function<MixedTensor(const MixedTensor&)>&
                                      column_image) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim, dim);
  for (int col = 0; col < dim; ++col) {
    MultiIndex mi = unflatten_index(col, n, k, l);
    MixedTensor img =
        column_image(make_basis_tensor(n, mi.up, mi.down, ScalarMode::kFloat));
    for (const auto& [omi, v] : img.entries) {
      c(static_cast<Eigen::Index>(flatten_index(omi, n)), col) = v.float_value();
    }
  }
  return c;
}

SubspaceBasis float_invariant_space(const GroupPresentation& pres, int n, int k,
                                    int l, double tol) {
  const int dim = checked_grade_dim(n, k, l);
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(dim, dim);

  auto intersect_kernel = [&](const Eigen::MatrixXcd& constraint) {
    if (basis.cols() == 0) return;
    Eigen::MatrixXcd cb = constraint * basis;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cb, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double cutoff = tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    Eigen::MatrixXcd v = svd.matrixV();
    basis = basis * v.rightCols(v.cols() - rank);
  };

  for (const CMatrix& u : pres.finite_generators) {
    GroupElement ge = GroupElement::from_matrix(u);
    intersect_kernel(dense_constraint(n, k, l, dim, [&](const MixedTensor& e) {
      return subtract(apply_group_element(e, ge), e);
    }));
  }
  for (const CMatrix& x : pres.lie_basis) {
    intersect_kernel(dense_constraint(n, k, l, dim, [&](const MixedTensor& e) {
      return derivation_action(x, e);
    }));
  }

  SpanBuilder out(n, k, l, ScalarMode::kFloat, tol);
  for (Eigen::Index col = 0; col < basis.cols(); ++col) {
    FloatRow row(dim);
    for (int r = 0; r < dim; ++r) row[r] = basis(r, col);
    out.add_float_row(row);
  }
  return out.finalize();
}

}  // namespace

SubspaceBasis invariant_space(const GroupSpec& g, int k, int l, ScalarMode mode,
                              double tol) {
  g.validate();
  GroupPresentation pres = group_presentation(g, mode);
  if (mode == ScalarMode::kExact) {
    return exact_invariant_space(pres, g.n, k, l, tol);
  }
  return float_invariant_space(pres, g.n, k, l, tol);
}

std::vector<CMatrix> enumerate_finite_group(const std::vector<CMatrix>& generators,
                                            std::size_t max_size) {
  if (generators.empty()) {
    throw std::invalid_argument("enumerate_finite_group: need at least one generator");
  }
  const int n = generators.front().rows();
  for (const CMatrix& g : generators) {
    if (g.rows() != n || g.cols() != n) {
      throw std::invalid_argument("enumerate_finite_group: mixed matrix sizes");
    }
    if (g.mode() != ScalarMode::kExact) {
      throw std::invalid_argument(
          "enumerate_finite_group: needs exact-mode matrices for stable keys");
    }
  }
  std::vector<CMatrix> out;
  std::unordered_set<std::string> seen;
  std::queue<CMatrix> pending;
  CMatrix id = CMatrix::identity(n, ScalarMode::kExact);
  seen.insert(id.str());
  out.push_back(id);
  pending.push(id);
  while (!pending.empty()) {
    CMatrix m = pending.front();
    pending.pop();
    for (const CMatrix& g : generators) {
      CMatrix next = m * g;
      if (seen.insert(next.str()).second) {
        if (out.size() >= max_size) {
          throw std::runtime_error("enumerate_finite_group: exceeded max_size");
        }
        out.push_back(next);
        pending.push(next);
      }
    }
  }
  return out;
}

MixedTensor reynolds_average(const std::vector<CMatrix>& elements,
                             const MixedTensor& z) {
  if (elements.empty()) {
    throw std::invalid_argument("reynolds_average: empty element list");
  }
  MixedTensor acc = make_zero_tensor(z.n, z.k, z.l, z.mode);
  for (const CMatrix& u : elements) {
    acc = add(acc, apply_group_element(z, GroupElement::from_matrix(u)));
  }
  Scalar count = sc(z.mode, static_cast<long>(elements.size()));
  return scale(Scalar::one(z.mode) / count, acc);
}

SubspaceBasis reynolds_invariant_space(int n, int k, int l,
                                       const std::vector<CMatrix>& elements,
                                       ScalarMode mode, double tol) {
  if (elements.empty()) {
    throw std::invalid_argument("reynolds_invariant_space: empty element list");
  }
  const int dim = checked_grade_dim(n, k, l);
  std::vector<GroupElement> action;
  action.reserve(elements.size());
  for (const CMatrix& u : elements) {
    CMatrix m = u.mode() == mode ? u : u.to_float();
    action.push_back(GroupElement::from_matrix(m));
  }
  Scalar inv = Scalar::one(mode) / sc(mode, static_cast<long>(elements.size()));
  SpanBuilder out(n, k, l, mode, tol);
  for (int c = 0; c < dim; ++c) {
    MultiIndex mi = unflatten_index(c, n, k, l);
    MixedTensor e = make_basis_tensor(n, mi.up, mi.down, mode);
    MixedTensor acc = make_zero_tensor(n, k, l, mode);
    for (const GroupElement& ge : action) {
      acc = add(acc, apply_group_element(e, ge));
    }
    out.add(scale(inv, acc));
  }
  return out.finalize();
}

namespace {

Eigen::MatrixXcd to_eigen(const CMatrix& m) {
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out(r, c) = m.at(r, c).float_value();
  }
  return out;
}

CMatrix from_eigen(const Eigen::MatrixXcd& m) {
  CMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()),
              ScalarMode::kFloat);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out.at(static_cast<int>(r), static_cast<int>(c)) =
          Scalar::floating(m(r, c));
    }
  }
  return out;
}

Eigen::MatrixXcd kronecker(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct BatchSpectrum {
  int rank = 0;
  Eigen::MatrixXcd vectors;
};

BatchSpectrum monte_carlo_batch(CompactFamily family, int n, int k, int l,
                                int samples, std::uint64_t seed,
                                double eigen_cutoff) {
  const int dim = checked_grade_dim(n, k, l);
  std::mt19937_64 rng(seed);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(dim, dim);
  for (int s = 0; s < samples; ++s) {
    Eigen::MatrixXcd u = to_eigen(haar_sample(family, n, rng));
    Eigen::MatrixXcd uc = u.conjugate();
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Ones(1, 1);
    for (int p = 0; p < k; ++p) rho = kronecker(rho, u);
    for (int q = 0; q < l; ++q) rho = kronecker(rho, uc);
    acc += rho;
  }
  acc /= static_cast<double>(samples);
  Eigen::MatrixXcd herm = (acc + acc.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("monte_carlo_invariant_space: eigensolver failed");
  }
  const auto& vals = es.eigenvalues();  // ascending
  int rank = 0;
  for (Eigen::Index i = vals.size(); i-- > 0;) {
    if (vals(i) > 1.0 - eigen_cutoff) {
      ++rank;
    } else {
      break;
    }
  }
  BatchSpectrum out;
  out.rank = rank;
  out.vectors = es.eigenvectors().rightCols(rank);
  return out;
}

}  // namespace

CMatrix haar_sample(CompactFamily family, int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (family == CompactFamily::kRealOrthogonal) {
    Eigen::MatrixXd g(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) g(r, c) = gauss(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
      if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    }
    return from_eigen(q.cast<std::complex<double>>());
  }
  Eigen::MatrixXcd g(n, n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      g(r, c) = std::complex<double>(gauss(rng), gauss(rng)) * inv_sqrt2;
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    std::complex<double> d = r(i, i);
    double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  if (family == CompactFamily::kSpecialUnitary) {
    std::complex<double> det = q.determinant();
    double angle = std::arg(det);
    q *= std::exp(std::complex<double>(0.0, -angle / n));
  }
  return from_eigen(q);
}

MonteCarloResult monte_carlo_invariant_space(CompactFamily family, int n, int k,
                                             int l, int samples, std::uint64_t seed,
                                             double tol, double eigen_cutoff) {
  if (samples < 1) {
    throw std::invalid_argument("monte_carlo_invariant_space: samples must be >= 1");
  }
  std::uint64_t state = seed;
  std::uint64_t seed_a = splitmix64(state);
  std::uint64_t seed_b = splitmix64(state);
  BatchSpectrum first = monte_carlo_batch(family, n, k, l, samples, seed_a, eigen_cutoff);
  BatchSpectrum second =
      monte_carlo_batch(family, n, k, l, samples, seed_b, eigen_cutoff);
  if (first.rank != second.rank) {
    std::ostringstream os;
    os << "monte_carlo_invariant_space: batch ranks disagree (" << first.rank
       << " vs " << second.rank << "); increase samples";
    throw std::runtime_error(os.str());
  }
  const int dim = checked_grade_dim(n, k, l);
  SpanBuilder builder(n, k, l, ScalarMode::kFloat, tol);
  for (Eigen::Index col = 0; col < first.vectors.cols(); ++col) {
    FloatRow row(dim);
    for (int r = 0; r < dim; ++r) row[r] = first.vectors(r, col);
    builder.add_float_row(row);
  }
  MonteCarloResult out{builder.finalize(), first.rank, second.rank, samples};
  return out;
}

}  // namespace mta
