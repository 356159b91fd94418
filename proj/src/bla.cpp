#include "screenlab/bla.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/random/sobol.hpp>

#include "screenlab/sampling.hpp"

namespace screenlab {

namespace {

constexpr std::size_t kMinLowDiscrepancyPoints = std::size_t{1} << 16;

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

std::size_t nodes_per_axis(std::size_t dim, std::size_t n_quad) {
  const double root = std::pow(static_cast<double>(n_quad), 1.0 / static_cast<double>(dim));
  std::size_t k = static_cast<std::size_t>(std::floor(root));
  k = std::max<std::size_t>(k, 1);
  auto power = [dim](std::size_t base) {
    std::size_t r = 1;
    for (std::size_t d = 0; d < dim; ++d) r *= base;
    return r;
  };
  while (power(k) < n_quad) ++k;
  return k;
}

// Visits the first `count` points of a Sobol' sequence XOR-shifted by a
// per-dimension 32-bit key.
void visit_shifted_sobol(std::size_t count, std::size_t dim, std::uint64_t seed,
                         const std::function<void(std::span<const double>)>& visit) {
  boost::random::sobol_engine<std::uint32_t, 32> gen(static_cast<unsigned>(dim));
  SeededStream shift_stream(seed, 0x50b01ULL);
  std::vector<std::uint32_t> shift(dim);
  for (auto& s : shift) s = static_cast<std::uint32_t>(shift_stream.next_u64() >> 32);
  std::vector<double> point(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t d = 0; d < dim; ++d) {
      const auto bits = static_cast<std::uint32_t>(gen()) ^ shift[d];
      point[d] = static_cast<double>(bits) * 0x1.0p-32;
    }
    visit(point);
  }
}

}  // namespace

Quadrature::Quadrature(std::size_t dim, std::size_t n_quad) : dim_(dim) {
  if (dim == 0) throw InvalidShape("quadrature dimension must be positive");
  if (dim <= 3) {
    per_axis_ = nodes_per_axis(dim, n_quad);
    size_ = 1;
    for (std::size_t d = 0; d < dim; ++d) size_ *= per_axis_;
  } else {
    size_ = std::max(kMinLowDiscrepancyPoints, next_pow2(n_quad));
  }
}

void Quadrature::for_each(const std::function<void(std::span<const double>)>& visit) const {
  if (dim_ > 3) {
    visit_shifted_sobol(size_, dim_, 0x1ea57ULL, visit);
    return;
  }
  const double h = 1.0 / static_cast<double>(per_axis_);
  std::vector<std::size_t> counter(dim_, 0);
  std::vector<double> point(dim_);
  for (std::size_t node = 0; node < size_; ++node) {
    for (std::size_t d = 0; d < dim_; ++d) point[d] = (static_cast<double>(counter[d]) + 0.5) * h;
    visit(point);
    for (std::size_t d = 0; d < dim_; ++d) {
      if (++counter[d] < per_axis_) break;
      counter[d] = 0;
    }
  }
}

BlaResult bla_closed_form(const IntegrableFunction& f, std::size_t n_quad) {
  if (n_quad < 1024) throw InputError("bla_closed_form needs n_quad >= 1024");
  Quadrature quad(f.dim, n_quad);
  double sum_f = 0.0;
  std::vector<double> sum_xf(f.dim, 0.0);
  quad.for_each([&](std::span<const double> x) {
    const double v = f.eval(x);
    if (!std::isfinite(v)) throw NonFiniteEvaluation("function is not finite at a quadrature node");
    sum_f += v;
    for (std::size_t j = 0; j < f.dim; ++j) sum_xf[j] += x[j] * v;
  });
  const double w = 1.0 / static_cast<double>(quad.size());
  BlaResult out;
  out.quadrature_points = quad.size();
  out.integral = sum_f * w;
  out.margins.resize(static_cast<Eigen::Index>(f.dim));
  out.coefficients.resize(static_cast<Eigen::Index>(f.dim));
  double half_sum = 0.0;
  for (std::size_t j = 0; j < f.dim; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    out.margins[jj] = sum_xf[j] * w - 0.5 * out.integral;
    out.coefficients[jj] = 12.0 * out.margins[jj];
    half_sum += 0.5 * out.coefficients[jj];
  }
  out.intercept = out.integral - half_sum;
  return out;
}

double bla_margin(const BlaResult& bla, const VariableSet& active) {
  double tau = std::numeric_limits<double>::infinity();
  for (auto j : active) {
    if (j >= static_cast<std::size_t>(bla.margins.size())) {
      throw IndexExceedsDimension("active index " + std::to_string(j + 1) + " exceeds dimension");
    }
    tau = std::min(tau, std::abs(bla.margins[static_cast<Eigen::Index>(j)]));
  }
  return tau;
}

Matrix precision_inverse(std::size_t m) {
  if (m < 1) throw InputError("precision_inverse needs m >= 1");
  const auto size = static_cast<Eigen::Index>(m + 1);
  Matrix inv = Matrix::Zero(size, size);
  inv(0, 0) = (1.0 + 3.0 * static_cast<double>(m)) / 12.0;
  for (Eigen::Index k = 1; k < size; ++k) {
    inv(0, k) = -0.5;
    inv(k, 0) = -0.5;
    inv(k, k) = 1.0;
  }
  return 12.0 * inv;
}

Matrix moment_matrix(std::size_t m) {
  const auto size = static_cast<Eigen::Index>(m + 1);
  Matrix u = Matrix::Constant(size, size, 0.25);
  u(0, 0) = 1.0;
  for (Eigen::Index k = 1; k < size; ++k) {
    u(0, k) = 0.5;
    u(k, 0) = 0.5;
    u(k, k) = 1.0 / 3.0;
  }
  return u;
}

SubsetModel ls_fit(const Matrix& x, const Vector& y, const VariableSet& subset) {
  const auto n = x.rows();
  if (y.size() != n) {
    throw DimensionMismatch("response length " + std::to_string(y.size()) +
                            " does not match design rows " + std::to_string(n));
  }
  if (static_cast<Eigen::Index>(subset.size()) >= n) {
    throw SubsetTooLarge("subset of size " + std::to_string(subset.size()) +
                         " needs more than n = " + std::to_string(n) + " runs");
  }
  if (auto mx = subset.max(); mx && *mx >= static_cast<std::size_t>(x.cols())) {
    throw IndexExceedsDimension("subset index " + std::to_string(*mx + 1) + " exceeds p = " +
                                std::to_string(x.cols()));
  }
  const auto k = static_cast<Eigen::Index>(subset.size());
  Matrix design(n, k + 1);
  design.col(0).setOnes();
  for (Eigen::Index c = 0; c < k; ++c)
    design.col(c + 1) = x.col(static_cast<Eigen::Index>(subset[static_cast<std::size_t>(c)]));

  const Matrix gram = design.transpose() * design;
  const Vector rhs = design.transpose() * y;
  Eigen::JacobiSVD<Matrix> svd(gram, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv[sv.size() - 1] >= 1e-10 * sv[0])) {
    throw SingularGram("bordered Gram matrix is numerically singular for subset " +
                       to_string(subset));
  }
  const Vector beta = svd.solve(rhs);

  SubsetModel model;
  model.subset = subset;
  model.intercept = beta[0];
  model.coefficients = beta.tail(k);
  model.rss = (y - design * beta).squaredNorm();
  return model;
}

SubsetModel ls_fit(const DesignMatrix& x, const ResponseVector& y, const VariableSet& subset) {
  if (y.size() != x.n()) {
    throw DimensionMismatch("response length does not match design rows");
  }
  return ls_fit(x.matrix(), y.vector(), subset);
}

double rss(const Matrix& x, const Vector& y, const VariableSet& subset) {
  return ls_fit(x, y, subset).rss;
}

double rss(const DesignMatrix& x, const ResponseVector& y, const VariableSet& subset) {
  return ls_fit(x, y, subset).rss;
}

Matrix low_discrepancy_points(std::size_t count, std::size_t dim, std::uint64_t scramble_seed) {
  Matrix pts(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
  Eigen::Index row = 0;
  visit_shifted_sobol(count, dim, scramble_seed, [&](std::span<const double> x) {
    for (std::size_t d = 0; d < dim; ++d) pts(row, static_cast<Eigen::Index>(d)) = x[d];
    ++row;
  });
  return pts;
}

}  // namespace screenlab
