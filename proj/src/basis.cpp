#include "screenlab/basis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace screenlab {

BasisKind BasisKind::linear() {
  return BasisKind(BasisTag::Linear, [](double x) { return x; });
}

BasisKind BasisKind::quadratic() {
  return BasisKind(BasisTag::Quadratic, [](double x) { return -4.0 * x * x + 4.0 * x - 2.0 / 3.0; });
}

BasisKind BasisKind::custom(std::function<double(double)> b) {
  return BasisKind(BasisTag::Custom, std::move(b));
}

double BasisKind::operator()(double x) const { return b_(x); }

double BasisKind::mean() const {
  switch (tag_) {
    case BasisTag::Linear: return 0.5;
    case BasisTag::Quadratic: return 0.0;
    case BasisTag::Custom: break;
  }
  constexpr int kNodes = 1 << 20;
  double sum = 0.0;
  for (int i = 0; i < kNodes; ++i) sum += b_((i + 0.5) / kNodes);
  return sum / kNodes;
}

Matrix apply_basis(const Matrix& x, const BasisKind& b) {
  if (b.tag() == BasisTag::Linear) return x;
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double v = b(x(i, j));
      if (!std::isfinite(v)) {
        throw NonFiniteBasisValue("basis is not finite at entry (" + std::to_string(i + 1) + ", " +
                                  std::to_string(j + 1) + ")");
      }
      out(i, j) = v;
    }
  }
  return out;
}

Matrix apply_basis(const DesignMatrix& x, const BasisKind& b) { return apply_basis(x.matrix(), b); }

double general_bla_coefficient(const IntegrableFunction& f, std::size_t j, const BasisKind& b,
                               std::size_t n_quad) {
  if (j >= f.dim) {
    throw IndexExceedsDimension("variable " + std::to_string(j + 1) + " exceeds dimension " +
                                std::to_string(f.dim));
  }
  Quadrature quad(f.dim, n_quad);
  // The basis mean comes from the same nodes, so the rule's bias cancels in
  // the covariance instead of adding to it.
  double sum_f = 0.0, sum_b = 0.0, sum_bf = 0.0;
  quad.for_each([&](std::span<const double> x) {
    const double v = f.eval(x);
    if (!std::isfinite(v)) throw NonFiniteEvaluation("function is not finite at a quadrature node");
    const double bx = b(x[j]);
    sum_f += v;
    sum_b += bx;
    sum_bf += bx * v;
  });
  const double w = 1.0 / static_cast<double>(quad.size());
  return sum_bf * w - (sum_b * w) * (sum_f * w);
}

BasisPolicy parse_basis_policy(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (s == "linear") return BasisPolicy::Linear;
  if (s == "quadratic") return BasisPolicy::Quadratic;
  if (s == "two-stage" || s == "two_stage" || s == "twostage") return BasisPolicy::TwoStage;
  throw InputError("unknown basis policy '" + std::string(name) + "'");
}

std::string_view to_string(BasisPolicy policy) {
  switch (policy) {
    case BasisPolicy::Linear: return "linear";
    case BasisPolicy::Quadratic: return "quadratic";
    case BasisPolicy::TwoStage: return "two-stage";
  }
  return "?";
}

namespace {

ScreeningOutcome run_stage(const Matrix& x, const Vector& y, std::size_t m, ScreenerId method,
                           const SeededStream& stream, const BasisKind& b,
                           const ScreenOptions& options) {
  const Matrix transformed = apply_basis(x, b);
  ScreeningOutcome out = screen(transformed, y, m, method, stream, options);
  out.basis = b.tag();
  if (!out.rss) out.rss = rss(transformed, y, out.selected);
  return out;
}

}  // namespace

ScreeningOutcome two_stage_screen(const Matrix& x, const Vector& y, std::size_t m,
                                  ScreenerId method, const SeededStream& stream,
                                  const BasisKind& first, const BasisKind& second,
                                  const ScreenOptions& options) {
  if (m >= static_cast<std::size_t>(x.rows())) {
    throw SubsetTooLarge("two-stage screening needs M < n");
  }
  ScreeningOutcome a = run_stage(x, y, m, method, stream, first, options);
  ScreeningOutcome b = run_stage(x, y, m, method, stream, second, options);
  if (std::abs(*a.rss - *b.rss) <= 1e-12) {
    a.tie_broken = true;
    return a;
  }
  return *b.rss < *a.rss ? b : a;
}

ScreeningOutcome two_stage_screen(const Matrix& x, const Vector& y, std::size_t m,
                                  ScreenerId method, const SeededStream& stream,
                                  const ScreenOptions& options) {
  return two_stage_screen(x, y, m, method, stream, BasisKind::linear(), BasisKind::quadratic(),
                          options);
}

std::vector<ScreeningOutcome> screen_all_with_policy(const Matrix& x, const Vector& y, std::size_t m,
                                                     std::span<const ScreenerId> methods,
                                                     BasisPolicy policy, const SeededStream& stream,
                                                     const ScreenOptions& options) {
  auto stage = [&](const BasisKind& b, bool with_rss) {
    const Matrix transformed = apply_basis(x, b);
    std::vector<ScreeningOutcome> outs = screen_all(transformed, y, m, methods, stream, options);
    for (auto& o : outs) {
      o.basis = b.tag();
      if (with_rss && !o.rss) o.rss = rss(transformed, y, o.selected);
    }
    return outs;
  };
  switch (policy) {
    case BasisPolicy::Linear: return stage(BasisKind::linear(), false);
    case BasisPolicy::Quadratic: return stage(BasisKind::quadratic(), false);
    case BasisPolicy::TwoStage: {
      if (m >= static_cast<std::size_t>(x.rows())) throw SubsetTooLarge("two-stage screening needs M < n");
      std::vector<ScreeningOutcome> a = stage(BasisKind::linear(), true);
      std::vector<ScreeningOutcome> b = stage(BasisKind::quadratic(), true);
      for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(*a[k].rss - *b[k].rss) <= 1e-12) {
          a[k].tie_broken = true;
        } else if (*b[k].rss < *a[k].rss) {
          a[k] = std::move(b[k]);
        }
      }
      return a;
    }
  }
  throw InputError("unknown basis policy");
}

ScreeningOutcome screen_with_policy(const Matrix& x, const Vector& y, std::size_t m,
                                    ScreenerId method, BasisPolicy policy,
                                    const SeededStream& stream, const ScreenOptions& options) {
  const ScreenerId one[] = {method};
  return std::move(screen_all_with_policy(x, y, m, one, policy, stream, options).front());
}

}  // namespace screenlab
