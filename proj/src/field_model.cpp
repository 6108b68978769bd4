#include "coverfield/field_model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "coverfield/error.hpp"

namespace coverfield {

namespace {

// Exponents (p, q) of x^p y^q for each coefficient slot.
constexpr std::array<std::array<int, 2>, kNumCoefficients> kExponents{{
    {0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}, {2, 2},
}};

std::size_t slot_of(int p, int q) {
  for (std::size_t k = 0; k < kNumCoefficients; ++k) {
    if (kExponents[k][0] == p && kExponents[k][1] == q) return k;
  }
  return kNumCoefficients;
}

double dot(const Coefficients& a, const Coefficients& row) {
  double s = 0.0;
  for (std::size_t k = 0; k < kNumCoefficients; ++k) s += a[k] * row[k];
  return s;
}

void require_fit_preconditions(const SampleSet& samples, const CoordTransform& transform) {
  if (samples.size() < kNumCoefficients) {
    std::ostringstream msg;
    msg << "biquadratic fit needs at least " << kNumCoefficients << " samples, got "
        << samples.size();
    throw Error(Errc::TooFewSamples, msg.str());
  }
  if (!transform.valid()) {
    throw Error(Errc::InvalidArgument, "coordinate transform must have finite positive scales");
  }
  const std::size_t rank = design_rank(samples, transform);
  if (rank < kNumCoefficients) {
    std::ostringstream msg;
    msg << "design matrix has rank " << rank << " < " << kNumCoefficients;
    throw Error(Errc::DegenerateDesign, msg.str());
  }
}

std::vector<Coefficients> build_design(const SampleSet& samples, const CoordTransform& transform) {
  std::vector<Coefficients> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples.samples()) {
    const auto p = transform.normalize(s.x, s.y);
    rows.push_back(design_row(p.x, p.y));
  }
  return rows;
}

// Residuals f_r - value in index order; returns F = sum of squares.
double evaluate_residuals(const std::vector<Coefficients>& rows, const SampleSet& samples,
                          const Coefficients& a, std::vector<double>& residuals) {
  double f = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double r = dot(a, rows[i]) - samples[i].value;
    residuals[i] = r;
    f += r * r;
  }
  return f;
}

FitReport make_report(double f, std::size_t n, std::size_t iterations, bool converged) {
  return FitReport{iterations, f, std::sqrt(f / static_cast<double>(n)), converged};
}

}  // namespace

SampleSet::SampleSet(std::vector<ScatterSample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw Error(Errc::TooFewSamples, "sample set is empty");
  value_min_ = std::numeric_limits<double>::infinity();
  value_max_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.value)) {
      throw Error(Errc::NonFinite, "sample " + std::to_string(i) + " has a non-finite field");
    }
    value_min_ = std::min(value_min_, s.value);
    value_max_ = std::max(value_max_, s.value);
  }
}

CoordTransform CoordTransform::fit_to(const SampleSet& samples) {
  double xlo = samples[0].x, xhi = xlo, ylo = samples[0].y, yhi = ylo;
  for (const auto& s : samples.samples()) {
    xlo = std::min(xlo, s.x);
    xhi = std::max(xhi, s.x);
    ylo = std::min(ylo, s.y);
    yhi = std::max(yhi, s.y);
  }
  CoordTransform t;
  t.x_offset = 0.5 * (xlo + xhi);
  t.y_offset = 0.5 * (ylo + yhi);
  t.x_scale = xhi > xlo ? 2.0 / (xhi - xlo) : 1.0;
  t.y_scale = yhi > ylo ? 2.0 / (yhi - ylo) : 1.0;
  return t;
}

bool CoordTransform::valid() const {
  return std::isfinite(x_offset) && std::isfinite(y_offset) && std::isfinite(x_scale) &&
         std::isfinite(y_scale) && x_scale > 0.0 && y_scale > 0.0;
}

double Gradient::magnitude() const { return std::hypot(dx, dy); }

Coefficients design_row(double u, double v) {
  const double uu = u * u;
  const double vv = v * v;
  return {1.0, u, v, u * v, uu, vv, uu * v, u * vv, uu * vv};
}

BiquadraticSurface::BiquadraticSurface(const Coefficients& a, const CoordTransform& transform,
                                       double value_min, double value_max, double beta)
    : a_(a), transform_(transform), value_min_(value_min), value_max_(value_max), beta_(beta) {
  for (double c : a_) {
    if (!std::isfinite(c)) throw Error(Errc::InvalidArgument, "non-finite surface coefficient");
  }
  if (!transform_.valid()) throw Error(Errc::InvalidArgument, "invalid coordinate transform");
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
    throw Error(Errc::InvalidArgument, "smoothing beta must be finite and > 0");
  }
  if (!(value_min_ <= value_max_)) {
    throw Error(Errc::InvalidArgument, "value_min must not exceed value_max");
  }
}

double BiquadraticSurface::eval_raw(double x, double y) const {
  const auto p = transform_.normalize(x, y);
  return dot(a_, design_row(p.x, p.y));
}

double BiquadraticSurface::smooth(double fr) const {
  if (fr >= value_max_) return value_max_ + 1.0 / (fr - value_max_ + beta_);
  if (fr <= value_min_) return value_min_ - 1.0 / (value_min_ - fr + beta_);
  return fr;
}

double BiquadraticSurface::smoothing_slope(double fr) const {
  if (fr >= value_max_) {
    const double d = fr - value_max_ + beta_;
    return -1.0 / (d * d);
  }
  if (fr <= value_min_) {
    const double d = value_min_ - fr + beta_;
    return -1.0 / (d * d);
  }
  return 1.0;
}

double BiquadraticSurface::eval_smoothed(double x, double y) const { return smooth(eval_raw(x, y)); }

Gradient BiquadraticSurface::gradient_raw(double x, double y) const {
  const auto p = transform_.normalize(x, y);
  const double u = p.x, v = p.y;
  const auto& a = a_;
  const double du = a[1] + a[3] * v + 2.0 * a[4] * u + 2.0 * a[6] * u * v + a[7] * v * v +
                    2.0 * a[8] * u * v * v;
  const double dv = a[2] + a[3] * u + 2.0 * a[5] * v + a[6] * u * u + 2.0 * a[7] * u * v +
                    2.0 * a[8] * u * u * v;
  return {du * transform_.x_scale, dv * transform_.y_scale};
}

Gradient BiquadraticSurface::gradient_smoothed(double x, double y) const {
  const double slope = smoothing_slope(eval_raw(x, y));
  const auto g = gradient_raw(x, y);
  return {slope * g.dx, slope * g.dy};
}

Coefficients BiquadraticSurface::raw_frame_coefficients() const {
  // u = sx * x + cx with cx = -sx * ox; expand u^p v^q binomially.
  const double sx = transform_.x_scale, cx = -transform_.x_scale * transform_.x_offset;
  const double sy = transform_.y_scale, cy = -transform_.y_scale * transform_.y_offset;
  // expansion[p][i] = coefficient of x^i in (sx x + cx)^p
  auto expand = [](double s, double c) {
    std::array<std::array<double, 3>, 3> e{};
    e[0] = {1.0, 0.0, 0.0};
    e[1] = {c, s, 0.0};
    e[2] = {c * c, 2.0 * s * c, s * s};
    return e;
  };
  const auto ex = expand(sx, cx);
  const auto ey = expand(sy, cy);

  Coefficients raw{};
  for (std::size_t k = 0; k < kNumCoefficients; ++k) {
    const int p = kExponents[k][0], q = kExponents[k][1];
    for (int i = 0; i <= p; ++i) {
      for (int j = 0; j <= q; ++j) {
        raw[slot_of(i, j)] += a_[k] * ex[p][i] * ey[q][j];
      }
    }
  }
  return raw;
}

std::size_t design_rank(const SampleSet& samples, const CoordTransform& transform) {
  const auto rows = build_design(samples, transform);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), kNumCoefficients);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < kNumCoefficients; ++k) {
      design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank());
}

FitResult fit_normal_equations(const SampleSet& samples, double beta,
                               std::optional<CoordTransform> transform) {
  const CoordTransform t = transform.value_or(CoordTransform::fit_to(samples));
  require_fit_preconditions(samples, t);

  const auto rows = build_design(samples, t);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd design(n, kNumCoefficients);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kNumCoefficients; ++k) {
      design(i, static_cast<Eigen::Index>(k)) = rows[static_cast<std::size_t>(i)][k];
    }
    rhs(i) = samples[static_cast<std::size_t>(i)].value;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  const Eigen::VectorXd solution = qr.solve(rhs);

  Coefficients a{};
  for (std::size_t k = 0; k < kNumCoefficients; ++k) a[k] = solution(static_cast<Eigen::Index>(k));

  std::vector<double> residuals(rows.size());
  const double f = evaluate_residuals(rows, samples, a, residuals);
  BiquadraticSurface surface(a, t, samples.value_min(), samples.value_max(), beta);
  return FitResult{surface, make_report(f, samples.size(), 0, true)};
}

FitResult fit_gradient_descent(const SampleSet& samples, const GradientDescentOptions& options) {
  if (!(options.learning_rate > 0.0) || !(options.tolerance > 0.0)) {
    throw Error(Errc::InvalidArgument, "learning_rate and tolerance must be > 0");
  }
  const CoordTransform t = options.transform.value_or(CoordTransform::fit_to(samples));
  require_fit_preconditions(samples, t);
  if (!(options.beta > 0.0)) throw Error(Errc::InvalidArgument, "beta must be > 0");

  const auto rows = build_design(samples, t);
  const std::size_t n = rows.size();
  const double grad_scale = 2.0 / static_cast<double>(n);

  Coefficients a{};
  std::vector<double> residuals(n), trial_residuals(n);
  double f = evaluate_residuals(rows, samples, a, residuals);

  double step = options.learning_rate;
  std::size_t iterations = 0;
  bool converged = f == 0.0;

  while (!converged && iterations < options.max_iterations) {
    ++iterations;
    Coefficients grad{};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < kNumCoefficients; ++k) grad[k] += residuals[i] * rows[i][k];
    }

    Coefficients trial;
    for (std::size_t k = 0; k < kNumCoefficients; ++k) trial[k] = a[k] - step * grad_scale * grad[k];
    const double f_trial = evaluate_residuals(rows, samples, trial, trial_residuals);

    if (!std::isfinite(f_trial) || f_trial > f) {
      step *= 0.5;
      // The step has vanished without any descent: F is at its floating-point floor.
      if (step < options.learning_rate * 1e-30) {
        converged = true;
      }
      continue;
    }

    const double decrease = f - f_trial;
    a = trial;
    residuals.swap(trial_residuals);
    const double previous = f;
    f = f_trial;
    if (options.on_accept) options.on_accept(iterations, f);
    if (f == 0.0 || decrease / previous < options.tolerance) converged = true;
  }

  if (!std::isfinite(f)) throw Error(Errc::DegenerateDesign, "gradient descent diverged");

  BiquadraticSurface surface(a, t, samples.value_min(), samples.value_max(), options.beta);
  return FitResult{surface, make_report(f, n, iterations, converged)};
}

double residual_sum_of_squares(const BiquadraticSurface& surface, const SampleSet& samples) {
  double f = 0.0;
  for (const auto& s : samples.samples()) {
    const double r = s.value - surface.eval_raw(s.x, s.y);
    f += r * r;
  }
  return f;
}

double residual_sigma(const BiquadraticSurface& surface, const SampleSet& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw Error(Errc::TooFewSamples, "residual sigma needs at least 2 samples");
  double mean = 0.0;
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = samples[i].value - surface.eval_smoothed(samples[i].x, samples[i].y);
    mean += r[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace coverfield
