#include "cfsim/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cfsim {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Minimum-MSE distortion of the uniform quantizer at the optimal step size
// (classical values going back to Max, 1960), used by the Max-model branch
// for low bit widths. Index = alpha - 1.
constexpr double kMaxModelVar[5] = {0.3634, 0.1188, 0.03744, 0.01154, 0.00349};

double gauss_pdf(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

// Upper tail P(Z > t) of the standard normal.
double gauss_sf(double t) { return 0.5 * std::erfc(t * kInvSqrt2); }

void check_alpha(int alpha) {
  if (alpha < 1) throw std::invalid_argument("quantizer: alpha must be >= 1");
  if (alpha > 16)
    throw std::invalid_argument("quantizer: alpha > 16 is outside the design range");
}

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw std::invalid_argument("quantizer: delta must be positive and finite");
}

// MSE of the quantizer for unit Gaussian input: E(q(z)-z)^2 = b - 2a + 1.
double mse_unit_gauss(int alpha, double delta) {
  auto [a, b] = bussgang_coefficients(alpha, delta);
  return b - 2.0 * a + 1.0;
}

}  // namespace

QuantizerDesign perfect_design() { return QuantizerDesign{}; }

double quantize_sample(double z, const QuantizerDesign& design) {
  if (!std::isfinite(z))
    throw std::invalid_argument("quantize_sample: non-finite input");
  check_alpha(design.alpha);
  check_delta(design.delta);
  const double delta = design.delta;
  const double clip = static_cast<double>((1L << design.alpha) - 1) * 0.5 * delta;
  // floor() sends a sample sitting exactly on a threshold to the upper cell.
  const double q = delta * (std::floor(z / delta) + 0.5);
  return std::clamp(q, -clip, clip);
}

std::pair<double, double> bussgang_coefficients(int alpha, double delta) {
  check_alpha(alpha);
  check_delta(delta);
  const long half_levels = 1L << (alpha - 1);
  double a = 0.0;
  double b = 0.0;
  double pdf_lo = gauss_pdf(0.0);
  double sf_lo = 0.5;
  for (long i = 1; i <= half_levels; ++i) {
    const double r = (2.0 * static_cast<double>(i) - 1.0) * 0.5 * delta;
    const bool last = (i == half_levels);  // clip cell, upper edge at infinity
    const double pdf_hi = last ? 0.0 : gauss_pdf(static_cast<double>(i) * delta);
    const double sf_hi = last ? 0.0 : gauss_sf(static_cast<double>(i) * delta);
    a += r * (pdf_lo - pdf_hi);
    b += r * r * (sf_lo - sf_hi);
    if (!last && pdf_hi == 0.0 && sf_hi == 0.0) break;  // no mass left
    pdf_lo = pdf_hi;
    sf_lo = sf_hi;
  }
  return {2.0 * a, 2.0 * b};
}

double distortion_power(int alpha, double delta, QuantizerModel model) {
  check_alpha(alpha);
  check_delta(delta);
  if (model == QuantizerModel::Bussgang) {
    auto [a, b] = bussgang_coefficients(alpha, delta);
    return b - a * a;
  }
  if (alpha <= 5) return kMaxModelVar[alpha - 1];
  auto [a, b] = bussgang_coefficients(alpha, delta);
  (void)b;
  return a * (1.0 - a);
}

QuantizerDesign optimize_step_size(int alpha, QuantizerModel model) {
  check_alpha(alpha);
  double lo = 1e-7;
  double hi = 4.0 * static_cast<double>(alpha);
  const double hi0 = hi;
  constexpr double inv_phi = 0.61803398874989484820;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = mse_unit_gauss(alpha, x1);
  double f2 = mse_unit_gauss(alpha, x2);
  while (hi - lo > 1e-7) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = mse_unit_gauss(alpha, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = mse_unit_gauss(alpha, x2);
    }
  }
  const double delta = 0.5 * (lo + hi);
  // An optimum glued to either end of the bracket means the objective did
  // not have an interior minimum, i.e. the coefficient evaluation is broken.
  if (delta < 1e-5 || delta > hi0 - 1e-5)
    throw std::runtime_error("optimize_step_size: no interior optimum in (0, 4*alpha]");

  auto [a, b] = bussgang_coefficients(alpha, delta);
  QuantizerDesign d;
  d.alpha = alpha;
  d.delta = delta;
  d.a_tilde = a;
  d.b_tilde = b;
  d.var_bussgang = b - a * a;
  d.var_max = (alpha <= 5) ? kMaxModelVar[alpha - 1] : a * (1.0 - a);
  (void)model;  // both objectives share the optimizer; see header
  return d;
}

void quantize_complex(std::complex<double>* v, std::size_t n, double power,
                      const QuantizerDesign& design) {
  if (!(power > 0.0) || !std::isfinite(power))
    throw std::invalid_argument("quantize_complex: power must be positive and finite");
  check_alpha(design.alpha);
  check_delta(design.delta);
  const double s = std::sqrt(0.5 * power);  // per real branch
  const double delta = design.delta;
  const double clip = static_cast<double>((1L << design.alpha) - 1) * 0.5 * delta;
  const double inv_s = 1.0 / s;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = v[i].real();
    const double im = v[i].imag();
    if (!std::isfinite(re) || !std::isfinite(im))
      throw std::invalid_argument("quantize_complex: non-finite input");
    const double qre =
        std::clamp(delta * (std::floor(re * inv_s / delta) + 0.5), -clip, clip);
    const double qim =
        std::clamp(delta * (std::floor(im * inv_s / delta) + 0.5), -clip, clip);
    v[i] = {s * qre, s * qim};
  }
}

std::vector<std::complex<double>> quantize_complex(
    const std::vector<std::complex<double>>& v, double power,
    const QuantizerDesign& design) {
  std::vector<std::complex<double>> out = v;
  quantize_complex(out.data(), out.size(), power, design);
  return out;
}

}  // namespace cfsim
