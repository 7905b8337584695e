#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace cfsim {

// Two readings of the same midrise device: Bussgang writes the output as
// a_tilde*z + e with e uncorrelated with the input z; Max writes it as z + e
// with e uncorrelated with the output.
enum class QuantizerModel { Bussgang, Max };

// Symmetric uniform midrise quantizer for unit-variance Gaussian input,
// L = 2^alpha levels. alpha == 0 is the transparent (no-quantization) limit
// used by the perfect-backhaul baseline: the analytic fields are exact there
// but the sample-level ops reject it.
struct QuantizerDesign {
  int alpha = 0;
  double delta = 0.0;
  double a_tilde = 1.0;       // Bussgang gain
  double b_tilde = 1.0;       // output second moment
  double var_bussgang = 0.0;  // b_tilde - a_tilde^2
  double var_max = 0.0;       // Max-model error variance
};

QuantizerDesign perfect_design();

// Reconstruction point of the cell containing z; saturates at the outermost
// level +-(L-1)*delta/2. Samples exactly on a threshold go to the upper cell.
double quantize_sample(double z, const QuantizerDesign& design);

// (a_tilde, b_tilde) for unit-variance Gaussian input, evaluated in closed
// form from Gaussian density/CDF sums over the quantizer cells.
// Rejects alpha outside [1, 16].
std::pair<double, double> bussgang_coefficients(int alpha, double delta);

// Bussgang: b - a^2. Max: classical tabulated minimum distortion of the
// optimal uniform quantizer for alpha <= 5, a_tilde*(1 - a_tilde) above.
double distortion_power(int alpha, double delta, QuantizerModel model);

// Golden-section search on (0, 4*alpha] to bracket width 1e-7. SDNR
// maximization and MSE minimization pick the same step size for this family
// (at the optimum a_tilde == b_tilde, so SDNR = a/(1-a) and MSE = 1-a are
// both monotone in a_tilde); the MSE objective is used for both models since
// it stays well-posed at alpha = 1 where the SDNR is step-size-invariant.
QuantizerDesign optimize_step_size(int alpha, QuantizerModel model);

// I/Q-independent quantization: each real branch is normalized by
// sqrt(power/2), quantized on the unit-variance grid, and rescaled. The map
// itself is model-free; the two models only differ in how the output is
// decomposed (a_tilde*v + e vs v + e).
void quantize_complex(std::complex<double>* v, std::size_t n, double power,
                      const QuantizerDesign& design);
std::vector<std::complex<double>> quantize_complex(
    const std::vector<std::complex<double>>& v, double power,
    const QuantizerDesign& design);

}  // namespace cfsim
