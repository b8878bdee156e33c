#include "pfz/schoenberg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pfz/errors.hpp"

namespace pfz {

SchoenbergParams::SchoenbergParams(double omega, double d, std::vector<double> coeffs)
    : omega_(omega), d_(d), coeffs_(std::move(coeffs)) {
  if (!std::isfinite(omega_)) throw Error(ErrorKind::invalid_spec, "omega must be finite");
  if (!std::isfinite(d_) || d_ < 0.0) throw Error(ErrorKind::invalid_spec, "d must be finite and >= 0");
  for (double c : coeffs_) {
    if (!std::isfinite(c) || c == 0.0)
      throw Error(ErrorKind::invalid_spec, "coefficients must be finite and nonzero");
  }
  std::sort(coeffs_.begin(), coeffs_.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return a > b;
  });
}

double SchoenbergParams::coeff_sum() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), 0.0); }

SchoenbergParams SchoenbergParams::combined_with(const SchoenbergParams& other) const {
  std::vector<double> all = coeffs_;
  all.insert(all.end(), other.coeffs_.begin(), other.coeffs_.end());
  return {omega_ + other.omega_, d_ + other.d_, std::move(all)};
}

std::complex<double> eval_p(const SchoenbergParams& params, std::complex<double> t,
                            std::optional<double> pole_eps) {
  using C = std::complex<double>;
  const double eps = pole_eps.value_or(1e-8 * std::max(1.0, std::abs(t)));
  const C i(0.0, 1.0);
  C result = std::exp(i * params.omega() * t - params.d() * t * t);
  for (double dj : params.coeffs()) {
    const C pole = i / dj;
    if (std::abs(t - pole) <= eps)
      throw PoleProximityError(pole, "t lies within pole_eps of the pole i/d_j");
    result *= std::exp(i * dj * t) / (1.0 + i * dj * t);
  }
  return result;
}

std::vector<std::complex<double>> poles(const SchoenbergParams& params) {
  std::vector<std::complex<double>> out;
  out.reserve(params.coeffs().size());
  for (double dj : params.coeffs()) out.emplace_back(0.0, 1.0 / dj);
  std::stable_sort(out.begin(), out.end(),
                   [](auto a, auto b) { return std::abs(a.imag()) < std::abs(b.imag()); });
  return out;
}

ValidationReport validate(const SchoenbergParams& params) {
  ValidationReport r;
  r.rho_nonnegative = std::all_of(params.coeffs().begin(), params.coeffs().end(),
                                  [](double c) { return c >= 0.0; });
  r.rho_finite = params.d() > 0.0 || params.omega() + params.coeff_sum() > 0.0;
  if (!r.rho_nonnegative) r.notes.emplace_back("negative d_j: 1/p(-iu^2) changes sign");
  if (!r.rho_finite) r.notes.emplace_back("d = 0 and omega + sum d_j <= 0: rho is not a finite measure");
  if (params.d() == 0.0 && params.coeffs().size() <= 1)
    r.notes.emplace_back("p is not absolutely integrable; f uses the closed form");
  return r;
}

}  // namespace pfz
