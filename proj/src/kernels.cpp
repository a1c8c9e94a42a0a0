#include "rieszlab/kernels.hpp"

#include <cmath>

namespace rieszlab {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt2 = 1.4142135623730950488;

// Antiderivative of |t|^p with the sign carried: G'(t) = |t|^p.
double signed_power_primitive(double t, double p) {
  const double a = std::pow(std::fabs(t), p + 1.0) / (p + 1.0);
  return t >= 0.0 ? a : -a;
}

// int_0^t e^{-|u|} du
double exp_primitive(double t) {
  const double a = 1.0 - std::exp(-std::fabs(t));
  return t >= 0.0 ? a : -a;
}

// int_0^t e^{-u^2/2} du
double gauss_primitive(double t) {
  return std::sqrt(M_PI / 2.0) * std::erf(t / kSqrt2);
}
}  // namespace

double riesz_fourier_constant(double s) {
  if (!(s > -2.0 && s < 0.0))
    throw std::domain_error("riesz_fourier_constant: s must lie in (-2, 0)");
  // Gamma(s/2) < 0 on (-1, 0) in the argument, i.e. for s in (-2, 0).
  return std::tgamma(0.5 * (1.0 - s)) / (-std::tgamma(0.5 * s)) * kSqrtPi *
         std::pow(2.0, 1.0 - s);
}

double cell_mean_energy(double s) {
  if (!(s > -2.0 && s < 0.0))
    throw std::domain_error("cell_mean_energy: s must lie in (-2, 0)");
  return 1.0 / ((1.0 - s) * (2.0 - s));
}

Kernel Kernel::riesz(double s) {
  if (!(s > -2.0 && s < 0.0))
    throw std::domain_error("Kernel::riesz: s must lie in (-2, 0)");
  return Kernel(KernelFamily::riesz, s);
}
Kernel Kernel::exponential() { return Kernel(KernelFamily::exponential, 0.0); }
Kernel Kernel::gaussian() { return Kernel(KernelFamily::gaussian, 0.0); }

double Kernel::s() const {
  if (family_ != KernelFamily::riesz)
    throw std::logic_error("Kernel::s: only the riesz kernel has an exponent");
  return s_;
}

std::string Kernel::name() const {
  switch (family_) {
    case KernelFamily::riesz:
      return "riesz";
    case KernelFamily::exponential:
      return "exponential";
    case KernelFamily::gaussian:
      return "gaussian";
  }
  return "?";
}

double Kernel::value_at(double r) const {
  switch (family_) {
    case KernelFamily::riesz:
      return -std::pow(std::fabs(r), -s_);  // -s > 0, so value_at(0) = 0
    case KernelFamily::exponential:
      return std::exp(-std::fabs(r));
    case KernelFamily::gaussian:
      return std::exp(-0.5 * r * r);
  }
  return 0.0;
}

double Kernel::fourier_at(double xi) const {
  switch (family_) {
    case KernelFamily::riesz:
      return riesz_fourier_constant(s_) * std::pow(std::fabs(xi), s_ - 1.0);
    case KernelFamily::exponential:
      return 2.0 / (1.0 + xi * xi);
    case KernelFamily::gaussian:
      return std::sqrt(2.0 * M_PI) * std::exp(-0.5 * xi * xi);
  }
  return 0.0;
}

double Kernel::background(double x, const Window& w) const {
  const double a = x - w.left, b = x - w.right;  // B = F(a) - F(b), F' = g
  switch (family_) {
    case KernelFamily::riesz:
      return -(signed_power_primitive(a, -s_) - signed_power_primitive(b, -s_));
    case KernelFamily::exponential:
      return exp_primitive(a) - exp_primitive(b);
    case KernelFamily::gaussian:
      return gauss_primitive(a) - gauss_primitive(b);
  }
  return 0.0;
}

double Kernel::background_double_integral(const Window& w) const {
  const double L = w.length();
  switch (family_) {
    case KernelFamily::riesz:
      return -2.0 * std::pow(L, 2.0 - s_) / ((1.0 - s_) * (2.0 - s_));
    case KernelFamily::exponential:
      return 2.0 * (L - 1.0 + std::exp(-L));
    case KernelFamily::gaussian:
      return 2.0 * L * std::sqrt(M_PI / 2.0) * std::erf(L / kSqrt2) -
             2.0 * (1.0 - std::exp(-0.5 * L * L));
  }
  return 0.0;
}

}  // namespace rieszlab
