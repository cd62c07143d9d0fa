#include "rosenau/kernel.hpp"

#include <string>

#include "rosenau/errors.hpp"

namespace rosenau {

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "imq" || name == "inverse-multiquadric") {
    return KernelFamily::InverseMultiquadric;
  }
  if (name == "gaussian" || name == "ga") return KernelFamily::Gaussian;
  if (name == "mq" || name == "multiquadric") return KernelFamily::Multiquadric;
  throw InvalidArgument("unknown kernel family '" + std::string(name) + "'");
}

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::InverseMultiquadric:
      return "inverse-multiquadric";
    case KernelFamily::Gaussian:
      return "gaussian";
    case KernelFamily::Multiquadric:
      return "multiquadric";
  }
  return "unknown";
}

Kernel::Kernel(double epsilon, KernelFamily family)
    : family_(family), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("kernel shape parameter must be positive, got " +
                          std::to_string(epsilon));
  }
}

void Kernel::require_imq(const char* op) const {
  if (family_ != KernelFamily::InverseMultiquadric) {
    throw NotImplemented(std::string(op) + " is only available for the " +
                         "inverse multiquadric, not " +
                         std::string(to_string(family_)));
  }
}

double Kernel::eval(double r) const {
  const double s = (epsilon_ * epsilon_) * (r * r);
  switch (family_) {
    case KernelFamily::InverseMultiquadric:
      return imq::phi(s);
    case KernelFamily::Gaussian:
      return std::exp(-s);
    case KernelFamily::Multiquadric:
      return std::sqrt(1.0 + s);
  }
  return 0.0;
}

double Kernel::d1(double dx) const {
  const double e2 = epsilon_ * epsilon_;
  const double s = e2 * (dx * dx);
  switch (family_) {
    case KernelFamily::InverseMultiquadric:
      return imq::first(e2, dx, imq::phi(s));
    case KernelFamily::Gaussian:
      return -2.0 * e2 * dx * std::exp(-s);
    case KernelFamily::Multiquadric:
      return e2 * dx / std::sqrt(1.0 + s);
  }
  return 0.0;
}

double Kernel::d4(double dx) const {
  require_imq("d4");
  const double e2 = epsilon_ * epsilon_;
  const double s = e2 * (dx * dx);
  return imq::fourth_1d(e2, s, imq::phi(s));
}

std::array<double, 2> Kernel::grad2(double dx, double dy) const {
  const double e2 = epsilon_ * epsilon_;
  const double s = e2 * (dx * dx + dy * dy);
  switch (family_) {
    case KernelFamily::InverseMultiquadric: {
      const double p = imq::phi(s);
      return {imq::first(e2, dx, p), imq::first(e2, dy, p)};
    }
    case KernelFamily::Gaussian: {
      const double g = -2.0 * e2 * std::exp(-s);
      return {g * dx, g * dy};
    }
    case KernelFamily::Multiquadric: {
      const double g = e2 / std::sqrt(1.0 + s);
      return {g * dx, g * dy};
    }
  }
  return {0.0, 0.0};
}

double Kernel::laplacian2(double dx, double dy) const {
  require_imq("laplacian2");
  const double e2 = epsilon_ * epsilon_;
  const double s = e2 * (dx * dx + dy * dy);
  return imq::laplacian_2d(e2, s, imq::phi(s));
}

double Kernel::biharmonic2(double dx, double dy) const {
  require_imq("biharmonic2");
  const double e2 = epsilon_ * epsilon_;
  const double s = e2 * (dx * dx + dy * dy);
  return imq::biharmonic_2d(e2, s, imq::phi(s));
}

}  // namespace rosenau
