#include "fkpp/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace fkpp::kernels {

int omp_default_threads() { return omp_get_max_threads(); }

void explicit_reaction(std::span<const double> u, std::span<const double> mass, double dt,
                       std::span<double> out) {
  const long n = static_cast<long>(u.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = mass[i] * (u[i] + dt * u[i] * (1.0 - u[i]));
}

void explicit_reaction_serial(std::span<const double> u, std::span<const double> mass, double dt,
                              std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = mass[i] * (u[i] + dt * u[i] * (1.0 - u[i]));
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  const long n = static_cast<long>(a.size());
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (long i = 0; i < n; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff_serial(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void matvec(const RowMatrix& k, std::span<const double> x, std::span<double> y) {
  const long rows = k.outerSize();
  const auto* outer = k.outerIndexPtr();
  const auto* inner = k.innerIndexPtr();
  const auto* val = k.valuePtr();
#pragma omp parallel for schedule(static)
  for (long r = 0; r < rows; ++r) {
    double s = 0.0;
    for (auto j = outer[r]; j < outer[r + 1]; ++j) s += val[j] * x[inner[j]];
    y[r] = s;
  }
}

void matvec_serial(const RowMatrix& k, std::span<const double> x, std::span<double> y) {
  const auto* outer = k.outerIndexPtr();
  const auto* inner = k.innerIndexPtr();
  const auto* val = k.valuePtr();
  for (long r = 0; r < k.outerSize(); ++r) {
    double s = 0.0;
    for (auto j = outer[r]; j < outer[r + 1]; ++j) s += val[j] * x[inner[j]];
    y[r] = s;
  }
}

double free_energy(const RowMatrix& k, std::span<const double> mass, std::span<const double> u) {
  const long rows = k.outerSize();
  const auto* outer = k.outerIndexPtr();
  const auto* inner = k.innerIndexPtr();
  const auto* val = k.valuePtr();
  double total = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (long r = 0; r < rows; ++r) {
    double ku = 0.0;
    for (auto j = outer[r]; j < outer[r + 1]; ++j) ku += val[j] * u[inner[j]];
    const double ur = u[r];
    total += 0.5 * ur * ku + mass[r] * ur * ur * (ur / 3.0 - 0.5);
  }
  return total;
}

double free_energy_serial(const RowMatrix& k, std::span<const double> mass,
                          std::span<const double> u) {
  const auto* outer = k.outerIndexPtr();
  const auto* inner = k.innerIndexPtr();
  const auto* val = k.valuePtr();
  double total = 0.0;
  for (long r = 0; r < k.outerSize(); ++r) {
    double ku = 0.0;
    for (auto j = outer[r]; j < outer[r + 1]; ++j) ku += val[j] * u[inner[j]];
    const double ur = u[r];
    total += 0.5 * ur * ku + mass[r] * ur * ur * (ur / 3.0 - 0.5);
  }
  return total;
}

}  // namespace fkpp::kernels
