#pragma once

#include <exception>
#include <mutex>
#include <span>

#include <Eigen/Sparse>

namespace fkpp::kernels {

// Data-parallel inner loops of the evolution engine. Each kernel has an
// OpenMP version and a `_serial` reference that the tests compare against.

using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// out_i = mass_i * (u_i + dt * u_i * (1 - u_i)).
void explicit_reaction(std::span<const double> u, std::span<const double> mass, double dt,
                       std::span<double> out);
void explicit_reaction_serial(std::span<const double> u, std::span<const double> mass, double dt,
                              std::span<double> out);

/// max_i |a_i - b_i|.
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs_diff_serial(std::span<const double> a, std::span<const double> b);

/// y = K x for a row-major sparse matrix.
void matvec(const RowMatrix& k, std::span<const double> x, std::span<double> y);
void matvec_serial(const RowMatrix& k, std::span<const double> x, std::span<double> y);

/// Discrete free energy 1/2 u^T K u - 1/2 sum m u^2 + 1/3 sum m u^3.
double free_energy(const RowMatrix& k, std::span<const double> mass, std::span<const double> u);
double free_energy_serial(const RowMatrix& k, std::span<const double> mass,
                          std::span<const double> u);

int omp_default_threads();

/// Runs body(i) for i in [0, n) on `jobs` threads (0 = OpenMP default).
/// The first exception thrown by any iteration is rethrown after the loop.
template <class Body>
void parallel_for(long n, int jobs, Body body) {
  std::exception_ptr failure;
  std::mutex guard;
  const int threads = jobs > 0 ? jobs : omp_default_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (long i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace fkpp::kernels
