// grid_propagator.hpp: split-operator propagation of rho(r,y)
//
// rho(r,y) = <r - y/2| rho |r + y/2>, stored row-major with r along rows and
// y along the contiguous axis.  Grid points r_i = (i - n_r/2) dr,
// y_j = (j - n_y/2) dy, so r = 0 and y = 0 are grid points.
//
// In these coordinates one step solves
//   d rho/dt = -i d_r d_y rho                               (kinetic)
//            + i [(W2 r - F) y + kappa (r^3 y + r y^3/4)] rho (potential, force)
//            - (D/2) y^2 rho                                  (decoherence)
//            - G y d_y rho                                    (friction)
// with W2, G, D, F from Drive.  Strang splitting
//   K(h/2) P(h/2) R(h) P(h/2) K(h/2)
// where K is diagonal in (k_r, k_y), P diagonal in (r, y) and R is the exact
// rescaling y -> y exp(-G h) done by band-limited interpolation.
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "otto/fft.hpp"
#include "otto/gaussian_propagator.hpp"
#include "otto/moments.hpp"

namespace otto {

using cplx = std::complex<double>;

struct GridSpec {
    std::size_t n_r{128};
    std::size_t n_y{128};
    double L_r{12.0};
    double L_y{12.0};
    double frame_fraction{0.1};   // width of the boundary frame, per side
    double boundary_tol{1e-4};    // max |rho| mass in the frame
    std::size_t check_stride{1};  // boundary check every this many steps

    double dr() const { return 2.0 * L_r / static_cast<double>(n_r); }
    double dy() const { return 2.0 * L_y / static_cast<double>(n_y); }
    double r(std::size_t i) const { return (static_cast<double>(i) - 0.5 * static_cast<double>(n_r)) * dr(); }
    double y(std::size_t j) const { return (static_cast<double>(j) - 0.5 * static_cast<double>(n_y)) * dy(); }
    std::size_t y0_index() const { return n_y / 2; }
    // Throws ConfigError unless sizes are powers of two >= 8 and extents > 0.
    void validate() const;
};

class DensityGrid {
public:
    DensityGrid() = default;
    explicit DensityGrid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    cplx* data() { return values_.data(); }
    const cplx* data() const { return values_.data(); }
    cplx& operator()(std::size_t i, std::size_t j) { return values_[i * spec_.n_y + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return values_[i * spec_.n_y + j]; }
    std::size_t size() const { return values_.size(); }

    double t{0.0};

    // dr * sum_i rho(r_i, 0); complex so a stray imaginary part is visible.
    cplx trace() const;
    // max |rho(r,y) - conj rho(r,-y)| over all mirrored pairs.
    double hermiticity_defect() const;
    // dr dy sum |rho| over the outer frame.
    double boundary_mass() const;

    // Element-wise a*this + b*other (used for ensemble averaging).
    void accumulate(const DensityGrid& other, double weight);
    void fill_zero();

private:
    GridSpec spec_;
    fft::AlignedBuffer<cplx> values_;
};

// Gaussian state with the given moments on the grid:
//   rho(r,y) = g(r) exp(-a y^2/2 - i pbar y - i c (r - qbar) y),
//   g = normal(qbar, sqq), c = sqp/sqq, a = spp - sqp^2/sqq.
DensityGrid gaussian_density(const GridSpec& spec, const GaussianState& s);

// Enforce rho(r,y_j) = conj rho(r,y_{n-j}); the unpaired column y = -L_y is
// made real.
void project_hermitian(DensityGrid& g);

Moments observables_grid(const DensityGrid& g);

// <n| rho |m> in the Fock basis of a harmonic oscillator at omega_ref.
// Throws DomainError if the classical turning point of level max(n,m) lies
// outside the grid.
cplx project_fock(const DensityGrid& g, std::size_t n, std::size_t m, double omega_ref = 1.0);

// Full (n_max+1)^2 Fock matrix in one pass.
Eigen::MatrixXcd fock_matrix(const DensityGrid& g, std::size_t n_max, double omega_ref = 1.0);

// rho(x, x') on the uniform grid x_a = (a - n_r/2) dr, |x| <= L_r, with
// band-limited interpolation in r and y where needed.  Entries whose
// |x - x'| exceeds L_y are zero.  Includes the dx weight so that the
// eigenvalues are the state's occupation probabilities.
Eigen::MatrixXcd position_matrix(const DensityGrid& g);

class GridPropagator {
public:
    GridPropagator(const GridSpec& spec, double kappa);
    ~GridPropagator();
    GridPropagator(const GridPropagator&) = delete;
    GridPropagator& operator=(const GridPropagator&) = delete;

    const GridSpec& spec() const { return spec_; }
    double kappa() const { return kappa_; }

    // One Strang step of length h with the drive evaluated at the midpoint.
    // Throws GridOverflowError on NaN or when the boundary frame holds more
    // than spec.boundary_tol (checked every check_stride steps).
    void step(DensityGrid& g, const Drive& mid, double h);

    // Constant controls and noise over the step.
    void step(DensityGrid& g, const Controls& c, double xi_c, double xi_h, double h,
              const ReservoirSpec& cold, const ReservoirSpec& hot);

    void check(const DensityGrid& g) const;

private:
    void kinetic(double h);
    void potential(const Drive& d, double h);
    void friction(double scale);

    GridSpec spec_;
    double kappa_;
    fft::AlignedBuffer<cplx> work_;
    std::unique_ptr<fft::Complex2d> fft_;
    std::vector<double> kr_, ky_;          // wavenumbers, Nyquist set to 0
    std::vector<cplx> quartic_;            // exp(i kappa (r^3 y + r y^3/4) h) for the last h
    double quartic_h_{-1.0};
    std::vector<double> damp_;
    double kinetic_h_{-1.0};
    std::vector<cplx> kinetic_phase_;      // cached for the last h
    double friction_scale_{-1.0};
    Eigen::MatrixXd friction_matrix_;      // cached for the last scale
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tmp_;
    std::size_t steps_{0};
};

} // namespace otto
