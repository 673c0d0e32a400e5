#include "otto/grid_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "otto/error.hpp"

namespace otto {

namespace {

constexpr double pi = std::numbers::pi;

bool is_pow2(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

// Periodic band-limited interpolation kernel for an axis of n points with
// spacing d.  All wavenumbers below Nyquist plus half-weight Nyquist cosines,
// so K(0) = 1 and K vanishes at every other grid offset.
struct Kernel {
    std::size_t n;
    double d;

    double operator()(double u) const {
        const double theta = 2.0 * pi * u / (static_cast<double>(n) * d);
        const double half = static_cast<double>(n / 2) - 0.5;  // M + 1/2
        const double s = std::sin(0.5 * theta);
        const double dir = std::abs(s) < 1e-14 ? 2.0 * half : std::sin(half * theta) / s;
        return (dir + std::cos(pi * u / d)) / static_cast<double>(n);
    }
    // First and second derivative by direct summation (setup only).
    double d1(double u) const {
        const double dk = 2.0 * pi / (static_cast<double>(n) * d);
        const int M = static_cast<int>(n / 2) - 1;
        double acc = 0.0;
        for (int m = 1; m <= M; ++m) acc -= 2.0 * m * dk * std::sin(m * dk * u);
        acc -= (pi / d) * std::sin(pi * u / d);
        return acc / static_cast<double>(n);
    }
    double d2(double u) const {
        const double dk = 2.0 * pi / (static_cast<double>(n) * d);
        const int M = static_cast<int>(n / 2) - 1;
        double acc = 0.0;
        for (int m = 1; m <= M; ++m) acc -= 2.0 * (m * dk) * (m * dk) * std::cos(m * dk * u);
        acc -= (pi / d) * (pi / d) * std::cos(pi * u / d);
        return acc / static_cast<double>(n);
    }
};

std::vector<double> wavenumbers(std::size_t n, double d) {
    std::vector<double> k(n);
    const double dk = 2.0 * pi / (static_cast<double>(n) * d);
    for (std::size_t a = 0; a < n; ++a) {
        const auto s = static_cast<long>(a);
        const long N = static_cast<long>(n);
        if (a == n / 2) k[a] = 0.0;
        else k[a] = dk * static_cast<double>(a < n / 2 ? s : s - N);
    }
    return k;
}

struct FrameBounds {
    std::size_t fr, fy;
};

FrameBounds frame(const GridSpec& s) {
    return {static_cast<std::size_t>(std::ceil(s.frame_fraction * static_cast<double>(s.n_r))),
            static_cast<std::size_t>(std::ceil(s.frame_fraction * static_cast<double>(s.n_y)))};
}

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

} // namespace

void GridSpec::validate() const {
    if (!is_pow2(n_r) || !is_pow2(n_y)) throw ConfigError("grid: n_r and n_y must be powers of two >= 8");
    if (!(L_r > 0.0) || !(L_y > 0.0)) throw ConfigError("grid: extents must be > 0");
    if (!(frame_fraction > 0.0 && frame_fraction < 0.5)) throw ConfigError("grid: frame_fraction in (0, 0.5)");
    if (!(boundary_tol > 0.0)) throw ConfigError("grid: boundary_tol must be > 0");
    if (check_stride == 0) throw ConfigError("grid: check_stride must be >= 1");
}

DensityGrid::DensityGrid(const GridSpec& spec) : spec_(spec), values_(spec.n_r * spec.n_y) {
    spec_.validate();
}

cplx DensityGrid::trace() const {
    cplx acc{};
    const std::size_t j0 = spec_.y0_index();
    for (std::size_t i = 0; i < spec_.n_r; ++i) acc += (*this)(i, j0);
    return acc * spec_.dr();
}

double DensityGrid::hermiticity_defect() const {
    double worst = 0.0;
    const std::size_t ny = spec_.n_y;
    for (std::size_t i = 0; i < spec_.n_r; ++i) {
        worst = std::max(worst, std::abs((*this)(i, 0).imag()));
        for (std::size_t j = 1; j < ny; ++j)
            worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(i, ny - j))));
    }
    return worst;
}

double DensityGrid::boundary_mass() const {
    const auto [fr, fy] = frame(spec_);
    double acc = 0.0;
    for (std::size_t i = 0; i < spec_.n_r; ++i) {
        const bool edge_row = i < fr || i >= spec_.n_r - fr;
        for (std::size_t j = 0; j < spec_.n_y; ++j) {
            if (edge_row || j < fy || j >= spec_.n_y - fy) acc += std::abs((*this)(i, j));
        }
    }
    return acc * spec_.dr() * spec_.dy();
}

void DensityGrid::accumulate(const DensityGrid& other, double weight) {
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += weight * other.values_[k];
}

void DensityGrid::fill_zero() { std::fill_n(values_.data(), values_.size(), cplx{}); }

DensityGrid gaussian_density(const GridSpec& spec, const GaussianState& s) {
    if (!(s.var_q > 0.0) || !(s.var_p > 0.0)) throw DomainError("gaussian_density: variances must be > 0");
    DensityGrid g(spec);
    const double c = s.cov_qp / s.var_q;
    const double a = s.var_p - s.cov_qp * s.cov_qp / s.var_q;
    for (std::size_t i = 0; i < spec.n_r; ++i) {
        const double dq = spec.r(i) - s.mean_q;
        const double gr = std::exp(-0.5 * dq * dq / s.var_q);
        for (std::size_t j = 0; j < spec.n_y; ++j) {
            const double y = spec.y(j);
            g(i, j) = gr * std::exp(cplx(-0.5 * a * y * y, -(s.mean_p + c * dq) * y));
        }
    }
    project_hermitian(g);
    const double tr = g.trace().real();
    for (std::size_t k = 0; k < g.size(); ++k) g.data()[k] /= tr;
    g.t = s.t;
    return g;
}

void project_hermitian(DensityGrid& g) {
    const auto& sp = g.spec();
    const std::size_t ny = sp.n_y;
    for (std::size_t i = 0; i < sp.n_r; ++i) {
        g(i, 0) = g(i, 0).real();
        g(i, ny / 2) = g(i, ny / 2).real();
        for (std::size_t j = 1; j < ny / 2; ++j) {
            const cplx m = 0.5 * (g(i, j) + std::conj(g(i, ny - j)));
            g(i, j) = m;
            g(i, ny - j) = std::conj(m);
        }
    }
}

namespace {

struct DerivWeights {
    std::vector<double> w1, w2;
};

DerivWeights derivative_weights(const GridSpec& sp) {
    Kernel K{sp.n_y, sp.dy()};
    DerivWeights w;
    w.w1.resize(sp.n_y);
    w.w2.resize(sp.n_y);
    for (std::size_t l = 0; l < sp.n_y; ++l) {
        w.w1[l] = K.d1(-sp.y(l));
        w.w2[l] = K.d2(-sp.y(l));
    }
    return w;
}

} // namespace

Moments observables_grid(const DensityGrid& g) {
    const auto& sp = g.spec();
    thread_local GridSpec cached{};
    thread_local DerivWeights w;
    if (w.w1.size() != sp.n_y || cached.L_y != sp.L_y || cached.n_y != sp.n_y) {
        w = derivative_weights(sp);
        cached = sp;
    }
    const std::size_t j0 = sp.y0_index();
    cplx q{}, q2{}, p{}, p2{}, qp{};
    for (std::size_t i = 0; i < sp.n_r; ++i) {
        const double r = sp.r(i);
        const cplx* row = &g(i, 0);
        cplx s1{}, s2{};
        for (std::size_t l = 0; l < sp.n_y; ++l) {
            s1 += w.w1[l] * row[l];
            s2 += w.w2[l] * row[l];
        }
        q += r * row[j0];
        q2 += r * r * row[j0];
        p += s1;
        p2 += s2;
        qp += r * s1;
    }
    const double dr = sp.dr();
    const cplx I(0.0, 1.0);
    return {(q * dr).real(), (I * p * dr).real(), (q2 * dr).real(), (-p2 * dr).real(),
            (I * qp * dr).real()};
}

namespace {

// phi_n(x) for n = 0..n_max at frequency w, via the stable recurrence.
void hermite_functions(double x, double w, std::size_t n_max, double* out) {
    out[0] = std::pow(w / pi, 0.25) * std::exp(-0.5 * w * x * x);
    if (n_max == 0) return;
    const double sx = std::sqrt(2.0 * w) * x;
    out[1] = sx * out[0];
    for (std::size_t n = 1; n < n_max; ++n) {
        const double nn = static_cast<double>(n);
        out[n + 1] = (sx * out[n] - std::sqrt(nn) * out[n - 1]) / std::sqrt(nn + 1.0);
    }
}

} // namespace

Eigen::MatrixXcd fock_matrix(const DensityGrid& g, std::size_t n_max, double omega_ref) {
    const auto& sp = g.spec();
    if (!(omega_ref > 0.0)) throw DomainError("fock: omega_ref must be > 0");
    if (std::sqrt((2.0 * static_cast<double>(n_max) + 1.0) / omega_ref) > sp.L_r)
        throw DomainError("fock: basis extends beyond the grid");
    const std::size_t nb = n_max + 1;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
    std::vector<double> fa(nb), fb(nb);
    for (std::size_t i = 0; i < sp.n_r; ++i) {
        const double r = sp.r(i);
        for (std::size_t j = 0; j < sp.n_y; ++j) {
            const cplx v = g(i, j);
            if (v == cplx{}) continue;
            const double y = sp.y(j);
            hermite_functions(r - 0.5 * y, omega_ref, n_max, fa.data());
            hermite_functions(r + 0.5 * y, omega_ref, n_max, fb.data());
            for (std::size_t n = 0; n < nb; ++n) {
                const cplx vn = fa[n] * v;
                for (std::size_t m = 0; m < nb; ++m)
                    out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) += vn * fb[m];
            }
        }
    }
    return out * (sp.dr() * sp.dy());
}

cplx project_fock(const DensityGrid& g, std::size_t n, std::size_t m, double omega_ref) {
    const auto M = fock_matrix(g, std::max(n, m), omega_ref);
    return M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
}

Eigen::MatrixXcd position_matrix(const DensityGrid& g) {
    const auto& sp = g.spec();
    const std::size_t nr = sp.n_r, ny = sp.n_y;
    const double dr = sp.dr();
    Eigen::Map<const RowMat> rho(g.data(), static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(ny));

    // rho at r_i + dr/2
    Kernel Kr{nr, dr};
    Eigen::MatrixXd S(nr, nr);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t l = 0; l < nr; ++l) S(i, l) = Kr(sp.r(i) + 0.5 * dr - sp.r(l));
    const RowMat half = (S.cast<cplx>() * rho).eval();

    // y-interpolation weights per offset d = b - a, y = d dr
    Kernel Ky{ny, sp.dy()};
    const long n = static_cast<long>(nr);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(2 * n - 1, static_cast<Eigen::Index>(ny));
    std::vector<bool> inside(static_cast<std::size_t>(2 * n - 1), false);
    for (long d = -(n - 1); d <= n - 1; ++d) {
        const double y = static_cast<double>(d) * dr;
        if (std::abs(y) >= sp.L_y) continue;
        inside[static_cast<std::size_t>(d + n - 1)] = true;
        for (std::size_t l = 0; l < ny; ++l) V(d + n - 1, static_cast<Eigen::Index>(l)) = Ky(y - sp.y(l));
    }

    Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, n);
    for (long a = 0; a < n; ++a) {
        for (long b = 0; b < n; ++b) {
            const long d = b - a;
            if (!inside[static_cast<std::size_t>(d + n - 1)]) continue;
            const long s = a + b;
            const long i = s / 2;
            if (i >= n) continue;
            const auto w = V.row(d + n - 1).cast<cplx>();
            X(a, b) = (s % 2 == 0) ? rho.row(i).cwiseProduct(w).sum() : half.row(i).cwiseProduct(w).sum();
        }
    }
    // rho(x,x')^* = rho(x',x)
    const Eigen::MatrixXcd H = 0.5 * (X + X.adjoint());
    return H * dr;
}

GridPropagator::GridPropagator(const GridSpec& spec, double kappa)
    : spec_(spec), kappa_(kappa), work_(spec.n_r * spec.n_y) {
    spec_.validate();
    if (!(kappa >= 0.0)) throw ConfigError("grid: kappa must be >= 0");
    fft_ = std::make_unique<fft::Complex2d>(spec_.n_r, spec_.n_y, work_.data());
    kr_ = wavenumbers(spec_.n_r, spec_.dr());
    ky_ = wavenumbers(spec_.n_y, spec_.dy());
    tmp_.resize(static_cast<Eigen::Index>(spec_.n_r), static_cast<Eigen::Index>(spec_.n_y));
}

GridPropagator::~GridPropagator() = default;

void GridPropagator::kinetic(double h) {
    const std::size_t nr = spec_.n_r, ny = spec_.n_y;
    if (h != kinetic_h_) {
        kinetic_phase_.resize(nr * ny);
        const double norm = 1.0 / static_cast<double>(nr * ny);
        for (std::size_t a = 0; a < nr; ++a)
            for (std::size_t b = 0; b < ny; ++b)
                kinetic_phase_[a * ny + b] = std::polar(norm, kr_[a] * ky_[b] * h);
        kinetic_h_ = h;
    }
    fft_->forward();
    cplx* w = work_.data();
    for (std::size_t k = 0; k < nr * ny; ++k) w[k] *= kinetic_phase_[k];
    fft_->backward();
}

void GridPropagator::potential(const Drive& d, double h) {
    const std::size_t nr = spec_.n_r, ny = spec_.n_y;
    const double dy = spec_.dy();
    auto& damp = damp_;
    damp.resize(ny);
    for (std::size_t j = 0; j < ny; ++j) {
        const double y = spec_.y(j);
        damp[j] = std::exp(-0.5 * d.diffusion * y * y * h);
    }
    const bool quartic = kappa_ != 0.0;
    if (quartic && h != quartic_h_) {
        quartic_.resize(nr * ny);
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = spec_.r(i);
            for (std::size_t j = 0; j < ny; ++j) {
                const double y = spec_.y(j);
                quartic_[i * ny + j] = std::polar(1.0, kappa_ * (r * r * r * y + 0.25 * r * y * y * y) * h);
            }
        }
        quartic_h_ = h;
    }
    cplx* w = work_.data();
    const double y0 = spec_.y(0);
    for (std::size_t i = 0; i < nr; ++i) {
        const double a = (d.omega2 * spec_.r(i) - d.force) * h;
        cplx z = std::polar(1.0, a * y0);
        const cplx step = std::polar(1.0, a * dy);
        cplx* row = w + i * ny;
        if (quartic) {
            const cplx* qrow = quartic_.data() + i * ny;
            for (std::size_t j = 0; j < ny; ++j) {
                row[j] *= z * qrow[j] * damp[j];
                z *= step;
            }
        } else {
            for (std::size_t j = 0; j < ny; ++j) {
                row[j] *= z * damp[j];
                z *= step;
            }
        }
    }
}

void GridPropagator::friction(double scale) {
    const std::size_t nr = spec_.n_r, ny = spec_.n_y;
    if (scale != friction_scale_) {
        Kernel K{ny, spec_.dy()};
        friction_matrix_.resize(static_cast<Eigen::Index>(ny), static_cast<Eigen::Index>(ny));
        for (std::size_t j = 0; j < ny; ++j) {
            const double ys = scale * spec_.y(j);
            for (std::size_t l = 0; l < ny; ++l)
                friction_matrix_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = K(ys - spec_.y(l));
        }
        friction_scale_ = scale;
    }
    Eigen::Map<RowMat> rho(work_.data(), static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(ny));
    tmp_.noalias() = rho * friction_matrix_.transpose().cast<cplx>();
    rho = tmp_;
}

void GridPropagator::step(DensityGrid& g, const Drive& mid, double h) {
    if (g.size() != work_.size()) throw DomainError("grid: state does not match propagator grid");
    std::copy_n(g.data(), g.size(), work_.data());
    kinetic(0.5 * h);
    potential(mid, 0.5 * h);
    if (mid.friction > 0.0) friction(std::exp(-mid.friction * h));
    potential(mid, 0.5 * h);
    kinetic(0.5 * h);
    std::copy_n(work_.data(), g.size(), g.data());
    project_hermitian(g);
    g.t += h;
    if (++steps_ % spec_.check_stride == 0) check(g);
}

void GridPropagator::step(DensityGrid& g, const Controls& c, double xi_c, double xi_h, double h,
                          const ReservoirSpec& cold, const ReservoirSpec& hot) {
    step(g, make_drive(c, xi_c, xi_h, cold, hot), h);
}

void GridPropagator::check(const DensityGrid& g) const {
    const double tr = g.trace().real();
    if (!std::isfinite(tr)) throw GridOverflowError("grid: non-finite density");
    const double m = g.boundary_mass();
    if (!std::isfinite(m)) throw GridOverflowError("grid: non-finite density");
    if (m > spec_.boundary_tol)
        throw GridOverflowError("grid: boundary mass " + std::to_string(m) + " exceeds tolerance");
}

} // namespace otto
