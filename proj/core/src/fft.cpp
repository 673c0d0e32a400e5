#include "otto/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

namespace otto::fft {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

template <class T>
AlignedBuffer<T>::AlignedBuffer(std::size_t n)
    : ptr_(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)))), n_(n) {
    if (!ptr_) throw std::bad_alloc();
    std::fill_n(ptr_.get(), n_, T{});
}

template <class T>
AlignedBuffer<T>::AlignedBuffer(const AlignedBuffer& o) : AlignedBuffer(o.n_) {
    std::copy_n(o.data(), n_, data());
}

template <class T>
AlignedBuffer<T>& AlignedBuffer<T>::operator=(const AlignedBuffer& o) {
    if (this != &o) {
        AlignedBuffer tmp(o);
        *this = std::move(tmp);
    }
    return *this;
}

template <class T>
void AlignedBuffer<T>::Free::operator()(T* p) const { fftw_free(p); }

template class AlignedBuffer<double>;
template class AlignedBuffer<cplx>;

RealInverse::RealInverse(std::size_t n) : n_(n), spec_(n / 2 + 1), out_(n) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                                 reinterpret_cast<fftw_complex*>(spec_.data()),
                                 out_.data(), FFTW_ESTIMATE);
}

RealInverse::~RealInverse() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void RealInverse::execute() {
    // c2r destroys its input; callers refill the spectrum before each call.
    fftw_execute(static_cast<fftw_plan>(plan_));
}

Complex2d::Complex2d(std::size_t rows, std::size_t cols, cplx* data) {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), d, d,
                            FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), d, d,
                            FFTW_BACKWARD, FFTW_ESTIMATE);
}

Complex2d::~Complex2d() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void Complex2d::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void Complex2d::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

ComplexRows::ComplexRows(std::size_t n, std::size_t howmany, cplx* data) {
    auto* d = reinterpret_cast<fftw_complex*>(data);
    const int len = static_cast<int>(n);
    std::lock_guard lock(planner_mutex());
    fwd_ = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), d, nullptr, 1, len,
                              d, nullptr, 1, len, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), d, nullptr, 1, len,
                              d, nullptr, 1, len, FFTW_BACKWARD, FFTW_ESTIMATE);
}

ComplexRows::~ComplexRows() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void ComplexRows::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void ComplexRows::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace otto::fft
