// fft.hpp: thin RAII wrappers over FFTW plans
//
// Plan creation/destruction is serialized internally (FFTW's planner is not
// thread safe); execution on distinct buffers is safe from any thread.

#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace otto::fft {

using cplx = std::complex<double>;

// 64-byte aligned buffer owned by FFTW's allocator.
template <class T>
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t n);
    AlignedBuffer(const AlignedBuffer& o);
    AlignedBuffer& operator=(const AlignedBuffer& o);
    AlignedBuffer(AlignedBuffer&&) noexcept = default;
    AlignedBuffer& operator=(AlignedBuffer&&) noexcept = default;

    T* data() { return ptr_.get(); }
    const T* data() const { return ptr_.get(); }
    std::size_t size() const { return n_; }
    T& operator[](std::size_t i) { return ptr_.get()[i]; }
    const T& operator[](std::size_t i) const { return ptr_.get()[i]; }
    std::span<T> span() { return {data(), n_}; }
    std::span<const T> span() const { return {data(), n_}; }

private:
    struct Free { void operator()(T* p) const; };
    std::unique_ptr<T[], Free> ptr_;
    std::size_t n_{0};
};

// Hermitian half-spectrum (n/2+1 bins) -> real series of length n, unnormalized.
class RealInverse {
public:
    explicit RealInverse(std::size_t n);
    ~RealInverse();
    RealInverse(const RealInverse&) = delete;
    RealInverse& operator=(const RealInverse&) = delete;

    std::size_t size() const { return n_; }
    std::span<cplx> spectrum() { return spec_.span(); }
    std::span<const double> signal() const { return out_.span(); }
    void execute();

private:
    std::size_t n_;
    AlignedBuffer<cplx> spec_;
    AlignedBuffer<double> out_;
    void* plan_{nullptr};
};

// In-place 2-D complex transform on a row-major (rows x cols) array,
// plus batched 1-D transforms along the contiguous (column) axis.
class Complex2d {
public:
    Complex2d(std::size_t rows, std::size_t cols, cplx* data);
    ~Complex2d();
    Complex2d(const Complex2d&) = delete;
    Complex2d& operator=(const Complex2d&) = delete;

    void forward();   // exp(-i k x)
    void backward();  // exp(+i k x), unnormalized

private:
    void* fwd_{nullptr};
    void* bwd_{nullptr};
};

// Batched 1-D complex transforms of length n over `howmany` contiguous rows.
class ComplexRows {
public:
    ComplexRows(std::size_t n, std::size_t howmany, cplx* data);
    ~ComplexRows();
    ComplexRows(const ComplexRows&) = delete;
    ComplexRows& operator=(const ComplexRows&) = delete;

    void forward();
    void backward();

private:
    void* fwd_{nullptr};
    void* bwd_{nullptr};
};

std::size_t next_pow2(std::size_t n);

} // namespace otto::fft
