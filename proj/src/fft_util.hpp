#pragma once

// Thin RAII layer over FFTW. Planning is not thread-safe, execution is.

#include <complex>
#include <cstddef>
#include <mutex>

#include <fftw3.h>

namespace wmbo::detail {

std::mutex& fftw_planner_mutex();

template <class T>
struct FftwBuffer {
    T* data = nullptr;
    std::size_t count = 0;

    explicit FftwBuffer(std::size_t n) : data(static_cast<T*>(fftw_malloc(sizeof(T) * n))), count(n)
    {
        if (!data) throw std::bad_alloc();
    }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    FftwBuffer(FftwBuffer&& o) noexcept : data(o.data), count(o.count) { o.data = nullptr; }
    ~FftwBuffer() { fftw_free(data); }
    T& operator[](std::size_t i) { return data[i]; }
    const T& operator[](std::size_t i) const { return data[i]; }
};

struct FftwPlan {
    fftw_plan plan = nullptr;

    FftwPlan() = default;
    explicit FftwPlan(fftw_plan p) : plan(p) {}
    FftwPlan(const FftwPlan&) = delete;
    FftwPlan& operator=(const FftwPlan&) = delete;
    FftwPlan(FftwPlan&& o) noexcept : plan(o.plan) { o.plan = nullptr; }
    FftwPlan& operator=(FftwPlan&& o) noexcept
    {
        std::swap(plan, o.plan);
        return *this;
    }
    ~FftwPlan()
    {
        if (plan) {
            std::lock_guard lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
    void execute() const { fftw_execute(plan); }
};

inline fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace wmbo::detail
