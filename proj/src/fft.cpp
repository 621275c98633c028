#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace lrd::fft {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> allocate(std::size_t n) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {}
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

std::vector<Complex> forward(std::span<const Complex> in) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    auto buf = allocate<fftw_complex>(n);
    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = std::make_unique<Plan>(fftw_plan_dft_1d(static_cast<int>(n), buf.get(), buf.get(),
                                                       FFTW_FORWARD, FFTW_ESTIMATE));
    }
    std::copy(in.begin(), in.end(), reinterpret_cast<Complex*>(buf.get()));
    plan->execute();
    const auto* out = reinterpret_cast<const Complex*>(buf.get());
    return std::vector<Complex>(out, out + n);
}

std::vector<Complex> forward_real(std::span<const double> in) {
    const std::size_t n = in.size();
    if (n == 0) return {};
    auto src = allocate<double>(n);
    auto dst = allocate<fftw_complex>(n / 2 + 1);
    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = std::make_unique<Plan>(
            fftw_plan_dft_r2c_1d(static_cast<int>(n), src.get(), dst.get(), FFTW_ESTIMATE));
    }
    std::copy(in.begin(), in.end(), src.get());
    plan->execute();
    const auto* out = reinterpret_cast<const Complex*>(dst.get());
    return std::vector<Complex>(out, out + n / 2 + 1);
}

std::vector<double> inverse_real(std::span<const Complex> half, std::size_t n) {
    if (n == 0) return {};
    auto src = allocate<fftw_complex>(n / 2 + 1);
    auto dst = allocate<double>(n);
    std::unique_ptr<Plan> plan;
    {
        std::lock_guard lock(planner_mutex());
        // c2r destroys its input; planning with ESTIMATE does not touch it.
        plan = std::make_unique<Plan>(
            fftw_plan_dft_c2r_1d(static_cast<int>(n), src.get(), dst.get(), FFTW_ESTIMATE));
    }
    std::copy(half.begin(), half.begin() + static_cast<std::ptrdiff_t>(n / 2 + 1),
              reinterpret_cast<Complex*>(src.get()));
    plan->execute();
    return std::vector<double>(dst.get(), dst.get() + n);
}

std::size_t good_size(std::size_t n) {
    std::size_t best = 1;
    while (best < n) best *= 2;
    for (std::size_t p5 = 1; p5 < best; p5 *= 5)
        for (std::size_t p35 = p5; p35 < best; p35 *= 3) {
            std::size_t v = p35;
            while (v < n) v *= 2;
            best = std::min(best, v);
        }
    return best;
}

}  // namespace lrd::fft
