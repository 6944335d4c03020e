#include "dcma/fft.hpp"

#include <cstddef>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "dcma/errors.hpp"

namespace dcma::fft {

namespace {

// FFTW planning is not thread-safe; execution through the new-array interface
// is, as long as the plan carries FFTW_UNALIGNED so any buffer qualifies.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> dummy(n);
        auto* ptr = reinterpret_cast<fftw_complex*>(dummy.data());
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw numerical_error("fftw: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

void execute(std::vector<std::complex<double>>& data, int sign) {
    if (data.empty()) return;
    fftw_plan plan = PlanCache::instance().get(data.size(), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

} // namespace

void forward(std::vector<std::complex<double>>& data) { execute(data, FFTW_FORWARD); }

void inverse(std::vector<std::complex<double>>& data) {
    execute(data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

} // namespace dcma::fft
