// ============================================================================
// synthetic.cpp — seeded synthetic matrices (Box-Muller over mt19937_64)
// ============================================================================
#include "termrev/synthetic.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace termrev {

Distribution parse_distribution(const std::string& name) {
    if (name == "normal") return Distribution::normal;
    if (name == "half_normal") return Distribution::half_normal;
    if (name == "uniform") return Distribution::uniform;
    throw std::invalid_argument("unknown distribution '" + name +
                                "' (expected normal|half_normal|uniform)");
}

const char* distribution_name(Distribution d) {
    switch (d) {
        case Distribution::normal: return "normal";
        case Distribution::half_normal: return "half_normal";
        case Distribution::uniform: return "uniform";
    }
    return "?";
}

namespace {

// Gaussian sampler with a fixed algorithm (Box-Muller) so results depend only
// on the seed, not on a library's distribution implementation.
class GaussianSource {
public:
    explicit GaussianSource(uint64_t seed) : rng_(seed) {}

    double uniform01() {
        // 53-bit mantissa draw in [0, 1).
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 rng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace

RealMatrix generate_synthetic(Distribution dist, int rows, int cols, double sigma,
                              uint64_t seed) {
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("synthetic matrix dimensions must be >= 1");
    if (!(sigma > 0.0))
        throw std::invalid_argument("sigma must be > 0");

    GaussianSource src(seed);
    RealMatrix m = RealMatrix::zeros(rows, cols);
    const double uniform_half_width = sigma * std::sqrt(3.0);  // stddev = sigma
    for (auto& v : m.values) {
        switch (dist) {
            case Distribution::normal:
                v = sigma * src.normal();
                break;
            case Distribution::half_normal:
                v = std::fabs(sigma * src.normal());
                break;
            case Distribution::uniform:
                v = uniform_half_width * (2.0 * src.uniform01() - 1.0);
                break;
        }
    }
    return m;
}

}  // namespace termrev
