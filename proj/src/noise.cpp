#include "fsilab/noise.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fsilab {

namespace {

// 53-bit uniform in [0, 1); the explicit mapping avoids the
// implementation-defined std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

NoiseModel::Kind noise_kind_from_string(const std::string& s) {
    if (s == "gaussian") { return NoiseModel::Kind::gaussian; }
    if (s == "uniform") { return NoiseModel::Kind::uniform; }
    throw std::invalid_argument("unknown noise kind: " + s);
}

std::vector<double> noise_samples(NoiseModel::Kind kind, std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(n, 0.0);
    if (kind == NoiseModel::Kind::uniform) {
        for (std::size_t i = 0; i < n; ++i) { out[i] = 2.0 * uniform01(rng) - 1.0; }
        return out;
    }
    // Box-Muller pairs.
    for (std::size_t i = 0; i < n; i += 2) {
        double u1 = uniform01(rng);
        const double u2 = uniform01(rng);
        if (u1 <= 0.0) { u1 = 0x1.0p-53; }
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        out[i] = r * std::cos(angle);
        if (i + 1 < n) { out[i + 1] = r * std::sin(angle); }
    }
    return out;
}

std::vector<double> apply_noise(const std::vector<double>& series, const NoiseModel& model) {
    if (model.amplitude < 0.0) { throw std::invalid_argument("noise amplitude must be >= 0"); }
    std::vector<double> out = series;
    if (model.amplitude == 0.0) { return out; }
    const std::vector<double> xi = noise_samples(model.kind, model.seed, series.size());
    for (std::size_t i = 0; i < series.size(); ++i) { out[i] += model.amplitude * xi[i]; }
    return out;
}

}  // namespace fsilab
