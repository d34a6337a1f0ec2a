#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fsilab {

// Additive observation noise with a fully specified generator -> sample
// mapping, so identical (kind, amplitude, seed) reproduce the perturbation
// bit-for-bit on any platform. Amplitude is absolute and applied to beta.
struct NoiseModel {
    enum class Kind { gaussian, uniform };
    Kind kind = Kind::gaussian;
    double amplitude = 0.0;
    std::uint64_t seed = 0;
};

NoiseModel::Kind noise_kind_from_string(const std::string& s);

std::vector<double> noise_samples(NoiseModel::Kind kind, std::uint64_t seed, std::size_t n);
std::vector<double> apply_noise(const std::vector<double>& series, const NoiseModel& model);

}  // namespace fsilab
