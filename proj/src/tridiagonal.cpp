#include "fsilab/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace fsilab {

namespace {
constexpr double kPivotFloor = 1e-14;
}

TridiagonalSystem::TridiagonalSystem(int n) {
    if (n < 1) { throw std::invalid_argument("TridiagonalSystem: size must be >= 1"); }
    lower_.assign(n, 0.0);
    diag_.assign(n, 0.0);
    upper_.assign(n, 0.0);
    mult_.assign(n, 0.0);
}

bool TridiagonalSystem::factor() {
    const int n = size();
    factored_ = false;
    if (std::abs(diag_[0]) < kPivotFloor || !std::isfinite(diag_[0])) { return false; }
    for (int i = 1; i < n; ++i) {
        mult_[i] = lower_[i] / diag_[i - 1];
        diag_[i] -= mult_[i] * upper_[i - 1];
        if (std::abs(diag_[i]) < kPivotFloor || !std::isfinite(diag_[i])) { return false; }
    }
    factored_ = true;
    return true;
}

void TridiagonalSystem::solve(std::span<double> rhs) const {
    if (!factored_) { throw std::logic_error("TridiagonalSystem::solve before factor"); }
    const int n = size();
    if (static_cast<int>(rhs.size()) != n) {
        throw std::invalid_argument("TridiagonalSystem::solve: rhs size mismatch");
    }
    for (int i = 1; i < n; ++i) { rhs[i] -= mult_[i] * rhs[i - 1]; }
    rhs[n - 1] /= diag_[n - 1];
    for (int i = n - 2; i >= 0; --i) { rhs[i] = (rhs[i] - upper_[i] * rhs[i + 1]) / diag_[i]; }
}

}  // namespace fsilab
