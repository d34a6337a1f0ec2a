#pragma once

#include <span>
#include <vector>

namespace fsilab {

// Tridiagonal LU (Thomas algorithm) with the factorization kept so one matrix
// can back-substitute several right-hand sides.
class TridiagonalSystem {
  public:
    explicit TridiagonalSystem(int n);

    int size() const { return static_cast<int>(diag_.size()); }
    double& lower(int i) { return lower_[i]; }  // row i, column i-1 (i in [1, n-1])
    double& diag(int i) { return diag_[i]; }
    double& upper(int i) { return upper_[i]; }  // row i, column i+1 (i in [0, n-2])

    // Returns false when a pivot falls below 1e-14 in magnitude.
    bool factor();
    bool factored() const { return factored_; }

    // Solves in place; requires a successful factor().
    void solve(std::span<double> rhs) const;

  private:
    std::vector<double> lower_, diag_, upper_;
    std::vector<double> mult_;  // elimination multipliers
    bool factored_ = false;
};

}  // namespace fsilab
