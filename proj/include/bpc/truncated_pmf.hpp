#pragma once

#include <cstdint>
#include <vector>

namespace bpc {

/// A finite probability mass function on consecutive integers
/// [offset, offset + size) together with an explicitly carried upper bound
/// on the mass beyond the stored support. The carried tail is always a
/// rigorous upper bound, never an estimate.
class TruncatedPMF {
public:
    /// Tolerance of the normalization invariant |sum(mass) + tail - 1|.
    static constexpr double total_tolerance = 1e-12;

    TruncatedPMF(long long offset, std::vector<double> mass, double tail);

    static TruncatedPMF point_mass(long long k);
    static TruncatedPMF bernoulli(double p);

    long long offset() const { return offset_; }
    long long support_max() const {
        return offset_ + static_cast<long long>(mass_.size()) - 1;
    }
    std::size_t size() const { return mass_.size(); }
    double tail() const { return tail_; }
    const std::vector<double>& mass() const { return mass_; }

    /// Mass at integer k; zero outside the stored support.
    double operator()(long long k) const {
        long long i = k - offset_;
        if (i < 0 || i >= static_cast<long long>(mass_.size())) return 0.0;
        return mass_[static_cast<std::size_t>(i)];
    }

    /// Sum of the stored mass (excludes tail).
    double mass_total() const;

private:
    long long offset_;
    std::vector<double> mass_;
    double tail_;
};

}  // namespace bpc
