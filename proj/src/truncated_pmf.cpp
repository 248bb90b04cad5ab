#include "bpc/truncated_pmf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bpc {

TruncatedPMF::TruncatedPMF(long long offset, std::vector<double> mass, double tail)
    : offset_(offset), mass_(std::move(mass)), tail_(tail) {
    if (mass_.empty()) {
        throw std::invalid_argument("TruncatedPMF: empty support");
    }
    if (!(tail_ >= 0.0)) {
        throw std::invalid_argument("TruncatedPMF: negative tail " + std::to_string(tail_));
    }
    double total = tail_;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        if (!(mass_[i] >= 0.0)) {
            throw std::invalid_argument("TruncatedPMF: negative mass at index " +
                                        std::to_string(i));
        }
        total += mass_[i];
    }
    if (std::abs(total - 1.0) > total_tolerance) {
        throw std::invalid_argument("TruncatedPMF: mass + tail = " +
                                    std::to_string(total) + ", not 1");
    }
}

TruncatedPMF TruncatedPMF::point_mass(long long k) {
    return TruncatedPMF(k, {1.0}, 0.0);
}

TruncatedPMF TruncatedPMF::bernoulli(double p) {
    if (!(p >= 0.0) || !(p <= 1.0)) {
        throw std::invalid_argument("bernoulli: p outside [0, 1]");
    }
    return TruncatedPMF(0, {1.0 - p, p}, 0.0);
}

double TruncatedPMF::mass_total() const {
    double s = 0.0;
    for (double m : mass_) s += m;
    return s;
}

}  // namespace bpc
