#include "bpc/prob_vector.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bpc {

namespace {
void validate(const std::vector<double>& p) {
    if (p.empty()) {
        throw std::invalid_argument("ProbVector: need at least one probability");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] > 0.0) || !(p[i] <= 1.0)) {
            throw std::invalid_argument("ProbVector: entry " + std::to_string(i) +
                                        " = " + std::to_string(p[i]) +
                                        " outside (0, 1]");
        }
    }
}
}  // namespace

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) { validate(p_); }

ProbVector::ProbVector(std::initializer_list<double> p) : p_(p) { validate(p_); }

ProbVector ProbVector::constant(std::size_t n, double value) {
    return ProbVector(std::vector<double>(n, value));
}

double ProbVector::sum_p() const {
    double s = 0.0;
    for (double v : p_) s += v;
    return s;
}

double ProbVector::sum_p2() const {
    double s = 0.0;
    for (double v : p_) s += v * v;
    return s;
}

double ProbVector::max_p() const {
    return *std::max_element(p_.begin(), p_.end());
}

}  // namespace bpc
