#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace bpc {

/// Success probabilities of the Bernoulli stage. Every entry must lie in
/// (0, 1]; the vector is immutable after construction. Aggregates are
/// recomputed on each call, never cached.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> p);
    ProbVector(std::initializer_list<double> p);

    static ProbVector constant(std::size_t n, double value);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& values() const { return p_; }

    auto begin() const { return p_.begin(); }
    auto end() const { return p_.end(); }

    double sum_p() const;
    double sum_p2() const;
    double max_p() const;

private:
    std::vector<double> p_;
};

}  // namespace bpc
