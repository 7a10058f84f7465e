#include "ap3/weight.hpp"

#include <stdexcept>

namespace ap3 {

namespace {
constexpr double kClampSlack = 1e-9;
}

WeightFunction::WeightFunction(PrimeModulus modulus, std::vector<double> values)
    : modulus_(modulus), values_(std::move(values)) {
    if (values_.size() != modulus_.value())
        throw std::invalid_argument("WeightFunction: needs exactly p values");
    for (double& v : values_) {
        if (v < 0.0) {
            if (v < -kClampSlack)
                throw std::invalid_argument("WeightFunction: value below 0");
            v = 0.0;
        } else if (v > 1.0) {
            if (v > 1.0 + kClampSlack)
                throw std::invalid_argument("WeightFunction: value above 1");
            v = 1.0;
        }
    }
}

WeightFunction WeightFunction::indicator(const ResidueSet& set) {
    std::vector<double> values(set.p(), 0.0);
    for (uint32_t n = 0; n < set.p(); ++n)
        if (set.contains(n))
            values[n] = 1.0;
    return WeightFunction(set.modulus(), std::move(values));
}

double WeightFunction::sum() const {
    double total = 0.0;
    for (double v : values_)
        total += v;
    return total;
}

}  // namespace ap3
