#include "spincool/population.hpp"

#include <cmath>
#include <utility>

#include "spincool/errors.hpp"

namespace spincool {

namespace {

std::size_t subspace_dim(double j) {
    const double d = 2.0 * j + 1.0;
    if (j < 0.0 || std::abs(d - std::round(d)) > 1e-9)
        throw ValidationError("spin j must be a nonnegative half-integer");
    return static_cast<std::size_t>(std::llround(d));
}

} // namespace

void PopulationVector::validate() const {
    if (p.size() != subspace_dim(j))
        throw ValidationError("PopulationVector: size does not match 2j+1");
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -1e-12) || v > 1.0 + 1e-12)
            throw ValidationError("PopulationVector: entry outside [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw ValidationError("PopulationVector: entries do not sum to 1");
}

PopulationVector maximally_mixed(double j) {
    const std::size_t d = subspace_dim(j);
    PopulationVector out;
    out.j = j;
    out.p.assign(d, 1.0 / static_cast<double>(d));
    return out;
}

PopulationVector ground_state(double j) {
    const std::size_t d = subspace_dim(j);
    PopulationVector out;
    out.j = j;
    out.p.assign(d, 0.0);
    out.p[0] = 1.0;
    return out;
}

PopulationVector make_population(double j, std::vector<double> p) {
    PopulationVector out;
    out.j = j;
    out.p = std::move(p);
    out.validate();
    return out;
}

double expectation_jx(const PopulationVector& pop) {
    double acc = 0.0;
    for (std::size_t i = 0; i < pop.p.size(); ++i)
        acc += pop.m_of(i) * pop.p[i];
    return acc;
}

double normalized_jx(const PopulationVector& pop) {
    if (pop.j == 0.0) return 0.0;
    return -expectation_jx(pop) / pop.j;
}

} // namespace spincool
