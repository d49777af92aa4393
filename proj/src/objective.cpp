#include "eitrec/objective.hpp"

#include "eitrec/rng.hpp"
#include "eitrec/text_io.hpp"

#include <sstream>
#include <stdexcept>

namespace eitrec {

void NoiseSpec::validate() const {
    if (level < 0.0) throw std::invalid_argument("noise level must be non-negative");
}

std::string NoiseSpec::describe() const {
    std::ostringstream out;
    out << "noise=multiplicative_gaussian;level=" << format_double(level) << ";seed=" << seed;
    return out.str();
}

double cost(const MeasurementSet& simulated, const MeasurementSet& observed) {
    if (simulated.currents.rows() != observed.currents.rows() ||
        simulated.currents.cols() != observed.currents.cols())
        throw std::invalid_argument("measurement sets have mismatched shapes");
    return (simulated.currents - observed.currents).squaredNorm();
}

MeasurementSet add_noise(const MeasurementSet& clean, const NoiseSpec& spec) {
    spec.validate();
    MeasurementSet noisy = clean;
    Rng rng(spec.seed);
    for (int k = 0; k < noisy.currents.rows(); ++k)
        for (int ell = 0; ell < noisy.currents.cols(); ++ell)
            noisy.currents(k, ell) *= 1.0 + spec.level * rng.normal();
    noisy.note = spec.describe();
    return noisy;
}

ObjectiveEvaluator::ObjectiveEvaluator(const Mesh& mesh, const ImpedanceSet& z,
                                       const PatternSet& patterns, MeasurementSet observed,
                                       PotentialSpace space)
    : mesh_(&mesh), solver_(mesh, z, patterns, space), observed_(std::move(observed)) {
    if (observed_.pattern_count() != patterns.count() ||
        observed_.electrode_count() != patterns.electrode_count())
        throw std::invalid_argument("observed data shape does not match the pattern set");
}

double ObjectiveEvaluator::evaluate_basis(const Basis& basis) {
    const ConductivityField sigma = blend(basis, *mesh_);  // validates the basis
    return evaluate_field(sigma);
}

double ObjectiveEvaluator::evaluate_field(const ConductivityField& sigma) {
    ++evaluations_;
    return cost(solver_.simulate(sigma), observed_);
}

}  // namespace eitrec
