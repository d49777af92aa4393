#pragma once

#include "eitrec/conductivity.hpp"
#include "eitrec/forward.hpp"

namespace eitrec {

/// Multiplicative Gaussian measurement noise: I -> I * (1 + eta),
/// eta ~ N(0, level^2) drawn independently per entry, fixed by `seed`.
struct NoiseSpec {
    double level = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::string describe() const;  // single-token descriptor for file headers
};

/// Least-squares misfit J = sum_k sum_l (I_kl - I*_kl)^2.
double cost(const MeasurementSet& simulated, const MeasurementSet& observed);

MeasurementSet add_noise(const MeasurementSet& clean, const NoiseSpec& spec);

/// Bundles the forward solver with the observed data and counts every cost
/// evaluation (the optimization budget is expressed in these counts).
class ObjectiveEvaluator {
public:
    ObjectiveEvaluator(const Mesh& mesh, const ImpedanceSet& z, const PatternSet& patterns,
                       MeasurementSet observed, PotentialSpace space = PotentialSpace::P1);

    /// blend -> assemble -> solve -> currents -> misfit; one budget unit.
    double evaluate_basis(const Basis& basis);
    /// Same pipeline for an explicit per-element field; one budget unit.
    double evaluate_field(const ConductivityField& sigma);

    long long evaluations() const { return evaluations_; }
    const Mesh& mesh() const { return *mesh_; }
    const MeasurementSet& observed() const { return observed_; }
    ForwardSolver& solver() { return solver_; }

private:
    const Mesh* mesh_;
    ForwardSolver solver_;
    MeasurementSet observed_;
    long long evaluations_ = 0;
};

}  // namespace eitrec
