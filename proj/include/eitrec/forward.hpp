#pragma once

#include "eitrec/conductivity.hpp"
#include "eitrec/excitation.hpp"
#include "eitrec/mesh.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <array>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace eitrec {

using SpMat = Eigen::SparseMatrix<double>;

struct ImpedanceSet {
    Eigen::VectorXd z;

    static ImpedanceSet uniform(int m, double value);
    int size() const { return static_cast<int>(z.size()); }
    void validate() const;  // all entries positive
};

/// Nodal space for the electrical potential. P1 = piecewise linear,
/// P2 = piecewise quadratic (vertex + edge-midpoint dofs).
enum class PotentialSpace { P1, P2 };

struct PotentialField {
    Eigen::VectorXd nodal;
    PotentialSpace space = PotentialSpace::P1;
};

/// Electrode currents, one row per drive pattern. Producers record the mesh
/// and pattern hashes plus the contact impedances so stored sets are
/// self-describing.
struct MeasurementSet {
    Eigen::MatrixXd currents;  // (k-1, l-1)
    std::string mesh_hash;
    std::string pattern_hash;
    std::string note;  // single token, e.g. a noise descriptor
    Eigen::VectorXd z;

    int pattern_count() const { return static_cast<int>(currents.rows()); }
    int electrode_count() const { return static_cast<int>(currents.cols()); }
    double at(int k, int ell) const { return currents(k - 1, ell - 1); }

    void write(std::ostream& out) const;
    static MeasurementSet read(std::istream& in);
    std::string serialize() const;
};

namespace detail {

/// Sigma-independent finite element data: dof layout, per-element unit
/// stiffness blocks, impedance-scaled electrode boundary terms.
struct FemSystem {
    PotentialSpace space = PotentialSpace::P1;
    int dofs = 0;
    int local_size = 3;  // dofs per element: 3 (P1) or 6 (P2)
    int electrode_count = 0;
    std::vector<std::array<int, 6>> element_dofs;
    std::vector<Eigen::Matrix<double, 6, 6>> unit_stiffness;
    std::vector<Eigen::Triplet<double>> robin_triplets;  // already 1/Z-scaled
    Eigen::MatrixXd electrode_loads;                     // dofs x m, column l = int_{E_l} phi ds
    Eigen::VectorXd electrode_lengths;                   // polygonal arc lengths
    Eigen::VectorXd z;

    static std::shared_ptr<const FemSystem> build(const Mesh& mesh, const ImpedanceSet& z,
                                                  PotentialSpace space);

    SpMat assemble_matrix(const ConductivityField& sigma) const;
    Eigen::VectorXd rhs(const Eigen::VectorXd& drive) const;
    Eigen::MatrixXd rhs_all(const PatternSet& patterns) const;
    /// I(k, l) = (U(k, l) * |E_l| - f_l . u_k) / Z_l
    Eigen::MatrixXd currents(const Eigen::MatrixXd& nodal, const PatternSet& patterns) const;
};

}  // namespace detail

/// Factorized forward system for one conductivity field.
class LinearSystemHandle {
public:
    LinearSystemHandle(std::shared_ptr<const detail::FemSystem> sys, SpMat matrix);

    const SpMat& matrix() const { return matrix_; }
    const detail::FemSystem& system() const { return *sys_; }
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;

private:
    std::shared_ptr<const detail::FemSystem> sys_;
    SpMat matrix_;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
};

/// Assembles and factorizes the Robin-regularized weak form for a given
/// conductivity. Rejects non-positive conductivity values.
LinearSystemHandle assemble(const Mesh& mesh, const ConductivityField& sigma,
                            const ImpedanceSet& z, PotentialSpace space = PotentialSpace::P1);

/// One solve per drive pattern, reusing the handle's factorization.
std::vector<PotentialField> solve_patterns(const LinearSystemHandle& system,
                                           const PatternSet& patterns);

/// Electrode currents from the Robin-form integral; the potential space is
/// inferred from the field's dof count.
MeasurementSet compute_currents(const Mesh& mesh, const std::vector<PotentialField>& fields,
                                const PatternSet& patterns, const ImpedanceSet& z);

/// Reusable solver for repeated conductivity evaluations on a fixed mesh,
/// impedance set and pattern set. The sparsity pattern is analyzed once; each
/// simulate() refreshes the numeric values, refactorizes and solves all
/// patterns against the cached right-hand sides.
class ForwardSolver {
public:
    ForwardSolver(const Mesh& mesh, const ImpedanceSet& z, const PatternSet& patterns,
                  PotentialSpace space = PotentialSpace::P1);

    MeasurementSet simulate(const ConductivityField& sigma);
    Eigen::MatrixXd solve_nodal(const ConductivityField& sigma);  // dofs x m

    const detail::FemSystem& system() const { return *sys_; }
    const PatternSet& patterns() const { return patterns_; }
    int dof_count() const { return sys_->dofs; }
    int element_count() const { return static_cast<int>(sys_->element_dofs.size()); }

private:
    void refresh_values(const ConductivityField& sigma);

    std::shared_ptr<const detail::FemSystem> sys_;
    PatternSet patterns_;
    SpMat matrix_;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
    bool analyzed_ = false;
    std::vector<int> element_slots_;                  // per (element, i, j) value index
    std::vector<std::pair<int, double>> robin_slots_;  // constant contributions
    Eigen::MatrixXd rhs_;                             // dofs x m
    std::string mesh_hash_;
    std::string pattern_hash_;
};

}  // namespace eitrec
