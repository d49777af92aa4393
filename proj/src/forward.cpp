#include "eitrec/forward.hpp"

#include "eitrec/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace eitrec {

ImpedanceSet ImpedanceSet::uniform(int m, double value) {
    ImpedanceSet set;
    set.z = Eigen::VectorXd::Constant(m, value);
    set.validate();
    return set;
}

void ImpedanceSet::validate() const {
    if (z.size() == 0) throw std::invalid_argument("empty impedance set");
    for (int i = 0; i < z.size(); ++i)
        if (!(z[i] > 0.0)) throw std::invalid_argument("contact impedances must be positive");
}

namespace detail {

namespace {

// Barycentric gradients scaled by 2*area: grad(lambda_i) = (b_i, c_i) / (2A).
void barycentric_gradients(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                           const Eigen::Vector2d& p2, double area, Eigen::Matrix<double, 2, 3>& g) {
    const double inv = 1.0 / (2.0 * area);
    g.col(0) = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) * inv;
    g.col(1) = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) * inv;
    g.col(2) = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) * inv;
}

// Local P2 dof order: vertices 0,1,2 then midpoints of edges (0,1),(1,2),(2,0).
constexpr int kEdgeVerts[3][2] = {{0, 1}, {1, 2}, {2, 0}};

}  // namespace

std::shared_ptr<const FemSystem> FemSystem::build(const Mesh& mesh, const ImpedanceSet& z,
                                                  PotentialSpace space) {
    z.validate();
    const int m = mesh.domain.electrode_count;
    if (z.size() != m) throw std::invalid_argument("impedance count does not match electrodes");

    auto sys = std::make_shared<FemSystem>();
    sys->space = space;
    sys->electrode_count = m;
    sys->z = z.z;
    sys->local_size = space == PotentialSpace::P1 ? 3 : 6;

    const int nv = mesh.vertex_count();
    const int nt = mesh.element_count();

    // Edge dof numbering for P2: first-seen order over elements.
    std::map<std::pair<int, int>, int> edge_ids;
    auto edge_dof = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = edge_ids.find(key);
        if (it == edge_ids.end()) it = edge_ids.emplace(key, nv + static_cast<int>(edge_ids.size())).first;
        return it->second;
    };

    sys->element_dofs.resize(nt);
    for (int e = 0; e < nt; ++e) {
        const auto& tri = mesh.triangles[e];
        auto& dofs = sys->element_dofs[e];
        dofs = {tri[0], tri[1], tri[2], -1, -1, -1};
        if (space == PotentialSpace::P2)
            for (int le = 0; le < 3; ++le)
                dofs[3 + le] = edge_dof(tri[kEdgeVerts[le][0]], tri[kEdgeVerts[le][1]]);
    }
    sys->dofs = space == PotentialSpace::P1 ? nv : nv + static_cast<int>(edge_ids.size());

    // Unit-conductivity element stiffness blocks.
    sys->unit_stiffness.resize(nt);
    for (int e = 0; e < nt; ++e) {
        const auto& tri = mesh.triangles[e];
        const double area = mesh.element_areas[e];
        Eigen::Matrix<double, 2, 3> g;
        barycentric_gradients(mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]],
                              area, g);
        auto& K = sys->unit_stiffness[e];
        K.setZero();
        if (space == PotentialSpace::P1) {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) K(i, j) = area * g.col(i).dot(g.col(j));
        } else {
            // Midpoint quadrature (degree 2, exact for P2 stiffness).
            static const double qp[3][3] = {
                {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
            for (const auto& lam : qp) {
                Eigen::Matrix<double, 2, 6> grad;
                for (int i = 0; i < 3; ++i) grad.col(i) = (4.0 * lam[i] - 1.0) * g.col(i);
                for (int le = 0; le < 3; ++le) {
                    const int a = kEdgeVerts[le][0];
                    const int b = kEdgeVerts[le][1];
                    grad.col(3 + le) = 4.0 * (lam[a] * g.col(b) + lam[b] * g.col(a));
                }
                const double wq = area / 3.0;
                for (int i = 0; i < 6; ++i)
                    for (int j = 0; j < 6; ++j) K(i, j) += wq * grad.col(i).dot(grad.col(j));
            }
        }
    }

    // Electrode boundary terms: Robin mass (scaled by 1/Z) and trace loads.
    sys->electrode_loads = Eigen::MatrixXd::Zero(sys->dofs, m);
    sys->electrode_lengths = Eigen::VectorXd::Zero(m);
    for (const auto& be : mesh.boundary_edges) {
        if (be.tag == kGapTag) continue;
        const int ell = be.tag - 1;
        const double len = mesh.edge_length(be);
        const double zinv = 1.0 / sys->z[ell];
        sys->electrode_lengths[ell] += len;
        if (space == PotentialSpace::P1) {
            const int d[2] = {be.a, be.b};
            const double mass[2][2] = {{len / 3.0, len / 6.0}, {len / 6.0, len / 3.0}};
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j)
                    sys->robin_triplets.emplace_back(d[i], d[j], zinv * mass[i][j]);
                sys->electrode_loads(d[i], ell) += 0.5 * len;
            }
        } else {
            const auto mid = edge_ids.find(std::minmax(be.a, be.b));
            if (mid == edge_ids.end())
                throw std::logic_error("boundary edge is not an edge of any triangle");
            const int d[3] = {be.a, be.b, mid->second};
            const double s = len / 30.0;
            const double mass[3][3] = {{4 * s, -s, 2 * s}, {-s, 4 * s, 2 * s}, {2 * s, 2 * s, 16 * s}};
            const double load[3] = {len / 6.0, len / 6.0, 2.0 * len / 3.0};
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j)
                    sys->robin_triplets.emplace_back(d[i], d[j], zinv * mass[i][j]);
                sys->electrode_loads(d[i], ell) += load[i];
            }
        }
    }
    return sys;
}

SpMat FemSystem::assemble_matrix(const ConductivityField& sigma) const {
    const int nt = static_cast<int>(element_dofs.size());
    if (sigma.size() != nt)
        throw std::invalid_argument("conductivity field size does not match mesh");
    for (int e = 0; e < nt; ++e)
        if (!(sigma.values[e] > 0.0))
            throw std::invalid_argument("conductivity must be positive on every element");

    std::vector<Eigen::Triplet<double>> trips = robin_triplets;
    trips.reserve(trips.size() + static_cast<std::size_t>(nt) * local_size * local_size);
    for (int e = 0; e < nt; ++e) {
        const double s = sigma.values[e];
        const auto& dofs = element_dofs[e];
        const auto& K = unit_stiffness[e];
        for (int i = 0; i < local_size; ++i)
            for (int j = 0; j < local_size; ++j)
                trips.emplace_back(dofs[i], dofs[j], s * K(i, j));
    }
    SpMat A(dofs, dofs);
    A.setFromTriplets(trips.begin(), trips.end());
    return A;
}

Eigen::VectorXd FemSystem::rhs(const Eigen::VectorXd& drive) const {
    return electrode_loads * drive.cwiseQuotient(z);
}

Eigen::MatrixXd FemSystem::rhs_all(const PatternSet& patterns) const {
    Eigen::MatrixXd out(dofs, patterns.count());
    for (int k = 0; k < patterns.count(); ++k)
        out.col(k) = rhs(patterns.patterns.row(k).transpose());
    return out;
}

Eigen::MatrixXd FemSystem::currents(const Eigen::MatrixXd& nodal, const PatternSet& patterns) const {
    const int m = electrode_count;
    const int npat = patterns.count();
    // F(l, k) = f_l . u_k
    const Eigen::MatrixXd F = electrode_loads.transpose() * nodal;
    Eigen::MatrixXd I(npat, m);
    for (int k = 0; k < npat; ++k)
        for (int ell = 0; ell < m; ++ell)
            I(k, ell) =
                (patterns.patterns(k, ell) * electrode_lengths[ell] - F(ell, k)) / z[ell];
    return I;
}

}  // namespace detail

LinearSystemHandle::LinearSystemHandle(std::shared_ptr<const detail::FemSystem> sys, SpMat matrix)
    : sys_(std::move(sys)), matrix_(std::move(matrix)) {
    ldlt_.compute(matrix_);
    if (ldlt_.info() != Eigen::Success)
        throw std::runtime_error("forward system factorization failed");
}

Eigen::VectorXd LinearSystemHandle::solve(const Eigen::VectorXd& rhs) const {
    return ldlt_.solve(rhs);
}

Eigen::MatrixXd LinearSystemHandle::solve(const Eigen::MatrixXd& rhs) const {
    return ldlt_.solve(rhs);
}

LinearSystemHandle assemble(const Mesh& mesh, const ConductivityField& sigma,
                            const ImpedanceSet& z, PotentialSpace space) {
    auto sys = detail::FemSystem::build(mesh, z, space);
    return LinearSystemHandle(sys, sys->assemble_matrix(sigma));
}

std::vector<PotentialField> solve_patterns(const LinearSystemHandle& system,
                                           const PatternSet& patterns) {
    const auto& sys = system.system();
    if (patterns.electrode_count() != sys.electrode_count)
        throw std::invalid_argument("pattern electrode count does not match the system");
    const Eigen::MatrixXd X = system.solve(sys.rhs_all(patterns));
    if (!X.allFinite()) throw std::runtime_error("forward solve produced non-finite potentials");
    std::vector<PotentialField> fields(patterns.count());
    for (int k = 0; k < patterns.count(); ++k) fields[k] = {X.col(k), sys.space};
    return fields;
}

MeasurementSet compute_currents(const Mesh& mesh, const std::vector<PotentialField>& fields,
                                const PatternSet& patterns, const ImpedanceSet& z) {
    if (fields.empty()) throw std::invalid_argument("no potential fields");
    if (static_cast<int>(fields.size()) != patterns.count())
        throw std::invalid_argument("field count does not match pattern count");
    const PotentialSpace space = fields.front().space;
    auto sys = detail::FemSystem::build(mesh, z, space);
    Eigen::MatrixXd nodal(sys->dofs, patterns.count());
    for (int k = 0; k < patterns.count(); ++k) {
        if (fields[k].nodal.size() != sys->dofs)
            throw std::invalid_argument("potential field dof count does not match the mesh/space");
        nodal.col(k) = fields[k].nodal;
    }
    MeasurementSet out;
    out.currents = sys->currents(nodal, patterns);
    out.mesh_hash = hash_hex(mesh.content_hash());
    out.pattern_hash = hash_hex(patterns.content_hash());
    out.z = z.z;
    return out;
}

namespace {

int value_slot(const SpMat& A, int row, int col) {
    const int* outer = A.outerIndexPtr();
    const int* inner = A.innerIndexPtr();
    const int* begin = inner + outer[col];
    const int* end = inner + outer[col + 1];
    const int* it = std::lower_bound(begin, end, row);
    if (it == end || *it != row) throw std::logic_error("missing structural entry in sparse matrix");
    return static_cast<int>(it - inner);
}

}  // namespace

ForwardSolver::ForwardSolver(const Mesh& mesh, const ImpedanceSet& z, const PatternSet& patterns,
                             PotentialSpace space)
    : sys_(detail::FemSystem::build(mesh, z, space)), patterns_(patterns) {
    if (patterns_.electrode_count() != sys_->electrode_count)
        throw std::invalid_argument("pattern electrode count does not match the mesh");
    mesh_hash_ = hash_hex(mesh.content_hash());
    pattern_hash_ = hash_hex(patterns_.content_hash());
    rhs_ = sys_->rhs_all(patterns_);

    // Build the structural pattern once, then map every contribution to its
    // compressed-storage slot so repeated assemblies touch values only.
    ConductivityField ones;
    ones.values = Eigen::VectorXd::Ones(static_cast<int>(sys_->element_dofs.size()));
    matrix_ = sys_->assemble_matrix(ones);
    matrix_.makeCompressed();

    const int local = sys_->local_size;
    element_slots_.resize(sys_->element_dofs.size() * local * local);
    std::size_t pos = 0;
    for (const auto& dofs : sys_->element_dofs)
        for (int i = 0; i < local; ++i)
            for (int j = 0; j < local; ++j)
                element_slots_[pos++] = value_slot(matrix_, dofs[i], dofs[j]);
    robin_slots_.reserve(sys_->robin_triplets.size());
    for (const auto& t : sys_->robin_triplets)
        robin_slots_.emplace_back(value_slot(matrix_, t.row(), t.col()), t.value());
}

void ForwardSolver::refresh_values(const ConductivityField& sigma) {
    const int nt = static_cast<int>(sys_->element_dofs.size());
    if (sigma.size() != nt)
        throw std::invalid_argument("conductivity field size does not match mesh");
    double* vals = matrix_.valuePtr();
    std::fill(vals, vals + matrix_.nonZeros(), 0.0);
    for (const auto& [slot, v] : robin_slots_) vals[slot] += v;
    const int local = sys_->local_size;
    std::size_t pos = 0;
    for (int e = 0; e < nt; ++e) {
        const double s = sigma.values[e];
        if (!(s > 0.0))
            throw std::invalid_argument("conductivity must be positive on every element");
        const auto& K = sys_->unit_stiffness[e];
        for (int i = 0; i < local; ++i)
            for (int j = 0; j < local; ++j) vals[element_slots_[pos++]] += s * K(i, j);
    }
}

Eigen::MatrixXd ForwardSolver::solve_nodal(const ConductivityField& sigma) {
    refresh_values(sigma);
    if (!analyzed_) {
        ldlt_.analyzePattern(matrix_);
        analyzed_ = true;
    }
    ldlt_.factorize(matrix_);
    if (ldlt_.info() != Eigen::Success)
        throw std::runtime_error("forward system factorization failed");
    Eigen::MatrixXd X = ldlt_.solve(rhs_);
    if (!X.allFinite()) throw std::runtime_error("forward solve produced non-finite potentials");
    return X;
}

MeasurementSet ForwardSolver::simulate(const ConductivityField& sigma) {
    MeasurementSet out;
    out.currents = sys_->currents(solve_nodal(sigma), patterns_);
    out.mesh_hash = mesh_hash_;
    out.pattern_hash = pattern_hash_;
    out.z = sys_->z;
    return out;
}

void MeasurementSet::write(std::ostream& out) const {
    out << "# eitrec measurements v1: rows = drive k, columns = electrode l\n";
    out << "mesh_hash " << (mesh_hash.empty() ? "-" : mesh_hash) << '\n';
    out << "pattern_hash " << (pattern_hash.empty() ? "-" : pattern_hash) << '\n';
    out << "note " << (note.empty() ? "-" : note) << '\n';
    out << "impedance " << z.size();
    for (int i = 0; i < z.size(); ++i) out << ' ' << format_double(z[i]);
    out << '\n';
    out << "size " << pattern_count() << ' ' << electrode_count() << '\n';
    for (int k = 0; k < pattern_count(); ++k) {
        for (int ell = 0; ell < electrode_count(); ++ell) {
            if (ell) out << ' ';
            out << format_double(currents(k, ell));
        }
        out << '\n';
    }
}

MeasurementSet MeasurementSet::read(std::istream& in) {
    TokenReader tok(in);
    MeasurementSet set;
    tok.expect("mesh_hash");
    set.mesh_hash = tok.next();
    if (set.mesh_hash == "-") set.mesh_hash.clear();
    tok.expect("pattern_hash");
    set.pattern_hash = tok.next();
    if (set.pattern_hash == "-") set.pattern_hash.clear();
    tok.expect("note");
    set.note = tok.next();
    if (set.note == "-") set.note.clear();
    tok.expect("impedance");
    const int nz = static_cast<int>(tok.next_int());
    set.z.resize(nz);
    for (int i = 0; i < nz; ++i) set.z[i] = tok.next_double();
    tok.expect("size");
    const int rows = static_cast<int>(tok.next_int());
    const int cols = static_cast<int>(tok.next_int());
    set.currents.resize(rows, cols);
    for (int k = 0; k < rows; ++k)
        for (int ell = 0; ell < cols; ++ell) set.currents(k, ell) = tok.next_double();
    return set;
}

std::string MeasurementSet::serialize() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

}  // namespace eitrec
