#include "eitrec/mesh.hpp"

#include "eitrec/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace eitrec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

struct RingPlan {
    std::vector<int> interior_counts;  // rings 1 .. n_r-1
    int arc_segments = 0;              // per electrode arc
    int gap_segments = 0;              // per inter-electrode gap
    int boundary_count() const {
        return 0;  // overwritten below; kept for clarity
    }
};

// Angular vertex counts per ring for a given radial ring count. Interior
// counts are multiples of m so the mesh inherits the electrode layout's
// m-fold rotational symmetry.
RingPlan plan_rings(const DomainSpec& spec, int n_r) {
    const int m = spec.electrode_count;
    RingPlan plan;
    plan.interior_counts.resize(std::max(0, n_r - 1));
    for (int k = 1; k < n_r; ++k) {
        const long mult = std::max(1l, std::lround(kTwoPi * k / m));
        plan.interior_counts[k - 1] = static_cast<int>(m * mult);
    }
    // Ideal angular step at the boundary equals the radial step R/n_r.
    const double arc_len = 2.0 * spec.electrode_half_width;
    const double gap_len = kTwoPi / m - arc_len;
    plan.arc_segments = static_cast<int>(std::max(1l, std::lround(arc_len * n_r)));
    plan.gap_segments = static_cast<int>(std::max(1l, std::lround(gap_len * n_r)));
    return plan;
}

int planned_element_count(const RingPlan& plan, const DomainSpec& spec, int n_r) {
    const int n_b = spec.electrode_count * (plan.arc_segments + plan.gap_segments);
    if (n_r == 1) return n_b;  // single fan
    long long count = plan.interior_counts[0];  // center fan
    for (int k = 1; k < n_r; ++k) {
        const int inner = plan.interior_counts[k - 1];
        const int outer = (k == n_r - 1) ? n_b : plan.interior_counts[k];
        count += inner + outer;
    }
    return static_cast<int>(count);
}

// Triangulates the annulus between two concentric vertex rings by a circular
// merge walk over ascending angles. Produces inner+outer CCW triangles.
void merge_annulus(const std::vector<int>& in_ids, const std::vector<double>& in_ang,
                   const std::vector<int>& out_ids, const std::vector<double>& out_ang,
                   std::vector<std::array<int, 3>>& triangles) {
    const int na = static_cast<int>(in_ids.size());
    const int nb = static_cast<int>(out_ids.size());
    auto ang_a = [&](int i) { return in_ang[i % na] + kTwoPi * (i / na); };
    auto ang_b = [&](int j) { return out_ang[j % nb] + kTwoPi * (j / nb); };

    int i = 0, j = 0;
    while (i < na || j < nb) {
        bool advance_outer;
        if (i == na) {
            advance_outer = true;
        } else if (j == nb) {
            advance_outer = false;
        } else {
            advance_outer = ang_b(j + 1) <= ang_a(i + 1);
        }
        if (advance_outer) {
            triangles.push_back({in_ids[i % na], out_ids[j % nb], out_ids[(j + 1) % nb]});
            ++j;
        } else {
            triangles.push_back({in_ids[i % na], out_ids[j % nb], in_ids[(i + 1) % na]});
            ++i;
        }
    }
}

}  // namespace

void DomainSpec::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("domain radius must be positive");
    if (electrode_count < 2) throw std::invalid_argument("need at least 2 electrodes");
    if (!(electrode_half_width > 0.0))
        throw std::invalid_argument("electrode half-width must be positive");
    if (!(2.0 * electrode_half_width < kTwoPi / electrode_count)) {
        std::ostringstream msg;
        msg << "electrode arcs overlap: half-width " << electrode_half_width
            << " rad does not fit " << electrode_count << " disjoint arcs";
        throw std::invalid_argument(msg.str());
    }
}

double DomainSpec::electrode_center(int ell) const {
    return electrode_offset + kTwoPi * (ell - 1) / electrode_count;
}

double Mesh::boundary_length() const {
    double len = 0.0;
    for (const auto& e : boundary_edges) len += edge_length(e);
    return len;
}

double Mesh::electrode_length(int ell) const {
    double len = 0.0;
    for (const auto& e : boundary_edges)
        if (e.tag == ell) len += edge_length(e);
    return len;
}

double Mesh::electrode_coverage() const {
    double tagged = 0.0, total = 0.0;
    for (const auto& e : boundary_edges) {
        const double len = edge_length(e);
        total += len;
        if (e.tag != kGapTag) tagged += len;
    }
    return tagged / total;
}

double Mesh::total_area() const {
    double a = 0.0;
    for (double v : element_areas) a += v;
    return a;
}

void compute_element_geometry(Mesh& mesh) {
    const std::size_t nt = mesh.triangles.size();
    mesh.element_areas.resize(nt);
    mesh.element_centroids.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        const Eigen::Vector2d& p0 = mesh.vertices[tri[0]];
        const Eigen::Vector2d& p1 = mesh.vertices[tri[1]];
        const Eigen::Vector2d& p2 = mesh.vertices[tri[2]];
        const double signed_area =
            0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y()));
        if (!(signed_area > 0.0)) {
            std::ostringstream msg;
            msg << "triangle " << t << " has non-positive area " << signed_area;
            throw std::runtime_error(msg.str());
        }
        mesh.element_areas[t] = signed_area;
        mesh.element_centroids[t] = (p0 + p1 + p2) / 3.0;
    }
}

Mesh build_disc_mesh(const DomainSpec& spec, int target_elements) {
    spec.validate();
    if (target_elements < 16) throw std::invalid_argument("target_elements must be >= 16");

    // Pick the ring count whose planned element count is closest to target.
    int best_nr = -1;
    int best_count = -1;
    for (int n_r = 1;; ++n_r) {
        const RingPlan plan = plan_rings(spec, n_r);
        const int count = planned_element_count(plan, spec, n_r);
        if (best_nr < 0 ||
            std::abs(count - target_elements) < std::abs(best_count - target_elements)) {
            best_nr = n_r;
            best_count = count;
        }
        if (count > target_elements) break;
    }
    if (std::abs(best_count - target_elements) > 0.20 * target_elements) {
        std::ostringstream msg;
        msg << "cannot mesh within 20% of " << target_elements << " elements; closest plan has "
            << best_count << " (electrode layout constrains the boundary subdivision)";
        throw std::invalid_argument(msg.str());
    }

    const int n_r = best_nr;
    const RingPlan plan = plan_rings(spec, n_r);
    const int m = spec.electrode_count;
    const double R = spec.radius;
    const double w = spec.electrode_half_width;

    Mesh mesh;
    mesh.domain = spec;
    mesh.vertices.push_back(Eigen::Vector2d::Zero());  // center vertex 0

    // Per-ring angle lists, ascending in [0, 2pi).
    std::vector<std::vector<double>> ring_angles(n_r);
    for (int k = 1; k < n_r; ++k) {
        const int cnt = plan.interior_counts[k - 1];
        auto& angles = ring_angles[k - 1];
        angles.resize(cnt);
        for (int j = 0; j < cnt; ++j) angles[j] = wrap_angle(spec.electrode_offset + kTwoPi * j / cnt);
        std::sort(angles.begin(), angles.end());
    }
    {
        // Boundary ring: electrode arc endpoints are mandatory breakpoints.
        auto& angles = ring_angles[n_r - 1];
        const double gap_len = kTwoPi / m - 2.0 * w;
        for (int ell = 1; ell <= m; ++ell) {
            const double c = spec.electrode_center(ell);
            for (int t = 0; t < plan.arc_segments; ++t)
                angles.push_back(wrap_angle(c - w + 2.0 * w * t / plan.arc_segments));
            for (int t = 0; t < plan.gap_segments; ++t)
                angles.push_back(wrap_angle(c + w + gap_len * t / plan.gap_segments));
        }
        std::sort(angles.begin(), angles.end());
    }

    std::vector<std::vector<int>> ring_ids(n_r);
    for (int k = 1; k <= n_r; ++k) {
        const double radius = R * k / n_r;
        for (double a : ring_angles[k - 1]) {
            ring_ids[k - 1].push_back(mesh.vertex_count());
            mesh.vertices.push_back(Eigen::Vector2d(radius * std::cos(a), radius * std::sin(a)));
        }
    }

    // Center fan.
    {
        const auto& ids = ring_ids[0];
        const int n = static_cast<int>(ids.size());
        for (int j = 0; j < n; ++j) mesh.triangles.push_back({0, ids[j], ids[(j + 1) % n]});
    }
    for (int k = 1; k < n_r; ++k)
        merge_annulus(ring_ids[k - 1], ring_angles[k - 1], ring_ids[k], ring_angles[k],
                      mesh.triangles);

    // Boundary edges with electrode tags decided by each edge's midpoint angle.
    {
        const auto& ids = ring_ids[n_r - 1];
        const auto& angles = ring_angles[n_r - 1];
        const int n = static_cast<int>(ids.size());
        for (int j = 0; j < n; ++j) {
            const int jn = (j + 1) % n;
            double a0 = angles[j];
            double a1 = angles[jn];
            if (a1 <= a0) a1 += kTwoPi;
            const double mid = 0.5 * (a0 + a1);
            int tag = kGapTag;
            for (int ell = 1; ell <= m; ++ell) {
                const double d = std::remainder(mid - spec.electrode_center(ell), kTwoPi);
                if (std::abs(d) < w) {
                    tag = ell;
                    break;
                }
            }
            mesh.boundary_edges.push_back({ids[j], ids[jn], tag});
        }
    }

    compute_element_geometry(mesh);
    return mesh;
}

std::vector<BoundaryEdge> electrode_edges(const Mesh& mesh, int ell) {
    if (ell < 1 || ell > mesh.domain.electrode_count)
        throw std::out_of_range("electrode index out of range");
    std::vector<BoundaryEdge> edges;
    for (const auto& e : mesh.boundary_edges)
        if (e.tag == ell) edges.push_back(e);
    return edges;
}

void Mesh::write(std::ostream& out) const {
    out << "# eitrec mesh v1\n";
    out << "# domain: radius electrodes half_width offset\n";
    out << "domain " << format_double(domain.radius) << ' ' << domain.electrode_count << ' '
        << format_double(domain.electrode_half_width) << ' '
        << format_double(domain.electrode_offset) << '\n';
    out << "counts " << vertices.size() << ' ' << triangles.size() << ' ' << boundary_edges.size()
        << '\n';
    out << "# vertices: x y\n";
    for (const auto& v : vertices) out << format_double(v.x()) << ' ' << format_double(v.y()) << '\n';
    out << "# triangles: a b c (ccw)\n";
    for (const auto& t : triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "# boundary edges: a b tag (tag 0 = gap)\n";
    for (const auto& e : boundary_edges) out << e.a << ' ' << e.b << ' ' << e.tag << '\n';
}

Mesh Mesh::read(std::istream& in) {
    TokenReader tok(in);
    Mesh mesh;
    tok.expect("domain");
    mesh.domain.radius = tok.next_double();
    mesh.domain.electrode_count = static_cast<int>(tok.next_int());
    mesh.domain.electrode_half_width = tok.next_double();
    mesh.domain.electrode_offset = tok.next_double();
    tok.expect("counts");
    const auto nv = tok.next_int();
    const auto nt = tok.next_int();
    const auto nb = tok.next_int();
    mesh.vertices.reserve(nv);
    for (long long i = 0; i < nv; ++i) {
        const double x = tok.next_double();
        const double y = tok.next_double();
        mesh.vertices.push_back(Eigen::Vector2d(x, y));
    }
    mesh.triangles.reserve(nt);
    for (long long i = 0; i < nt; ++i) {
        std::array<int, 3> t;
        for (auto& v : t) v = static_cast<int>(tok.next_int());
        mesh.triangles.push_back(t);
    }
    mesh.boundary_edges.reserve(nb);
    for (long long i = 0; i < nb; ++i) {
        BoundaryEdge e;
        e.a = static_cast<int>(tok.next_int());
        e.b = static_cast<int>(tok.next_int());
        e.tag = static_cast<int>(tok.next_int());
        mesh.boundary_edges.push_back(e);
    }
    compute_element_geometry(mesh);
    return mesh;
}

std::string Mesh::serialize() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

std::uint64_t Mesh::content_hash() const { return fnv1a64(serialize()); }

}  // namespace eitrec
