#include "eitrec/conductivity.hpp"

#include "eitrec/text_io.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eitrec {

CircleClass classify_circle(const Circle& c, double domain_radius) {
    if (!(domain_radius > 0.0)) throw std::invalid_argument("domain radius must be positive");
    if (c.radius < 0.0) throw std::invalid_argument("circle radius must be non-negative");
    if (c.radius == 0.0) return CircleClass::ZeroRadius;
    const double dist = c.center.norm();
    if (dist + c.radius <= domain_radius) return CircleClass::Regular;
    if (dist >= domain_radius + c.radius) return CircleClass::FullyOutside;
    return CircleClass::PartialOutside;
}

CircleOverlap overlaps(const Circle& a, const Circle& b) {
    const double d = (a.center - b.center).norm();
    if (d >= a.radius + b.radius) return CircleOverlap::Disjoint;
    if (d <= std::abs(a.radius - b.radius)) return CircleOverlap::Contained;
    return CircleOverlap::Partial;
}

void CircleSample::write(std::ostream& out) const {
    for (const auto& c : circles)
        out << format_double(c.center.x()) << ' ' << format_double(c.center.y()) << ' '
            << format_double(c.radius) << '\n';
}

void ConductivityField::write(std::ostream& out) const {
    out << "# eitrec field v1: one conductivity value per mesh element\n";
    out << "elements " << size() << '\n';
    for (int e = 0; e < size(); ++e) out << format_double(values[e]) << '\n';
}

ConductivityField ConductivityField::read(std::istream& in) {
    TokenReader tok(in);
    tok.expect("elements");
    const int n = static_cast<int>(tok.next_int());
    ConductivityField f;
    f.values.resize(n);
    for (int e = 0; e < n; ++e) f.values[e] = tok.next_double();
    return f;
}

void Basis::validate(double domain_radius) const {
    if (samples.empty()) throw std::invalid_argument("basis has no samples");
    if (weights.size() != sample_count())
        throw std::invalid_argument("weight count does not match sample count");
    for (int i = 0; i < weights.size(); ++i)
        if (weights[i] < 0.0 || weights[i] > 1.0)
            throw std::invalid_argument("basis weight outside [0, 1]");
    if (std::abs(weights.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("basis weights do not sum to 1");
    for (const auto& s : samples) {
        if (!(s.sigma_inclusion > s.sigma_background) || !(s.sigma_background > 0.0))
            throw std::invalid_argument("sample conductivities must satisfy sigma_c > sigma_h > 0");
        for (const auto& c : s.circles) {
            if (c.radius < 0.0) throw std::invalid_argument("negative circle radius");
            if (!(c.center.norm() < domain_radius + c.radius))
                throw std::invalid_argument("circle violates the feasibility bound |center| < R + r");
        }
    }
}

ConductivityField rasterize(const CircleSample& sample, const Mesh& mesh) {
    ConductivityField field;
    field.values.resize(mesh.element_count());
    for (int e = 0; e < mesh.element_count(); ++e)
        field.values[e] =
            sample.covers(mesh.element_centroids[e]) ? sample.sigma_inclusion : sample.sigma_background;
    return field;
}

ConductivityField blend(const Basis& basis, const Mesh& mesh) {
    basis.validate(mesh.domain.radius);
    ConductivityField out;
    out.values = Eigen::VectorXd::Zero(mesh.element_count());
    for (int i = 0; i < basis.sample_count(); ++i) {
        const double alpha = basis.weights[i];
        if (alpha == 0.0) continue;
        const auto& s = basis.samples[i];
        for (int e = 0; e < mesh.element_count(); ++e)
            out.values[e] += alpha * (s.covers(mesh.element_centroids[e]) ? s.sigma_inclusion
                                                                          : s.sigma_background);
    }
    return out;
}

ConductivityField threshold(const ConductivityField& field, double level, double sigma_inclusion,
                            double sigma_background) {
    ConductivityField out;
    out.values.resize(field.size());
    for (int e = 0; e < field.size(); ++e)
        out.values[e] = field.values[e] >= level ? sigma_inclusion : sigma_background;
    return out;
}

double l2_error(const ConductivityField& a, const ConductivityField& b, const Mesh& mesh) {
    if (a.size() != mesh.element_count() || b.size() != mesh.element_count())
        throw std::invalid_argument("field size does not match mesh element count");
    double acc = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const double d = a.values[e] - b.values[e];
        acc += mesh.element_areas[e] * d * d;
    }
    return std::sqrt(acc);
}

void Basis::write(std::ostream& out) const {
    out << "# eitrec basis v1\n";
    out << "samples " << sample_count() << '\n';
    for (int i = 0; i < sample_count(); ++i) {
        const auto& s = samples[i];
        out << "sample " << i << ' ' << s.circle_count() << ' ' << format_double(weights[i]) << ' '
            << format_double(s.sigma_inclusion) << ' ' << format_double(s.sigma_background) << '\n';
        s.write(out);
    }
}

Basis Basis::read(std::istream& in) {
    TokenReader tok(in);
    tok.expect("samples");
    const int n = static_cast<int>(tok.next_int());
    Basis basis;
    basis.samples.resize(n);
    basis.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        tok.expect("sample");
        if (tok.next_int() != i) throw std::runtime_error("basis records out of order");
        const int nc = static_cast<int>(tok.next_int());
        basis.weights[i] = tok.next_double();
        auto& s = basis.samples[i];
        s.sigma_inclusion = tok.next_double();
        s.sigma_background = tok.next_double();
        s.circles.resize(nc);
        for (auto& c : s.circles) {
            c.center.x() = tok.next_double();
            c.center.y() = tok.next_double();
            c.radius = tok.next_double();
        }
    }
    return basis;
}

std::string Basis::serialize() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

}  // namespace eitrec
