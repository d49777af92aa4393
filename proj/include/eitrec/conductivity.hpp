#pragma once

#include "eitrec/mesh.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <string>
#include <vector>

namespace eitrec {

struct Circle {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius = 0.0;

    bool contains(const Eigen::Vector2d& p) const {
        return (p - center).squaredNorm() <= radius * radius;
    }
};

/// Placement taxonomy of a single circle relative to the disc domain.
enum class CircleClass {
    Regular,          // positive radius, fully inside the disc
    PartialOutside,   // crosses the boundary but still overlaps the domain
    ZeroRadius,       // degenerate r = 0 (inert; used as padding)
    FullyOutside,     // no overlap with the domain
};

CircleClass classify_circle(const Circle& c, double domain_radius);

enum class CircleOverlap { Disjoint, Partial, Contained };

/// Pairwise overlap predicate; overlapping circles are legal (union
/// semantics), the classification is informational.
CircleOverlap overlaps(const Circle& a, const Circle& b);

/// Union-of-circles binary sample: sigma_inclusion inside, background outside.
struct CircleSample {
    std::vector<Circle> circles;
    double sigma_inclusion = 0.4;
    double sigma_background = 0.2;

    int circle_count() const { return static_cast<int>(circles.size()); }
    bool covers(const Eigen::Vector2d& p) const {
        for (const auto& c : circles)
            if (c.contains(p)) return true;
        return false;
    }

    void write(std::ostream& out) const;  // one "x y r" line per circle
};

/// Piecewise-constant per-element conductivity values on a mesh.
struct ConductivityField {
    Eigen::VectorXd values;

    int size() const { return static_cast<int>(values.size()); }

    void write(std::ostream& out) const;
    static ConductivityField read(std::istream& in);
};

/// Convex combination of samples; the optimization control.
struct Basis {
    std::vector<CircleSample> samples;
    Eigen::VectorXd weights;

    int sample_count() const { return static_cast<int>(samples.size()); }
    /// Checks the simplex constraint and the circle feasibility bound
    /// |center| < R + r; throws std::invalid_argument.
    void validate(double domain_radius) const;

    void write(std::ostream& out) const;
    static Basis read(std::istream& in);
    std::string serialize() const;
};

/// Element centroid membership test against the circle union.
ConductivityField rasterize(const CircleSample& sample, const Mesh& mesh);

/// Per-element weighted sum of the samples' rasterizations.
ConductivityField blend(const Basis& basis, const Mesh& mesh);

/// Binary rendering: value >= level maps to sigma_inclusion (tie inclusive).
ConductivityField threshold(const ConductivityField& field, double level, double sigma_inclusion,
                            double sigma_background);

/// sqrt( sum_e area_e * (a_e - b_e)^2 )
double l2_error(const ConductivityField& a, const ConductivityField& b, const Mesh& mesh);

}  // namespace eitrec
