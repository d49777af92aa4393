#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace eitrec {

/// Electrode potentials for one drive; must sum to zero (ground condition).
struct VoltagePattern {
    Eigen::VectorXd values;

    int size() const { return static_cast<int>(values.size()); }
    /// Throws std::invalid_argument if the zero-sum condition is violated.
    void validate() const;
};

enum class DriveKind { trig, alternating };

/// Base drive: `trig` is A*sin(2*pi*l/m), `alternating` is A*(-1)^l (even m
/// only). Throws on infeasible combinations.
VoltagePattern base_pattern(int m, DriveKind kind, double amplitude = 1.0);

/// Wraps a user-supplied list, enforcing the zero-sum condition.
VoltagePattern custom_pattern(const Eigen::VectorXd& values);

/// m drives obtained by cyclically shifting a base pattern across the
/// equispaced electrodes; yields m*m scalar measurements per conductivity.
struct PatternSet {
    Eigen::MatrixXd patterns;  // row k-1 = pattern k, column l-1 = electrode l

    int count() const { return static_cast<int>(patterns.rows()); }
    int electrode_count() const { return static_cast<int>(patterns.cols()); }
    double at(int k, int ell) const { return patterns(k - 1, ell - 1); }
    Eigen::VectorXd pattern(int k) const { return patterns.row(k - 1); }

    void write(std::ostream& out) const;
    static PatternSet read(std::istream& in);
    std::string serialize() const;
    std::uint64_t content_hash() const;
};

PatternSet rotation_scheme(const VoltagePattern& base);

}  // namespace eitrec
