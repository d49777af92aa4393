#pragma once

#include "eitrec/conductivity.hpp"
#include "eitrec/excitation.hpp"
#include "eitrec/forward.hpp"
#include "eitrec/mesh.hpp"
#include "eitrec/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eitrec {

/// Parameters for the random circle-union collection.
struct CollectionSpec {
    int count = 10000;        // N
    int max_circles = 8;      // per sample
    double r_min = 0.0;       // defaults to 1e-4 * R when <= 0
    double r_max = 0.0;       // defaults to 0.3 * R when <= 0
    std::uint64_t seed = 1;
    double sigma_inclusion = 0.4;
    double sigma_background = 0.2;

    void validate() const;
    double resolved_r_min(double R) const { return r_min > 0.0 ? r_min : 1e-4 * R; }
    double resolved_r_max(double R) const { return r_max > 0.0 ? r_max : 0.3 * R; }
};

/// Random samples: circle count uniform in {1..max}, centers area-uniform in
/// the disc, radii uniform in (r_min, r_max]. Degenerate and fully-outside
/// circles are rejected and redrawn.
std::vector<CircleSample> generate_collection(const CollectionSpec& spec,
                                              const DomainSpec& domain);

/// Per-sample simulated currents, precomputed once and reusable across
/// different observed data sets.
struct PrecomputeRecord {
    CircleSample sample;
    MeasurementSet data;
    bool failed = false;
    std::string diagnostic;
};

struct PrecomputeStore {
    // header
    std::string mesh_hash;
    std::string pattern_hash;
    Eigen::VectorXd z;
    CollectionSpec spec;
    int electrode_count = 0;

    std::vector<PrecomputeRecord> records;

    int size() const { return static_cast<int>(records.size()); }

    void write_header(std::ostream& out) const;
    void write_records(std::ostream& out) const;
    void save(const std::string& prefix) const;  // prefix.header / prefix.records
    static PrecomputeStore load(const std::string& prefix);

    /// Throws unless the store was produced for these artifacts.
    void check_consistency(const Mesh& mesh, const PatternSet& patterns,
                           const ImpedanceSet& z) const;
};

/// Rasterize + solve every sample; embarrassingly parallel over samples and
/// deterministic regardless of worker count (records keyed by index).
PrecomputeStore precompute(const std::vector<CircleSample>& collection, const Mesh& mesh,
                           const PatternSet& patterns, const ImpedanceSet& z,
                           const CollectionSpec& spec, int workers = 1,
                           PotentialSpace space = PotentialSpace::P1);

}  // namespace eitrec
