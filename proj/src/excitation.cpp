#include "eitrec/excitation.hpp"

#include "eitrec/text_io.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace eitrec {

void VoltagePattern::validate() const {
    if (size() < 2) throw std::invalid_argument("pattern needs at least 2 electrodes");
    const double tol = 1e-12 * values.cwiseAbs().maxCoeff();
    if (std::abs(values.sum()) > tol)
        throw std::invalid_argument("voltage pattern violates the zero-sum ground condition");
}

VoltagePattern base_pattern(int m, DriveKind kind, double amplitude) {
    if (m < 2) throw std::invalid_argument("need at least 2 electrodes");
    VoltagePattern p;
    p.values.resize(m);
    switch (kind) {
        case DriveKind::trig:
            for (int ell = 1; ell <= m; ++ell)
                p.values[ell - 1] = amplitude * std::sin(2.0 * std::numbers::pi * ell / m);
            // The analytic sum vanishes; remove the last rounding residue so
            // downstream zero-sum checks are exact.
            p.values[m - 1] -= p.values.sum();
            break;
        case DriveKind::alternating:
            if (m % 2 != 0)
                throw std::invalid_argument("alternating drive needs an even electrode count");
            for (int ell = 1; ell <= m; ++ell)
                p.values[ell - 1] = (ell % 2 == 0) ? amplitude : -amplitude;
            break;
    }
    p.validate();
    return p;
}

VoltagePattern custom_pattern(const Eigen::VectorXd& values) {
    VoltagePattern p{values};
    p.validate();
    return p;
}

PatternSet rotation_scheme(const VoltagePattern& base) {
    base.validate();
    const int m = base.size();
    PatternSet set;
    set.patterns.resize(m, m);
    for (int k = 1; k <= m; ++k)
        for (int ell = 1; ell <= m; ++ell)
            set.patterns(k - 1, ell - 1) = base.values[(ell + k - 2) % m];
    return set;
}

void PatternSet::write(std::ostream& out) const {
    out << "# eitrec patterns v1: rows = drive k, columns = electrode l\n";
    out << "size " << count() << '\n';
    for (int k = 0; k < count(); ++k) {
        for (int ell = 0; ell < electrode_count(); ++ell) {
            if (ell) out << ' ';
            out << format_double(patterns(k, ell));
        }
        out << '\n';
    }
}

PatternSet PatternSet::read(std::istream& in) {
    TokenReader tok(in);
    tok.expect("size");
    const int m = static_cast<int>(tok.next_int());
    PatternSet set;
    set.patterns.resize(m, m);
    for (int k = 0; k < m; ++k)
        for (int ell = 0; ell < m; ++ell) set.patterns(k, ell) = tok.next_double();
    return set;
}

std::string PatternSet::serialize() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

std::uint64_t PatternSet::content_hash() const { return fnv1a64(serialize()); }

}  // namespace eitrec
